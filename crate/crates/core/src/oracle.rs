//! Chip-firing on a finite model of the chain.
//!
//! Every loop is subdivided into unit edges at the scale `1/N`, where `N` is
//! the least common multiple of all denominators involved, so every length
//! and every point of interest becomes an integer number of steps. Reduced
//! divisors come from Dhar's burning algorithm and ranks from exhaustive
//! search, independently of the loop-by-loop arithmetic in [`crate::tropical`].

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::tropical::{ChainGeometry, ChainPoint, TropicalDivisor};

pub const DEFAULT_VERTEX_CAP: u128 = 100_000;
pub const DEFAULT_DEGREE_CAP: i64 = 8;
pub const DEFAULT_TEST_CAP: u128 = 5_000_000;

/// Limits that keep exhaustive searches at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Bound on `N·Σ c_k`.
    pub vertices: u128,
    pub degree: i64,
    /// Bound on the number of test divisors one rank computation may try.
    pub tests: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { vertices: DEFAULT_VERTEX_CAP, degree: DEFAULT_DEGREE_CAP, tests: DEFAULT_TEST_CAP }
    }
}

/// Multigraph with unit edges; parallel edges repeat in the adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteGraph {
    adjacency: Vec<Vec<usize>>,
    nodes: Vec<usize>,
    scale: i64,
    // ring[k-1][p] is the vertex at coordinate p/N on loop k
    rings: Vec<Vec<usize>>,
}

impl DiscreteGraph {
    /// Builds a graph from explicit edges. Used for small hand-made checks.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        DiscreteGraph { adjacency, nodes: Vec::new(), scale: 1, rings: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Vertex of `Q_i`.
    pub fn node(&self, i: usize) -> usize {
        self.nodes[i]
    }

    /// The subdivision factor `N`.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Vertex of a chain point, if it lies on the grid.
    pub fn vertex_of(&self, p: &ChainPoint) -> Result<usize> {
        match *p {
            ChainPoint::Node(i) => {
                self.nodes.get(i).copied().ok_or_else(|| Error::InvalidPoint(format!("{p} is not on the model")))
            }
            ChainPoint::Interior { loop_index, coord } => {
                let scaled = coord * self.scale;
                let ring = self.rings.get(loop_index.wrapping_sub(1));
                match ring {
                    Some(ring) if scaled.is_integer() && (0..ring.len() as i64).contains(&scaled.to_integer()) => {
                        Ok(ring[scaled.to_integer() as usize])
                    }
                    _ => Err(Error::InvalidPoint(format!("{p} is not a vertex of the model at scale {}", self.scale))),
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.adjacency.is_empty() {
            return true;
        }
        distances(self, 0).iter().all(Option::is_some)
    }
}

/// Subdivides `geom` so that every length and every extra point sits on the
/// grid `Z/N`, with `N` the lcm of all denominators.
pub fn subdivide_chain(geom: &ChainGeometry, extra_points: &[ChainPoint], vertex_cap: u128) -> Result<DiscreteGraph> {
    let mut scale: i64 = 1;
    for lp in geom.loops() {
        scale = scale.lcm(lp.l.denom()).lcm(lp.m.denom());
    }
    for p in extra_points {
        geom.check_point(p)?;
        if let ChainPoint::Interior { coord, .. } = p {
            scale = scale.lcm(coord.denom());
        }
    }
    let mut total: u128 = 0;
    for lp in geom.loops() {
        let steps = (lp.circumference() * scale).to_integer();
        total = total.checked_add(steps as u128).ok_or(Error::Overflow("subdivide_chain"))?;
    }
    if total > vertex_cap {
        return Err(Error::OracleTooLarge { what: "subdivided vertex count", size: total, cap: vertex_cap });
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new()];
    let mut nodes = vec![0];
    let mut rings = Vec::with_capacity(geom.g());
    for lp in geom.loops() {
        let steps = (lp.circumference() * scale).to_integer() as usize;
        let at_node = (lp.l * scale).to_integer() as usize;
        let start = *nodes.last().expect("nodes start with Q_0");
        let mut ring = Vec::with_capacity(steps);
        ring.push(start);
        for _ in 1..steps {
            ring.push(adjacency.len());
            adjacency.push(Vec::new());
        }
        for p in 0..steps {
            let (a, b) = (ring[p], ring[(p + 1) % steps]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        nodes.push(ring[at_node]);
        rings.push(ring);
    }
    Ok(DiscreteGraph { adjacency, nodes, scale, rings })
}

/// Integer chips on the vertices of a [`DiscreteGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChipConfig {
    chips: Vec<i64>,
}

impl ChipConfig {
    pub fn zero(vertex_count: usize) -> Self {
        ChipConfig { chips: vec![0; vertex_count] }
    }

    pub fn from_vec(chips: Vec<i64>) -> Self {
        ChipConfig { chips }
    }

    pub fn chips(&self) -> &[i64] {
        &self.chips
    }

    pub fn get(&self, v: usize) -> i64 {
        self.chips[v]
    }

    pub fn add(&mut self, v: usize, n: i64) {
        self.chips[v] += n;
    }

    pub fn degree(&self) -> i64 {
        self.chips.iter().sum()
    }

    pub fn support(&self) -> BTreeMap<usize, i64> {
        self.chips.iter().enumerate().filter(|(_, &c)| c != 0).map(|(v, &c)| (v, c)).collect()
    }
}

pub fn divisor_to_config(gph: &DiscreteGraph, d: &TropicalDivisor) -> Result<ChipConfig> {
    let mut config = ChipConfig::zero(gph.vertex_count());
    for (p, mult) in d.iter() {
        config.add(gph.vertex_of(p)?, mult);
    }
    Ok(config)
}

/// A reduced configuration together with the firing script that produced it:
/// `reduced = original - Laplacian · script`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub config: ChipConfig,
    pub script: Vec<i64>,
}

fn distances(gph: &DiscreteGraph, q: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; gph.vertex_count()];
    dist[q] = Some(0);
    let mut queue = VecDeque::from([q]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("queued vertices have a distance");
        for &w in gph.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn fire_set(gph: &DiscreteGraph, config: &mut ChipConfig, script: &mut [i64], in_set: &[bool], times: i64) {
    for v in 0..gph.vertex_count() {
        if !in_set[v] {
            continue;
        }
        script[v] += times;
        for &w in gph.neighbors(v) {
            if !in_set[w] {
                config.chips[v] -= times;
                config.chips[w] += times;
            }
        }
    }
}

/// The `q`-reduced configuration equivalent to `d`.
///
/// First every vertex other than `q` is made non-negative by letting the
/// sets `{v : dist(v, q) >= j}` borrow, deepest level first. Then Dhar's
/// burning algorithm runs from `q`; the unburnt set, if any, fires as many
/// times as it can at once, until everything burns.
pub fn dhar_reduce(gph: &DiscreteGraph, d: &ChipConfig, q: usize) -> Reduction {
    let n = gph.vertex_count();
    let mut config = d.clone();
    let mut script = vec![0; n];
    let dist: Vec<usize> = distances(gph, q).into_iter().map(|x| x.expect("model graphs are connected")).collect();
    let depth = dist.iter().copied().max().unwrap_or(0);
    for level in (1..=depth).rev() {
        let mut times = 0;
        for v in 0..n {
            if dist[v] == level && config.chips[v] < 0 {
                let gain = gph.neighbors(v).iter().filter(|&&w| dist[w] < level).count() as i64;
                times = times.max(Integer::div_ceil(&-config.chips[v], &gain));
            }
        }
        if times > 0 {
            let outside: Vec<bool> = dist.iter().map(|&x| x < level).collect();
            fire_set(gph, &mut config, &mut script, &outside, times);
        }
    }
    loop {
        let mut burnt = vec![false; n];
        let mut fire_edges = vec![0i64; n];
        burnt[q] = true;
        let mut stack = vec![q];
        while let Some(v) = stack.pop() {
            for &w in gph.neighbors(v) {
                if burnt[w] {
                    continue;
                }
                fire_edges[w] += 1;
                if fire_edges[w] > config.chips[w] {
                    burnt[w] = true;
                    stack.push(w);
                }
            }
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        if !unburnt.iter().any(|&u| u) {
            break;
        }
        let times = (0..n)
            .filter(|&v| unburnt[v] && fire_edges[v] > 0)
            .map(|v| config.chips[v] / fire_edges[v])
            .min()
            .expect("the unburnt set borders the burnt set");
        fire_set(gph, &mut config, &mut script, &unburnt, times);
    }
    Reduction { config, script }
}

/// `original - Laplacian · script`.
pub fn apply_script(gph: &DiscreteGraph, original: &ChipConfig, script: &[i64]) -> ChipConfig {
    let mut out = original.clone();
    for v in 0..gph.vertex_count() {
        out.chips[v] -= script[v] * gph.valence(v) as i64;
        for &w in gph.neighbors(v) {
            out.chips[v] += script[w];
        }
    }
    out
}

/// Burning criterion: non-negative away from `q` and the whole graph burns.
pub fn is_reduced(gph: &DiscreteGraph, d: &ChipConfig, q: usize) -> bool {
    if (0..gph.vertex_count()).any(|v| v != q && d.get(v) < 0) {
        return false;
    }
    let reduction = dhar_reduce(gph, d, q);
    reduction.script.iter().all(|&s| s == reduction.script[q])
}

pub fn is_winnable(gph: &DiscreteGraph, d: &ChipConfig, q: usize) -> bool {
    dhar_reduce(gph, d, q).config.get(q) >= 0
}

/// Baker-Norine rank by exhaustive search over vertex-supported effective
/// test divisors, with `q` as the reduction base.
pub fn bn_rank(gph: &DiscreteGraph, d: &ChipConfig, q: usize, caps: OracleCaps) -> Result<i64> {
    let degree = d.degree();
    if degree > caps.degree {
        return Err(Error::OracleTooLarge { what: "divisor degree", size: degree as u128, cap: caps.degree as u128 });
    }
    let base = dhar_reduce(gph, d, q).config;
    if base.get(q) < 0 {
        return Ok(-1);
    }
    let mut tests: u128 = 0;
    let mut r = 0;
    while r < degree {
        let mut probe = base.clone();
        if !every_removal_winnable(gph, &mut probe, q, 0, r + 1, &mut tests, caps.tests)? {
            break;
        }
        r += 1;
    }
    Ok(r)
}

// Removes `remaining` more chips from vertices `>= from` in every possible
// way and checks that each result is winnable.
fn every_removal_winnable(
    gph: &DiscreteGraph,
    probe: &mut ChipConfig,
    q: usize,
    from: usize,
    remaining: i64,
    tests: &mut u128,
    cap: u128,
) -> Result<bool> {
    if remaining == 0 {
        *tests += 1;
        if *tests > cap {
            return Err(Error::OracleTooLarge { what: "rank test divisors", size: *tests, cap });
        }
        return Ok(is_winnable(gph, probe, q));
    }
    for v in from..gph.vertex_count() {
        probe.add(v, -1);
        let ok = every_removal_winnable(gph, probe, q, v, remaining - 1, tests, cap)?;
        probe.add(v, 1);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::LoopLengths;
    use crate::Rational;

    fn cycle(n: usize) -> DiscreteGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        DiscreteGraph::from_edges(n, &edges)
    }

    fn single(v: usize, n: usize, chips: i64) -> ChipConfig {
        let mut c = ChipConfig::zero(n);
        c.add(v, chips);
        c
    }

    #[test]
    fn subdivision_shapes() {
        let geom = ChainGeometry::from_integers(&[(13, 1)]).unwrap();
        let gph = subdivide_chain(&geom, &[], DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(gph.vertex_count(), 14);
        assert_eq!(gph.node(0), 0);
        assert_eq!(gph.node(1), 13);

        let half = ChainGeometry::new(vec![LoopLengths::new(Rational::new(1, 2), Rational::new(1, 2))]).unwrap();
        let gph = subdivide_chain(&half, &[], DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!((gph.scale(), gph.vertex_count(), gph.edge_count()), (2, 2, 2));

        let two = ChainGeometry::from_integers(&[(13, 1), (9, 2)]).unwrap();
        let gph = subdivide_chain(&two, &[], DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(gph.vertex_count(), 24);
        assert_eq!(gph.edge_count(), 25);
        assert_eq!(gph.valence(gph.node(1)), 4);
        assert!(gph.is_connected());
    }

    #[test]
    fn extra_points_refine_the_grid() {
        let geom = ChainGeometry::from_integers(&[(3, 1)]).unwrap();
        let x = ChainPoint::Interior { loop_index: 1, coord: Rational::new(5, 3) };
        let gph = subdivide_chain(&geom, &[x], DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(gph.scale(), 3);
        assert_eq!(gph.vertex_of(&x).unwrap(), 5);
        assert_eq!(gph.vertex_of(&ChainPoint::Node(1)).unwrap(), 9);
        let y = ChainPoint::Interior { loop_index: 1, coord: Rational::new(1, 2) };
        assert!(gph.vertex_of(&y).is_err());
    }

    #[test]
    fn vertex_cap_enforced() {
        let geom = ChainGeometry::from_integers(&[(600, 1)]).unwrap();
        assert!(matches!(subdivide_chain(&geom, &[], 500), Err(Error::OracleTooLarge { size: 601, cap: 500, .. })));
    }

    #[test]
    fn reduced_configs_are_fixed() {
        let gph = cycle(14);
        let d = single(0, 14, 3);
        assert_eq!(dhar_reduce(&gph, &d, 0).config, d);
        let mut one_each = ChipConfig::zero(14);
        one_each.add(5, 1);
        assert_eq!(dhar_reduce(&gph, &one_each, 0).config, one_each);
        assert!(is_reduced(&gph, &one_each, 0));
    }

    #[test]
    fn reduction_on_a_cycle_matches_circle_classes() {
        // three chips at distance 13 on C_14: class 39 ≡ 11, so 2 chips at q and one at 11
        let gph = cycle(14);
        let reduced = dhar_reduce(&gph, &single(13, 14, 3), 0);
        assert_eq!(reduced.config.support(), BTreeMap::from([(0, 2), (11, 1)]));
        assert_eq!(apply_script(&gph, &single(13, 14, 3), &reduced.script), reduced.config);
    }

    #[test]
    fn winnability_on_a_cycle() {
        let gph = cycle(7);
        let mut d = ChipConfig::zero(7);
        d.add(2, 1);
        d.add(5, -1);
        assert!(!is_winnable(&gph, &d, 0));
        // degree one is always winnable on a cycle; x + y - z - w wins iff x + y ≡ z + w
        let mut d = ChipConfig::zero(7);
        d.add(2, 1);
        d.add(3, 1);
        d.add(5, -1);
        assert!(is_winnable(&gph, &d, 0));
        d.add(1, -1);
        assert!(!is_winnable(&gph, &d, 0));
        d.add(1, 1);
        d.add(0, -1);
        assert!(is_winnable(&gph, &d, 0));
    }

    #[test]
    fn ranks_on_a_cycle() {
        let gph = cycle(6);
        assert_eq!(bn_rank(&gph, &single(2, 6, 1), 0, OracleCaps::default()).unwrap(), 0);
        assert_eq!(bn_rank(&gph, &single(2, 6, 2), 0, OracleCaps::default()).unwrap(), 1);
        assert_eq!(bn_rank(&gph, &single(2, 6, -1), 0, OracleCaps::default()).unwrap(), -1);
        let caps = OracleCaps { degree: 1, ..OracleCaps::default() };
        assert!(matches!(bn_rank(&gph, &single(2, 6, 2), 0, caps), Err(Error::OracleTooLarge { .. })));
        let caps = OracleCaps { tests: 3, ..OracleCaps::default() };
        assert!(matches!(bn_rank(&gph, &single(2, 6, 2), 0, caps), Err(Error::OracleTooLarge { .. })));
    }

    #[test]
    fn negative_chips_are_paid_back() {
        let gph = cycle(5);
        let mut d = ChipConfig::zero(5);
        d.add(2, -3);
        d.add(0, 5);
        let reduced = dhar_reduce(&gph, &d, 0);
        assert!((1..5).all(|v| reduced.config.get(v) >= 0));
        assert_eq!(reduced.config.degree(), 2);
        assert_eq!(apply_script(&gph, &d, &reduced.script), reduced.config);
        assert!(is_reduced(&gph, &reduced.config, 0));
    }
}
