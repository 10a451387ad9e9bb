//! Divisors on a chain of loops with exact rational edge lengths.
//!
//! Loop `k` (for `k = 1..=g`) is a circle of circumference `c_k = l_k + m_k`
//! with `Q_{k-1}` at coordinate 0 and `Q_k` at coordinate `l_k`. Points of a
//! loop are coordinates modulo `c_k`; the degree-zero part of the Picard
//! group of the loop is the circle group `R / c_k Z`, which makes linear
//! equivalence on one loop a single comparison of rationals.

mod rank;
mod reduce;
mod sample;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub use rank::{rank_at_least, tropical_rank};
pub use reduce::{
    are_equivalent, is_equivalent_to_effective, is_t_special, loop_class, loop_reduce, reduce_to_q0,
    solve_special_point, tropical_vanishing_table, LoopCase, ReducedForm, TropVanishingTable,
};
pub use sample::{components_tropical, divisor_from_tableau, GenericPointSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoopLengths {
    /// Length of the arc from `Q_{k-1}` to `Q_k` in the coordinate direction.
    pub l: Rational,
    /// Length of the returning arc.
    pub m: Rational,
}

impl LoopLengths {
    pub fn new(l: Rational, m: Rational) -> Self {
        LoopLengths { l, m }
    }

    pub fn circumference(&self) -> Rational {
        self.l + self.m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainGeometry {
    loops: Vec<LoopLengths>,
}

impl ChainGeometry {
    pub fn new(loops: Vec<LoopLengths>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::InvalidParams("a chain needs at least one loop".into()));
        }
        for (idx, lp) in loops.iter().enumerate() {
            if !lp.l.is_positive() || !lp.m.is_positive() {
                return Err(Error::NonPositiveLength { loop_index: idx + 1 });
            }
        }
        Ok(ChainGeometry { loops })
    }

    /// Convenience constructor from integer length pairs.
    pub fn from_integers(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(l, m)| LoopLengths::new(l.into(), m.into())).collect())
    }

    pub fn g(&self) -> usize {
        self.loops.len()
    }

    pub fn loops(&self) -> &[LoopLengths] {
        &self.loops
    }

    /// Lengths of loop `k`, one-based.
    pub fn lengths(&self, k: usize) -> LoopLengths {
        self.loops[k - 1]
    }

    pub fn l(&self, k: usize) -> Rational {
        self.loops[k - 1].l
    }

    pub fn circumference(&self, k: usize) -> Rational {
        self.loops[k - 1].circumference()
    }

    fn check_loop(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.g() {
            return Err(Error::InvalidPoint(format!("loop {k} on a chain of {} loops", self.g())));
        }
        Ok(())
    }

    /// `coord` reduced into `[0, c_k)`.
    pub fn reduce_coord(&self, k: usize, coord: Rational) -> Rational {
        let c = self.circumference(k);
        coord - c * (coord / c).floor()
    }

    /// The canonical point at `coord` (taken modulo `c_k`) on loop `k`.
    pub fn point(&self, k: usize, coord: Rational) -> Result<ChainPoint> {
        self.check_loop(k)?;
        let coord = self.reduce_coord(k, coord);
        Ok(if coord.is_zero() {
            ChainPoint::Node(k - 1)
        } else if coord == self.l(k) {
            ChainPoint::Node(k)
        } else {
            ChainPoint::Interior { loop_index: k, coord }
        })
    }

    /// Coordinate of `p` on loop `k`, if `p` lies on that loop.
    pub fn coord_on_loop(&self, p: &ChainPoint, k: usize) -> Option<Rational> {
        match *p {
            ChainPoint::Node(i) if i + 1 == k => Some(Rational::zero()),
            ChainPoint::Node(i) if i == k => Some(self.l(k)),
            ChainPoint::Interior { loop_index, coord } if loop_index == k => Some(coord),
            _ => None,
        }
    }

    /// Checks that `p` is in canonical form and lies on this chain.
    pub fn check_point(&self, p: &ChainPoint) -> Result<()> {
        match *p {
            ChainPoint::Node(i) if i <= self.g() => Ok(()),
            ChainPoint::Interior { loop_index, coord } => {
                self.check_loop(loop_index)?;
                let canonical = coord.is_positive() && coord < self.circumference(loop_index) && coord != self.l(loop_index);
                if canonical {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!("{p} is not a canonical interior point")))
                }
            }
            _ => Err(Error::InvalidPoint(format!("{p} on a chain of {} loops", self.g()))),
        }
    }

    pub fn check_divisor(&self, d: &TropicalDivisor) -> Result<()> {
        d.iter().try_for_each(|(p, _)| self.check_point(p))
    }
}

/// Outcome of the genericity test on loop lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    pub failing_loops: Vec<usize>,
}

/// A loop passes when `l_k / m_k = p/q` in lowest terms has
/// `max(p, q) >= 2g - 2`.
pub fn check_genericity(geom: &ChainGeometry) -> GenericityReport {
    let bound = 2 * geom.g() as i64 - 2;
    let failing_loops: Vec<usize> = (1..=geom.g())
        .filter(|&k| {
            let ratio = geom.lengths(k).l / geom.lengths(k).m;
            (*ratio.numer()).max(*ratio.denom()) < bound
        })
        .collect();
    GenericityReport { generic: failing_loops.is_empty(), failing_loops }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainPoint {
    /// `Q_i`, shared by loops `i` and `i+1`.
    Node(usize),
    /// A point of loop `loop_index` other than its two nodes.
    Interior { loop_index: usize, coord: Rational },
}

impl fmt::Display for ChainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainPoint::Node(i) => write!(f, "Q_{i}"),
            ChainPoint::Interior { loop_index, coord } => write!(f, "({loop_index}:{coord})"),
        }
    }
}

/// Finite formal sum of chain points with nonzero integer multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TropicalDivisor {
    points: BTreeMap<ChainPoint, i64>,
}

impl TropicalDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points(points: impl IntoIterator<Item = (ChainPoint, i64)>) -> Self {
        let mut d = Self::new();
        for (p, mult) in points {
            d.add(p, mult);
        }
        d
    }

    pub fn add(&mut self, p: ChainPoint, mult: i64) {
        let entry = self.points.entry(p).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.points.remove(&p);
        }
    }

    pub fn mult(&self, p: &ChainPoint) -> i64 {
        self.points.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.points.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.points.values().all(|&m| m > 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ChainPoint, i64)> {
        self.points.iter().map(|(p, &m)| (p, m))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn minus(&self, other: &TropicalDivisor) -> TropicalDivisor {
        let mut out = self.clone();
        for (p, m) in other.iter() {
            out.add(*p, -m);
        }
        out
    }
}

impl fmt::Display for TropicalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("0");
        }
        for (n, (p, m)) in self.iter().enumerate() {
            match (n, m) {
                (0, 1) => write!(f, "{p}")?,
                (0, -1) => write!(f, "-{p}")?,
                (0, m) => write!(f, "{m}{p}")?,
                (_, 1) => write!(f, "+{p}")?,
                (_, -1) => write!(f, "-{p}")?,
                (_, m) if m > 0 => write!(f, "+{m}{p}")?,
                (_, m) => write!(f, "{m}{p}")?,
            }
        }
        Ok(())
    }
}
