use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{solve_special_point, ChainGeometry, ChainPoint, TropicalDivisor};
use crate::elliptic::{BNComponent, World};
use crate::error::{Error, Result};
use crate::tableaux::{enumerate_tableaux, BNParams, Tableau};
use crate::Rational;

const MAX_ATTEMPTS: usize = 64;

/// Seeded source of generic points. Two samplers built from the same seed
/// produce the same points in the same order.
#[derive(Debug, Clone)]
pub struct GenericPointSampler {
    rng: ChaCha8Rng,
}

impl GenericPointSampler {
    pub fn new(seed: u64) -> Self {
        GenericPointSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// An interior point of loop `k` that avoids both nodes and every
    /// special position `(u+1)·l_k` for `0 <= u <= max_order`.
    ///
    /// Candidates lie on the grid `c_k·n/S`, where `S` is a power of two
    /// at least twice the number of excluded positions.
    pub fn sample(&mut self, geom: &ChainGeometry, k: usize, max_order: i64) -> Result<ChainPoint> {
        let c = geom.circumference(k);
        let l = geom.l(k);
        let max_order = max_order.max(0);
        let excluded: Vec<Rational> = (0..=max_order)
            .map(|u| geom.reduce_coord(k, l * Rational::from_integer(u + 1)))
            .chain([Rational::zero(), l])
            .collect();
        let steps = (2 * (max_order as u64 + 3)).next_power_of_two() as i64;
        for _ in 0..MAX_ATTEMPTS {
            let n = self.rng.random_range(1..steps);
            let coord = c * Rational::new(n, steps);
            if !excluded.contains(&coord) {
                return geom.point(k, coord);
            }
        }
        Err(Error::SamplingFailed { loop_index: k })
    }
}

/// `r·Q_0 + Σ ε_i x_i`: no point on loops whose index sits in the last
/// column, the special point of order `r - t + beta(i,t) - beta(i,r) - 1` on
/// loops whose index sits in column `t < r`, and a sampled generic point on
/// loops of free indices.
pub fn divisor_from_tableau(t: &Tableau, geom: &ChainGeometry, sampler: &mut GenericPointSampler) -> Result<TropicalDivisor> {
    let p = t.params();
    if geom.g() != p.g {
        return Err(Error::InvalidParams(alloc::format!("geometry has {} loops, tableau has genus {}", geom.g(), p.g)));
    }
    let r = p.r as i64;
    let mut d = TropicalDivisor::new();
    d.add(ChainPoint::Node(0), r);
    for i in 1..=p.g {
        match t.column(i) {
            Some(col) if col == p.r => {}
            Some(col) => {
                let u = r - col as i64 + t.beta(i, col) as i64 - t.beta(i, p.r) as i64 - 1;
                d.add(solve_special_point(geom, i, u)?, 1);
            }
            None => d.add(sampler.sample(geom, i, p.d)?, 1),
        }
    }
    Ok(d)
}

/// The tropical components: one per tableau, moving in the loops of its
/// free indices.
pub fn components_tropical(params: BNParams) -> impl Iterator<Item = BNComponent> {
    enumerate_tableaux(params).map(|tableau| BNComponent { tableau, world: World::Tropical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{is_t_special, tropical_rank, tropical_vanishing_table, LoopCase};
    use alloc::vec;

    fn example_geometry() -> ChainGeometry {
        ChainGeometry::from_integers(&[(13, 1), (13, 1), (13, 1), (13, 1), (13, 1), (13, 1)]).unwrap()
    }

    fn example() -> Tableau {
        Tableau::from_rows(BNParams::new(6, 6, 2).unwrap(), &[vec![1, 2, 4], vec![3, 5, 6]]).unwrap()
    }

    #[test]
    fn sampler_is_replayable_and_avoids_special_positions() {
        let geom = example_geometry();
        let mut a = GenericPointSampler::new(7);
        let mut b = GenericPointSampler::new(7);
        for k in 1..=6 {
            let x = a.sample(&geom, k, 6).unwrap();
            assert_eq!(x, b.sample(&geom, k, 6).unwrap());
            assert!(matches!(x, ChainPoint::Interior { .. }));
            for u in 0..=6 {
                assert!(!is_t_special(&geom, k, u, &x));
            }
        }
    }

    #[test]
    fn example_divisor_and_table() {
        let geom = example_geometry();
        let d = divisor_from_tableau(&example(), &geom, &mut GenericPointSampler::new(0)).unwrap();
        assert_eq!(d.degree(), 6);
        assert_eq!(d.mult(&ChainPoint::Node(0)), 2);
        // 2Q_0 + x_1 ≡ 3Q_1 puts x_1 at 3·13 mod 14
        assert_eq!(d.mult(&ChainPoint::Interior { loop_index: 1, coord: 11.into() }), 1);
        let table = tropical_vanishing_table(&geom, &d, 2).unwrap();
        assert_eq!(
            table.cases,
            vec![
                LoopCase::D { t0: 0 },
                LoopCase::D { t0: 1 },
                LoopCase::D { t0: 0 },
                LoopCase::B,
                LoopCase::D { t0: 1 },
                LoopCase::B
            ]
        );
        let orders: Vec<&[i64]> = table.u.iter().map(|u| u.orders()).collect();
        assert_eq!(orders, vec![&[2, 1, 0][..], &[3, 1, 0], &[3, 2, 0], &[4, 2, 0], &[3, 1, 0], &[3, 2, 0], &[2, 1, 0]]);
        assert_eq!(tropical_rank(&geom, &d).unwrap(), 2);
    }

    #[test]
    fn last_column_only_gives_base_divisor() {
        let p = BNParams::new(2, 0, 0).unwrap();
        let t = Tableau::from_rows(p, &[vec![1], vec![2]]).unwrap();
        let geom = ChainGeometry::from_integers(&[(3, 1), (3, 1)]).unwrap();
        let d = divisor_from_tableau(&t, &geom, &mut GenericPointSampler::new(0)).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn genus_mismatch_rejected() {
        let geom = ChainGeometry::from_integers(&[(3, 1)]).unwrap();
        assert!(divisor_from_tableau(&example(), &geom, &mut GenericPointSampler::new(0)).is_err());
    }

    #[test]
    fn tropical_components_match_count() {
        assert_eq!(components_tropical(BNParams::new(5, 4, 1).unwrap()).count(), 10);
        assert!(components_tropical(BNParams::new(5, 4, 1).unwrap()).all(|c| c.world == World::Tropical));
    }
}
