use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::{ChainGeometry, ChainPoint, TropicalDivisor};
use crate::error::{Error, Result};
use crate::vanishing::VanishingSequence;
use crate::Rational;

/// `Σ mult·coord` modulo `c_k`.
pub fn loop_class(geom: &ChainGeometry, k: usize, pts: &[(Rational, i64)]) -> Rational {
    let sum = pts.iter().fold(Rational::zero(), |acc, &(coord, mult)| acc + coord * Rational::from_integer(mult));
    geom.reduce_coord(k, sum)
}

/// Rewrites a divisor on loop `k` as `moved·Q_{k-1} + x` with at most one
/// point `x ≠ Q_{k-1}`, keeping as much degree as possible at `Q_{k-1}`.
pub fn loop_reduce(geom: &ChainGeometry, k: usize, pts: &[(Rational, i64)]) -> Result<(i64, Option<ChainPoint>)> {
    let degree: i64 = pts.iter().map(|&(_, m)| m).sum();
    let sigma = loop_class(geom, k, pts);
    if sigma.is_zero() {
        Ok((degree, None))
    } else {
        Ok((degree - 1, Some(geom.point(k, sigma)?)))
    }
}

/// `u·Q_0 + Σ ε_k x_k`, the `Q_0`-reduced representative of a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub u: i64,
    /// `x_k` for loops `1..=g`, `None` when `ε_k = 0`.
    pub points: Vec<Option<ChainPoint>>,
}

impl ReducedForm {
    pub fn epsilon(&self, k: usize) -> bool {
        self.points[k - 1].is_some()
    }

    pub fn x(&self, k: usize) -> Option<ChainPoint> {
        self.points[k - 1]
    }

    pub fn to_divisor(&self) -> TropicalDivisor {
        let mut d = TropicalDivisor::new();
        d.add(ChainPoint::Node(0), self.u);
        for x in self.points.iter().flatten() {
            d.add(*x, 1);
        }
        d
    }
}

/// Pushes degree towards `Q_0` loop by loop, from loop `g` down to loop 1.
pub fn reduce_to_q0(geom: &ChainGeometry, d: &TropicalDivisor) -> Result<ReducedForm> {
    geom.check_divisor(d)?;
    let g = geom.g();
    let mut points = vec![None; g];
    let mut carry = 0;
    for k in (1..=g).rev() {
        let mut pts: Vec<(Rational, i64)> = d
            .iter()
            .filter_map(|(p, m)| match *p {
                ChainPoint::Interior { loop_index, coord } if loop_index == k => Some((coord, m)),
                _ => None,
            })
            .collect();
        pts.push((geom.l(k), d.mult(&ChainPoint::Node(k)) + carry));
        let (moved, leftover) = loop_reduce(geom, k, &pts)?;
        points[k - 1] = leftover;
        carry = moved;
    }
    Ok(ReducedForm { u: d.mult(&ChainPoint::Node(0)) + carry, points })
}

pub fn is_equivalent_to_effective(geom: &ChainGeometry, d: &TropicalDivisor) -> Result<bool> {
    Ok(reduce_to_q0(geom, d)?.u >= 0)
}

pub fn are_equivalent(geom: &ChainGeometry, a: &TropicalDivisor, b: &TropicalDivisor) -> Result<bool> {
    let diff = reduce_to_q0(geom, &a.minus(b))?;
    Ok(diff.u == 0 && diff.points.iter().all(Option::is_none))
}

/// The point `x` of loop `k` with `u·Q_{k-1} + x ≡ (u+1)·Q_k`.
pub fn solve_special_point(geom: &ChainGeometry, k: usize, u: i64) -> Result<ChainPoint> {
    geom.point(k, geom.l(k) * Rational::from_integer(u + 1))
}

/// Whether `x` on loop `k` satisfies `u·Q_{k-1} + x ≡ (u+1)·Q_k`.
pub fn is_t_special(geom: &ChainGeometry, k: usize, u: i64, x: &ChainPoint) -> bool {
    match geom.coord_on_loop(x, k) {
        Some(coord) => geom.reduce_coord(k, coord) == geom.reduce_coord(k, geom.l(k) * Rational::from_integer(u + 1)),
        None => false,
    }
}

/// Transition rule applied on one loop of the vanishing table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoopCase {
    /// No point, `u_r > 0`: every order drops by one.
    A,
    /// No point, `u_r = 0`: every order but the last drops by one.
    B,
    /// `t0`-special point blocked by `u_{t0} + 1 = u_{t0-1}`: unchanged.
    C { t0: usize },
    /// `t0`-special point: `u_{t0}` rises by one.
    D { t0: usize },
    /// Generic point: unchanged.
    E,
}

impl fmt::Display for LoopCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopCase::A => f.write_str("a"),
            LoopCase::B => f.write_str("b"),
            LoopCase::C { t0 } => write!(f, "c(t0={t0})"),
            LoopCase::D { t0 } => write!(f, "d(t0={t0})"),
            LoopCase::E => f.write_str("e"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropVanishingTable {
    /// `u(i)` at `Q_i` for `i = 0..=g`.
    pub u: Vec<VanishingSequence>,
    pub reduced: ReducedForm,
    /// Case applied on loops `1..=g`.
    pub cases: Vec<LoopCase>,
}

impl TropVanishingTable {
    pub fn epsilon(&self, k: usize) -> bool {
        self.reduced.epsilon(k)
    }
}

/// Orders of vanishing at `Q_0, …, Q_g` of a divisor of rank at least `r`,
/// obtained by walking the reduced form from left to right.
pub fn tropical_vanishing_table(geom: &ChainGeometry, d: &TropicalDivisor, r: usize) -> Result<TropVanishingTable> {
    let reduced = reduce_to_q0(geom, d)?;
    let first =
        VanishingSequence::consecutive(reduced.u, r).map_err(|_| Error::RankDeficiency { loop_index: 0 })?;
    let mut u = vec![first];
    let mut cases = Vec::with_capacity(geom.g());
    for k in 1..=geom.g() {
        let prev = u[k - 1].orders().to_vec();
        let mut next = prev.clone();
        let case = match reduced.x(k) {
            None if prev[r] > 0 => {
                next.iter_mut().for_each(|x| *x -= 1);
                LoopCase::A
            }
            None => {
                next[..r].iter_mut().for_each(|x| *x -= 1);
                LoopCase::B
            }
            Some(x) => {
                let special: Vec<usize> = (0..=r).filter(|&t| is_t_special(geom, k, prev[t], &x)).collect();
                match special[..] {
                    [] => LoopCase::E,
                    [t0] if t0 > 0 && prev[t0] + 1 == prev[t0 - 1] => LoopCase::C { t0 },
                    [t0] => {
                        next[t0] += 1;
                        LoopCase::D { t0 }
                    }
                    [first, second, ..] => return Err(Error::AmbiguousSpecialPoint { loop_index: k, first, second }),
                }
            }
        };
        u.push(VanishingSequence::new(next).map_err(|_| Error::RankDeficiency { loop_index: k })?);
        cases.push(case);
    }
    Ok(TropVanishingTable { u, reduced, cases })
}
