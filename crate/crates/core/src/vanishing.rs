use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Orders of vanishing of an `(r+1)`-dimensional space of sections at a
/// point, stored strictly decreasing: `orders[0] > … > orders[r] ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VanishingSequence(Vec<i64>);

impl VanishingSequence {
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        let decreasing = orders.windows(2).all(|w| w[0] > w[1]);
        let non_negative = orders.last().is_none_or(|&x| x >= 0);
        if orders.is_empty() || !decreasing || !non_negative {
            return Err(Error::NotDecreasing(alloc::format!("{orders:?}")));
        }
        Ok(VanishingSequence(orders))
    }

    /// `(top, top-1, …, top-r)`.
    pub fn consecutive(top: i64, r: usize) -> Result<Self> {
        Self::new((0..=r as i64).map(|s| top - s).collect())
    }

    pub fn orders(&self) -> &[i64] {
        &self.0
    }

    /// `r`, the projective dimension of the section space.
    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    pub fn top(&self) -> i64 {
        self.0[0]
    }

    /// The smallest order, `orders[r]`.
    pub fn bottom(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn get(&self, t: usize) -> i64 {
        self.0[t]
    }

    /// Adds `delta` to every order.
    pub fn shifted(&self, delta: i64) -> Result<Self> {
        Self::new(self.0.iter().map(|&x| x + delta).collect())
    }

    /// `(d - orders[r], …, d - orders[0])`, the orders forced on the other
    /// side of a refined node.
    pub fn complement(&self, d: i64) -> Result<Self> {
        Self::new(self.0.iter().rev().map(|&x| d - x).collect())
    }

    pub fn increasing(&self) -> Vec<i64> {
        self.0.iter().rev().copied().collect()
    }
}

impl fmt::Display for VanishingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, x) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}
