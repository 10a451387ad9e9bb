//! Rectangular standard Young tableaux indexing Brill-Noether components.
//!
//! A component of the locus for `(g, d, r)` is a filling of the diagram with
//! `k = r+1` columns (numbered `0..=r`) and `kbar = g-d+r` rows (numbered
//! `1..=kbar`) by `k·kbar` distinct indices from `1..=g`. The remaining
//! `rho = g - k·kbar` indices are free.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, TableauViolation};

/// Genus, degree and projective dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BNParams {
    pub g: usize,
    pub d: i64,
    pub r: usize,
}

impl BNParams {
    pub fn new(g: usize, d: i64, r: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidParams(format!("genus must be positive, got {g}")));
        }
        if d < 0 {
            return Err(Error::InvalidParams(format!("degree must be non-negative, got {d}")));
        }
        Ok(BNParams { g, d, r })
    }

    /// Number of columns, `r + 1`.
    pub fn k(&self) -> usize {
        self.r + 1
    }

    /// Number of rows, `g - d + r`. May be zero or negative.
    pub fn kbar(&self) -> i64 {
        self.g as i64 - self.d + self.r as i64
    }

    pub fn rho(&self) -> i64 {
        self.g as i64 - self.k() as i64 * self.kbar()
    }
}

/// Brill-Noether number `g - (r+1)(g-d+r)`.
pub fn rho(params: BNParams) -> i64 {
    params.rho()
}

/// Number of standard fillings of a rectangle with `k` columns and `kbar`
/// rows, by the hook length formula.
pub fn hook_count(k: usize, kbar: usize) -> Result<u128> {
    if k < 1 || kbar < 1 {
        return Err(Error::InvalidParams(format!("hook_count needs k, kbar >= 1, got ({k}, {kbar})")));
    }
    rectangle_count(k, kbar)
}

// Same as hook_count but with the empty rectangle counted once.
fn rectangle_count(k: usize, kbar: usize) -> Result<u128> {
    let n = k * kbar;
    let mut exponents: BTreeMap<u64, i64> = BTreeMap::new();
    for m in 2..=n as u64 {
        add_factors(&mut exponents, m, 1);
    }
    for row in 0..kbar {
        for col in 0..k {
            let hook = (k - col) + (kbar - row) - 1;
            add_factors(&mut exponents, hook as u64, -1);
        }
    }
    let mut count: u128 = 1;
    for (&p, &e) in &exponents {
        debug_assert!(e >= 0, "hook product does not divide the factorial");
        for _ in 0..e {
            count = count.checked_mul(p as u128).ok_or(Error::Overflow("hook_count"))?;
        }
    }
    Ok(count)
}

fn add_factors(exponents: &mut BTreeMap<u64, i64>, mut m: u64, sign: i64) {
    let mut p = 2;
    while p * p <= m {
        while m.is_multiple_of(p) {
            *exponents.entry(p).or_insert(0) += sign;
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        *exponents.entry(m).or_insert(0) += sign;
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) at every step.
        acc = acc
            .checked_mul((n - j) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (j as u128 + 1);
    }
    Ok(acc)
}

/// What the locus looks like for a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusShape {
    /// `rho < 0`: no line bundle of this degree has `r+1` sections.
    Empty,
    /// `kbar <= 0`: every class of degree `d` qualifies.
    WholeJacobian,
    Components { count: u128, dimension: usize },
}

pub fn locus_shape(params: BNParams) -> Result<LocusShape> {
    if params.kbar() <= 0 {
        return Ok(LocusShape::WholeJacobian);
    }
    if params.rho() < 0 {
        return Ok(LocusShape::Empty);
    }
    Ok(LocusShape::Components { count: expected_count(params)?, dimension: params.rho() as usize })
}

/// `binomial(g, rho) · c(k, kbar)`, the number of tableaux the enumeration
/// yields. The empty rectangle (`kbar = 0`) counts once; negative `rho` or
/// `kbar` count zero.
pub fn expected_count(params: BNParams) -> Result<u128> {
    let (rho, kbar) = (params.rho(), params.kbar());
    if rho < 0 || kbar < 0 {
        return Ok(0);
    }
    let c = if kbar == 0 { 1 } else { rectangle_count(params.k(), kbar as usize)? };
    binomial(params.g as u64, rho as u64)?
        .checked_mul(c)
        .ok_or(Error::Overflow("expected_count"))
}

/// Position of an index in the diagram: zero-based column, one-based row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub column: usize,
    pub row: usize,
}

/// A filling of the `k × kbar` rectangle with distinct indices from `1..=g`.
///
/// Construction only checks the shape; [`Tableau::validate`] checks that the
/// filling is standard. Operations in the rest of the crate assume a
/// validated tableau.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    params: BNParams,
    placement: Vec<Option<Cell>>,
}

impl Tableau {
    /// Builds a tableau from its rows, listed top to bottom.
    pub fn from_rows(params: BNParams, rows: &[Vec<usize>]) -> Result<Self> {
        let kbar = params.kbar();
        if kbar < 0 || rows.len() as i64 != kbar {
            return Err(Error::MalformedTableau(format!(
                "expected {} rows for (g,d,r)=({},{},{}), got {}",
                kbar.max(0),
                params.g,
                params.d,
                params.r,
                rows.len()
            )));
        }
        let mut placement = vec![None; params.g];
        for (m, row) in rows.iter().enumerate() {
            if row.len() != params.k() {
                return Err(Error::MalformedTableau(format!(
                    "row {} has {} entries, expected {}",
                    m + 1,
                    row.len(),
                    params.k()
                )));
            }
            for (t, &i) in row.iter().enumerate() {
                if i == 0 || i > params.g {
                    return Err(Error::MalformedTableau(format!("entry {i} is outside 1..={}", params.g)));
                }
                if placement[i - 1].is_some() {
                    return Err(Error::MalformedTableau(format!("entry {i} appears twice")));
                }
                placement[i - 1] = Some(Cell { column: t, row: m + 1 });
            }
        }
        Ok(Tableau { params, placement })
    }

    pub fn params(&self) -> BNParams {
        self.params
    }

    pub fn cell(&self, i: usize) -> Option<Cell> {
        self.placement.get(i.wrapping_sub(1)).copied().flatten()
    }

    /// `t(i)`, or `None` when `i` is free.
    pub fn column(&self, i: usize) -> Option<usize> {
        self.cell(i).map(|c| c.column)
    }

    pub fn is_free(&self, i: usize) -> bool {
        self.cell(i).is_none()
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (1..=self.params.g).filter(|&i| self.is_free(i)).collect()
    }

    pub fn placed_indices(&self) -> Vec<usize> {
        (1..=self.params.g).filter(|&i| !self.is_free(i)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let kbar = self.params.kbar().max(0) as usize;
        let mut rows = vec![vec![0; self.params.k()]; kbar];
        for (idx, cell) in self.placement.iter().enumerate() {
            if let Some(c) = cell {
                rows[c.row - 1][c.column] = idx + 1;
            }
        }
        rows
    }

    /// Checks that entries increase along rows and down columns.
    pub fn validate(&self) -> core::result::Result<(), TableauViolation> {
        let rows = self.rows();
        for (m, row) in rows.iter().enumerate() {
            for (t, &entry) in row.iter().enumerate() {
                if let Some(&right) = row.get(t + 1) {
                    if right <= entry {
                        return Err(TableauViolation {
                            first: (t, m + 1),
                            second: (t + 1, m + 1),
                            first_entry: entry,
                            second_entry: right,
                            direction: "row",
                        });
                    }
                }
                if let Some(below) = rows.get(m + 1) {
                    if below[t] <= entry {
                        return Err(TableauViolation {
                            first: (t, m + 1),
                            second: (t, m + 2),
                            first_entry: entry,
                            second_entry: below[t],
                            direction: "column",
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `beta(i, s)`: how many placed indices `j <= i` sit in column `s`.
    pub fn beta(&self, i: usize, s: usize) -> usize {
        self.placement
            .iter()
            .take(i.min(self.params.g))
            .filter(|c| matches!(c, Some(cell) if cell.column == s))
            .count()
    }

    /// `(beta(i, 0), …, beta(i, r))`.
    pub fn beta_row(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0; self.params.k()];
        for cell in self.placement.iter().take(i.min(self.params.g)).flatten() {
            out[cell.column] += 1;
        }
        out
    }
}

pub fn validate_tableau(t: &Tableau) -> core::result::Result<(), TableauViolation> {
    t.validate()
}

pub fn beta(t: &Tableau, i: usize, s: usize) -> usize {
    t.beta(i, s)
}

/// All standard fillings of the `k × kbar` rectangle by `1..=k·kbar`, as
/// row-reading words, in lexicographic order.
///
/// Fillings are grown by placing `1, 2, …` in turn: a number may go to the
/// next free spot of column `t` only if that column is shorter than column
/// `t-1`, which is exactly the standard-filling condition.
pub fn standard_fillings(k: usize, kbar: usize) -> Vec<Vec<usize>> {
    fn grow(n: usize, k: usize, kbar: usize, heights: &mut [usize], word: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if n > k * kbar {
            out.push(word.to_vec());
            return;
        }
        for t in 0..k {
            let h = heights[t];
            if h < kbar && (t == 0 || h < heights[t - 1]) {
                word[h * k + t] = n;
                heights[t] += 1;
                grow(n + 1, k, kbar, heights, word, out);
                heights[t] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut heights = vec![0; k];
    let mut word = vec![0; k * kbar];
    grow(1, k, kbar, &mut heights, &mut word, &mut out);
    out.sort();
    out
}

/// Lazily yields every tableau for `params`: free-index subsets in
/// lexicographic order, and for each subset the standard fillings in
/// row-reading-word order.
pub fn enumerate_tableaux(params: BNParams) -> TableauStream {
    TableauStream::new(params)
}

pub struct TableauStream {
    params: BNParams,
    fillings: Vec<Vec<usize>>,
    subset: Option<Vec<usize>>,
    next_filling: usize,
}

impl TableauStream {
    fn new(params: BNParams) -> Self {
        let (rho, kbar) = (params.rho(), params.kbar());
        if rho < 0 || kbar < 0 || rho as usize > params.g {
            return TableauStream { params, fillings: Vec::new(), subset: None, next_filling: 0 };
        }
        let fillings = if kbar == 0 { vec![Vec::new()] } else { standard_fillings(params.k(), kbar as usize) };
        TableauStream { params, fillings, subset: Some((1..=rho as usize).collect()), next_filling: 0 }
    }

    fn advance_subset(&mut self) {
        let g = self.params.g;
        let Some(subset) = self.subset.as_mut() else { return };
        let len = subset.len();
        for pos in (0..len).rev() {
            if subset[pos] < g - (len - 1 - pos) {
                subset[pos] += 1;
                for q in pos + 1..len {
                    subset[q] = subset[q - 1] + 1;
                }
                return;
            }
        }
        self.subset = None;
    }
}

impl Iterator for TableauStream {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        loop {
            let subset = self.subset.as_ref()?;
            if self.next_filling < self.fillings.len() {
                let k = self.params.k();
                let placed: Vec<usize> = (1..=self.params.g).filter(|i| !subset.contains(i)).collect();
                let word = &self.fillings[self.next_filling];
                self.next_filling += 1;
                let rows: Vec<Vec<usize>> =
                    word.chunks(k.max(1)).map(|row| row.iter().map(|&v| placed[v - 1]).collect()).collect();
                let rows = if word.is_empty() { Vec::new() } else { rows };
                return Some(Tableau::from_rows(self.params, &rows).expect("relabelled filling has the right shape"));
            }
            self.next_filling = 0;
            self.advance_subset();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Tableau {
        let p = BNParams::new(6, 6, 2).unwrap();
        Tableau::from_rows(p, &[vec![1, 2, 4], vec![3, 5, 6]]).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(BNParams::new(6, 6, 2).unwrap()), 0);
        assert_eq!(rho(BNParams::new(1, 1, 0).unwrap()), 1);
        assert_eq!(rho(BNParams::new(5, 4, 1).unwrap()), 1);
        assert_eq!(BNParams::new(5, 3, 1).unwrap().rho(), -1);
    }

    #[test]
    fn hook_count_small() {
        assert_eq!(hook_count(1, 3).unwrap(), 1);
        assert_eq!(hook_count(3, 2).unwrap(), 5);
        assert_eq!(hook_count(2, 2).unwrap(), 2);
        assert_eq!(hook_count(4, 4).unwrap(), 24024);
        assert!(hook_count(0, 2).is_err());
        assert!(hook_count(2, 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tableaux(BNParams::new(6, 6, 2).unwrap()).count(), 5);
        assert_eq!(enumerate_tableaux(BNParams::new(5, 3, 1).unwrap()).count(), 0);
        assert_eq!(enumerate_tableaux(BNParams::new(5, 4, 1).unwrap()).count(), 10);
    }

    #[test]
    fn example_is_enumerated_and_order_is_lexicographic() {
        let all: Vec<_> = enumerate_tableaux(BNParams::new(6, 6, 2).unwrap()).collect();
        assert!(all.contains(&example()));
        assert_eq!(all[0].rows(), vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let words: Vec<Vec<usize>> = all.iter().map(|t| t.rows().concat()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }

    #[test]
    fn free_subsets_come_first_in_order() {
        let all: Vec<_> = enumerate_tableaux(BNParams::new(5, 4, 1).unwrap()).collect();
        let frees: Vec<Vec<usize>> = all.iter().map(|t| t.free_indices()).collect();
        assert_eq!(frees[0], vec![1]);
        assert_eq!(frees[1], vec![1]);
        assert_eq!(frees[9], vec![5]);
        assert_eq!(all[8].rows(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(all[9].rows(), vec![vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn validation() {
        let p = BNParams::new(6, 6, 2).unwrap();
        assert!(example().validate().is_ok());
        assert!(Tableau::from_rows(p, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap().validate().is_ok());
        let bad = Tableau::from_rows(p, &[vec![2, 1, 4], vec![3, 5, 6]]).unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!(v.direction, "row");
        assert_eq!((v.first_entry, v.second_entry), (2, 1));
        let bad_col = Tableau::from_rows(p, &[vec![1, 2, 6], vec![3, 4, 5]]).unwrap();
        assert_eq!(bad_col.validate().unwrap_err().direction, "column");
    }

    #[test]
    fn malformed_shapes_rejected() {
        let p = BNParams::new(6, 6, 2).unwrap();
        assert!(Tableau::from_rows(p, &[vec![1, 2, 4]]).is_err());
        assert!(Tableau::from_rows(p, &[vec![1, 2], vec![3, 5]]).is_err());
        assert!(Tableau::from_rows(p, &[vec![1, 2, 4], vec![3, 5, 5]]).is_err());
        assert!(Tableau::from_rows(p, &[vec![1, 2, 4], vec![3, 5, 7]]).is_err());
    }

    #[test]
    fn beta_examples() {
        let t = example();
        assert_eq!(t.beta(2, 1), 1);
        assert_eq!(t.beta(3, 2), 0);
        for s in 0..3 {
            assert_eq!(t.beta(0, s), 0);
            assert_eq!(t.beta(6, s), 2);
        }
        assert_eq!(t.beta_row(4), vec![2, 1, 1]);
    }

    #[test]
    fn degenerate_regimes() {
        let whole = BNParams::new(3, 4, 1).unwrap();
        assert_eq!(whole.kbar(), 0);
        assert_eq!(locus_shape(whole).unwrap(), LocusShape::WholeJacobian);
        let only: Vec<_> = enumerate_tableaux(whole).collect();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].free_indices(), vec![1, 2, 3]);
        assert_eq!(expected_count(whole).unwrap(), 1);

        let beyond = BNParams::new(2, 5, 0).unwrap();
        assert!(beyond.kbar() < 0);
        assert_eq!(enumerate_tableaux(beyond).count(), 0);
        assert_eq!(locus_shape(beyond).unwrap(), LocusShape::WholeJacobian);

        assert_eq!(locus_shape(BNParams::new(5, 3, 1).unwrap()).unwrap(), LocusShape::Empty);
        assert_eq!(
            locus_shape(BNParams::new(5, 4, 1).unwrap()).unwrap(),
            LocusShape::Components { count: 10, dimension: 1 }
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 0).unwrap(), 1);
        assert_eq!(binomial(5, 1).unwrap(), 5);
        assert_eq!(binomial(8, 4).unwrap(), 70);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118264581564861424);
    }
}
