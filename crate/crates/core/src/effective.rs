//! Effective limit linear series on an elliptic chain.
//!
//! Component `i` keeps a bundle `L_{i,i}` of degree `d_i` and a section space
//! `W_i` with orders `w_P(i)`, `w_Q(i)`; node `α` (gluing `Q_α` to
//! `P_{α+1}`) carries an integer `a_α`. Refined series correspond one to one
//! with refined Eisenbud-Harris series.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::elliptic::{check_component_shapes, check_lls, EHComponent, EHSeries, EllipticBundleClass};
use crate::error::{Error, Result};
use crate::tableaux::{BNParams, Tableau};
use crate::tropical::{divisor_from_tableau, tropical_vanishing_table, ChainGeometry, GenericPointSampler};
use crate::vanishing::VanishingSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveComponent {
    /// `L_{i,i}`; its degree is `d_i`.
    pub bundle: EllipticBundleClass,
    pub w_p: VanishingSequence,
    pub w_q: VanishingSequence,
}

impl EffectiveComponent {
    pub fn degree(&self) -> i64 {
        self.bundle.degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveSeries {
    params: BNParams,
    components: Vec<EffectiveComponent>,
    node_twists: Vec<i64>,
}

impl EffectiveSeries {
    /// Checks shapes only; [`check_effective`] checks the defining conditions.
    pub fn new(params: BNParams, components: Vec<EffectiveComponent>, node_twists: Vec<i64>) -> Result<Self> {
        if node_twists.len() + 1 != params.g {
            return Err(Error::InconsistentSeries(format!(
                "{} node values for genus {}",
                node_twists.len(),
                params.g
            )));
        }
        let as_eh: Vec<EHComponent> = components
            .iter()
            .map(|c| EHComponent { bundle: c.bundle, vanish_p: c.w_p.clone(), vanish_q: c.w_q.clone() })
            .collect();
        check_component_shapes(params, &as_eh, |i| components[i - 1].degree())?;
        Ok(EffectiveSeries { params, components, node_twists })
    }

    pub fn params(&self) -> BNParams {
        self.params
    }

    pub fn components(&self) -> &[EffectiveComponent] {
        &self.components
    }

    /// Component `i`, one-based.
    pub fn component(&self, i: usize) -> &EffectiveComponent {
        &self.components[i - 1]
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.components.iter().map(EffectiveComponent::degree).collect()
    }

    /// `(a_1, …, a_{g-1})`.
    pub fn node_twists(&self) -> &[i64] {
        &self.node_twists
    }

    /// `a_α`, one-based.
    pub fn a(&self, alpha: usize) -> i64 {
        self.node_twists[alpha - 1]
    }

    /// `(d'_left(j), d'_right(j))`: degree carried by the sub-chains to the
    /// left and right of component `j`, nodes included on their closures.
    pub fn side_degrees(&self, j: usize) -> (i64, i64) {
        let d = self.degrees();
        let left = d[..j - 1].iter().sum::<i64>() - self.node_twists[..j - 1].iter().sum::<i64>();
        let right = d[j..].iter().sum::<i64>() - self.node_twists[j - 1..].iter().sum::<i64>();
        (left, right)
    }
}

fn not_refined(series: &EHSeries) -> Option<Error> {
    let p = series.params();
    for node in 1..p.g {
        let left = &series.component(node).vanish_q;
        let right = &series.component(node + 1).vanish_p;
        for t in 0..=p.r {
            if left.get(t) + right.get(p.r - t) != p.d {
                return Some(Error::NotRefined { node, t });
            }
        }
    }
    None
}

/// Moves each component's base points off its bundle.
pub fn eh_to_effective(series: &EHSeries) -> Result<EffectiveSeries> {
    let p = series.params();
    if !check_lls(series)?.refined {
        return Err(not_refined(series).expect("a non-refined series has a strict node"));
    }
    if series.component(1).vanish_p.bottom() != 0 {
        return Err(Error::EndpointBasePoint { component: 1 });
    }
    if series.component(p.g).vanish_q.bottom() != 0 {
        return Err(Error::EndpointBasePoint { component: p.g });
    }
    let mut components = Vec::with_capacity(p.g);
    for c in series.components() {
        let (p_min, q_min) = (c.vanish_p.bottom(), c.vanish_q.bottom());
        components.push(EffectiveComponent {
            bundle: c.bundle.twisted(-p_min, -q_min),
            w_p: c.vanish_p.shifted(-p_min)?,
            w_q: c.vanish_q.shifted(-q_min)?,
        });
    }
    let node_twists = (1..p.g)
        .map(|alpha| p.d - series.component(alpha).vanish_q.bottom() - series.component(alpha + 1).vanish_p.bottom())
        .collect();
    EffectiveSeries::new(p, components, node_twists)
}

/// Inverse of [`eh_to_effective`] on refined series.
pub fn effective_to_eh(series: &EffectiveSeries) -> Result<EHSeries> {
    let check = check_effective(series)?;
    if !check.refined {
        let p = series.params();
        for alpha in 1..p.g {
            let (wq, wp) = (&series.component(alpha).w_q, &series.component(alpha + 1).w_p);
            if let Some(t) = (0..=p.r).find(|&t| wq.get(t) + wp.get(p.r - t) != series.a(alpha)) {
                return Err(Error::NotRefined { node: alpha, t });
            }
        }
    }
    let p = series.params();
    let mut components = Vec::with_capacity(p.g);
    for j in 1..=p.g {
        let (left, right) = series.side_degrees(j);
        if left < 0 {
            return Err(Error::NegativeSideDegree { component: j, side: "left", value: left });
        }
        if right < 0 {
            return Err(Error::NegativeSideDegree { component: j, side: "right", value: right });
        }
        let c = series.component(j);
        components.push(EHComponent {
            bundle: c.bundle.twisted(left, right),
            vanish_p: c.w_p.shifted(left)?,
            vanish_q: c.w_q.shifted(right)?,
        });
    }
    EHSeries::new(p, components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffectiveCheck {
    pub refined: bool,
}

/// Checks the node conditions and the total degree, reporting the first
/// failure. Per node: pair sums, then sections through `a_α` times the
/// node, then `r <= a_α <= min(d_α, d_{α+1})`; the degree sum comes last.
pub fn check_effective(series: &EffectiveSeries) -> Result<EffectiveCheck> {
    let p = series.params();
    let r = p.r;
    let mut refined = true;
    for alpha in 1..p.g {
        let a = series.a(alpha);
        let (left, right) = (series.component(alpha), series.component(alpha + 1));
        for t in 0..=r {
            let sum = left.w_q.get(t) + right.w_p.get(r - t);
            if sum < a {
                return Err(Error::EffectiveCondition {
                    condition: "b",
                    location: format!("node Q_{alpha}, t={t}: {sum} < a={a}"),
                });
            }
            refined &= sum == a;
        }
        for (side, top) in [("Q", left.w_q.top()), ("P", right.w_p.top())] {
            if top < a {
                let component = if side == "Q" { alpha } else { alpha + 1 };
                return Err(Error::EffectiveCondition {
                    condition: "c",
                    location: format!("node Q_{alpha}: top order {top} at {side}_{component} < a={a}"),
                });
            }
        }
        let bound = left.degree().min(right.degree());
        if a < r as i64 || a > bound {
            return Err(Error::EffectiveCondition {
                condition: "b",
                location: format!("node Q_{alpha}: a={a} outside [{r}, {bound}]"),
            });
        }
    }
    let total = series.degrees().iter().sum::<i64>() - series.node_twists().iter().sum::<i64>();
    if total != p.d {
        return Err(Error::EffectiveCondition {
            condition: "a",
            location: format!("sum d_i - sum a = {total}, expected {}", p.d),
        });
    }
    Ok(EffectiveCheck { refined })
}

/// `w_s(i) = r - s + beta(i, s) - beta(i, r)`.
pub fn effective_vanishing_from_tableau(t: &Tableau, i: usize) -> VanishingSequence {
    let r = t.params().r;
    let beta = t.beta_row(i);
    let orders = (0..=r).map(|s| (r - s) as i64 + beta[s] as i64 - beta[r] as i64).collect();
    VanishingSequence::new(orders).expect("column counts of a standard filling are non-increasing")
}

/// Restriction of the degree-concentrated bundle `L^1` to a component `i >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1Restriction {
    Trivial,
    /// `O(x_i)` with `x_i + c_p·P_i ≡ c_q·Q_i`, so `c_q = c_p + 1`.
    PointBundle { c_p: i64, c_q: i64 },
    GenericPoint,
}

impl L1Restriction {
    pub fn degree(&self) -> i64 {
        match self {
            L1Restriction::Trivial => 0,
            _ => 1,
        }
    }

    /// The class on component `i`, with a fresh tag for a generic point.
    pub fn bundle(&self, i: usize) -> EllipticBundleClass {
        match *self {
            L1Restriction::Trivial => EllipticBundleClass::special(i, 0, 0),
            L1Restriction::PointBundle { c_p, .. } => EllipticBundleClass::special(i, 1, -c_p),
            L1Restriction::GenericPoint => EllipticBundleClass::generic(i, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1Description {
    /// `d_1`, the degree left on the concentration component.
    pub concentration_degree: i64,
    /// `L_{1,1}`.
    pub concentration_bundle: EllipticBundleClass,
    /// Entries for components `2..=g`.
    pub restrictions: Vec<L1Restriction>,
}

impl L1Description {
    pub fn total_degree(&self) -> i64 {
        self.concentration_degree + self.restrictions.iter().map(L1Restriction::degree).sum::<i64>()
    }
}

pub fn describe_l1(t: &Tableau) -> Result<L1Description> {
    let p = t.params();
    let u1 = crate::elliptic::vanishing_from_tableau(t, 1)?;
    let concentration_degree = p.d - u1.bottom();
    let concentration_bundle = crate::elliptic::bundle_from_tableau(t, 1).twisted(0, -u1.bottom());
    let r = p.r as i64;
    let restrictions = (2..=p.g)
        .map(|i| match t.column(i) {
            None => L1Restriction::GenericPoint,
            Some(col) if col == p.r => L1Restriction::Trivial,
            Some(col) => {
                let c_p = r + t.beta(i, col) as i64 - col as i64 - t.beta(i, p.r) as i64 - 1;
                L1Restriction::PointBundle { c_p, c_q: c_p + 1 }
            }
        })
        .collect();
    Ok(L1Description { concentration_degree, concentration_bundle, restrictions })
}

/// `grid[j-1][i-1] = L_{j,i}`, the restriction to `C_j` of the bundle whose
/// degree is concentrated on `C_i`. A generic class keeps its tag along a row.
pub fn restriction_grid(series: &EHSeries) -> Vec<Vec<EllipticBundleClass>> {
    let g = series.params().g;
    let mut grid = vec![Vec::with_capacity(g); g];
    for (row, c) in grid.iter_mut().zip(series.components()) {
        let (p_min, p_max) = (c.vanish_p.bottom(), c.vanish_p.top());
        let (q_min, q_max) = (c.vanish_q.bottom(), c.vanish_q.top());
        let j = c.bundle.component;
        for i in 1..=g {
            let entry = match j.cmp(&i) {
                core::cmp::Ordering::Greater => c.bundle.twisted(-p_max, -q_min),
                core::cmp::Ordering::Less => c.bundle.twisted(-p_min, -q_max),
                core::cmp::Ordering::Equal => c.bundle.twisted(-p_min, -q_min),
            };
            row.push(entry);
        }
    }
    grid
}

/// Side-by-side vanishing tables for one tableau, rows `i = 0..=g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub closed_form: Vec<VanishingSequence>,
    pub tropical: Vec<VanishingSequence>,
    pub effective: Vec<VanishingSequence>,
    /// First `(i, s, closed, other)` where a table differs from the closed form.
    pub first_disagreement: Option<(usize, usize, i64, i64)>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.first_disagreement.is_none()
    }

    pub fn to_error(&self) -> Option<Error> {
        self.first_disagreement.map(|(i, s, left, right)| Error::VanishingDisagreement { i, s, left, right })
    }
}

/// Compares the closed-form orders with the orders obtained by reducing the
/// tableau divisor on `geom`, and with the `w_Q` orders of the effective
/// series built from the tableau.
pub fn compare_vanishing(t: &Tableau, geom: &ChainGeometry, sampler: &mut GenericPointSampler) -> Result<AgreementReport> {
    let p = t.params();
    let closed_form: Vec<_> = (0..=p.g).map(|i| effective_vanishing_from_tableau(t, i)).collect();
    let divisor = divisor_from_tableau(t, geom, sampler)?;
    let tropical = tropical_vanishing_table(geom, &divisor, p.r)?.u;
    let eff = eh_to_effective(&crate::elliptic::eh_series_from_tableau(t)?)?;
    let mut effective = vec![VanishingSequence::consecutive(p.r as i64, p.r)?];
    effective.extend(eff.components().iter().map(|c| c.w_q.clone()));
    let mut first_disagreement = None;
    'rows: for i in 0..=p.g {
        for s in 0..=p.r {
            for other in [&tropical, &effective] {
                if other[i].get(s) != closed_form[i].get(s) {
                    first_disagreement = Some((i, s, closed_form[i].get(s), other[i].get(s)));
                    break 'rows;
                }
            }
        }
    }
    Ok(AgreementReport { closed_form, tropical, effective, first_disagreement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::eh_series_from_tableau;
    use alloc::string::{String, ToString};

    fn vs(v: &[i64]) -> VanishingSequence {
        VanishingSequence::new(v.to_vec()).unwrap()
    }

    fn example() -> Tableau {
        Tableau::from_rows(BNParams::new(6, 6, 2).unwrap(), &[vec![1, 2, 4], vec![3, 5, 6]]).unwrap()
    }

    fn example_series() -> EffectiveSeries {
        eh_to_effective(&eh_series_from_tableau(&example()).unwrap()).unwrap()
    }

    #[test]
    fn example_values() {
        let e = example_series();
        assert_eq!(e.degrees(), vec![3, 4, 4, 4, 4, 3]);
        assert_eq!(e.node_twists(), &[3, 3, 4, 3, 3]);
        assert_eq!(e.component(3).w_q, vs(&[4, 2, 0]));
        assert_eq!(e.component(3).bundle, EllipticBundleClass::special(3, 4, 0));
        let bundles: Vec<String> = e.components().iter().map(|c| c.bundle.to_string()).collect();
        assert_eq!(bundles, ["O(3Q_1)", "O(2P_2+2Q_2)", "O(4Q_3)", "O(4P_4)", "O(2P_5+2Q_5)", "O(3P_6)"]);
        assert_eq!(check_effective(&e).unwrap(), EffectiveCheck { refined: true });
        assert_eq!(e.side_degrees(1), (0, 3));
    }

    #[test]
    fn round_trip_on_example() {
        let eh = eh_series_from_tableau(&example()).unwrap();
        let back = effective_to_eh(&eh_to_effective(&eh).unwrap()).unwrap();
        assert_eq!(back, eh);
        assert_eq!(back.component(1).vanish_q, vs(&[6, 4, 3]));
    }

    #[test]
    fn raised_node_value_fails_pair_sums() {
        let e = example_series();
        let mut a = e.node_twists().to_vec();
        a[0] = 4;
        let bad = EffectiveSeries::new(e.params(), e.components().to_vec(), a).unwrap();
        match check_effective(&bad).unwrap_err() {
            Error::EffectiveCondition { condition, location } => {
                assert_eq!(condition, "b");
                assert!(location.contains("Q_1"), "{location}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_degree_sum_fails_condition_a() {
        let e = example_series();
        let mut comps = e.components().to_vec();
        comps[0].bundle = comps[0].bundle.twisted(0, 1);
        let bad = EffectiveSeries::new(e.params(), comps, e.node_twists().to_vec()).unwrap();
        assert!(matches!(check_effective(&bad), Err(Error::EffectiveCondition { condition: "a", .. })));
    }

    #[test]
    fn single_component_chain() {
        let p = BNParams::new(1, 3, 1).unwrap();
        let comp = EffectiveComponent { bundle: EllipticBundleClass::special(1, 3, 1), w_p: vs(&[2, 0]), w_q: vs(&[1, 0]) };
        let e = EffectiveSeries::new(p, vec![comp], vec![]).unwrap();
        assert_eq!(check_effective(&e).unwrap(), EffectiveCheck { refined: true });
        let eh = effective_to_eh(&e).unwrap();
        assert_eq!(eh.component(1).bundle, EllipticBundleClass::special(1, 3, 1));
        assert_eq!(eh_to_effective(&eh).unwrap(), e);
    }

    #[test]
    fn non_refined_input_rejected() {
        let eh = eh_series_from_tableau(&example()).unwrap();
        let mut comps = eh.components().to_vec();
        comps[2].vanish_p = vs(&[5, 2, 1]);
        let crude = EHSeries::new(eh.params(), comps).unwrap();
        assert_eq!(eh_to_effective(&crude).unwrap_err(), Error::NotRefined { node: 2, t: 2 });
    }

    #[test]
    fn endpoint_base_point_rejected() {
        let p = BNParams::new(1, 3, 1).unwrap();
        let comp = EHComponent { bundle: EllipticBundleClass::special(1, 3, 1), vanish_p: vs(&[2, 1]), vanish_q: vs(&[1, 0]) };
        let eh = EHSeries::new(p, vec![comp]).unwrap();
        assert_eq!(eh_to_effective(&eh).unwrap_err(), Error::EndpointBasePoint { component: 1 });
    }

    #[test]
    fn closed_form_w() {
        let t = example();
        assert_eq!(effective_vanishing_from_tableau(&t, 0), vs(&[2, 1, 0]));
        assert_eq!(effective_vanishing_from_tableau(&t, 1), vs(&[3, 1, 0]));
        assert_eq!(effective_vanishing_from_tableau(&t, 3), vs(&[4, 2, 0]));
        let e = example_series();
        for i in 1..=6 {
            assert_eq!(e.component(i).w_q, effective_vanishing_from_tableau(&t, i));
        }
    }

    #[test]
    fn l1_description_of_example() {
        let desc = describe_l1(&example()).unwrap();
        assert_eq!(desc.concentration_degree, 3);
        assert_eq!(desc.concentration_bundle.to_string(), "O(3Q_1)");
        let rendered: Vec<String> =
            desc.restrictions.iter().enumerate().map(|(n, r)| r.bundle(n + 2).to_string()).collect();
        assert_eq!(rendered, ["O(2Q_2-P_2)", "O(4Q_3-3P_3)", "O", "O(2Q_5-P_5)", "O"]);
        assert_eq!(desc.restrictions[0], L1Restriction::PointBundle { c_p: 1, c_q: 2 });
        assert_eq!(desc.total_degree(), 6);
    }

    #[test]
    fn grid_first_column_matches_description() {
        let t = example();
        let grid = restriction_grid(&eh_series_from_tableau(&t).unwrap());
        let desc = describe_l1(&t).unwrap();
        assert_eq!(grid[0][0], desc.concentration_bundle);
        for (n, r) in desc.restrictions.iter().enumerate() {
            assert_eq!(grid[n + 1][0], r.bundle(n + 2));
        }
        assert_eq!(grid[3][4].to_string(), "O(4P_4-3Q_4)");
        for (i, row) in grid.iter().enumerate() {
            assert_eq!(row[i].degree + (0..6).filter(|&j| j != i).map(|j| grid[j][i].degree).sum::<i64>(), 6);
        }
    }

    #[test]
    fn free_index_gives_generic_point() {
        let p = BNParams::new(5, 4, 1).unwrap();
        let t = Tableau::from_rows(p, &[vec![1, 2], vec![3, 4]]).unwrap();
        let desc = describe_l1(&t).unwrap();
        assert_eq!(desc.restrictions[3], L1Restriction::GenericPoint);
        assert_eq!(desc.total_degree(), 4);
    }
}
