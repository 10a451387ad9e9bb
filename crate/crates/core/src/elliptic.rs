//! Eisenbud-Harris limit linear series on a general chain of elliptic curves.
//!
//! Component `C_i` carries the points `P_i` and `Q_i`, and `Q_i` is glued to
//! `P_{i+1}`. Section spaces are represented only through their vanishing
//! sequences at `P_i` and `Q_i`. Bundle classes are either `O(aP_i + bQ_i)`
//! or an opaque generic class; since `P_i - Q_i` is not torsion, two classes
//! of the first kind agree exactly when their coefficients do.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::tableaux::{enumerate_tableaux, BNParams, Tableau};
use crate::vanishing::VanishingSequence;

static NEXT_TAG: AtomicUsize = AtomicUsize::new(0);

/// Identity of a class that is free to move in the Jacobian of its component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenericTag(u64);

impl GenericTag {
    /// A tag distinct from every tag handed out before in this process.
    pub fn fresh() -> Self {
        GenericTag(NEXT_TAG.fetch_add(1, Ordering::Relaxed) as u64)
    }

    pub fn from_raw(raw: u64) -> Self {
        GenericTag(raw)
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleVariant {
    /// `O(a·P_i + (degree - a)·Q_i)`.
    Special { a: i64 },
    Generic(GenericTag),
}

/// A line-bundle class on one elliptic component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EllipticBundleClass {
    pub component: usize,
    pub degree: i64,
    pub variant: BundleVariant,
}

impl EllipticBundleClass {
    pub fn special(component: usize, degree: i64, a: i64) -> Self {
        EllipticBundleClass { component, degree, variant: BundleVariant::Special { a } }
    }

    pub fn generic(component: usize, degree: i64) -> Self {
        EllipticBundleClass { component, degree, variant: BundleVariant::Generic(GenericTag::fresh()) }
    }

    /// `(a, b)` for `O(aP + bQ)`, or `None` for a generic class.
    pub fn coefficients(&self) -> Option<(i64, i64)> {
        match self.variant {
            BundleVariant::Special { a } => Some((a, self.degree - a)),
            BundleVariant::Generic(_) => None,
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self.variant, BundleVariant::Generic(_))
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients() == Some((0, 0))
    }

    /// The class `L(p·P + q·Q)`. A generic class stays generic with the same tag.
    pub fn twisted(&self, p: i64, q: i64) -> Self {
        let variant = match self.variant {
            BundleVariant::Special { a } => BundleVariant::Special { a: a + p },
            generic => generic,
        };
        EllipticBundleClass { component: self.component, degree: self.degree + p + q, variant }
    }
}

impl fmt::Display for EllipticBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.component;
        match self.variant {
            BundleVariant::Generic(tag) => write!(f, "L_gen#{} (deg {})", tag.raw(), self.degree),
            BundleVariant::Special { a } => {
                let b = self.degree - a;
                let term = |c: i64, name: char| match c {
                    1 => format!("{name}_{i}"),
                    -1 => format!("-{name}_{i}"),
                    c => format!("{c}{name}_{i}"),
                };
                let mut terms = Vec::new();
                // positive terms first, P before Q
                for (c, name) in [(a, 'P'), (b, 'Q')] {
                    if c > 0 {
                        terms.push(term(c, name));
                    }
                }
                for (c, name) in [(a, 'P'), (b, 'Q')] {
                    if c < 0 {
                        terms.push(term(c, name));
                    }
                }
                if terms.is_empty() {
                    return f.write_str("O");
                }
                f.write_str("O(")?;
                for (n, t) in terms.iter().enumerate() {
                    if n > 0 && !t.starts_with('-') {
                        f.write_str("+")?;
                    }
                    f.write_str(t)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Riemann-Roch on an elliptic curve.
pub fn riemann_roch_h0(bundle: &EllipticBundleClass) -> u64 {
    match bundle.degree {
        d if d < 0 => 0,
        d if d > 0 => d as u64,
        _ => u64::from(bundle.is_trivial()),
    }
}

/// Checks `vp[t] + vq[r-t] <= d` for every `t`, with equality for at most
/// one `t`. Returns the index of that equality, if any.
pub fn check_vanishing_pair(d: i64, vp: &VanishingSequence, vq: &VanishingSequence) -> Result<Option<usize>> {
    if vp.orders().len() != vq.orders().len() {
        return Err(Error::LengthMismatch { left: vp.orders().len(), right: vq.orders().len() });
    }
    let r = vp.r();
    let mut equality = None;
    for t in 0..=r {
        let sum = vp.get(t) + vq.get(r - t);
        if sum > d {
            return Err(Error::PairExceedsDegree { t, sum, degree: d });
        }
        if sum == d {
            if let Some(first) = equality {
                return Err(Error::TwoEqualities { first, second: t });
            }
            equality = Some(t);
        }
    }
    Ok(equality)
}

/// Possible bundles and sections on one component, given the orders `u` at
/// `Q` of the previous component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentExtension {
    NoFamily,
    /// A one-parameter family of bundles, each with a unique section space.
    Family { vanish_p: VanishingSequence, vanish_q: VanishingSequence },
    /// The single bundle `O(a·P + (d-a)·Q)` with a unique section space.
    Unique { a: i64, vanish_p: VanishingSequence, vanish_q: VanishingSequence },
}

/// Extends a section space with orders `u` at the previous node across one
/// elliptic component: generically when `t0` is `None`, or keeping the
/// order `u_{t0}` when `t0` is given.
pub fn component_extension(d: i64, u: &VanishingSequence, t0: Option<usize>) -> Result<ComponentExtension> {
    let r = u.r();
    if u.top() > d {
        return Err(Error::InvalidParams(format!("vanishing {u} exceeds degree {d}")));
    }
    let vanish_p = u.complement(d)?;
    match t0 {
        None => {
            if u.bottom() == 0 {
                return Ok(ComponentExtension::NoFamily);
            }
            Ok(ComponentExtension::Family { vanish_p, vanish_q: u.shifted(-1)? })
        }
        Some(t0) => {
            if t0 > r {
                return Err(Error::InvalidParams(format!("t0 = {t0} exceeds r = {r}")));
            }
            let adjacency_ok = t0 == 0 || u.get(t0) + 1 < u.get(t0 - 1);
            let bottom_ok = t0 == r || u.bottom() > 0;
            if !(adjacency_ok && bottom_ok) {
                return Ok(ComponentExtension::NoFamily);
            }
            let orders = u.orders().iter().enumerate().map(|(t, &x)| if t == t0 { x } else { x - 1 }).collect();
            Ok(ComponentExtension::Unique { a: d - u.get(t0), vanish_p, vanish_q: VanishingSequence::new(orders)? })
        }
    }
}

/// `u_s(i) = d - s - i + beta(i, s)`: orders at `Q_i` (and `(d, …, d-r)` at `i = 0`).
pub fn vanishing_from_tableau(t: &Tableau, i: usize) -> Result<VanishingSequence> {
    let p = t.params();
    let beta = t.beta_row(i);
    VanishingSequence::new((0..=p.r).map(|s| p.d - s as i64 - i as i64 + beta[s] as i64).collect())
}

/// `O((t(i) + i - beta(i, t(i)))·P_i + (d - …)·Q_i)` for placed `i`, a fresh
/// generic class for free `i`.
pub fn bundle_from_tableau(t: &Tableau, i: usize) -> EllipticBundleClass {
    let d = t.params().d;
    match t.column(i) {
        Some(col) => {
            let a = col as i64 + i as i64 - t.beta(i, col) as i64;
            EllipticBundleClass::special(i, d, a)
        }
        None => EllipticBundleClass::generic(i, d),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EHComponent {
    pub bundle: EllipticBundleClass,
    pub vanish_p: VanishingSequence,
    pub vanish_q: VanishingSequence,
}

/// Per-component data of a limit linear series on the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EHSeries {
    params: BNParams,
    components: Vec<EHComponent>,
}

impl EHSeries {
    /// Checks shapes only: `g` components, `r+1` orders everywhere, bundles
    /// of degree `d` indexed `1..=g`. Node conditions are [`check_lls`].
    pub fn new(params: BNParams, components: Vec<EHComponent>) -> Result<Self> {
        check_component_shapes(params, &components, |_| params.d)?;
        Ok(EHSeries { params, components })
    }

    pub fn params(&self) -> BNParams {
        self.params
    }

    pub fn components(&self) -> &[EHComponent] {
        &self.components
    }

    /// Component `i`, one-based.
    pub fn component(&self, i: usize) -> &EHComponent {
        &self.components[i - 1]
    }
}

pub(crate) fn check_component_shapes(
    params: BNParams,
    components: &[EHComponent],
    degree_of: impl Fn(usize) -> i64,
) -> Result<()> {
    if components.len() != params.g {
        return Err(Error::InconsistentSeries(format!("{} components for genus {}", components.len(), params.g)));
    }
    for (idx, c) in components.iter().enumerate() {
        let i = idx + 1;
        if c.vanish_p.r() != params.r || c.vanish_q.r() != params.r {
            return Err(Error::InconsistentSeries(format!("component {i}: vanishing sequences need {} orders", params.k())));
        }
        if c.bundle.component != i {
            return Err(Error::InconsistentSeries(format!("component {i} carries a bundle for component {}", c.bundle.component)));
        }
        if c.bundle.degree != degree_of(i) {
            return Err(Error::InconsistentSeries(format!(
                "component {i}: bundle degree {} should be {}",
                c.bundle.degree,
                degree_of(i)
            )));
        }
    }
    Ok(())
}

/// The refined series attached to a tableau.
pub fn eh_series_from_tableau(t: &Tableau) -> Result<EHSeries> {
    let p = t.params();
    let mut components = Vec::with_capacity(p.g);
    let mut previous = vanishing_from_tableau(t, 0)?;
    for i in 1..=p.g {
        let vanish_q = vanishing_from_tableau(t, i)?;
        components.push(EHComponent { bundle: bundle_from_tableau(t, i), vanish_p: previous.complement(p.d)?, vanish_q: vanish_q.clone() });
        previous = vanish_q;
    }
    EHSeries::new(p, components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesCheck {
    pub refined: bool,
}

/// Node inequalities `u_t(Q_i) + u_{r-t}(P_{i+1}) >= d`; refined when every
/// one is an equality.
pub fn check_lls(series: &EHSeries) -> Result<SeriesCheck> {
    let p = series.params();
    let mut refined = true;
    for node in 1..p.g {
        let left = &series.component(node).vanish_q;
        let right = &series.component(node + 1).vanish_p;
        for t in 0..=p.r {
            let sum = left.get(t) + right.get(p.r - t);
            if sum < p.d {
                return Err(Error::NodeInequality { node, t, sum, bound: p.d });
            }
            refined &= sum == p.d;
        }
    }
    Ok(SeriesCheck { refined })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum World {
    Elliptic,
    Tropical,
}

/// One component of a Brill-Noether locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNComponent {
    pub tableau: Tableau,
    pub world: World,
}

impl BNComponent {
    /// Number of free indices, which equals `rho`.
    pub fn dimension(&self) -> usize {
        self.tableau.free_indices().len()
    }

    /// Components (elliptic curves or loops) that move in this component.
    pub fn moving_factors(&self) -> Vec<usize> {
        self.tableau.free_indices()
    }
}

pub fn components_elliptic(params: BNParams) -> impl Iterator<Item = BNComponent> {
    enumerate_tableaux(params).map(|tableau| BNComponent { tableau, world: World::Elliptic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intersection {
    pub intersects: bool,
    pub dimension: Option<usize>,
}

/// Two components meet iff every index placed in both sits on the same
/// diagonal `column - row`; the intersection moves in the indices placed in
/// neither.
pub fn component_intersection(t1: &Tableau, t2: &Tableau) -> Result<Intersection> {
    if t1.params() != t2.params() {
        return Err(Error::InvalidParams(format!("tableaux for {:?} and {:?}", t1.params(), t2.params())));
    }
    let diagonal = |c: crate::tableaux::Cell| c.column as i64 - c.row as i64;
    let g = t1.params().g;
    for i in 1..=g {
        if let (Some(a), Some(b)) = (t1.cell(i), t2.cell(i)) {
            if diagonal(a) != diagonal(b) {
                return Ok(Intersection { intersects: false, dimension: None });
            }
        }
    }
    let both_free = (1..=g).filter(|&i| t1.is_free(i) && t2.is_free(i)).count();
    Ok(Intersection { intersects: true, dimension: Some(both_free) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn vs(v: &[i64]) -> VanishingSequence {
        VanishingSequence::new(v.to_vec()).unwrap()
    }

    fn example() -> Tableau {
        Tableau::from_rows(BNParams::new(6, 6, 2).unwrap(), &[vec![1, 2, 4], vec![3, 5, 6]]).unwrap()
    }

    #[test]
    fn riemann_roch() {
        assert_eq!(riemann_roch_h0(&EllipticBundleClass::special(1, 6, 2)), 6);
        assert_eq!(riemann_roch_h0(&EllipticBundleClass::special(1, 0, 0)), 1);
        assert_eq!(riemann_roch_h0(&EllipticBundleClass::special(1, 0, 1)), 0);
        assert_eq!(riemann_roch_h0(&EllipticBundleClass::generic(1, 0)), 0);
        assert_eq!(riemann_roch_h0(&EllipticBundleClass::generic(1, -2)), 0);
    }

    #[test]
    fn class_equality_axioms() {
        assert_eq!(EllipticBundleClass::special(2, 6, 2), EllipticBundleClass::special(2, 6, 2));
        assert_ne!(EllipticBundleClass::special(2, 6, 2), EllipticBundleClass::special(2, 6, 3));
        let g1 = EllipticBundleClass::generic(2, 6);
        let g2 = EllipticBundleClass::generic(2, 6);
        assert_ne!(g1, g2);
        assert_eq!(g1, g1.clone());
        assert_ne!(g1, EllipticBundleClass::special(2, 6, 2));
    }

    #[test]
    fn bundle_display() {
        assert_eq!(EllipticBundleClass::special(1, 6, 0).to_string(), "O(6Q_1)");
        assert_eq!(EllipticBundleClass::special(2, 6, 2).to_string(), "O(2P_2+4Q_2)");
        assert_eq!(EllipticBundleClass::special(3, 6, 1).to_string(), "O(P_3+5Q_3)");
        assert_eq!(EllipticBundleClass::special(2, 1, -1).to_string(), "O(2Q_2-P_2)");
        assert_eq!(EllipticBundleClass::special(3, 1, -3).to_string(), "O(4Q_3-3P_3)");
        assert_eq!(EllipticBundleClass::special(2, 1, 2).to_string(), "O(2P_2-Q_2)");
        assert_eq!(EllipticBundleClass::special(4, 0, 0).to_string(), "O");
    }

    #[test]
    fn vanishing_pairs() {
        assert_eq!(check_vanishing_pair(6, &vs(&[3, 2, 0]), &vs(&[5, 3, 2])).unwrap(), None);
        assert_eq!(
            check_vanishing_pair(6, &vs(&[6, 4, 3]), &vs(&[3, 2, 0])).unwrap_err(),
            Error::TwoEqualities { first: 0, second: 1 }
        );
        assert_eq!(check_vanishing_pair(2, &vs(&[1, 0]), &vs(&[1, 0])).unwrap(), None);
        assert_eq!(check_vanishing_pair(6, &vs(&[3, 2, 0]), &vs(&[5, 4, 2])).unwrap(), Some(1));
        assert!(matches!(
            check_vanishing_pair(4, &vs(&[3, 2, 0]), &vs(&[5, 3, 2])),
            Err(Error::PairExceedsDegree { t: 0, .. })
        ));
        assert!(check_vanishing_pair(4, &vs(&[1, 0]), &vs(&[2, 1, 0])).is_err());
    }

    #[test]
    fn extension_cases() {
        let u = vs(&[6, 4, 3]);
        assert_eq!(
            component_extension(6, &u, None).unwrap(),
            ComponentExtension::Family { vanish_p: vs(&[3, 2, 0]), vanish_q: vs(&[5, 3, 2]) }
        );
        assert_eq!(
            component_extension(6, &u, Some(1)).unwrap(),
            ComponentExtension::Unique { a: 2, vanish_p: vs(&[3, 2, 0]), vanish_q: vs(&[5, 4, 2]) }
        );
        assert_eq!(component_extension(3, &vs(&[3, 2, 1]), Some(1)).unwrap(), ComponentExtension::NoFamily);
        // u_r = 0 blocks the family and every t0 < r
        assert_eq!(component_extension(3, &vs(&[3, 1, 0]), None).unwrap(), ComponentExtension::NoFamily);
        assert_eq!(component_extension(3, &vs(&[3, 1, 0]), Some(0)).unwrap(), ComponentExtension::NoFamily);
        assert_eq!(component_extension(3, &vs(&[3, 1, 0]), Some(2)).unwrap(), ComponentExtension::NoFamily);
        assert!(matches!(component_extension(3, &vs(&[3, 2, 0]), Some(2)).unwrap(), ComponentExtension::Unique { a: 3, .. }));
        assert!(component_extension(2, &vs(&[3, 1, 0]), None).is_err());
        assert!(component_extension(6, &u, Some(3)).is_err());
    }

    #[test]
    fn vanishing_and_bundles_from_example() {
        let t = example();
        assert_eq!(vanishing_from_tableau(&t, 0).unwrap(), vs(&[6, 5, 4]));
        assert_eq!(vanishing_from_tableau(&t, 1).unwrap(), vs(&[6, 4, 3]));
        assert_eq!(vanishing_from_tableau(&t, 6).unwrap(), vs(&[2, 1, 0]));
        assert_eq!(bundle_from_tableau(&t, 2), EllipticBundleClass::special(2, 6, 2));
        assert_eq!(bundle_from_tableau(&t, 4), EllipticBundleClass::special(4, 6, 5));
    }

    #[test]
    fn free_index_gets_generic_bundle() {
        let p = BNParams::new(5, 4, 1).unwrap();
        let t = Tableau::from_rows(p, &[vec![1, 2], vec![4, 5]]).unwrap();
        let b = bundle_from_tableau(&t, 3);
        assert!(b.is_generic());
        assert_eq!((b.component, b.degree), (3, 4));
    }

    #[test]
    fn smallest_chain() {
        let p = BNParams::new(1, 1, 0).unwrap();
        let t = Tableau::from_rows(p, &[]).unwrap();
        let s = eh_series_from_tableau(&t).unwrap();
        assert!(s.component(1).bundle.is_generic());
        assert_eq!(s.component(1).vanish_p, vs(&[0]));
        assert_eq!(s.component(1).vanish_q, vs(&[0]));
        assert_eq!(check_lls(&s).unwrap(), SeriesCheck { refined: true });
    }

    #[test]
    fn perturbed_series_is_invalid() {
        let s = eh_series_from_tableau(&example()).unwrap();
        assert!(check_lls(&s).unwrap().refined);
        let mut comps = s.components().to_vec();
        comps[1].vanish_q = vs(&[5, 4, 1]);
        let bad = EHSeries::new(s.params(), comps).unwrap();
        assert_eq!(check_lls(&bad).unwrap_err(), Error::NodeInequality { node: 2, t: 2, sum: 5, bound: 6 });
    }

    #[test]
    fn non_refined_series() {
        let s = eh_series_from_tableau(&example()).unwrap();
        let mut comps = s.components().to_vec();
        comps[2].vanish_p = vs(&[5, 2, 1]);
        let crude = EHSeries::new(s.params(), comps).unwrap();
        assert_eq!(check_lls(&crude).unwrap(), SeriesCheck { refined: false });
    }

    #[test]
    fn component_counts() {
        let c: Vec<_> = components_elliptic(BNParams::new(6, 6, 2).unwrap()).collect();
        assert_eq!(c.len(), 5);
        assert!(c.iter().all(|x| x.dimension() == 0));
        let c: Vec<_> = components_elliptic(BNParams::new(5, 4, 1).unwrap()).collect();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|x| x.dimension() == 1));
        assert_eq!(components_elliptic(BNParams::new(5, 3, 1).unwrap()).count(), 0);
    }

    #[test]
    fn intersections() {
        let p = BNParams::new(6, 6, 2).unwrap();
        let other = Tableau::from_rows(p, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(
            component_intersection(&example(), &other).unwrap(),
            Intersection { intersects: false, dimension: None }
        );
        assert_eq!(
            component_intersection(&example(), &example()).unwrap(),
            Intersection { intersects: true, dimension: Some(0) }
        );
        let q = BNParams::new(5, 4, 1).unwrap();
        let t1 = Tableau::from_rows(q, &[vec![1, 2], vec![3, 4]]).unwrap();
        let t2 = Tableau::from_rows(q, &[vec![1, 2], vec![3, 5]]).unwrap();
        assert_eq!(component_intersection(&t1, &t2).unwrap(), Intersection { intersects: true, dimension: Some(0) });
        assert_eq!(component_intersection(&t1, &t1).unwrap(), Intersection { intersects: true, dimension: Some(1) });
        assert!(component_intersection(&t1, &example()).is_err());
    }
}
