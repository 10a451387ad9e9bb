//! JSON file formats. Rationals are written as `"p/q"` strings.

use bnchain_core::effective::{EffectiveComponent, EffectiveSeries};
use bnchain_core::elliptic::{BundleVariant, EHComponent, EHSeries, EllipticBundleClass, GenericTag};
use bnchain_core::tropical::{ChainGeometry, ChainPoint, LoopLengths, TropVanishingTable, TropicalDivisor};
use bnchain_core::{BNParams, Error, Rational, Result, Tableau, VanishingSequence};
use serde::{Deserialize, Serialize};

pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParams(format!("cannot parse rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn params(g: usize, d: i64, r: usize) -> Result<BNParams> {
    BNParams::new(g, d, r)
}

fn vanishing(orders: &[i64]) -> Result<VanishingSequence> {
    VanishingSequence::new(orders.to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauFile {
    pub g: usize,
    pub d: i64,
    pub r: usize,
    pub rows: Vec<Vec<usize>>,
}

impl TableauFile {
    pub fn from_tableau(t: &Tableau) -> Self {
        let p = t.params();
        TableauFile { g: p.g, d: p.d, r: p.r, rows: t.rows() }
    }

    /// Builds the tableau and checks that the filling is standard.
    pub fn to_tableau(&self) -> Result<Tableau> {
        let t = Tableau::from_rows(params(self.g, self.d, self.r)?, &self.rows)?;
        t.validate().map_err(Error::NotStandard)?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BundleFile {
    Special {
        #[serde(rename = "aP")]
        a_p: i64,
        #[serde(rename = "bQ")]
        b_q: i64,
    },
    Generic {
        generic: String,
    },
}

impl BundleFile {
    pub fn from_bundle(b: &EllipticBundleClass) -> Self {
        match b.variant {
            BundleVariant::Special { a } => BundleFile::Special { a_p: a, b_q: b.degree - a },
            BundleVariant::Generic(tag) => BundleFile::Generic { generic: format!("g{}", tag.raw()) },
        }
    }

    pub fn to_bundle(&self, component: usize, degree: i64) -> Result<EllipticBundleClass> {
        match self {
            BundleFile::Special { a_p, b_q } => {
                if a_p + b_q != degree {
                    return Err(Error::InconsistentSeries(format!(
                        "component {component}: bundle of degree {} where {degree} is expected",
                        a_p + b_q
                    )));
                }
                Ok(EllipticBundleClass::special(component, degree, *a_p))
            }
            BundleFile::Generic { generic } => {
                let raw = generic
                    .strip_prefix('g')
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidParams(format!("generic bundle tag {generic:?} is not g<n>")))?;
                Ok(EllipticBundleClass { component, degree, variant: BundleVariant::Generic(GenericTag::from_raw(raw)) })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhComponentFile {
    pub bundle: BundleFile,
    #[serde(rename = "vanish_P")]
    pub vanish_p: Vec<i64>,
    #[serde(rename = "vanish_Q")]
    pub vanish_q: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhSeriesFile {
    pub g: usize,
    pub d: i64,
    pub r: usize,
    pub components: Vec<EhComponentFile>,
}

impl EhSeriesFile {
    pub fn from_series(s: &EHSeries) -> Self {
        let p = s.params();
        let components = s
            .components()
            .iter()
            .map(|c| EhComponentFile {
                bundle: BundleFile::from_bundle(&c.bundle),
                vanish_p: c.vanish_p.orders().to_vec(),
                vanish_q: c.vanish_q.orders().to_vec(),
            })
            .collect();
        EhSeriesFile { g: p.g, d: p.d, r: p.r, components }
    }

    pub fn to_series(&self) -> Result<EHSeries> {
        let p = params(self.g, self.d, self.r)?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                Ok(EHComponent {
                    bundle: c.bundle.to_bundle(idx + 1, p.d)?,
                    vanish_p: vanishing(&c.vanish_p)?,
                    vanish_q: vanishing(&c.vanish_q)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EHSeries::new(p, components)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveComponentFile {
    pub degree: i64,
    pub bundle: BundleFile,
    #[serde(rename = "vanish_P")]
    pub vanish_p: Vec<i64>,
    #[serde(rename = "vanish_Q")]
    pub vanish_q: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveSeriesFile {
    pub g: usize,
    pub d: i64,
    pub r: usize,
    pub components: Vec<EffectiveComponentFile>,
    pub a: Vec<i64>,
}

impl EffectiveSeriesFile {
    pub fn from_series(s: &EffectiveSeries) -> Self {
        let p = s.params();
        let components = s
            .components()
            .iter()
            .map(|c| EffectiveComponentFile {
                degree: c.degree(),
                bundle: BundleFile::from_bundle(&c.bundle),
                vanish_p: c.w_p.orders().to_vec(),
                vanish_q: c.w_q.orders().to_vec(),
            })
            .collect();
        EffectiveSeriesFile { g: p.g, d: p.d, r: p.r, components, a: s.node_twists().to_vec() }
    }

    pub fn to_series(&self) -> Result<EffectiveSeries> {
        let p = params(self.g, self.d, self.r)?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                Ok(EffectiveComponent {
                    bundle: c.bundle.to_bundle(idx + 1, c.degree)?,
                    w_p: vanishing(&c.vanish_p)?,
                    w_q: vanishing(&c.vanish_q)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EffectiveSeries::new(p, components, self.a.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopFile {
    pub l: String,
    pub m: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryFile {
    pub g: usize,
    pub loops: Vec<LoopFile>,
}

impl GeometryFile {
    pub fn from_geometry(geom: &ChainGeometry) -> Self {
        let loops = geom
            .loops()
            .iter()
            .map(|lp| LoopFile { l: rational_to_string(&lp.l), m: rational_to_string(&lp.m) })
            .collect();
        GeometryFile { g: geom.g(), loops }
    }

    pub fn to_geometry(&self) -> Result<ChainGeometry> {
        if self.loops.len() != self.g {
            return Err(Error::InvalidParams(format!("geometry lists {} loops for g = {}", self.loops.len(), self.g)));
        }
        let loops = self
            .loops
            .iter()
            .map(|lp| Ok(LoopLengths::new(parse_rational(&lp.l)?, parse_rational(&lp.m)?)))
            .collect::<Result<Vec<_>>>()?;
        ChainGeometry::new(loops)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointFile {
    Node {
        node: usize,
        mult: i64,
    },
    Interior {
        #[serde(rename = "loop")]
        loop_index: usize,
        coord: String,
        mult: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorFile {
    pub points: Vec<PointFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdiv_cap: Option<u128>,
}

impl DivisorFile {
    pub fn from_divisor(d: &TropicalDivisor) -> Self {
        let points = d
            .iter()
            .map(|(p, mult)| match *p {
                ChainPoint::Node(node) => PointFile::Node { node, mult },
                ChainPoint::Interior { loop_index, coord } => {
                    PointFile::Interior { loop_index, coord: rational_to_string(&coord), mult }
                }
            })
            .collect();
        DivisorFile { points, subdiv_cap: None }
    }

    /// Canonicalizes every point on `geom`, so a coordinate of 0 or `l_k`
    /// becomes the corresponding node.
    pub fn to_divisor(&self, geom: &ChainGeometry) -> Result<TropicalDivisor> {
        let mut d = TropicalDivisor::new();
        for p in &self.points {
            match p {
                PointFile::Node { node, mult } => {
                    let point = ChainPoint::Node(*node);
                    geom.check_point(&point)?;
                    d.add(point, *mult);
                }
                PointFile::Interior { loop_index, coord, mult } => {
                    d.add(geom.point(*loop_index, parse_rational(coord)?)?, *mult);
                }
            }
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropTableFile {
    pub u: Vec<Vec<i64>>,
    pub epsilon: Vec<u8>,
    pub x: Vec<Option<PointFile>>,
    pub cases: Vec<String>,
}

impl TropTableFile {
    pub fn from_table(table: &TropVanishingTable) -> Self {
        let x = table
            .reduced
            .points
            .iter()
            .map(|p| p.map(|p| DivisorFile::from_divisor(&TropicalDivisor::from_points([(p, 1)])).points.remove(0)))
            .collect();
        TropTableFile {
            u: table.u.iter().map(|u| u.orders().to_vec()).collect(),
            epsilon: table.reduced.points.iter().map(|p| u8::from(p.is_some())).collect(),
            x,
            cases: table.cases.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("13/1").unwrap(), Rational::from_integer(13));
        assert_eq!(parse_rational("4/6").unwrap(), Rational::new(2, 3));
        assert_eq!(parse_rational("-5").unwrap(), Rational::from_integer(-5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_to_string(&Rational::new(4, 6)), "2/3");
        assert_eq!(rational_to_string(&Rational::from_integer(13)), "13/1");
    }

    #[test]
    fn bundle_shapes() {
        let json = serde_json::to_string(&BundleFile::Special { a_p: 2, b_q: 4 }).unwrap();
        assert_eq!(json, r#"{"aP":2,"bQ":4}"#);
        let g: BundleFile = serde_json::from_str(r#"{"generic":"g12"}"#).unwrap();
        assert!(g.to_bundle(3, 6).unwrap().is_generic());
        assert!(BundleFile::Special { a_p: 2, b_q: 3 }.to_bundle(1, 6).is_err());
        assert!(BundleFile::Generic { generic: "h1".into() }.to_bundle(1, 6).is_err());
    }

    #[test]
    fn points_parse_both_shapes() {
        let d: DivisorFile =
            serde_json::from_str(r#"{"points":[{"node":0,"mult":2},{"loop":1,"coord":"11/1","mult":1}],"subdiv_cap":500}"#)
                .unwrap();
        assert_eq!(d.subdiv_cap, Some(500));
        let geom = ChainGeometry::from_integers(&[(13, 1)]).unwrap();
        let div = d.to_divisor(&geom).unwrap();
        assert_eq!(div.degree(), 3);
        let node_coord: DivisorFile = serde_json::from_str(r#"{"points":[{"loop":1,"coord":"13","mult":1}]}"#).unwrap();
        assert_eq!(node_coord.to_divisor(&geom).unwrap().mult(&ChainPoint::Node(1)), 1);
    }

    #[test]
    fn unstandard_tableau_rejected() {
        let f = TableauFile { g: 6, d: 6, r: 2, rows: vec![vec![2, 1, 4], vec![3, 5, 6]] };
        assert!(matches!(f.to_tableau(), Err(Error::NotStandard(_))));
    }
}
