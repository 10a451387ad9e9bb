//! The agreement suite run by `bnchain verify`.

use bnchain_core::effective::{effective_to_eh, effective_vanishing_from_tableau, eh_to_effective};
use bnchain_core::elliptic::{check_lls, components_elliptic, eh_series_from_tableau};
use bnchain_core::oracle::{bn_rank, divisor_to_config, is_winnable, subdivide_chain, OracleCaps};
use bnchain_core::tableaux::{enumerate_tableaux, expected_count};
use bnchain_core::tropical::{
    check_genericity, components_tropical, divisor_from_tableau, is_equivalent_to_effective, tropical_rank,
    tropical_vanishing_table, ChainGeometry, ChainPoint, GenericPointSampler, LoopLengths, TropicalDivisor,
};
use bnchain_core::{BNParams, Error, Rational, Tableau, VanishingSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formats::{DivisorFile, EffectiveSeriesFile, EhSeriesFile, GeometryFile, TableauFile};

/// Closed-form orders at `Q_i` for a tableau.
pub type ClosedForm = fn(&Tableau, usize) -> VanishingSequence;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub g_max: usize,
    pub seed: u64,
    /// Random generic geometries per tableau.
    pub geometries: usize,
    /// Largest genus for the chip-firing cross-check.
    pub oracle_g_max: usize,
    /// Random divisors per genus for the winnability cross-check.
    pub oracle_divisors: usize,
    pub caps: OracleCaps,
    /// Replaces one geometry per genus with a non-generic one.
    pub inject_nongeneric: bool,
    pub closed_form: ClosedForm,
}

impl VerifyConfig {
    pub fn new(g_max: usize, seed: u64) -> Self {
        VerifyConfig {
            g_max,
            seed,
            geometries: 3,
            oracle_g_max: 4,
            oracle_divisors: 40,
            caps: OracleCaps::default(),
            inject_nongeneric: false,
            closed_form: effective_vanishing_from_tableau,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Locus {
    pub i: usize,
    pub s: usize,
    pub expected: i64,
    pub found: i64,
    pub table: &'static str,
}

/// Everything needed to replay the first failure of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reproducer {
    pub check: &'static str,
    pub seed: u64,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tableau: Option<TableauFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<DivisorFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus: Option<Locus>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
    pub notices: Vec<String>,
    pub reproducers: Vec<Reproducer>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckLine::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            out.push_str(&format!("{status} {:<22} {:>7} cases {:>5} failures\n", c.name, c.cases, c.failures));
        }
        for n in &self.notices {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Every `(g, d, r)` with `1 <= g <= g_max`, `rho >= 0` and `kbar >= 0`.
/// `kbar = 0` allows any `r`; the sweep stops at `r = g` there.
pub fn parameter_sweep(g_max: usize) -> Vec<BNParams> {
    let mut out = Vec::new();
    for g in 1..=g_max {
        for r in 0..=g {
            for d in 0..=(g + r) as i64 {
                let p = BNParams::new(g, d, r).expect("sweep parameters are valid");
                if p.kbar() >= 0 && p.rho() >= 0 {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Integer or half-integer loop lengths whose ratios pass the genericity
/// test for genus `g`.
pub fn random_generic_geometry(rng: &mut impl Rng, g: usize) -> ChainGeometry {
    let bound = (2 * g as i64 - 2).max(1);
    loop {
        let den = rng.random_range(1..=2);
        let loops = (0..g)
            .map(|_| {
                let l = rng.random_range(bound..=bound + 6);
                let m = rng.random_range(1..=3);
                LoopLengths::new(Rational::new(l, den), Rational::new(m, den))
            })
            .collect();
        let geom = ChainGeometry::new(loops).expect("lengths are positive");
        if check_genericity(&geom).generic {
            return geom;
        }
    }
}

/// Integer lengths with small circumferences, for the oracle.
fn small_generic_geometry(rng: &mut impl Rng, g: usize) -> ChainGeometry {
    let bound = (2 * g as i64 - 2).max(1);
    let pairs: Vec<(i64, i64)> = (0..g).map(|_| (rng.random_range(bound..=bound + 2), 1)).collect();
    ChainGeometry::from_integers(&pairs).expect("lengths are positive")
}

/// Every loop has `l/m = 1/3`, or `1/1` at `g = 2`. At `g = 1` every
/// geometry is generic.
fn nongeneric_geometry(g: usize) -> Option<ChainGeometry> {
    let pair = match g {
        0 | 1 => return None,
        2 => (1, 1),
        _ => (1, 3),
    };
    Some(ChainGeometry::from_integers(&vec![pair; g]).expect("lengths are positive"))
}

struct Tally {
    line: CheckLine,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { line: CheckLine { name, cases: 0, failures: 0 } }
    }

    fn record(&mut self, ok: bool, report: &mut VerifyReport, reproducer: impl FnOnce() -> Reproducer) {
        self.line.cases += 1;
        if !ok {
            self.line.failures += 1;
            if self.line.failures == 1 {
                report.reproducers.push(reproducer());
            }
        }
    }
}

fn first_difference(expected: &[VanishingSequence], found: &[VanishingSequence]) -> Option<(usize, usize, i64, i64)> {
    for (i, (e, f)) in expected.iter().zip(found).enumerate() {
        for s in 0..e.orders().len().min(f.orders().len()) {
            if e.get(s) != f.get(s) {
                return Some((i, s, e.get(s), f.get(s)));
            }
        }
    }
    None
}

fn points_of(d: &TropicalDivisor) -> Vec<ChainPoint> {
    d.iter().map(|(p, _)| *p).collect()
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seed = config.seed;

    let mut counts = Tally::new("counts");
    let mut series = Tally::new("eh-series");
    let mut round_trips = Tally::new("round-trips");
    let mut vanishing = Tally::new("vanishing-agreement");
    let mut ranks = Tally::new("tableau-rank");
    let mut oracle_ranks = Tally::new("oracle-rank");
    let mut winnable = Tally::new("oracle-winnable");
    let mut oracle_skipped = 0;

    for g in 1..=config.g_max {
        let mut geometries: Vec<ChainGeometry> =
            (0..config.geometries).map(|_| random_generic_geometry(&mut rng, g)).collect();
        if let (true, Some(bad)) = (config.inject_nongeneric && !geometries.is_empty(), nongeneric_geometry(g)) {
            let slot = rng.random_range(0..geometries.len());
            geometries[slot] = bad;
        }
        let (geometries, rejected): (Vec<ChainGeometry>, Vec<ChainGeometry>) =
            geometries.into_iter().partition(|geom| check_genericity(geom).generic);
        for geom in &rejected {
            report.notices.push(format!(
                "g={g}: skipped non-generic geometry {} (loops {:?} fail the genericity test)",
                serde_json::to_string(&GeometryFile::from_geometry(geom)).unwrap_or_default(),
                check_genericity(geom).failing_loops
            ));
        }
        let oracle_geom = small_generic_geometry(&mut rng, g);

        for params in parameter_sweep(g).into_iter().filter(|p| p.g == g) {
            let tableaux: Vec<Tableau> = enumerate_tableaux(params).collect();
            let expected = expected_count(params).ok();
            let elliptic = components_elliptic(params).count();
            let tropical = components_tropical(params).count();
            let ok = expected == Some(tableaux.len() as u128) && elliptic == tableaux.len() && tropical == tableaux.len();
            counts.record(ok, &mut report, || Reproducer {
                check: "counts",
                seed,
                message: format!("{params:?}: enumerated {}, expected {expected:?}", tableaux.len()),
                tableau: None,
                geometry: None,
                divisor: None,
                locus: None,
            });

            for t in &tableaux {
                let tf = || Some(TableauFile::from_tableau(t));

                let eh = eh_series_from_tableau(t);
                let refined = eh.as_ref().map_err(Clone::clone).and_then(check_lls).map(|c| c.refined);
                series.record(matches!(refined, Ok(true)), &mut report, || Reproducer {
                    check: "eh-series",
                    seed,
                    message: format!("{refined:?}"),
                    tableau: tf(),
                    geometry: None,
                    divisor: None,
                    locus: None,
                });
                let Ok(eh) = eh else { continue };

                let trip = eh_to_effective(&eh).and_then(|eff| {
                    let back = effective_to_eh(&eff)?;
                    let eh_json = serde_json::to_string(&EhSeriesFile::from_series(&eh)).unwrap();
                    let eh_parsed: EhSeriesFile = serde_json::from_str(&eh_json).unwrap();
                    let eff_json = serde_json::to_string(&EffectiveSeriesFile::from_series(&eff)).unwrap();
                    let eff_parsed: EffectiveSeriesFile = serde_json::from_str(&eff_json).unwrap();
                    Ok(back == eh && eh_parsed.to_series()? == eh && eff_parsed.to_series()? == eff)
                });
                round_trips.record(matches!(trip, Ok(true)), &mut report, || Reproducer {
                    check: "round-trips",
                    seed,
                    message: format!("{trip:?}"),
                    tableau: tf(),
                    geometry: None,
                    divisor: None,
                    locus: None,
                });

                let closed: Vec<VanishingSequence> = (0..=g).map(|i| (config.closed_form)(t, i)).collect();
                let effective: Option<Vec<VanishingSequence>> = eh_to_effective(&eh).ok().map(|eff| {
                    let mut rows = vec![VanishingSequence::consecutive(params.r as i64, params.r).unwrap()];
                    rows.extend(eff.components().iter().map(|c| c.w_q.clone()));
                    rows
                });

                for (gi, geom) in geometries.iter().enumerate() {
                    let mut sampler = GenericPointSampler::new(seed ^ ((g as u64) << 32) ^ gi as u64);
                    let divisor = divisor_from_tableau(t, geom, &mut sampler);
                    let table = divisor.as_ref().map_err(Clone::clone).and_then(|d| tropical_vanishing_table(geom, d, params.r));
                    let (ok, locus, message) = match (&table, &effective) {
                        (Ok(table), Some(eff)) => {
                            let locus = first_difference(&closed, &table.u)
                                .map(|l| (l, "tropical"))
                                .or_else(|| first_difference(&closed, eff).map(|l| (l, "effective")));
                            let message = match locus {
                                Some(((i, s, _, _), which)) => format!("closed form and {which} table differ at i={i}, s={s}"),
                                None => String::new(),
                            };
                            (locus.is_none(), locus.map(|((i, s, expected, found), table)| Locus { i, s, expected, found, table }), message)
                        }
                        (Err(e), _) => (false, None, e.to_string()),
                        (_, None) => (false, None, "no effective series".to_string()),
                    };
                    vanishing.record(ok, &mut report, || Reproducer {
                        check: "vanishing-agreement",
                        seed,
                        message,
                        tableau: tf(),
                        geometry: Some(GeometryFile::from_geometry(geom)),
                        divisor: divisor.as_ref().ok().map(DivisorFile::from_divisor),
                        locus,
                    });

                    if gi == 0 {
                        if let Ok(d) = &divisor {
                            let rank = tropical_rank(geom, d);
                            ranks.record(rank == Ok(params.r as i64), &mut report, || Reproducer {
                                check: "tableau-rank",
                                seed,
                                message: format!("tropical rank {rank:?}, expected {}", params.r),
                                tableau: tf(),
                                geometry: Some(GeometryFile::from_geometry(geom)),
                                divisor: Some(DivisorFile::from_divisor(d)),
                                locus: None,
                            });
                        }
                    }
                }

                if g <= config.oracle_g_max {
                    if params.rho() > 0 {
                        oracle_skipped += 1;
                        continue;
                    }
                    let d = divisor_from_tableau(t, &oracle_geom, &mut GenericPointSampler::new(seed));
                    let outcome = d.and_then(|d| {
                        let gph = subdivide_chain(&oracle_geom, &points_of(&d), config.caps.vertices)?;
                        let config_d = divisor_to_config(&gph, &d)?;
                        let oracle = bn_rank(&gph, &config_d, gph.node(0), config.caps)?;
                        let trop = tropical_rank(&oracle_geom, &d)?;
                        Ok((d, trop, oracle))
                    });
                    match outcome {
                        Err(Error::OracleTooLarge { .. }) => oracle_skipped += 1,
                        outcome => {
                            let ok = matches!(&outcome, Ok((_, trop, oracle)) if trop == oracle && *oracle == params.r as i64);
                            oracle_ranks.record(ok, &mut report, || Reproducer {
                                check: "oracle-rank",
                                seed,
                                message: match &outcome {
                                    Ok((_, trop, oracle)) => format!("tropical rank {trop}, oracle rank {oracle}, r = {}", params.r),
                                    Err(e) => e.to_string(),
                                },
                                tableau: tf(),
                                geometry: Some(GeometryFile::from_geometry(&oracle_geom)),
                                divisor: outcome.as_ref().ok().map(|(d, _, _)| DivisorFile::from_divisor(d)),
                                locus: None,
                            });
                        }
                    }
                }
            }
        }

        if g <= config.oracle_g_max {
            for _ in 0..config.oracle_divisors {
                let geom = small_generic_geometry(&mut rng, g);
                let d = random_divisor(&mut rng, &geom, -6..=6, false);
                let outcome = subdivide_chain(&geom, &points_of(&d), config.caps.vertices).and_then(|gph| {
                    let c = divisor_to_config(&gph, &d)?;
                    Ok((is_equivalent_to_effective(&geom, &d)?, is_winnable(&gph, &c, gph.node(0))))
                });
                match outcome {
                    Err(Error::OracleTooLarge { .. }) => oracle_skipped += 1,
                    outcome => winnable.record(matches!(outcome, Ok((a, b)) if a == b), &mut report, || Reproducer {
                        check: "oracle-winnable",
                        seed,
                        message: format!("tropical vs oracle: {outcome:?}"),
                        tableau: None,
                        geometry: Some(GeometryFile::from_geometry(&geom)),
                        divisor: Some(DivisorFile::from_divisor(&d)),
                        locus: None,
                    }),
                }
            }
        }
    }

    for g in 1..=config.g_max.min(config.oracle_g_max) {
        for _ in 0..config.oracle_divisors / 4 {
            let geom = small_generic_geometry(&mut rng, g);
            let d = random_divisor(&mut rng, &geom, 0..=5, true);
            let outcome = subdivide_chain(&geom, &points_of(&d), config.caps.vertices).and_then(|gph| {
                let c = divisor_to_config(&gph, &d)?;
                Ok((tropical_rank(&geom, &d)?, bn_rank(&gph, &c, gph.node(0), config.caps)?))
            });
            match outcome {
                Err(Error::OracleTooLarge { .. }) => oracle_skipped += 1,
                outcome => oracle_ranks.record(matches!(outcome, Ok((a, b)) if a == b), &mut report, || Reproducer {
                    check: "oracle-rank",
                    seed,
                    message: format!("tropical vs oracle rank: {outcome:?}"),
                    tableau: None,
                    geometry: Some(GeometryFile::from_geometry(&geom)),
                    divisor: Some(DivisorFile::from_divisor(&d)),
                    locus: None,
                }),
            }
        }
    }

    if oracle_skipped > 0 {
        report.notices.push(format!("{oracle_skipped} oracle cases skipped (positive rho or over capacity)"));
    }
    report.checks = vec![counts.line, series.line, round_trips.line, vanishing.line, ranks.line, oracle_ranks.line, winnable.line];
    report
}

/// A divisor with degree in `degrees`, points at nodes and at interior
/// positions of denominator at most 2. With `effective`, every multiplicity
/// is non-negative.
pub fn random_divisor(
    rng: &mut impl Rng,
    geom: &ChainGeometry,
    degrees: std::ops::RangeInclusive<i64>,
    effective: bool,
) -> TropicalDivisor {
    let g = geom.g();
    let target = rng.random_range(degrees);
    let terms = rng.random_range(1..=4);
    let mut d = TropicalDivisor::new();
    for n in 0..terms {
        let p = if rng.random_bool(0.4) {
            ChainPoint::Node(rng.random_range(0..=g))
        } else {
            let k = rng.random_range(1..=g);
            let den = rng.random_range(1..=2);
            let steps = (geom.circumference(k) * den).to_integer().max(1);
            geom.point(k, Rational::new(rng.random_range(0..steps), den)).expect("coordinate is on the loop")
        };
        let remaining = target - d.degree();
        let mult = match (n + 1 == terms, effective) {
            (true, _) => remaining,
            (false, true) => rng.random_range(0..=remaining.max(0)),
            (false, false) => rng.random_range(-3..=3),
        };
        d.add(p, mult);
    }
    d
}
