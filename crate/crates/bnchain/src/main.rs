use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bnchain::formats::{
    DivisorFile, EffectiveSeriesFile, EhSeriesFile, GeometryFile, TableauFile, TropTableFile,
};
use bnchain::render;
use bnchain::verify::{self, VerifyConfig};
use bnchain_core::effective::{describe_l1, eh_to_effective, restriction_grid};
use bnchain_core::elliptic::{check_lls, eh_series_from_tableau};
use bnchain_core::oracle::{bn_rank, divisor_to_config, is_winnable, subdivide_chain, OracleCaps};
use bnchain_core::tableaux::{enumerate_tableaux, expected_count};
use bnchain_core::tropical::{
    check_genericity, divisor_from_tableau, tropical_rank, tropical_vanishing_table, ChainGeometry, ChainPoint,
    GenericPointSampler,
};
use bnchain_core::{BNParams, Error};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bnchain", version, about = "Brill-Noether loci on chains of elliptic curves and chains of loops")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Count or list the standard tableaux indexing the components.
    #[command(group(ArgGroup::new("mode").required(true).args(["count", "list"])))]
    Tableaux {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Eisenbud-Harris limit linear series of a tableau.
    Eh {
        #[arg(long)]
        tableau: PathBuf,
        #[command(flatten)]
        params: OptionalParams,
    },
    /// Effective limit linear series, from a tableau or from an EH series file.
    Effective {
        #[arg(long, required_unless_present = "from_eh", conflicts_with = "from_eh")]
        tableau: Option<PathBuf>,
        #[arg(long)]
        from_eh: Option<PathBuf>,
        #[command(flatten)]
        params: OptionalParams,
    },
    /// Divisors on a chain of loops.
    #[command(subcommand)]
    Tropical(TropicalCommand),
    /// Chip-firing on the subdivided chain.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run the agreement suite.
    Verify {
        #[arg(long, default_value_t = 6)]
        g_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        geometries: usize,
        /// Replace one random geometry per genus with a non-generic one.
        #[arg(long)]
        inject_nongeneric: bool,
        /// Also write the reproducers of failing checks to this file.
        #[arg(long)]
        reproducer: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct OptionalParams {
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    r: Option<usize>,
}

impl OptionalParams {
    fn check(&self, params: BNParams) -> Result<(), Failure> {
        let mismatch = self.g.is_some_and(|g| g != params.g)
            || self.d.is_some_and(|d| d != params.d)
            || self.r.is_some_and(|r| r != params.r);
        if mismatch {
            return Err(Failure::validation(format!(
                "flags disagree with the input file (g={}, d={}, r={})",
                params.g, params.d, params.r
            )));
        }
        Ok(())
    }
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long)]
    geometry: PathBuf,
    /// Accept a geometry that fails the genericity test.
    #[arg(long)]
    allow_nongeneric: bool,
}

#[derive(Subcommand)]
enum TropicalCommand {
    /// The divisor attached to a tableau.
    Divisor {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        tableau: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank of a divisor.
    Rank {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Vanishing orders at the nodes with the case used on each loop.
    Table {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    divisor: PathBuf,
    /// Largest allowed N·Σ(l+m); overrides "subdiv_cap" in the divisor file.
    #[arg(long)]
    subdiv_cap: Option<u128>,
}

#[derive(Subcommand)]
enum OracleCommand {
    Rank {
        #[command(flatten)]
        args: OracleArgs,
        #[arg(long, default_value_t = bnchain_core::oracle::DEFAULT_DEGREE_CAP)]
        degree_cap: i64,
        #[arg(long, default_value_t = bnchain_core::oracle::DEFAULT_TEST_CAP)]
        test_cap: u128,
    },
    Winnable {
        #[command(flatten)]
        args: OracleArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleTooLarge { .. } => 2,
            Error::VanishingDisagreement { .. } => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output values serialize");
    s.push('\n');
    s
}

fn load_geometry(args: &GeometryArgs) -> Result<(ChainGeometry, Option<String>), Failure> {
    let geom = read_json::<GeometryFile>(&args.geometry)?.to_geometry()?;
    let report = check_genericity(&geom);
    if report.generic {
        return Ok((geom, None));
    }
    if !args.allow_nongeneric {
        return Err(Failure::validation(format!(
            "geometry is not generic on loops {:?}; pass --allow-nongeneric to continue",
            report.failing_loops
        )));
    }
    Ok((geom, Some(format!("non-generic geometry (loops {:?}) accepted by override", report.failing_loops))))
}

fn with_notice(notice: Option<String>, body: String) -> String {
    match notice {
        Some(n) => format!("# {n}\n{body}"),
        None => body,
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Tableaux { params, list, .. } => {
            let p = BNParams::new(params.g, params.d, params.r)?;
            if list {
                let all: Vec<TableauFile> = enumerate_tableaux(p).map(|t| TableauFile::from_tableau(&t)).collect();
                if json {
                    return Ok(to_json(&all));
                }
                let mut out = String::new();
                for (n, t) in enumerate_tableaux(p).enumerate() {
                    out.push_str(&format!("# {}\n{}", n + 1, render::tableau(&t)));
                }
                return Ok(out);
            }
            let n = enumerate_tableaux(p).count();
            #[derive(Serialize)]
            struct Count {
                g: usize,
                d: i64,
                r: usize,
                count: usize,
                expected: u128,
            }
            let expected = expected_count(p)?;
            if json {
                Ok(to_json(&Count { g: p.g, d: p.d, r: p.r, count: n, expected }))
            } else {
                Ok(format!("{n}\n"))
            }
        }
        Command::Eh { tableau, params } => {
            let t = read_json::<TableauFile>(&tableau)?.to_tableau()?;
            params.check(t.params())?;
            let series = eh_series_from_tableau(&t)?;
            if json {
                Ok(to_json(&EhSeriesFile::from_series(&series)))
            } else {
                Ok(render::eh_series(&series))
            }
        }
        Command::Effective { tableau, from_eh, params } => {
            let (series, t) = match (tableau, from_eh) {
                (Some(path), _) => {
                    let t = read_json::<TableauFile>(&path)?.to_tableau()?;
                    (eh_series_from_tableau(&t)?, Some(t))
                }
                (None, Some(path)) => (read_json::<EhSeriesFile>(&path)?.to_series()?, None),
                (None, None) => unreachable!("clap requires one input"),
            };
            params.check(series.params())?;
            check_lls(&series)?;
            let eff = eh_to_effective(&series)?;
            if json {
                return Ok(to_json(&EffectiveSeriesFile::from_series(&eff)));
            }
            let mut out = render::effective_series(&eff);
            let grid = restriction_grid(&series);
            match t {
                Some(t) => out.push_str(&format!("{}{}", render::l1(&describe_l1(&t)?), render::grid(&grid))),
                None => out.push_str(&render::grid(&grid)),
            }
            Ok(out)
        }
        Command::Tropical(cmd) => match cmd {
            TropicalCommand::Divisor { geometry, tableau, seed } => {
                let (geom, notice) = load_geometry(&geometry)?;
                let t = read_json::<TableauFile>(&tableau)?.to_tableau()?;
                let d = divisor_from_tableau(&t, &geom, &mut GenericPointSampler::new(seed))?;
                if json {
                    Ok(to_json(&DivisorFile::from_divisor(&d)))
                } else {
                    Ok(with_notice(notice, format!("{d}\n{}", render::divisor(&d))))
                }
            }
            TropicalCommand::Rank { geometry, divisor } => {
                let (geom, notice) = load_geometry(&geometry)?;
                let d = read_json::<DivisorFile>(&divisor)?.to_divisor(&geom)?;
                let rank = tropical_rank(&geom, &d)?;
                if json {
                    #[derive(Serialize)]
                    struct Rank {
                        rank: i64,
                    }
                    Ok(to_json(&Rank { rank }))
                } else {
                    Ok(with_notice(notice, format!("{rank}\n")))
                }
            }
            TropicalCommand::Table { geometry, divisor, r } => {
                let (geom, notice) = load_geometry(&geometry)?;
                let d = read_json::<DivisorFile>(&divisor)?.to_divisor(&geom)?;
                let table = tropical_vanishing_table(&geom, &d, r)?;
                if json {
                    Ok(to_json(&TropTableFile::from_table(&table)))
                } else {
                    Ok(with_notice(notice, render::trop_table(&table)))
                }
            }
        },
        Command::Oracle(cmd) => {
            let (args, caps) = match cmd {
                OracleCommand::Rank { args, degree_cap, test_cap } => {
                    (args, Some(OracleCaps { degree: degree_cap, tests: test_cap, ..OracleCaps::default() }))
                }
                OracleCommand::Winnable { args } => (args, None),
            };
            let geom = read_json::<GeometryFile>(&args.geometry)?.to_geometry()?;
            let file = read_json::<DivisorFile>(&args.divisor)?;
            let cap = args.subdiv_cap.or(file.subdiv_cap).unwrap_or(bnchain_core::oracle::DEFAULT_VERTEX_CAP);
            let d = file.to_divisor(&geom)?;
            let points: Vec<ChainPoint> = d.iter().map(|(p, _)| *p).collect();
            let gph = subdivide_chain(&geom, &points, cap)?;
            let config = divisor_to_config(&gph, &d)?;
            #[derive(Serialize)]
            struct OracleOutput {
                vertices: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                rank: Option<i64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                winnable: Option<bool>,
            }
            let out = match caps {
                Some(caps) => OracleOutput {
                    vertices: gph.vertex_count(),
                    rank: Some(bn_rank(&gph, &config, gph.node(0), OracleCaps { vertices: cap, ..caps })?),
                    winnable: None,
                },
                None => OracleOutput {
                    vertices: gph.vertex_count(),
                    rank: None,
                    winnable: Some(is_winnable(&gph, &config, gph.node(0))),
                },
            };
            if json {
                return Ok(to_json(&out));
            }
            Ok(match (out.rank, out.winnable) {
                (Some(rank), _) => format!("{rank}\n"),
                (_, Some(w)) => format!("{w}\n"),
                _ => unreachable!(),
            })
        }
        Command::Verify { g_max, seed, geometries, inject_nongeneric, reproducer } => {
            let mut config = VerifyConfig::new(g_max, seed);
            config.geometries = geometries;
            config.inject_nongeneric = inject_nongeneric;
            let report = verify::run(&config);
            let dump = to_json(&report.reproducers);
            if let Some(path) = reproducer.filter(|_| !report.passed()) {
                fs::write(&path, &dump).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
            }
            let body = if json { to_json(&report) } else { report.render() };
            if report.passed() {
                Ok(body)
            } else {
                print!("{body}");
                Err(Failure { code: 3, message: format!("agreement suite failed; reproducers:\n{dump}") })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
