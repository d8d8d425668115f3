//! Command-line front door for the search and verification library.
//!
//! Exit codes: 0 success / claim pass (expected-fail counts as pass),
//! 1 claim fail or inadmissible family, 2 usage or input error,
//! 3 resource limit hit (result is only a bound / unknown).

mod fileformat;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use fileformat::{parse_family, write_family};
use setfam::{
    build_value_table, canonical_form, export_linear_model, find_chain_witness,
    lower_bound_construction, small_ground_family, star_family, verify_base_cases,
    verify_conjecture1, verify_conjecture2, verify_formula, verify_lemma1, verify_n0_33,
    verify_n0_k2, verify_uniqueness, CellStatus, Engine, KFamily, Mode, Report, SearchOptions,
    SearchResult, SearchStatus,
};

#[derive(Parser)]
#[command(
    name = "setfam",
    version,
    about = "Exact optima, extremal classes, and claim suites for chain-free trace families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output encoding: human-readable text or key=value records.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,

    /// Value-cache file; created on first use. Falls back to the
    /// SETFAM_CACHE environment variable when the flag is absent.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Worker threads for the search (1 = bit-reproducible).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Stop searches after this many tree nodes (result becomes a bound).
    #[arg(long, global = true)]
    node_limit: Option<u64>,

    /// Stop searches after this many seconds (result becomes a bound).
    #[arg(long, global = true)]
    time_limit: Option<u64>,

    /// Accepted for interface stability; the search is deterministic and
    /// never consumes randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Records,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    W,
    U,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::W => Mode::W,
            ModeArg::U => Mode::U,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    /// All k-sets through the fixed (k-r+1)-element core.
    Star,
    /// All k-subsets of the first k+r-1 elements.
    SmallGround,
    /// The larger of the two (ties to the star).
    Best,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    /// Closed form against computed optima over an n range.
    Formula,
    /// Rank-one and low-uniformity base cases up to --n-max.
    Base,
    /// Cross-multiplied bound between the two modes at one point.
    Lemma1,
    /// Rank-two threshold behavior around n = 2k.
    N0k2,
    /// The (3,3) threshold cells.
    N033,
    /// Rank >= 3 threshold claim at n = 2k+1.
    Conj1,
    /// Small-ground regime and the flip past n = 2k.
    Conj2,
    /// The star as the only extremal class.
    Uniqueness,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the maximal-mode optimum W(n,k,r).
    W {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// Compute the almost-maximal-mode optimum U(n,k,r).
    U {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// Test a family file for admissibility; prints the offending chain
    /// if there is one.
    Check {
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::W)]
        mode: ModeArg,
        #[arg(long)]
        family: PathBuf,
    },
    /// Compute an optimum and print a witness family achieving it.
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::W)]
        mode: ModeArg,
    },
    /// Enumerate all extremal families up to relabeling.
    Extremal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::W)]
        mode: ModeArg,
    },
    /// Canonical relabeling of a family file, with the certificate.
    Canon {
        #[arg(long)]
        family: PathBuf,
    },
    /// Emit one of the admissible reference constructions.
    Construct {
        #[arg(long, value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// Render the search as a 0/1 linear model for external solvers.
    ExportModel {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::W)]
        mode: ModeArg,
    },
    /// Run one claim suite and report pass/fail/unknown per cell.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        n_from: Option<u32>,
        #[arg(long)]
        n_to: Option<u32>,
        /// Grid bound for the base suite.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Tabulate optima over an n range at fixed k, r.
    Table {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n_from: u32,
        #[arg(long)]
        n_to: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::W)]
        mode: ModeArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Box<dyn std::error::Error>> {
    let opts = SearchOptions {
        threads: cli.threads,
        node_limit: cli.node_limit,
        time_limit: cli.time_limit.map(Duration::from_secs),
        deterministic_witness: matches!(cli.cmd, Cmd::Witness { .. }),
        ..SearchOptions::default()
    };
    let cache_path = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os("SETFAM_CACHE").map(PathBuf::from));
    let mut engine = match &cache_path {
        Some(path) => Engine::with_cache_file(opts, path)?,
        None => Engine::new(opts),
    };
    let format = cli.format;

    let code = match cli.cmd {
        Cmd::W { n, k, r } => value_command(&mut engine, Mode::W, n, k, r, format)?,
        Cmd::U { n, k, r } => value_command(&mut engine, Mode::U, n, k, r, format)?,
        Cmd::Check { r, mode, family } => check_command(r, mode.into(), &family, format)?,
        Cmd::Witness { n, k, r, mode } => {
            witness_command(&mut engine, mode.into(), n, k, r, format)?
        }
        Cmd::Extremal { n, k, r, mode } => {
            extremal_command(&mut engine, mode.into(), n, k, r, format)?
        }
        Cmd::Canon { family } => canon_command(&family, format)?,
        Cmd::Construct { kind, n, k, r } => construct_command(kind, n, k, r, format)?,
        Cmd::ExportModel { n, k, r, mode } => {
            print!("{}", export_linear_model(n, k, r, mode.into())?);
            0
        }
        Cmd::Verify {
            suite,
            n,
            k,
            r,
            n_from,
            n_to,
            n_max,
        } => verify_command(&mut engine, suite, n, k, r, n_from, n_to, n_max, format)?,
        Cmd::Table {
            k,
            r,
            n_from,
            n_to,
            mode,
        } => table_command(&mut engine, mode.into(), k, r, n_from, n_to, format)?,
    };
    engine.persist()?;
    Ok(code)
}

/// Members as `1,2;1,3` (family order); `-` for the empty family.
fn compact(fam: &KFamily) -> String {
    if fam.is_empty() {
        return String::from("-");
    }
    fam.members()
        .iter()
        .map(|m| {
            m.elements()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn result_record(res: &SearchResult) -> String {
    format!(
        "mode={} n={} k={} r={} optimum={} status={} nodes={} elapsed_ms={}",
        res.params.mode,
        res.params.n,
        res.params.k,
        res.params.r,
        res.optimum,
        res.status,
        res.nodes,
        res.elapsed.as_millis()
    )
}

fn value_command(
    engine: &mut Engine,
    mode: Mode,
    n: u32,
    k: u32,
    r: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let res = engine.value(mode, n, k, r)?;
    match format {
        OutFormat::Text => match res.status {
            SearchStatus::Optimal => println!("{}", res.optimum),
            SearchStatus::LowerBoundOnly => println!("UNKNOWN (lower bound {})", res.optimum),
        },
        OutFormat::Records => println!("{}", result_record(&res)),
    }
    Ok(if res.status == SearchStatus::Optimal {
        0
    } else {
        3
    })
}

fn check_command(
    r: u32,
    mode: Mode,
    family: &PathBuf,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let src = std::fs::read_to_string(family)?;
    let fam = parse_family(&src)?;
    let witness = find_chain_witness(&fam, r, mode.chain_mode())?;
    match (&witness, format) {
        (None, OutFormat::Text) => println!("admissible"),
        (None, OutFormat::Records) => println!("admissible=true"),
        (Some(w), OutFormat::Text) => print!("{w}"),
        (Some(w), OutFormat::Records) => {
            let join = |masks: &[setfam::SetMask]| {
                masks
                    .iter()
                    .map(|m| {
                        if m.is_empty() {
                            String::from("e")
                        } else {
                            m.elements()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("|")
            };
            println!(
                "admissible=false mode={} x={} levels={} realizers={}",
                w.mode,
                join(std::slice::from_ref(&w.x)),
                join(&w.levels),
                join(&w.realizers)
            );
        }
    }
    Ok(if witness.is_none() { 0 } else { 1 })
}

fn witness_command(
    engine: &mut Engine,
    mode: Mode,
    n: u32,
    k: u32,
    r: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let res = engine.value(mode, n, k, r)?;
    let exact = res.status == SearchStatus::Optimal;
    match format {
        OutFormat::Text => {
            if !exact {
                println!("# lower bound only, not proven optimal");
            }
            print!("{}", write_family(&res.witness));
        }
        OutFormat::Records => {
            println!(
                "{} witness={}",
                result_record(&res),
                compact(&res.witness)
            );
        }
    }
    Ok(if exact { 0 } else { 3 })
}

fn extremal_command(
    engine: &mut Engine,
    mode: Mode,
    n: u32,
    k: u32,
    r: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let res = engine.enumerate(mode, n, k, r)?;
    let Some(classes) = &res.extremal_classes else {
        match format {
            OutFormat::Text => println!("UNKNOWN (enumeration stopped at a limit)"),
            OutFormat::Records => println!("{} classes=incomplete", result_record(&res)),
        }
        return Ok(3);
    };
    match format {
        OutFormat::Text => {
            println!("optimum {}, classes {}", res.optimum, classes.len());
            for class in classes {
                println!("{}", compact(class));
            }
        }
        OutFormat::Records => {
            println!("{} classes={}", result_record(&res), classes.len());
            for class in classes {
                println!("class={}", compact(class));
            }
        }
    }
    Ok(0)
}

fn canon_command(
    family: &PathBuf,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let src = std::fs::read_to_string(family)?;
    let fam = parse_family(&src)?;
    let canon = canonical_form(&fam)?;
    match format {
        OutFormat::Text => {
            print!("{}", write_family(&canon.family));
            println!("# certificate: {}", canon.certificate);
        }
        OutFormat::Records => {
            println!(
                "n={} k={} members={} certificate={}",
                canon.family.n(),
                canon.family.k(),
                compact(&canon.family),
                canon.certificate.to_string().replace(' ', ",")
            );
        }
    }
    Ok(0)
}

fn construct_command(
    kind: ConstructKind,
    n: u32,
    k: u32,
    r: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let fam = match kind {
        ConstructKind::Star => star_family(n, k, r)?,
        ConstructKind::SmallGround => small_ground_family(n, k, r)?,
        ConstructKind::Best => lower_bound_construction(n, k, r)?,
    };
    match format {
        OutFormat::Text => print!("{}", write_family(&fam)),
        OutFormat::Records => println!(
            "n={n} k={k} r={r} size={} members={}",
            fam.len(),
            compact(&fam)
        ),
    }
    Ok(0)
}

fn report_exit(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| r.status == CellStatus::Fail) {
        1
    } else if reports.iter().any(|r| r.status == CellStatus::Unknown) {
        3
    } else {
        0
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_command(
    engine: &mut Engine,
    suite: SuiteArg,
    n: Option<u32>,
    k: Option<u32>,
    r: Option<u32>,
    n_from: Option<u32>,
    n_to: Option<u32>,
    n_max: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    let need = |flag: &str, v: Option<u32>| {
        v.ok_or_else(|| format!("suite requires --{flag}"))
    };
    let reports: Vec<Report> = match suite {
        SuiteArg::Formula => vec![verify_formula(
            engine,
            need("k", k)?,
            need("r", r)?,
            need("n-from", n_from)?,
            need("n-to", n_to)?,
        )?],
        SuiteArg::Base => verify_base_cases(engine, n_max)?,
        SuiteArg::Lemma1 => vec![verify_lemma1(engine, need("n", n)?, need("k", k)?, need("r", r)?)?],
        SuiteArg::N0k2 => vec![verify_n0_k2(engine, need("k", k)?)?],
        SuiteArg::N033 => vec![verify_n0_33(engine)?],
        SuiteArg::Conj1 => vec![verify_conjecture1(engine, need("k", k)?, need("r", r)?)?],
        SuiteArg::Conj2 => vec![verify_conjecture2(engine, need("k", k)?, need("r", r)?)?],
        SuiteArg::Uniqueness => vec![verify_uniqueness(
            engine,
            need("n", n)?,
            need("k", k)?,
            need("r", r)?,
        )?],
    };
    for report in &reports {
        match format {
            OutFormat::Text => print!("{}", report.render_text()),
            OutFormat::Records => print!("{}", report.render_records()),
        }
    }
    Ok(report_exit(&reports))
}

fn table_command(
    engine: &mut Engine,
    mode: Mode,
    k: u32,
    r: u32,
    n_from: u32,
    n_to: u32,
    format: OutFormat,
) -> Result<u8, Box<dyn std::error::Error>> {
    if n_from > n_to {
        return Err(format!("--n-from {n_from} exceeds --n-to {n_to}").into());
    }
    let triples: Vec<(u32, u32, u32)> = (n_from..=n_to).map(|n| (n, k, r)).collect();
    let table = build_value_table(engine, mode, &triples)?;
    match format {
        OutFormat::Text => print!("{}", table.render_text()),
        OutFormat::Records => print!("{}", table.render_records()),
    }
    Ok(0)
}
