//! `thermo`: evaluate, sweep and verify information/disturbance quantities
//! of binary measurements on a thermal qubit.

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use thermo_core::disturbance::{disturbance, extremal_disturbance, Bound, Constrained};
use thermo_core::frontier::{efficient_frontier, kappa, max_disturbance_given_info, sample_region};
use thermo_core::oracle::suite::{run_suite, SuiteMode};
use thermo_core::oracle::{GridSizes, OracleConfig};
use thermo_core::povm::{max_info_curve, BoundaryConstraint};
use thermo_core::{
    BinaryPovm, DisturbanceMeasure, Error, ExtremalQuery, ThermalQubit,
};

use output::{Cell, Table};

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Curve {
    FmaxChi,
    FmaxGamma,
    DmaxChi,
    DminGamma,
    DmaxGamma,
    Kappa,
    DmaxInfo,
}

#[derive(Parser, Debug)]
#[command(name = "thermo", version, about)]
struct Cli {
    /// Inverse temperature of the probe.
    #[arg(long, default_value_t = 1.0, global = true)]
    beta: f64,
    /// Energy gap of the probe.
    #[arg(long, default_value_t = 1.0, global = true)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write data here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 7, global = true)]
    seed: u64,
    /// Finite-difference step for the oracles, relative to β.
    #[arg(long, default_value_t = 1e-5, global = true)]
    fd_step: f64,
    /// Points per axis for oracle grid searches.
    #[arg(long, default_value_t = 256, global = true)]
    grid_size: usize,
    /// Outcomes per Monte-Carlo trial.
    #[arg(long, default_value_t = 100_000, global = true)]
    mc_samples: usize,
    #[arg(long, default_value_t = 500, global = true)]
    mc_trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct PovmArgs {
    #[arg(long)]
    w: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fisher information and characterisation of a POVM.
    Info {
        #[command(flatten)]
        povm: PovmArgs,
    },
    /// Disturbance of a POVM.
    Disturb {
        #[arg(long)]
        measure: DisturbanceMeasure,
        #[command(flatten)]
        povm: PovmArgs,
    },
    /// Sweep a boundary curve.
    Curve {
        #[arg(long, value_enum)]
        which: Curve,
        /// Required for the disturbance curves.
        #[arg(long)]
        measure: Option<DisturbanceMeasure>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Sample the trade-off region with random POVMs.
    Region {
        #[arg(long)]
        measure: DisturbanceMeasure,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Efficient frontier over evenly spaced information targets.
    Frontier {
        #[arg(long)]
        measure: DisturbanceMeasure,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Explicit information targets, overriding `--points`.
        #[arg(long, value_delimiter = ',')]
        info: Vec<f64>,
    },
    /// Run the oracle suite.
    Verify {
        #[arg(long)]
        fast: bool,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible { .. } | Error::UnsupportedQuery(_) | Error::EmptyFeasibleSet => EXIT_INFEASIBLE,
        _ => EXIT_INVALID,
    }
}

fn povm(a: &PovmArgs) -> Result<BinaryPovm, Failure> {
    Ok(BinaryPovm::new(a.w, a.lambda, a.theta, a.phi)?)
}

fn chi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

fn gamma_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k + 1) as f64 / n as f64).collect()
}

fn info_grid(n: usize, model: &ThermalQubit) -> Vec<f64> {
    (0..n).map(|k| model.qfi() * (k + 1) as f64 / (n + 1) as f64).collect()
}

fn curve(which: Curve, measure: Option<DisturbanceMeasure>, points: usize, m: &ThermalQubit) -> Result<Table, Failure> {
    if points < 2 {
        return Err(Failure::Usage(format!("--points = {points} must be at least 2")));
    }
    let need_measure = || {
        measure.ok_or_else(|| {
            let name = which.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
            Failure::Usage(format!("--which {name} requires --measure"))
        })
    };
    let extremal = |constrained: Constrained, bound: Bound, xs: Vec<f64>| -> Result<Vec<(f64, Cell)>, Failure> {
        let measure = need_measure()?;
        let rows: Result<Vec<_>, Error> = xs
            .into_par_iter()
            .map(|x| {
                let q = ExtremalQuery {
                    measure,
                    constrained,
                    value: x,
                    bound,
                };
                extremal_disturbance(&q, m).map(|e| (x, e.value.into()))
            })
            .collect();
        Ok(rows?)
    };
    let info_curve = |c: BoundaryConstraint, xs: Vec<f64>| -> Result<Vec<(f64, Cell)>, Failure> {
        let rows: Result<Vec<_>, Error> = xs
            .into_par_iter()
            .map(|x| max_info_curve(c, x, m).map(|(v, _)| (x, v.into())))
            .collect();
        Ok(rows?)
    };
    let rows = match which {
        Curve::FmaxChi => info_curve(BoundaryConstraint::Chi, chi_grid(points))?,
        Curve::FmaxGamma => info_curve(BoundaryConstraint::Gamma, gamma_grid(points))?,
        Curve::DmaxChi => extremal(Constrained::Chi, Bound::Max, chi_grid(points))?,
        Curve::DminGamma => extremal(Constrained::Gamma, Bound::Min, gamma_grid(points))?,
        Curve::DmaxGamma => extremal(Constrained::Gamma, Bound::Max, gamma_grid(points))?,
        Curve::Kappa => {
            let rows: Result<Vec<_>, Error> = chi_grid(points)
                .into_iter()
                .map(|x| kappa(x, m).map(|v| (x, v.into())))
                .collect();
            rows?
        }
        Curve::DmaxInfo => {
            let measure = need_measure()?;
            let rows: Result<Vec<_>, Error> = info_grid(points, m)
                .into_par_iter()
                .map(|x| max_disturbance_given_info(measure, x, m).map(|e| (x, e.value.into())))
                .collect();
            rows?
        }
    };
    let mut t = Table::new(&["x", "value"]);
    for (x, v) in rows {
        t.push(vec![x.into(), v]);
    }
    Ok(t)
}

fn run(cli: &Cli) -> Result<(Table, bool), Failure> {
    let m = ThermalQubit::new(cli.beta, cli.delta)?;
    let cfg = OracleConfig {
        fd_step: cli.fd_step,
        grid_sizes: GridSizes::uniform(cli.grid_size),
        mc_samples: cli.mc_samples,
        mc_trials: cli.mc_trials,
        seed: cli.seed,
    };
    cfg.validate()?;

    let mut all_passed = true;
    let table = match &cli.command {
        Command::Info { povm: a } => {
            let p = povm(a)?;
            let c = p.characterize();
            let mut t = Table::new(&["fisher_information", "qfi", "gamma", "chi", "class"]);
            t.push(vec![
                p.fisher_information(&m).into(),
                m.qfi().into(),
                c.gamma.into(),
                c.chi.into(),
                match c.class.to_string() {
                    s if s.is_empty() => "generic".into(),
                    s => s.into(),
                },
            ]);
            t
        }
        Command::Disturb { measure, povm: a } => {
            let p = povm(a)?;
            let mut t = Table::new(&["measure", "value"]);
            t.push(vec![measure.name().into(), disturbance(*measure, &p, &m).into()]);
            t
        }
        Command::Curve { which, measure, points } => curve(*which, *measure, *points, &m)?,
        Command::Region { measure, n } => {
            let mut t = Table::new(&["info", "disturbance", "w", "lambda", "theta"]);
            for pt in sample_region(*measure, *n, cli.seed, &m)? {
                t.push(vec![
                    pt.info.into(),
                    pt.disturbance.into(),
                    pt.povm.w().into(),
                    pt.povm.lambda().into(),
                    pt.povm.theta().into(),
                ]);
            }
            t
        }
        Command::Frontier { measure, points, info } => {
            let targets = if !info.is_empty() {
                info.clone()
            } else if *points >= 1 {
                info_grid(*points, &m)
            } else {
                return Err(Failure::Usage("--points must be at least 1".into()));
            };
            let solutions: Result<Vec<_>, Error> = targets
                .into_par_iter()
                .map(|info| efficient_frontier(*measure, info, &m))
                .collect();
            let mut t = Table::new(&["info_target", "d_min", "lambda_opt", "w_opt", "converged", "d_min_any_theta"]);
            for s in solutions? {
                t.push(vec![
                    s.info_target.into(),
                    s.d_min.into(),
                    s.lambda_opt.into(),
                    s.w_opt.into(),
                    s.converged.into(),
                    s.unrestricted_d_min.unwrap_or(s.d_min).into(),
                ]);
            }
            t
        }
        Command::Verify { fast } => {
            let mode = if *fast { SuiteMode::Fast } else { SuiteMode::Full };
            let mut t = Table::new(&["check", "status", "detail"]);
            for r in run_suite(mode, &cfg)? {
                all_passed &= r.passed;
                let status = if r.passed { "PASS" } else { "FAIL" };
                eprintln!("{status}  {}: {}", r.name, r.detail);
                t.push(vec![r.name.into(), status.into(), r.detail.into()]);
            }
            t
        }
    };
    Ok((table, all_passed))
}

fn config_record(cli: &Cli) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("beta".into(), json!(cli.beta));
    map.insert("delta".into(), json!(cli.delta));
    map.insert("seed".into(), json!(cli.seed));
    map.insert("fd_step".into(), json!(cli.fd_step));
    map.insert("grid_size".into(), json!(cli.grid_size));
    map.insert("mc_samples".into(), json!(cli.mc_samples));
    map.insert("mc_trials".into(), json!(cli.mc_trials));
    let (name, args) = match &cli.command {
        Command::Info { povm: p } => (
            "info",
            json!({ "w": p.w, "lambda": p.lambda, "theta": p.theta, "phi": p.phi }),
        ),
        Command::Disturb { measure, povm: p } => (
            "disturb",
            json!({ "measure": measure.name(), "w": p.w, "lambda": p.lambda, "theta": p.theta, "phi": p.phi }),
        ),
        Command::Curve { which, measure, points } => (
            "curve",
            json!({
                "which": which.to_possible_value().map(|v| v.get_name().to_owned()),
                "measure": measure.map(|m| m.name()),
                "points": points,
            }),
        ),
        Command::Region { measure, n } => ("region", json!({ "measure": measure.name(), "n": n })),
        Command::Frontier { measure, points, info } => (
            "frontier",
            json!({ "measure": measure.name(), "points": points, "info": info }),
        ),
        Command::Verify { fast } => ("verify", json!({ "fast": fast })),
    };
    map.insert("command".into(), json!(name));
    map.insert("arguments".into(), args);
    map
}

fn emit(cli: &Cli, table: &Table) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => table.write_json(config_record(cli), &mut out)?,
    }
    out.flush()
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("THERMO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("THERMO_THREADS = {raw:?} must be a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INVALID);
    }
    let result = run(&cli).and_then(|(table, passed)| {
        emit(&cli, &table)?;
        if passed {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
