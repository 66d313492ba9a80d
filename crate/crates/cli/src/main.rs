//! `hyperrigid` command-line front end.
//!
//! Exit status: 0 on success, 1 on input errors, 2 when a verification fails
//! or a bound cannot be separated even after shrinking.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "hyperrigid", version, about = "Convex-body geometry and rigidity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geometry summary: perimeter, extreme points, centering offset.
    Body {
        #[command(flatten)]
        body: BodyArg,
        /// Boundary samples for the CSV table.
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Angle partition of each interval.
    Partition {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long = "I", value_parser = parse_interval, allow_hyphen_values = true, required = true)]
        i: Vec<(f64, f64)>,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Upper bound on the compression of `χ_J` to `I`.
    Bound {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long = "I", value_parser = parse_interval, allow_hyphen_values = true, required = true)]
        i: Vec<(f64, f64)>,
        #[arg(long = "J", value_parser = parse_interval, allow_hyphen_values = true, required = true)]
        j: Vec<(f64, f64)>,
        #[arg(long, required_unless_present = "target", conflicts_with = "target")]
        eps: Option<f64>,
        /// Solve for ε so that ε·L/c equals this value.
        #[arg(long)]
        target: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Randomized invariant suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Search for a moment-matched POVM that differs from a PVM on an arc.
    Rigidity {
        #[arg(long)]
        body: Option<PathBuf>,
        /// Measure file; its sites form the search grid.
        #[arg(long, required_unless_present = "body")]
        pvm: Option<PathBuf>,
        #[arg(long = "I", value_parser = parse_interval, allow_hyphen_values = true, required = true)]
        i: Vec<(f64, f64)>,
        /// Boundary sites for smooth bodies.
        #[arg(long, default_value_t = 16)]
        sites: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        /// Deviation above which the PVM is reported as not rigid.
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[command(flatten)]
        out: Output,
    },
    /// WOT/SOT metric tables.
    Wotsot {
        #[arg(long, value_enum, default_value_t = Family::Shift)]
        family: Family,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        /// Family length for the shift family.
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct BodyArg {
    #[arg(long = "body")]
    path: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Geometric tolerance; defaults to $HYPERRIGID_TOL, then 1e-9.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Shift,
    Symmetry,
}

/// A number, or a multiple of π such as `pi`, `-pi/4`, `3pi/2`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = |e: &dyn std::fmt::Display| format!("`{s}`: {e}");
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse::<f64>().map_err(|e| bad(&e));
    };
    let coef = match coef.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|e| bad(&e))?,
    };
    let div = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|e| bad(&e))?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad(&"expected `pi/<number>`")),
    };
    Ok(coef * std::f64::consts::PI / div)
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let (a, b) = (parse_angle(a)?, parse_angle(b)?);
    if !(a.is_finite() && b.is_finite()) {
        return Err("interval endpoints must be finite".into());
    }
    Ok((a, b))
}

impl Output {
    fn tolerance(&self) -> anyhow::Result<f64> {
        let tol = match (self.tol, std::env::var("HYPERRIGID_TOL")) {
            (Some(t), _) => t,
            (None, Ok(s)) => s.trim().parse().map_err(|e| anyhow::anyhow!("HYPERRIGID_TOL=`{s}`: {e}"))?,
            (None, Err(_)) => hyperrigid::DEFAULT_TOL,
        };
        anyhow::ensure!(tol.is_finite() && tol > 0.0, "tolerance must be positive, got {tol}");
        Ok(tol)
    }
}

fn run(cli: Cli) -> anyhow::Result<(Outcome, Output)> {
    use commands as c;
    Ok(match cli.command {
        Command::Body { body, samples, out } => (c::body(&body.path, samples, out.tolerance()?)?, out),
        Command::Partition { body, i, eps, out } => (c::partition(&body.path, &i, eps, out.tolerance()?)?, out),
        Command::Bound { body, i, j, eps, target, out } => {
            let eps = match (eps, target) {
                (Some(e), _) => c::Epsilon::Fixed(e),
                (None, Some(t)) => c::Epsilon::Target(t),
                (None, None) => anyhow::bail!("one of --eps or --target is required"),
            };
            (c::bound(&body.path, &i, &j, eps, out.tolerance()?)?, out)
        }
        Command::Verify { suite, seed, out } => (c::verify(&suite, seed)?, out),
        Command::Rigidity { body, pvm, i, sites, seed, restarts, iterations, threshold, out } => {
            let cfg = hyperrigid::operator::SearchConfig { restarts, seed, iterations };
            let args = c::RigidityArgs { body, pvm, intervals: i, sites, cfg, threshold };
            (c::rigidity(&args, out.tolerance()?)?, out)
        }
        Command::Wotsot { family, dim, count, seed, out } => (c::wotsot(family, dim, count, seed)?, out),
    })
}

fn emit(outcome: &Outcome, out: &Output) -> anyhow::Result<()> {
    let text = match out.format {
        Format::Json => report::to_json(&outcome.report.json),
        Format::Csv => outcome.report.to_csv()?,
    };
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (outcome, out) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&outcome, &out) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match &outcome.failure {
        None => ExitCode::SUCCESS,
        Some(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
