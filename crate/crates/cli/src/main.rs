//! Command-line front end for the composition-operator semigroup laboratory.
//!
//! Subcommands: `classify | flow | matrix | halfplane | report-all |
//! list-examples`. Jobs can also be supplied as JSON via `--job job.json`.
//! Reports are JSON (schema 1) written atomically; CSV side files carry
//! boundary profiles, spectra, matrices, and flow trajectories.
//! `SEMIFLOW_LAB_THREADS` caps internal parallelism.

mod job;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use job::{BetaKind, Command, JobSpec, OutputPaths};

#[derive(Parser)]
#[command(
    name = "semiflow-lab",
    version,
    about = "Classify and simulate semigroups of composition operators induced by analytic generators"
)]
struct Cli {
    /// Run a job described by a JSON file instead of subcommand flags.
    #[arg(long, global = true, value_name = "FILE")]
    job: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Clone, Default)]
struct SymbolArgs {
    /// Generator expression in z, e.g. "1 - z^2".
    #[arg(long = "G", value_name = "EXPR", allow_hyphen_values = true)]
    g: Option<String>,
    /// Name of a built-in example (see `list-examples`).
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
}

#[derive(Args, Clone, Default)]
struct CommonOut {
    /// Write the JSON report here (defaults to stdout).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a disc generator: generation, group, sector, compactness.
    Classify {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Boundary profile sample count.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Override the profile radius (default: 1 with near-boundary fallback).
        #[arg(long)]
        radius: Option<f64>,
        /// Sign-test tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Annulus depth parameter δ for the compactness sufficiency test.
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        /// Annulus width parameter ε.
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        /// Write the boundary profile as CSV.
        #[arg(long, value_name = "FILE")]
        profile_csv: Option<PathBuf>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Integrate the semiflow: trajectories, sup-norms, semiflow defects.
    Flow {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Flow times (repeatable).
        #[arg(long = "t", value_name = "T")]
        t: Vec<f64>,
        /// Grid size k for the k×k evaluation grid.
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Write trajectories as CSV.
        #[arg(long, value_name = "FILE")]
        traj_csv: Option<PathBuf>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Truncated operator matrices: spectrum, HS diagnostics, exp(tA) check.
    Matrix {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Static self-map expression (no semigroup), e.g. "z/2".
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        phi: Option<String>,
        /// Weight sequence of the target space.
        #[arg(long, value_enum, default_value = "hardy")]
        beta: BetaArg,
        /// Truncation order N.
        #[arg(long = "N", default_value_t = 64)]
        order: usize,
        /// Flow time for the composition operator (first value used).
        #[arg(long = "t", value_name = "T")]
        t: Vec<f64>,
        /// Override the coefficient sample radius.
        #[arg(long)]
        radius: Option<f64>,
        /// Write singular values as CSV.
        #[arg(long, value_name = "FILE")]
        spectrum_csv: Option<PathBuf>,
        /// Write the dense matrix as CSV (row-major re,im pairs).
        #[arg(long, value_name = "FILE")]
        matrix_csv: Option<PathBuf>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Half-plane analysis: generation condition, angular limit, norms, groups.
    Halfplane {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Times for the norm table.
        #[arg(long = "t", value_name = "T")]
        t: Vec<f64>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Run every applicable pipeline for the symbol.
    ReportAll {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Flow/matrix times.
        #[arg(long = "t", value_name = "T")]
        t: Vec<f64>,
        /// Truncation order for the matrix stage.
        #[arg(long = "N", default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        out: CommonOut,
    },
    /// List the built-in examples.
    ListExamples {
        #[command(flatten)]
        out: CommonOut,
    },
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum BetaArg {
    Hardy,
    Dirichlet,
    Bergman,
}

impl From<BetaArg> for BetaKind {
    fn from(b: BetaArg) -> BetaKind {
        match b {
            BetaArg::Hardy => BetaKind::Hardy,
            BetaArg::Dirichlet => BetaKind::Dirichlet,
            BetaArg::Bergman => BetaKind::Bergman,
        }
    }
}

fn base_spec(command: Command) -> JobSpec {
    JobSpec {
        command,
        g: None,
        example: None,
        phi: None,
        beta: BetaKind::Hardy,
        order: 64,
        t: Vec::new(),
        samples: 4096,
        radius: None,
        tol: 1e-9,
        delta: 0.2,
        eps: 0.3,
        grid: 10,
        outputs: OutputPaths::default(),
    }
}

fn spec_from_cli(cmd: Cmd) -> (JobSpec, Option<PathBuf>) {
    match cmd {
        Cmd::Classify {
            symbol,
            samples,
            radius,
            tol,
            delta,
            eps,
            profile_csv,
            out,
        } => {
            let mut spec = base_spec(Command::Classify);
            spec.g = symbol.g;
            spec.example = symbol.example;
            spec.samples = samples;
            spec.radius = radius;
            spec.tol = tol;
            spec.delta = delta;
            spec.eps = eps;
            spec.outputs.profile_csv = profile_csv;
            (spec, out.out)
        }
        Cmd::Flow {
            symbol,
            t,
            grid,
            traj_csv,
            out,
        } => {
            let mut spec = base_spec(Command::Flow);
            spec.g = symbol.g;
            spec.example = symbol.example;
            spec.t = t;
            spec.grid = grid;
            spec.outputs.traj_csv = traj_csv;
            (spec, out.out)
        }
        Cmd::Matrix {
            symbol,
            phi,
            beta,
            order,
            t,
            radius,
            spectrum_csv,
            matrix_csv,
            out,
        } => {
            let mut spec = base_spec(Command::Matrix);
            spec.g = symbol.g;
            spec.example = symbol.example;
            spec.phi = phi;
            spec.beta = beta.into();
            spec.order = order;
            spec.t = t;
            spec.radius = radius;
            spec.outputs.spectrum_csv = spectrum_csv;
            spec.outputs.matrix_csv = matrix_csv;
            (spec, out.out)
        }
        Cmd::Halfplane { symbol, t, out } => {
            let mut spec = base_spec(Command::Halfplane);
            spec.g = symbol.g;
            spec.example = symbol.example;
            spec.t = t;
            (spec, out.out)
        }
        Cmd::ReportAll {
            symbol,
            t,
            order,
            out,
        } => {
            let mut spec = base_spec(Command::ReportAll);
            spec.g = symbol.g;
            spec.example = symbol.example;
            spec.t = t;
            spec.order = order;
            (spec, out.out)
        }
        Cmd::ListExamples { out } => (base_spec(Command::ListExamples), out.out),
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("SEMIFLOW_LAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run() -> Result<bool> {
    init_thread_pool();
    let cli = Cli::parse();

    let (spec, out_path) = if let Some(path) = &cli.job {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading job file {}", path.display()))?;
        let spec: JobSpec = serde_json::from_str(&text).context("parsing job file")?;
        let out = spec.outputs.report.clone();
        (spec, out)
    } else if let Some(cmd) = cli.command {
        let (mut spec, out) = spec_from_cli(cmd);
        spec.outputs.report = out.clone();
        (spec, out)
    } else {
        bail!("either a subcommand or --job is required; see --help");
    };

    spec.validate().map_err(|e| anyhow::anyhow!(e))?;
    let outcome = job::run(&spec).map_err(|e| anyhow::anyhow!(e))?;
    let json = serde_json::to_string_pretty(&outcome.report)?;
    match out_path {
        Some(path) => report::write_atomic(&path, &json)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(outcome.had_errors)
}

fn main() -> ExitCode {
    match run() {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
