//! `ffmean`: batch front-end for the function-field mean-value toolkit.
//!
//! Every command reads a `χ` description (inline stock name or a JSON spec
//! file), dispatches into `ffmean-core`, and emits plot-ready CSV or JSON.
//! Outputs are deterministic: the same configuration and seed produce
//! byte-identical files. Verification commands exit nonzero on the first
//! failing inequality.

use clap::{Parser, Subcommand, ValueEnum};
use ffmean_core::chi_spec::ChiSpec;
use ffmean_core::mult_series::NumberMode;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod commands;
mod output;

use output::OutputMeta;

#[derive(Parser, Serialize)]
#[command(name = "ffmean", version, about = "Mean values of multiplicative functions over F_q[x]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for NumberMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => NumberMode::Exact,
            ModeArg::Float => NumberMode::Float,
        }
    }
}

/// Tolerance overrides shared by the verification commands.
#[derive(Debug, Clone, Copy, clap::Args, Serialize)]
pub(crate) struct TolArgs {
    /// Relative certification gap for circle maxima.
    #[arg(long, default_value_t = ffmean_core::halasz::MAX_REL_TOL)]
    tol_max: f64,
    /// Relative enclosure width for the Halász integral.
    #[arg(long, default_value_t = ffmean_core::halasz::QUAD_REL_TOL)]
    tol_integral: f64,
    /// Absolute slack floor for inequality checks.
    #[arg(long, default_value_t = ffmean_core::halasz::SLACK_TOL)]
    tol_slack: f64,
}

#[derive(Subcommand, Serialize)]
enum Command {
    /// Tabulate the mean values σ(n) of a spec, with the trivial bound.
    Sigma {
        /// `stock:NAME` or a path to a JSON spec file.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 32)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Float)]
        mode: ModeArg,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Verify the Halász-type bound and its corollary on seeded inputs.
    VerifyHalasz {
        /// Number of seeded random χ draws.
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        /// Class bounds cycled over the draws.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        kappa: Vec<f64>,
        /// Degrees cycled over the draws.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64, 128, 256])]
        n: Vec<usize>,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Scan the explicit Lipschitz inequality and the two-term bound.
    LipschitzScan {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64, 128, 256])]
        n: Vec<usize>,
        /// Gap values; integers or the literal `n/2`.
        #[arg(long, value_delimiter = ',', default_values = ["1", "2", "n/2"])]
        ell: Vec<String>,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Certify the series engine against brute-force enumeration.
    OracleCompare {
        /// `stock:all`, `stock:NAME`, or a path to a JSON spec file.
        #[arg(long, default_value = "stock:all")]
        spec: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Tabulate the three evaluation routes for the resonance constants c_m.
    CmTable {
        #[arg(long, default_value_t = 100)]
        max_m: usize,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Smooth-cutoff mean values against the Dickman function.
    SmoothTable {
        /// Smoothness cutoff m.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Largest degree; defaults to 50·m.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Point-mass configurations: σ(n) against the leading asymptotic term.
    Example9 {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of unit-circle point masses.
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 4096)]
        n_max: usize,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Recover generating-function roots from a terminating σ sequence.
    Roots {
        /// Comma-separated real σ values, e.g. `1,-2,1,0,0`.
        #[arg(long, conflicts_with = "sigma_file")]
        sigma: Option<String>,
        /// JSON file holding `[[re, im], ...]`.
        #[arg(long)]
        sigma_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
}

pub(crate) fn resolve_spec(arg: &str) -> Result<ChiSpec, String> {
    if let Some(name) = arg.strip_prefix("stock:") {
        ChiSpec::stock(name).map_err(|e| e.to_string())
    } else {
        let text = std::fs::read_to_string(Path::new(arg))
            .map_err(|e| format!("cannot read spec file {arg}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("bad spec JSON in {arg}: {e}"))
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("FFMEAN_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let meta = OutputMeta::new(&cli.command);
    let outcome = match &cli.command {
        Command::Sigma { spec, n_max, mode, out } => {
            commands::sigma(spec, *n_max, (*mode).into(), out.as_deref(), &meta)
        }
        Command::VerifyHalasz { seeds, kappa, n, out, tol } => {
            commands::verify_halasz(*seeds, kappa, n, out.as_deref(), tol, &meta)
        }
        Command::LipschitzScan { seeds, n, ell, out } => {
            commands::lipschitz_scan(*seeds, n, ell, out.as_deref(), &meta)
        }
        Command::OracleCompare { spec, q, n_max, mode, out } => {
            commands::oracle_compare(spec, *q, *n_max, (*mode).into(), out.as_deref(), &meta)
        }
        Command::CmTable { max_m, out } => commands::cm_table(*max_m, out.as_deref(), &meta),
        Command::SmoothTable { m, n_max, out } => {
            commands::smooth_table(*m, *n_max, out.as_deref(), &meta)
        }
        Command::Example9 { seed, points, n_max, out } => {
            commands::example9(*seed, *points, *n_max, out.as_deref(), &meta)
        }
        Command::Roots { sigma, sigma_file, q, out } => {
            commands::roots(sigma.as_deref(), sigma_file.as_deref(), *q, out.as_deref(), &meta)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("ffmean: {msg}");
            ExitCode::from(1)
        }
    }
}
