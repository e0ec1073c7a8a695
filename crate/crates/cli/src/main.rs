use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod config;

use commands::Ctx;
use config::RunConfig;

/// Graded heat-kernel calculus: coefficient recursion, Mehler kernels, leading asymptotics and oracles.
#[derive(Debug, Parser)]
#[command(name = "graded-heat", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and dump files.
    #[arg(long, global = true, env = "GRADED_HEAT_OUT")]
    out: Option<PathBuf>,
    /// Overrides the pass tolerance of the sweep commands.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Worker threads for lattice sweeps (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
enum Command {
    /// Supertrace of every Clifford word for n = 2, 4, 6.
    AlgebraSelftest,
    /// Heat coefficients of an operator file.
    Theta {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Highest coefficient index.
        #[arg(long)]
        j: Option<usize>,
        /// Jet degree bound.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Mehler kernel trace at the origin over the time sweep, with the finite-difference residual ratio.
    MehlerEval {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Top-degree local index density of a curvature file.
    IndexDensity {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Line-bundle leading term against the lattice over the p sweep.
    BkAsymptotics,
    /// Odd-dimensional trace limit against the lattice over the r sweep.
    OddAsymptotics,
    /// Constant-field Mehler kernel against the lattice and the Landau sum.
    OracleLattice,
    /// Acceptance suite: `all` or a single criterion number.
    Verify {
        #[arg(default_value = "all")]
        which: String,
    },
}

impl Command {
    fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "algebra-selftest" => Command::AlgebraSelftest,
            "theta" => Command::Theta { input: None, j: None, d: None },
            "mehler-eval" => Command::MehlerEval { input: None },
            "index-density" => Command::IndexDensity { input: None },
            "bk-asymptotics" => Command::BkAsymptotics,
            "odd-asymptotics" => Command::OddAsymptotics,
            "oracle-lattice" => Command::OracleLattice,
            "verify" | "verify all" => Command::Verify { which: "all".into() },
            other => bail!("unknown command {other:?} in config"),
        })
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let command = match (cli.command, &cfg.command) {
        (Some(c), _) => c,
        (None, Some(name)) => Command::from_name(name)?,
        (None, None) => bail!("no command given"),
    };
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tolerance must be positive");
        }
    }
    let jobs = cli.jobs.unwrap_or(cfg.jobs);
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("cannot start worker pool")?;
    }
    let out = cli.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
    let ctx = Ctx { cfg: &cfg, out: &out, tolerance: cli.tolerance };

    match command {
        Command::AlgebraSelftest => commands::algebra_selftest(&ctx),
        Command::Theta { input, j, d } => commands::theta(&ctx, input.as_ref(), j, d),
        Command::MehlerEval { input } => commands::mehler_eval(&ctx, input.as_ref()),
        Command::IndexDensity { input } => commands::index_density_cmd(&ctx, input.as_ref()),
        Command::BkAsymptotics => commands::bk_asymptotics(&ctx),
        Command::OddAsymptotics => commands::odd_asymptotics(&ctx),
        Command::OracleLattice => commands::oracle_lattice(&ctx),
        Command::Verify { which } => commands::verify_cmd(&ctx, &which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
