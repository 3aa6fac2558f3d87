use std::path::PathBuf;

use clap::{Parser, Subcommand};

use nborient_cli::cache::Cache;
use nborient_cli::commands::{self, read_spec, Command};
use nborient_cli::error::{exit, CliError};
use nborient_cli::options::{Budget, RunOptions};
use nborient_core::Ring;

#[derive(Parser, Debug)]
#[command(name = "nborient", version, about = "Orientability of normal pseudomanifolds and NB-spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// Coefficient ring: Z, Q or Z_p.
    #[arg(long, global = true)]
    ring: Option<Ring>,
    /// Field for duality maps.
    #[arg(long, global = true)]
    field: Option<Ring>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cell budget, or `unlimited`.
    #[arg(long, global = true, default_value_t = Budget::default())]
    budget: Budget,
    #[arg(long, global = true, default_value_t = RunOptions::default().flip_rounds)]
    flip_rounds: usize,
    /// The constant C(n) of the filling-radius bound.
    #[arg(long = "c-n", global = true)]
    c_n: Option<f64>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report cache directory; falls back to NBORIENT_CACHE.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Homology over each ring, and relative to the boundary.
    Homology { spec: String },
    /// Local homology at every vertex.
    LocalProfile { spec: String },
    /// NB-space recognition.
    NbCheck { spec: String },
    /// Orientability conditions over each ring.
    OrientReport { spec: String },
    /// The ramified orientation double cover.
    DoubleCover { spec: String },
    /// Poincaré or Lefschetz duality maps.
    Duality { spec: String },
    /// Quotient by a finite simplicial action.
    Quotient { spec: String },
    /// Hausdorff measure, fundamental-cycle mass and filling bounds.
    Mass { spec: String },
    /// The full battery over a corpus.
    VerifyAll {
        /// `default` or a file holding a JSON array of specs.
        #[arg(long, default_value = "default")]
        corpus: String,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nborient: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let f = cli.flags;
    let mut opts = RunOptions {
        ring: f.ring,
        field: f.field,
        seed: f.seed,
        budget: f.budget,
        flip_rounds: f.flip_rounds,
        constant: f.c_n,
        corpus: None,
    };
    let (cmd, spec) = match cli.command {
        Cmd::Homology { spec } => (Command::Homology, Some(spec)),
        Cmd::LocalProfile { spec } => (Command::LocalProfile, Some(spec)),
        Cmd::NbCheck { spec } => (Command::NbCheck, Some(spec)),
        Cmd::OrientReport { spec } => (Command::OrientReport, Some(spec)),
        Cmd::DoubleCover { spec } => (Command::DoubleCover, Some(spec)),
        Cmd::Duality { spec } => (Command::Duality, Some(spec)),
        Cmd::Quotient { spec } => (Command::Quotient, Some(spec)),
        Cmd::Mass { spec } => (Command::Mass, Some(spec)),
        Cmd::VerifyAll { corpus } => {
            opts.corpus = Some(corpus);
            (Command::VerifyAll, None)
        }
    };
    let spec = spec.as_deref().map(read_spec).transpose()?;
    let cache = Cache::resolve(f.cache_dir.as_deref());
    let report = commands::run(cmd, spec, &opts, cache.as_ref())?;
    if let Some(path) = &f.out {
        std::fs::write(path, report.to_json())?;
    }
    if f.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.human());
    }
    Ok(if report.falsified() { exit::FALSIFIED } else { exit::OK })
}
