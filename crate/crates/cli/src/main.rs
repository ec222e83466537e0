//! `psagen <command> --config <file> [--out <path>] [--threads N]`
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 invalid input,
//! 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::output::{destinations, render_csv, render_json, Artifact, Metadata};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<psa_core::Error> for CliError {
    fn from(e: psa_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "psagen", version, about = "Coarse-grained master equation sweeps and positivity reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positivity thresholds of the dipole model over a temperature grid (CSV).
    ThresholdSweep(RunArgs),
    /// Qubit density matrix and determinant from |+> (CSV).
    Evolve(RunArgs),
    /// Eigenvalues of the qubit Choi state (CSV).
    Choi(RunArgs),
    /// Oscillator moments from the ground state (CSV).
    Qho(RunArgs),
    /// Positivity report with critical coarse-graining times (JSON).
    Certify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// output path, overriding [output].path; may contain {label}
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads (default: available parallelism)
    #[arg(long)]
    threads: Option<usize>,
}

type Handler = fn(&RunConfig) -> Result<commands::Outputs, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, args, cmd): (&str, RunArgs, Handler) = match cli.command {
        Command::ThresholdSweep(a) => ("threshold-sweep", a, commands::threshold_sweep),
        Command::Evolve(a) => ("evolve", a, commands::evolve_qubit),
        Command::Choi(a) => ("choi", a, commands::choi),
        Command::Qho(a) => ("qho", a, commands::qho),
        Command::Certify(a) => ("certify", a, commands::certify_cmd),
    };
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let outputs = pool.install(|| cmd(&cfg))?;

    let labels: Vec<String> = outputs.iter().map(|(l, _)| l.clone()).collect();
    let base = args.out.or_else(|| cfg.output.path.clone());
    let dests = destinations(base.as_deref(), &labels)?;
    for ((label, artifact), dest) in outputs.iter().zip(dests) {
        let meta = Metadata {
            command: name,
            label,
            config_text: &text,
        };
        let body = match artifact {
            Artifact::Csv(t) => render_csv(&meta, t),
            Artifact::Json(v) => render_json(&meta, v),
        };
        match dest {
            None => print!("{body}"),
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                }
                std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psagen: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
