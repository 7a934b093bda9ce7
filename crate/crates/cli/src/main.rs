//! `tpgabor` — window verification, dual-window synthesis, frame scans,
//! and nonuniform sampling experiments, driven by JSON configs.
//!
//! Exit codes: 0 success, 1 verification disagreement, 2 config error,
//! 3 density violation, 4 numerical failure, 5 admissibility failure.
//! Set `TPGABOR_LOG` (e.g. `info`, `debug`) for progress logging.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use commands::{
    cmd_dual_window, cmd_frame_scan, cmd_sample_reconstruct, cmd_tp_verify, prepare_out_dir,
    CliError, RunMeta,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "tpgabor",
    version,
    about = "Gabor frames with totally positive windows: dual windows and nonuniform sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports and tables.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Output format for bulk data tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// PRNG seed for trials, jitter, and synthetic signals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for grid cells and spectra (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized determinant-sign vs Schoenberg-Whitney agreement trials.
    TpVerify,
    /// Synthesize the compactly supported dual window and verify
    /// biorthogonality.
    DualWindow,
    /// Ron-Shen spectral scan over lattice pairs.
    FrameScan,
    /// Admissibility check and coefficient round-trips from nonuniform
    /// samples.
    SampleReconstruct,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config <path> is required"))?;
    let config_bytes = fs::read(config_path)
        .map_err(|e| CliError::config(format!("read {}: {e}", config_path.display())))?;
    let digest = Sha256::digest(&config_bytes);
    let config_sha256: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let meta = RunMeta {
        config_sha256,
        seed: cli.seed,
    };
    let out = prepare_out_dir(&cli.out)?;
    log::info!(
        "config {} (sha256 {})",
        config_path.display(),
        meta.config_sha256
    );
    match cli.command {
        Command::TpVerify => cmd_tp_verify(&config_bytes, &out, &meta, cli.format),
        Command::DualWindow => cmd_dual_window(&config_bytes, &out, &meta, cli.format),
        Command::FrameScan => cmd_frame_scan(&config_bytes, &out, &meta, cli.format),
        Command::SampleReconstruct => cmd_sample_reconstruct(&config_bytes, &out, &meta, cli.format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TPGABOR_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
