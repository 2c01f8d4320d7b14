//! abist: command-line driver for the AB-system scattering toolkit.
//!
//! One JSON config document feeds every subcommand (--config); explicit CLI
//! flags override the matching config fields.  Exit codes: 0 success, 1 for
//! input or validation problems, 2 for numerical failures.  All emitted JSON
//! is canonical (sorted keys, 17-significant-digit floats, complex numbers
//! as [re, im] pairs), so re-reading and re-emitting a document reproduces
//! it byte for byte.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use abist_core::Error;
use config::Config;

#[derive(Parser)]
#[command(
    name = "abist",
    version,
    about = "Scattering, soliton synthesis, PDE evolution and long-time \
             asymptotics for the coupled AB wave system",
    after_help = "Precedence: explicit flags override config fields, which \
                  override built-in defaults.  ABIST_THREADS is the fallback \
                  for --threads."
)]
struct Cli {
    /// JSON config document shared by all subcommands
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (or directory for evolve/asymptote)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Cap for the internal parallel maps (fallback: ABIST_THREADS)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Seed for any randomized test-data generation
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Direct transform: profile -> scattering.json
    Scatter {
        /// Left end of the real k scan
        #[arg(long, allow_negative_numbers = true)]
        kmin: Option<f64>,
        /// Right end of the real k scan
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<f64>,
        /// Number of k samples
        #[arg(long)]
        nk: Option<usize>,
    },
    /// Discrete spectrum of the configured profile -> spectrum.json
    Spectrum,
    /// Reflectionless synthesis: modes file -> field CSV
    Soliton {
        /// JSON file with {"alpha","beta","modes"} (or full scattering data)
        modes: PathBuf,
        /// Evaluation time
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Causal PDE evolution: profile -> snapshot CSVs + meta.json
    Evolve {
        /// Time step (must stay at or below the stability ceiling)
        #[arg(long)]
        dt: Option<f64>,
        /// Final time
        #[arg(long = "t-final")]
        t_final: Option<f64>,
        /// Keep every n-th snapshot
        #[arg(long = "snapshot-every")]
        snapshot_every: Option<usize>,
    },
    /// Long-time field inside a velocity cone -> CSVs + coefficient sidecars
    Asymptote {
        /// Canonical scattering JSON produced by `scatter`
        scattering: PathBuf,
        /// Cone as x1,x2,v1,v2
        #[arg(long, allow_hyphen_values = true)]
        cone: Option<String>,
        /// Single evaluation time
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// Comma-separated evaluation times
        #[arg(long = "t-list", value_delimiter = ',', allow_negative_numbers = true)]
        t_list: Option<Vec<f64>>,
        /// Points per cone slice
        #[arg(long)]
        nx: Option<usize>,
    },
    /// Field-CSV comparison and decay-rate regression -> report.json
    Compare {
        /// Field CSVs, paired: a1 b1 [a2 b2 ...]
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

/// 1 for problems in the inputs, 2 for numerical failures.
fn exit_code(e: &Error) -> u8 {
    use Error::*;
    match e {
        NonDecayingTail { .. } | BadGrid | BadAlpha(_) | BadBeta | EmptyInterval { .. }
        | DegenerateBoundary { .. } | ModeInsideCone { .. } | WrongSignRegime { .. }
        | ZeroSpectralParameter(_) | InterpolationOutOfRange { .. } | OutsideCone { .. }
        | StepTooLarge { .. } | PoleHit { .. } | TooCloseToCut { .. }
        | TooCloseToEndpoint { .. } | Malformed(_) | Io(_) | Json(_) => 1,
        _ => 2,
    }
}

fn thread_cap(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("ABIST_THREADS").ok().and_then(|v| v.parse::<usize>().ok())
    })
}

fn run(cli: Cli) -> abist_core::Result<()> {
    if let Some(n) = thread_cap(cli.threads) {
        if n == 0 {
            return Err(Error::Malformed("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Malformed(format!("thread pool: {e}")))?;
    }
    let cfg = Config::load(cli.config.as_deref())?;
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Scatter { kmin, kmax, nk } => {
            commands::cmd_scatter(&cfg, cli.seed, kmin, kmax, nk, out)
        }
        Cmd::Spectrum => commands::cmd_spectrum(&cfg, cli.seed, out),
        Cmd::Soliton { modes, t } => commands::cmd_soliton(&modes, &cfg, t, out),
        Cmd::Evolve { dt, t_final, snapshot_every } => {
            commands::cmd_evolve(&cfg, cli.seed, dt, t_final, snapshot_every, out)
        }
        Cmd::Asymptote { scattering, cone, t, t_list, nx } => {
            commands::cmd_asymptote(&scattering, &cfg, cone.as_deref(), t, t_list, nx, out)
        }
        Cmd::Compare { files } => commands::cmd_compare(&files, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; anything else is misuse
            let ok = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
