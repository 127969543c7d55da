//! `smoothmusic` command line.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::RunConfig;

fn main() -> ExitCode {
    let args = Args::parse();
    let level = match RunConfig::load(&args.config) {
        Ok(c) => c.verbosity.clone(),
        Err(_) => "warn".into(),
    };
    env_logger::Builder::new().parse_filters(&std::env::var("RUST_LOG").unwrap_or(level)).init();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "smoothmusic", version, about = "Spatially smoothed MUSIC and G-MUSIC experiments")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for `<command>.csv`; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides the configuration file.
    #[arg(long, env = "SMOOTHMUSIC_SEED")]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    workers: Option<usize>,
    /// Fail instead of clamping G-MUSIC weights of unseparated eigenvalues.
    #[arg(long, action = clap::ArgAction::Set)]
    strict_separation: Option<bool>,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Traditional and G-MUSIC pseudo-spectra of one realisation.
    Spectrum,
    /// MSE against the CRB over a parameter sweep.
    Montecarlo,
    /// Minimum SNR for subspace separation as a function of L.
    Septable,
    /// Numerical checks of the random matrix results.
    Verify,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Spectrum => "spectrum",
            Cmd::Montecarlo => "montecarlo",
            Cmd::Septable => "septable",
            Cmd::Verify => "verify",
        }
    }
}

fn run(args: Args) -> Result<()> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let workers = args.workers.unwrap_or(cfg.workers);
    let strict = args.strict_separation.unwrap_or(cfg.strict_separation);
    let out_dir = args.out.clone().or_else(|| cfg.out_dir.clone());
    log::info!("{} seed={} workers={workers}", args.command.name(), cfg.seed);

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().context("building thread pool")?;
    let csv = pool.install(|| match args.command {
        Cmd::Spectrum => commands::spectrum(&cfg, strict),
        Cmd::Montecarlo => commands::montecarlo(&cfg, strict),
        Cmd::Septable => commands::septable(&cfg),
        Cmd::Verify => commands::verify(&cfg),
    })?;

    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{}.csv", args.command.name()));
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            log::info!("wrote {}", path.display());
        }
        None => std::io::stdout().lock().write_all(&csv)?,
    }
    Ok(())
}
