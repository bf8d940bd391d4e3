#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::CliError;

/// Spoken-digit spike signatures: synthetic corpus, STDP training,
/// signature export, distance tables and net-input classification.
#[derive(Parser, Debug)]
#[command(name = "spikesig", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML run configuration; missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `seed` from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides `network.epochs`.
    #[arg(long, global = true)]
    epochs: Option<usize>,
    /// Overrides `vp.q`.
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate train, clean-test and noisy-test WAVs with manifests.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Clips per class in each split.
        #[arg(long)]
        per_class: Option<usize>,
        /// SNR of the noisy split, dB.
        #[arg(long)]
        snr: Option<f64>,
        /// Overwrite a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Write the band-energy feature matrix of every clip as CSV.
    Features {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the network; writes weights, scaler, log and config to the run directory.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        run: PathBuf,
    },
    /// Export prototype signatures and, optionally, test-clip signatures.
    Signatures {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: Option<PathBuf>,
        /// Only the first N test clips.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Mean prototype-to-test distance per class pair.
    Distance {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Net-input SVM accuracy and confusion matrices.
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        train: PathBuf,
        /// Test manifests; repeat for several splits.
        #[arg(long, required = true)]
        test: Vec<PathBuf>,
    },
    /// Weight images, training curve, rasters and spectrograms.
    Plot {
        #[arg(long)]
        run: PathBuf,
        /// Also draw spectrograms of the first `count` clips of this manifest.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

impl Command {
    fn run_dir(&self) -> Option<&Path> {
        match self {
            Self::Train { run, .. } | Self::Signatures { run, .. } | Self::Distance { run, .. } | Self::Eval { run, .. } | Self::Plot { run, .. } => {
                Some(run)
            }
            _ => None,
        }
    }
}

/// Explicit `--config` wins; otherwise a run directory's saved config; else defaults.
fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match (&cli.common.config, cli.command.run_dir().map(|d| d.join(commands::CONFIG_FILE))) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(saved)) if saved.is_file() && !matches!(cli.command, Command::Train { .. }) => RunConfig::load(&saved)?,
        _ => RunConfig::default(),
    };
    let c = &cli.common;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(e) = c.epochs {
        cfg.network.epochs = e;
    }
    if let Some(q) = c.q {
        cfg.vp.q = q;
    }
    if let Command::Synth { per_class, snr, .. } = &cli.command {
        if let Some(n) = per_class {
            cfg.corpus.per_class = *n;
        }
        if let Some(s) = snr {
            cfg.corpus.snr_db = *s;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve_config(cli)?;
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    match &cli.command {
        Command::Synth { out, force, .. } => commands::synth(&cfg, out, *force),
        Command::Features { manifest, out } => commands::features(&cfg, manifest, out),
        Command::Train { manifest, run } => commands::train_cmd(&cfg, manifest, run),
        Command::Signatures { run, train, test, count } => commands::signatures_cmd(&cfg, run, train, test.as_deref(), *count),
        Command::Distance { run, train, test, out } => commands::distance_cmd(&cfg, run, train, test, out.as_deref()),
        Command::Eval { run, train, test } => commands::eval_cmd(&cfg, run, train, test),
        Command::Plot { run, manifest, count } => commands::plot_cmd(&cfg, run, manifest.as_deref(), *count),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spikesig: {e}");
            e.exit_code()
        }
    }
}
