use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ultraspec::harness::{
    cmd_converge, cmd_spectrum, cmd_verify, load_config, require_pass, verify_summary, CommandError, OutputFormat,
    RunConfig,
};
use ultraspec::model::ZeroCellConvention;

/// Thread count for the rayon pool; everything else comes from the config file.
const THREADS_ENV: &str = "ULTRASPEC_THREADS";

#[derive(Parser)]
#[command(name = "ultraspec", version, about = "Finite Schrodinger models over local fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// avg-of-power | power-of-avg | point-value
    #[arg(long)]
    convention: Option<ZeroCellConvention>,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize H_n and write eigenvalue / eigenvector tables.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Also write the assembled matrix as text.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Run the structural check suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Track clusters across the configured levels.
    Converge {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<RunConfig, CommandError> {
    let mut cfg = load_config(&common.config)?;
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(f) = common.format {
        cfg.format = f;
    }
    if let Some(c) = common.convention {
        cfg.convention = c;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CommandError> {
    match cli.command {
        Command::Spectrum { common, dump_matrix } => {
            let cfg = load(&common)?;
            let run = cmd_spectrum(&cfg, dump_matrix)?;
            print!("{}", run.summary);
            log::info!("wrote {} files to {}", run.files.len(), cfg.out_dir.display());
        }
        Command::Verify { common } => {
            let cfg = load(&common)?;
            let (outcome, path) = cmd_verify(&cfg)?;
            print!("{}", verify_summary(&outcome));
            log::info!("wrote {}", path.display());
            require_pass(&outcome)?;
        }
        Command::Converge { common } => {
            let cfg = load(&common)?;
            let (_, files, summary) = cmd_converge(&cfg)?;
            print!("{summary}");
            log::info!("wrote {} files to {}", files.len(), cfg.out_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(threads) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("ignoring {THREADS_ENV}: {e}");
        }
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
