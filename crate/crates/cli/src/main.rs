use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mitfas_core::{Error, ErrorCategory};

mod align;
mod synth;

pub(crate) const EXIT_CONFIG: u8 = 2;
pub(crate) const EXIT_INPUT: u8 = 3;
pub(crate) const EXIT_RUNTIME: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mitfas",
    version,
    about = "Mutual-information temporal alignment and frame sampling for aerial video"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align a frame sequence to a bounding-box seed and sample the most
    /// informative frames.
    Align(align::AlignArgs),
    /// Generate a deterministic synthetic fixture with ground-truth motion.
    Synth(synth::SynthArgs),
}

fn exit_code_for(error: &Error) -> u8 {
    match error.category() {
        ErrorCategory::Config => EXIT_CONFIG,
        ErrorCategory::Input => EXIT_INPUT,
        ErrorCategory::Runtime => EXIT_RUNTIME,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("MITFAS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| format!("MITFAS_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("MITFAS_THREADS must be a positive integer".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot configure {threads} worker threads: {e}"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(EXIT_CONFIG);
    }

    let result = match cli.command {
        Command::Align(args) => align::run(args),
        Command::Synth(args) => synth::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

pub(crate) enum CliError {
    Core(Error),
    Config(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
