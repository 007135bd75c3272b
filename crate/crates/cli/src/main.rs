mod config;
mod error;
mod export;
mod output;
mod region;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Settings;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "strichartz", version, about = "Exponent regions and Schrödinger estimate checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Directory for report files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized input.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Emit exact rational data alongside decimals where available.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Exit with status 1 when a region query is not a member.
    #[arg(long = "assert", global = true)]
    pub assert_member: bool,
    /// JSON file mirroring these flags; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide membership of a quad or pair in one of the exponent regions.
    Region(region::RegionArgs),
    /// Run a counterexample scaling sweep and fit its log-log slope.
    Sweep(sweep::SweepArgs),
    /// Whitney decomposition exports.
    Whitney {
        #[command(subcommand)]
        action: export::WhitneyAction,
    },
    /// Atomic decomposition demonstrations.
    Atoms {
        #[command(subcommand)]
        action: export::AtomsAction,
    },
    /// Run an invariant suite and report pass/fail per invariant.
    Verify(verify::VerifyArgs),
    /// Write the region boundaries behind one of the exponent-plane figures.
    ExportFigure(export::FigureArgs),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let settings = Settings::resolve(&cli.global)?;
    match cli.command {
        Command::Region(args) => region::run(&args, &settings),
        Command::Sweep(args) => sweep::run(&args, &settings),
        Command::Whitney { action } => export::run_whitney(&action, &settings),
        Command::Atoms { action } => export::run_atoms(&action, &settings),
        Command::Verify(args) => verify::run(&args, &settings),
        Command::ExportFigure(args) => export::run_figure(&args, &settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(error::ASSERTION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
