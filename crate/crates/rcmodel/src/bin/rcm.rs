//! Command-line front end: runs one experiment per invocation from a config
//! file and writes a self-describing CSV, or emits a plot script for an
//! existing results file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rcmodel::config::{ExperimentConfig, ExperimentKind};
use rcmodel::error::Error;
use rcmodel::experiments::run;
use rcmodel::plots::emit_plot_script;

#[derive(Parser)]
#[command(
    name = "rcm",
    about = "Random-cluster model experiments on rectangular sublattices of Z^2",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Override the seed in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the output CSV
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact enumeration summary of a box: log Z and mean open marginal
    ExactCheck(RunArgs),
    /// TV distance between the wired measure's dual and the free dual measure
    DualityCheck(RunArgs),
    /// Crossing probability of the self-dual strip at the self-dual point
    SelfdualCrossing(RunArgs),
    /// Crossing probability of C_h(2n,n) along a p grid
    Threshold(RunArgs),
    /// Connection probabilities against distance with a log-linear fit
    Decay(RunArgs),
    /// Exhaustive check that max-flow equals the minimal closure number
    MengerCheck(RunArgs),
    /// Influence of each edge on the crossing C_h(a,b)
    InfluenceProfile(RunArgs),
    /// Sampled crossing inequalities: combination, gluing, Hamming, translation
    InequalitySuite(RunArgs),
    /// Bisection bracket for the critical point from square crossings
    EstimatePc(RunArgs),
    /// Write a plotting script for an existing results CSV
    EmitPlots {
        /// Results CSV produced by a threshold or decay run
        records: PathBuf,
    },
}

fn expected_kind(command: &Command) -> Option<ExperimentKind> {
    match command {
        Command::ExactCheck(_) => Some(ExperimentKind::ExactCheck),
        Command::DualityCheck(_) => Some(ExperimentKind::DualityCheck),
        Command::SelfdualCrossing(_) => Some(ExperimentKind::SelfdualCrossing),
        Command::Threshold(_) => Some(ExperimentKind::Threshold),
        Command::Decay(_) => Some(ExperimentKind::Decay),
        Command::MengerCheck(_) => Some(ExperimentKind::MengerCheck),
        Command::InfluenceProfile(_) => Some(ExperimentKind::InfluenceProfile),
        Command::InequalitySuite(_) => Some(ExperimentKind::InequalitySuite),
        Command::EstimatePc(_) => Some(ExperimentKind::EstimatePc),
        Command::EmitPlots { .. } => None,
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    let expected = expected_kind(&cli.command);
    let args = match cli.command {
        Command::EmitPlots { records } => {
            let script = emit_plot_script(&records)?;
            println!("{}", script.display());
            return Ok(());
        }
        Command::ExactCheck(a)
        | Command::DualityCheck(a)
        | Command::SelfdualCrossing(a)
        | Command::Threshold(a)
        | Command::Decay(a)
        | Command::MengerCheck(a)
        | Command::InfluenceProfile(a)
        | Command::InequalitySuite(a)
        | Command::EstimatePc(a) => a,
    };
    if let Some(k) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let mut config = ExperimentConfig::load(&args.config)?;
    let expected = expected.expect("every run subcommand maps to a kind");
    if config.kind != expected {
        return Err(Error::Config(format!(
            "config declares experiment {:?} but the subcommand is {:?}",
            config.kind.name(),
            expected.name()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    std::fs::create_dir_all(&args.out)?;
    let (path, records) = run(&config, &args.out)?;
    println!("{} rows -> {}", records.len(), path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
