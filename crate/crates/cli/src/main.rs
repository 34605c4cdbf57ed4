//! `chainmix`: mixing-time analysis, perturbation sweeps, coupling runs and
//! figure data for finite Markov chains.

mod commands;
mod error;
mod output;
mod source;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use chainmix::perturbation::AlphaRule;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::source::ChainArgs;

#[derive(Debug, Parser)]
#[command(name = "chainmix", version, about = "Mixing, cutoff and perturbation diagnostics for finite Markov chains")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory for output files; created if missing. Without it, the main
    /// table is printed to stdout only.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance profile, mixing times, stationary law and chain properties.
    Analyze(AnalyzeArgs),
    /// Exact error and bounds for one restart (or arbitrary) perturbation.
    Perturb(PerturbArgs),
    /// Perturbation error across a family as n grows.
    Sweep(SweepArgs),
    /// Monte Carlo coupling simulation.
    Couple(CoupleArgs),
    /// Data and SVG panels for the WSR vs CGB comparison figure.
    Figure1(Figure1Args),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub chain: ChainArgs,

    /// Comma-separated list of eps values for the mixing-time table.
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    pub eps: Vec<f64>,

    /// Profile length (default 4n, extended until every requested eps is reached).
    #[arg(long)]
    pub t_max: Option<usize>,

    /// Give up if d(t) has not dropped below the smallest eps by this time.
    #[arg(long, default_value_t = 100_000)]
    pub t_cap: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub chain: ChainArgs,

    /// Restart probability, or the ball radius when --ptilde is given.
    #[arg(long)]
    pub alpha: f64,

    /// Restart law: uniform, pi, point:<state> (1-based) or adversarial.
    #[arg(long, default_value = "adversarial")]
    pub sigma: String,

    /// Use this perturbed chain instead of a restart.
    #[arg(long, conflicts_with = "sigma")]
    pub ptilde: Option<PathBuf>,

    /// The delta of the adversarial restart.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,

    /// The eps in the reported alpha * t_mix(eps).
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,

    #[arg(long, default_value_t = 100_000)]
    pub t_cap: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RestartChoice {
    Adversarial,
    Uniform,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Chain family: wsr, lazy-wsr or cgb.
    #[arg(long)]
    pub family: String,

    /// Comma-separated state counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,

    /// c-over-tmix:<c>, power:<gamma> or const:<a>.
    #[arg(long, default_value = "power:0.5")]
    pub alpha_rule: AlphaRule,

    #[arg(long, value_enum, default_value_t = RestartChoice::Adversarial)]
    pub restart: RestartChoice,

    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,

    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,

    #[arg(long, default_value_t = 100_000)]
    pub t_cap: usize,

    /// Also write sweep.svg (error and bounds against n) into --out.
    #[arg(long)]
    pub svg: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingKind {
    /// The two-copy coupling of the complete graph bijection (even or odd n).
    Cgb,
    /// A chain coupled with its restart perturbation from a common start.
    Restart,
}

#[derive(Debug, Args)]
pub struct CoupleArgs {
    #[arg(long, value_enum, default_value_t = CouplingKind::Cgb)]
    pub coupling: CouplingKind,

    #[command(flatten)]
    pub chain: ChainArgs,

    /// Starting states for the CGB coupling (1-based).
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long)]
    pub j: Option<usize>,

    /// Restart probability and law for the restart coupling.
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value = "uniform")]
    pub sigma: String,

    /// Number of steps.
    #[arg(long)]
    pub t: usize,

    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Directory for the CSV, SVG and metadata files.
    #[arg(long, default_value = "figure1")]
    pub out: PathBuf,

    /// State count for the distance curves.
    #[arg(long, default_value_t = 32)]
    pub n: usize,

    /// Last time step of the distance curves (default 2n).
    #[arg(long)]
    pub t_max: Option<usize>,

    /// State counts for the error panel.
    #[arg(long, value_delimiter = ',', default_value = "8,12,16,24,32,48,64,96,128")]
    pub n_list: Vec<usize>,

    /// eps for the mixing time in alpha = 1 / sqrt(t_mix(eps)).
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,

    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    match cli.command {
        Command::Analyze(a) => commands::analyze::run(&a),
        Command::Perturb(a) => commands::perturb::run(&a),
        Command::Sweep(a) => commands::sweep::run(&a),
        Command::Couple(a) => commands::couple::run(&a),
        Command::Figure1(a) => commands::figure1::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
