//! `voterfit` command-line frontend.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input, 3 no feasible
//! stubborn couple, 4 empty evaluation window.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voterfit::chain::{Generator, StubbornConfig};
use voterfit::estimate::{fit_stubborn, SearchDomain};
use voterfit::forecast::{pooled_summary, rolling_forecast, ForecastOptions};
use voterfit::ingest::{binarize, load_elections};
use voterfit::simulate::empirical_distribution;
use voterfit::transient::transition_row;
use voterfit::{Error, ObservationSeries};

use crate::output::{
    EvaluateOutput, EvaluateRun, FitOutput, ForecastOutput, Format, SimulateOutput, SimulateRow, Sink,
};

/// Environment variable overriding the number of worker threads.
const THREADS_ENV: &str = "VOTERFIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "voterfit", version, about = "Fit and backtest the voter model with stubborn nodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximum-likelihood stubborn couple for one party's series.
    Fit(FitArgs),
    /// Rolling one-step-ahead backtest against the previous-result baseline.
    Forecast(ForecastArgs),
    /// Monte Carlo state frequencies next to the exact transient law.
    Simulate(SimulateArgs),
    /// Pooled MAE over several party backtests.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Domain {
    /// s0 >= 1 and s1 >= 1
    BothSides,
    /// every couple with 0 < s0 + s1 <= n
    Admissible,
}

impl From<Domain> for SearchDomain {
    fn from(d: Domain) -> Self {
        match d {
            Domain::BothSides => SearchDomain::BothSides,
            Domain::Admissible => SearchDomain::Admissible,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Election CSV; repeat to append later elections from further files.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    party: String,
    /// Population size used to turn shares into counts.
    #[arg(long, default_value_t = 100)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Domain::BothSides)]
    domain: Domain,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Include the log-likelihood of every evaluated couple.
    #[arg(long)]
    surface: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Elections at or after this time are scored.
    #[arg(long)]
    cutoff: f64,
    /// Also forecast an election at this time from the whole series.
    #[arg(long)]
    target: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 100)]
    n: u32,
    #[arg(long)]
    s0: u32,
    #[arg(long)]
    s1: u32,
    /// Initial number of opinion-1 holders.
    #[arg(long)]
    start: u32,
    /// Time horizon.
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 10_000)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Backtest as FILE:PARTY:CUTOFF; repeat for each series to pool.
    #[arg(long = "run", required = true, value_parser = parse_run)]
    runs: Vec<BacktestRun>,
    #[arg(long, default_value_t = 100)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Domain::BothSides)]
    domain: Domain,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone)]
struct BacktestRun {
    input: PathBuf,
    party: String,
    cutoff: f64,
}

fn parse_run(s: &str) -> Result<BacktestRun, String> {
    let mut parts = s.rsplitn(3, ':');
    let (Some(cutoff), Some(party), Some(input)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("`{s}` is not FILE:PARTY:CUTOFF"));
    };
    let cutoff = cutoff.parse::<f64>().map_err(|e| format!("cutoff `{cutoff}`: {e}"))?;
    if input.is_empty() || party.is_empty() {
        return Err(format!("`{s}` is not FILE:PARTY:CUTOFF"));
    }
    Ok(BacktestRun { input: input.into(), party: party.to_string(), cutoff })
}

#[derive(Debug)]
enum Failure {
    Model(Error),
    Usage(String),
    Output(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Model(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Model(Error::NoFeasibleModel) => 3,
            Self::Model(Error::EmptyEvaluation { .. }) => 4,
            Self::Model(Error::Numerical(_)) | Self::Output(_) => 1,
            Self::Model(_) | Self::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Model(e) => write!(f, "{e}"),
            Self::Usage(m) => f.write_str(m),
            Self::Output(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

fn load_series(inputs: &[PathBuf], party: &str, n: u32) -> Result<ObservationSeries, Failure> {
    let mut records = Vec::new();
    for path in inputs {
        records.extend(load_elections(path)?);
    }
    Ok(binarize(&records, party, n)?)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start {threads} worker threads: {e}")))
}

fn cmd_fit(args: FitArgs) -> Result<(), Failure> {
    let series = load_series(&args.series.input, &args.series.party, args.series.n)?;
    let domain = args.series.domain.into();
    let fit = fit_stubborn(&series, domain)?;
    let report = FitOutput::new(&args.series.party, &series, domain, &fit, args.surface);
    eprintln!(
        "{}: (s0, s1) = ({}, {}), log-likelihood {:.6}, {} couples",
        args.series.party,
        fit.best.s0(),
        fit.best.s1(),
        fit.loglik,
        fit.evaluated
    );
    Sink::new(args.out.output.as_deref()).write(args.out.format, &report).map_err(Failure::Output)
}

fn cmd_forecast(args: ForecastArgs) -> Result<(), Failure> {
    let series = load_series(&args.series.input, &args.series.party, args.series.n)?;
    let options = ForecastOptions { start_time: args.cutoff, target: args.target, domain: args.series.domain.into() };
    let report = rolling_forecast(&series, &options)?;
    eprintln!(
        "{}: MAE {:.2}, baseline MAE {:.2} over {} elections",
        args.series.party, report.mae, report.baseline_mae, report.evaluated
    );
    let out = ForecastOutput::new(&args.series.party, series.n(), options.domain, report);
    Sink::new(args.out.output.as_deref()).write(args.out.format, &out).map_err(Failure::Output)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = StubbornConfig::new(args.n, args.s0, args.s1)?;
    let empirical = empirical_distribution(&config, args.start, args.t, args.runs, args.seed)?;
    let analytic = transition_row(&Generator::new(config), args.start, args.t)?;
    let rows = config
        .states()
        .map(|k| SimulateRow { state: k, empirical: empirical.prob(k), analytic: analytic.prob(k) })
        .collect();
    let out = SimulateOutput {
        command: "simulate",
        n: args.n,
        s0: args.s0,
        s1: args.s1,
        start: args.start,
        t: args.t,
        runs: args.runs,
        seed: args.seed,
        total_variation: empirical.total_variation(&analytic),
        rows,
    };
    Sink::new(args.out.output.as_deref()).write(args.out.format, &out).map_err(Failure::Output)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let domain: SearchDomain = args.domain.into();
    let mut reports = Vec::new();
    let mut runs = Vec::new();
    for job in &args.runs {
        let series = load_series(std::slice::from_ref(&job.input), &job.party, args.n)?;
        let report = rolling_forecast(&series, &ForecastOptions { domain, ..ForecastOptions::from(job.cutoff) })?;
        runs.push(EvaluateRun {
            input: job.input.display().to_string(),
            party: job.party.clone(),
            cutoff: job.cutoff,
            evaluated: report.evaluated,
            mae: report.mae,
            baseline_mae: report.baseline_mae,
        });
        reports.push(report);
    }
    let pooled = pooled_summary(&reports)?;
    eprintln!("pooled over {} series: MAE {:.2}, baseline MAE {:.2}", pooled.series, pooled.mae, pooled.baseline_mae);
    let out = EvaluateOutput { command: "evaluate", n: args.n, domain, runs, pooled };
    Sink::new(args.out.output.as_deref()).write(args.out.format, &out).map_err(Failure::Output)
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Forecast(args) => cmd_forecast(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
