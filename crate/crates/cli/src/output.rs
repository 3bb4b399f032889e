//! Serializable reports and their JSON and CSV renderings.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use voterfit::estimate::{FitResult, SearchDomain, SurfacePoint};
use voterfit::forecast::{ForecastReport, PooledSummary};
use voterfit::ObservationSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub trait Report: Serialize {
    fn write_csv<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()>;
}

pub struct Sink<'a> {
    path: Option<&'a Path>,
}

impl<'a> Sink<'a> {
    pub fn new(path: Option<&'a Path>) -> Self {
        Self { path }
    }

    pub fn write<R: Report>(&self, format: Format, report: &R) -> io::Result<()> {
        match self.path {
            Some(path) => {
                let mut file = BufWriter::new(File::create(path)?);
                render(&mut file, format, report)?;
                file.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                render(&mut lock, format, report)?;
                lock.flush()
            }
        }
    }
}

fn render<W: Write, R: Report>(out: &mut W, format: Format, report: &R) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            report.write_csv(&mut writer)?;
            writer.flush()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FitOutput {
    pub command: &'static str,
    pub party: String,
    pub n: u32,
    pub domain: SearchDomain,
    pub points: usize,
    pub s0: u32,
    pub s1: u32,
    pub loglik: f64,
    pub evaluated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<Vec<SurfacePoint>>,
}

impl FitOutput {
    pub fn new(party: &str, series: &ObservationSeries, domain: SearchDomain, fit: &FitResult, surface: bool) -> Self {
        Self {
            command: "fit",
            party: party.to_string(),
            n: series.n(),
            domain,
            points: series.len(),
            s0: fit.best.s0(),
            s1: fit.best.s1(),
            loglik: fit.loglik,
            evaluated: fit.evaluated,
            surface: surface.then(|| fit.surface.clone()),
        }
    }
}

#[derive(Serialize)]
struct FitCsvRow<'a> {
    party: &'a str,
    n: u32,
    domain: SearchDomain,
    points: usize,
    s0: u32,
    s1: u32,
    loglik: f64,
    evaluated: usize,
}

#[derive(Serialize)]
struct SurfaceCsvRow {
    s0: u32,
    s1: u32,
    loglik: Option<f64>,
}

impl Report for FitOutput {
    /// One summary row, or the whole surface when it was requested.
    fn write_csv<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        match &self.surface {
            Some(surface) => {
                for p in surface {
                    out.serialize(SurfaceCsvRow { s0: p.s0, s1: p.s1, loglik: p.loglik.finite() })?;
                }
                Ok(())
            }
            None => out.serialize(FitCsvRow {
                party: &self.party,
                n: self.n,
                domain: self.domain,
                points: self.points,
                s0: self.s0,
                s1: self.s1,
                loglik: self.loglik,
                evaluated: self.evaluated,
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ForecastOutput {
    pub command: &'static str,
    pub party: String,
    pub n: u32,
    pub domain: SearchDomain,
    #[serde(flatten)]
    pub report: ForecastReport,
}

impl ForecastOutput {
    pub fn new(party: &str, n: u32, domain: SearchDomain, report: ForecastReport) -> Self {
        Self { command: "forecast", party: party.to_string(), n, domain, report }
    }
}

impl Report for ForecastOutput {
    /// Columns: time, actual, prediction, baseline, abs_error,
    /// baseline_abs_error, s0_star, s1_star.
    fn write_csv<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for row in &self.report.rows {
            out.serialize(row)?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct SimulateRow {
    pub state: u32,
    pub empirical: f64,
    pub analytic: f64,
}

#[derive(Debug, Serialize)]
pub struct SimulateOutput {
    pub command: &'static str,
    pub n: u32,
    pub s0: u32,
    pub s1: u32,
    pub start: u32,
    pub t: f64,
    pub runs: u64,
    pub seed: u64,
    pub total_variation: f64,
    pub rows: Vec<SimulateRow>,
}

impl Report for SimulateOutput {
    fn write_csv<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for row in &self.rows {
            out.serialize(row)?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct EvaluateRun {
    pub input: String,
    pub party: String,
    pub cutoff: f64,
    pub evaluated: usize,
    pub mae: f64,
    pub baseline_mae: f64,
}

#[derive(Debug, Serialize)]
pub struct EvaluateOutput {
    pub command: &'static str,
    pub n: u32,
    pub domain: SearchDomain,
    pub runs: Vec<EvaluateRun>,
    pub pooled: PooledSummary,
}

#[derive(Serialize)]
struct EvaluateCsvRow<'a> {
    input: &'a str,
    party: &'a str,
    cutoff: Option<f64>,
    evaluated: usize,
    mae: f64,
    baseline_mae: f64,
}

impl Report for EvaluateOutput {
    /// One row per backtest, then a `pooled` row.
    fn write_csv<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for run in &self.runs {
            out.serialize(EvaluateCsvRow {
                input: &run.input,
                party: &run.party,
                cutoff: Some(run.cutoff),
                evaluated: run.evaluated,
                mae: run.mae,
                baseline_mae: run.baseline_mae,
            })?;
        }
        out.serialize(EvaluateCsvRow {
            input: "pooled",
            party: "",
            cutoff: None,
            evaluated: self.runs.iter().map(|r| r.evaluated).sum(),
            mae: self.pooled.mae,
            baseline_mae: self.pooled.baseline_mae,
        })
    }
}
