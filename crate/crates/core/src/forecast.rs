//! Rolling one-step-ahead backtest.
//!
//! Election `i` (1-based, `i >= 3`) is predicted by fitting the stubborn
//! couple on elections `1..i-1` and taking the expected count after
//! `t_i - t_{i-1}` years from `x_{i-1}`. The baseline repeats `x_{i-1}`.

use serde::Serialize;

use crate::chain::{Generator, StubbornConfig};
use crate::error::{Error, Result};
use crate::estimate::{fit_prefixes, fit_stubborn, ObservationSeries, SearchDomain};
use crate::transient::expected_count;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastRow {
    pub time: f64,
    pub actual: u32,
    pub prediction: f64,
    pub baseline: u32,
    pub abs_error: f64,
    pub baseline_abs_error: f64,
    pub s0_star: u32,
    pub s1_star: u32,
}

/// Prediction for an election after the last observed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NextForecast {
    pub time: f64,
    pub prediction: f64,
    pub s0_star: u32,
    pub s1_star: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastReport {
    pub start_time: f64,
    pub rows: Vec<ForecastRow>,
    /// Elections scored, those at or after `start_time`.
    pub evaluated: usize,
    pub mae: f64,
    pub baseline_mae: f64,
    pub next: Option<NextForecast>,
}

impl ForecastReport {
    pub fn scored_rows(&self) -> impl Iterator<Item = &ForecastRow> {
        let start = self.start_time;
        self.rows.iter().filter(move |r| r.time >= start)
    }
}

/// Arithmetic mean of `|prediction - actual|` over the entries whose time is
/// at or after `start_time`.
pub fn mean_absolute_error(predictions: &[f64], actuals: &[f64], times: &[f64], start_time: f64) -> Result<f64> {
    if predictions.len() != actuals.len() || predictions.len() != times.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} predictions, {} actuals, {} times",
            predictions.len(),
            actuals.len(),
            times.len()
        )));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for ((p, a), t) in predictions.iter().zip(actuals).zip(times) {
        if *t >= start_time {
            total += (p - a).abs();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyEvaluation { start_time });
    }
    Ok(total / count as f64)
}

/// Previous-result predictions for elections `2..=m`.
pub fn baseline_forecast(series: &ObservationSeries) -> Result<Vec<u32>> {
    if series.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: series.len() });
    }
    Ok(series.points()[..series.len() - 1].iter().map(|p| p.count).collect())
}

/// Fitted couple for every election from the third on, using only the
/// elections before it.
pub fn stubborn_trace(series: &ObservationSeries, domain: SearchDomain) -> Result<Vec<(f64, StubbornConfig)>> {
    if series.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: series.len() });
    }
    let lengths: Vec<usize> = (2..series.len()).collect();
    let fits = fit_prefixes(series, &lengths, domain)?;
    Ok(lengths.iter().zip(fits).map(|(&i, fit)| (series.points()[i].time, fit.best)).collect())
}

fn predict(config: StubbornConfig, from: u32, elapsed: f64) -> Result<f64> {
    expected_count(&Generator::new(config), from, elapsed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastOptions {
    /// First election time that counts towards the MAE.
    pub start_time: f64,
    /// Time of a further election to forecast from the full series.
    pub target: Option<f64>,
    pub domain: SearchDomain,
}

impl ForecastOptions {
    pub fn from(start_time: f64) -> Self {
        Self { start_time, target: None, domain: SearchDomain::default() }
    }
}

/// Backtest every election from the third on and score those at or after
/// `options.start_time`.
pub fn rolling_forecast(series: &ObservationSeries, options: &ForecastOptions) -> Result<ForecastReport> {
    let ForecastOptions { start_time, target, domain } = *options;
    let trace = stubborn_trace(series, domain)?;
    let points = series.points();
    let rows = trace
        .iter()
        .enumerate()
        .map(|(j, &(time, config))| {
            let (prev, current) = (points[j + 1], points[j + 2]);
            let prediction = predict(config, prev.count, current.time - prev.time)?;
            Ok(ForecastRow {
                time,
                actual: current.count,
                prediction,
                baseline: prev.count,
                abs_error: (prediction - current.count as f64).abs(),
                baseline_abs_error: (prev.count as f64 - current.count as f64).abs(),
                s0_star: config.s0(),
                s1_star: config.s1(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let times: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let actuals: Vec<f64> = rows.iter().map(|r| r.actual as f64).collect();
    let predictions: Vec<f64> = rows.iter().map(|r| r.prediction).collect();
    let baselines: Vec<f64> = rows.iter().map(|r| r.baseline as f64).collect();
    let mae = mean_absolute_error(&predictions, &actuals, &times, start_time)?;
    let baseline_mae = mean_absolute_error(&baselines, &actuals, &times, start_time)?;
    let evaluated = times.iter().filter(|&&t| t >= start_time).count();

    let next = match target {
        None => None,
        Some(time) => {
            let last = points[points.len() - 1];
            if !(time.is_finite() && time > last.time) {
                return Err(Error::InvalidArgument(format!(
                    "forecast target {time} must come after the last election ({})",
                    last.time
                )));
            }
            let fit = fit_stubborn(series, domain)?;
            Some(NextForecast {
                time,
                prediction: predict(fit.best, last.count, time - last.time)?,
                s0_star: fit.best.s0(),
                s1_star: fit.best.s1(),
            })
        }
    };

    Ok(ForecastReport { start_time, rows, evaluated, mae, baseline_mae, next })
}

/// Unweighted mean of per-series MAEs, and the same for the baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PooledSummary {
    pub series: usize,
    pub mae: f64,
    pub baseline_mae: f64,
}

pub fn pooled_summary(reports: &[ForecastReport]) -> Result<PooledSummary> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no reports to pool".into()));
    }
    let k = reports.len() as f64;
    Ok(PooledSummary {
        series: reports.len(),
        mae: reports.iter().map(|r| r.mae).sum::<f64>() / k,
        baseline_mae: reports.iter().map(|r| r.baseline_mae).sum::<f64>() / k,
    })
}
