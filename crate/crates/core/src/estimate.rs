//! Maximum-likelihood estimation of the stubborn couple from a series of
//! election results.
//!
//! Consecutive results are treated as observations of one path of `N1`, so
//! the log-likelihood of `(s0, s1)` is the sum of `log p(x_j -> x_{j+1}, t_{j+1} - t_j)`.
//! The couple space is small enough to score exhaustively.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::chain::{Generator, StubbornConfig};
use crate::error::{Error, Result};
use crate::transient::Propagator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    /// Years, possibly fractional.
    pub time: f64,
    /// Opinion-1 holders on the `0..=n` scale.
    pub count: u32,
}

/// Time-stamped counts for one party on a `0..=n` scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSeries {
    n: u32,
    points: Vec<Observation>,
}

impl ObservationSeries {
    pub fn new(n: u32, points: Vec<Observation>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegeneratePopulation(n));
        }
        if points.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        for p in &points {
            if !p.time.is_finite() {
                return Err(Error::InvalidSeries(format!("non-finite time {}", p.time)));
            }
            if p.count > n {
                return Err(Error::InvalidSeries(format!("count {} at {} exceeds n = {n}", p.count, p.time)));
            }
        }
        if let Some(w) = points.windows(2).find(|w| w[1].time <= w[0].time) {
            return Err(Error::InvalidSeries(format!(
                "times must be strictly increasing, {} follows {}",
                w[1].time, w[0].time
            )));
        }
        Ok(Self { n, points })
    }

    /// Convenience constructor from `(time, count)` pairs.
    pub fn from_pairs(n: u32, pairs: &[(f64, u32)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(time, count)| Observation { time, count }).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> &[Observation] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The first `len` observations.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        Self::new(self.n, self.points[..len.min(self.points.len())].to_vec())
    }

    pub fn min_count(&self) -> u32 {
        self.points.iter().map(|p| p.count).min().unwrap_or(0)
    }

    pub fn max_count(&self) -> u32 {
        self.points.iter().map(|p| p.count).max().unwrap_or(0)
    }
}

/// A log-likelihood, or the explicit marker for probability zero.
///
/// `Impossible` orders below every finite value and never enters arithmetic.
#[derive(Debug, Clone, Copy)]
pub enum LogLikelihood {
    Impossible,
    Finite(f64),
}

impl LogLikelihood {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Impossible => None,
        }
    }

    pub fn is_impossible(self) -> bool {
        matches!(self, Self::Impossible)
    }
}

impl Ord for LogLikelihood {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Impossible, Self::Impossible) => Ordering::Equal,
            (Self::Impossible, Self::Finite(_)) => Ordering::Less,
            (Self::Finite(_), Self::Impossible) => Ordering::Greater,
            (Self::Finite(a), Self::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl PartialOrd for LogLikelihood {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for LogLikelihood {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogLikelihood {}

impl Serialize for LogLikelihood {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => serializer.serialize_f64(*v),
            Self::Impossible => serializer.serialize_none(),
        }
    }
}

fn require_two(series: &ObservationSeries) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: series.len() });
    }
    Ok(())
}

/// Log transition probabilities of the consecutive pairs of `series`, up to
/// the first one that is impossible under `config`.
fn transition_terms(config: &StubbornConfig, series: &ObservationSeries) -> Result<Vec<f64>> {
    let points = series.points();
    let mut terms = Vec::with_capacity(points.len().saturating_sub(1));
    if !config.contains(points[0].count) {
        return Ok(terms);
    }
    let propagator = Propagator::new(&Generator::new(*config));
    for pair in points.windows(2) {
        if !config.contains(pair[1].count) {
            break;
        }
        let p = propagator.probability(pair[0].count, pair[1].count, pair[1].time - pair[0].time)?;
        if p <= 0.0 {
            break;
        }
        terms.push(p.ln());
    }
    Ok(terms)
}

/// Log-likelihood of the first `len` points given their transition terms.
fn prefix_score(terms: &[f64], len: usize) -> LogLikelihood {
    if terms.len() + 1 < len {
        return LogLikelihood::Impossible;
    }
    let mut total = 0.0;
    for t in &terms[..len - 1] {
        total += t;
    }
    LogLikelihood::Finite(total)
}

fn score(config: &StubbornConfig, series: &ObservationSeries) -> Result<LogLikelihood> {
    Ok(prefix_score(&transition_terms(config, series)?, series.len()))
}

/// Natural-log likelihood of `series` under `config`.
pub fn log_likelihood(config: &StubbornConfig, series: &ObservationSeries) -> Result<LogLikelihood> {
    require_two(series)?;
    if config.n() != series.n() {
        return Err(Error::InvalidArgument(format!(
            "config is for n = {} but the series is on a 0..={} scale",
            config.n(),
            series.n()
        )));
    }
    score(config, series)
}

/// Set of stubborn couples searched by the fit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchDomain {
    /// Stubborn nodes on both sides, `s0 >= 1` and `s1 >= 1`. This is the
    /// search behind the published election estimates.
    #[default]
    BothSides,
    /// All of `S_n`, including one-sided couples whose chain is absorbed at
    /// 0 or `n`.
    Admissible,
}

impl SearchDomain {
    pub fn admits(self, config: &StubbornConfig) -> bool {
        match self {
            Self::BothSides => config.s0() >= 1 && config.s1() >= 1,
            Self::Admissible => true,
        }
    }

    /// Every couple of the domain for population `n`, ordered by `(s0, s1)`.
    pub fn couples(self, n: u32) -> Result<Vec<StubbornConfig>> {
        let mut all = StubbornConfig::all(n)?;
        all.retain(|c| self.admits(c));
        Ok(all)
    }
}

/// Couples of `domain` that can give the series a positive likelihood: the
/// state space `{s1, ..., n - s0}` must cover every observation. Ordered by
/// `(s0, s1)`.
pub fn feasible_grid(series: &ObservationSeries, domain: SearchDomain) -> Vec<StubbornConfig> {
    let n = series.n();
    let max_s1 = series.min_count();
    let max_s0 = n - series.max_count();
    let mut grid = Vec::new();
    for s0 in 0..=max_s0 {
        for s1 in 0..=max_s1 {
            if let Ok(config) = StubbornConfig::new(n, s0, s1) {
                if domain.admits(&config) {
                    grid.push(config);
                }
            }
        }
    }
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfacePoint {
    pub s0: u32,
    pub s1: u32,
    pub loglik: LogLikelihood,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub best: StubbornConfig,
    pub loglik: f64,
    /// Log-likelihood of every feasible couple, ordered by `(s0, s1)`.
    /// Couples outside the feasible grid are all impossible.
    pub surface: Vec<SurfacePoint>,
    pub evaluated: usize,
}

/// Exhaustive maximum-likelihood estimate of `(s0, s1)`.
///
/// Ties go to the smallest `s0`, then the smallest `s1`. Scores are computed
/// in parallel on the current rayon pool; the reduction runs afterwards in
/// grid order, so the result does not depend on the schedule.
pub fn fit_stubborn(series: &ObservationSeries, domain: SearchDomain) -> Result<FitResult> {
    let mut fits = fit_prefixes(series, &[series.len()], domain)?;
    Ok(fits.remove(0))
}

/// [`fit_stubborn`] on each prefix `series.prefix(len)` for `len` in `lengths`.
///
/// Transition terms of every couple are computed once over the whole series
/// and summed per prefix in the same order a direct fit would use, so each
/// result is identical to fitting the prefix on its own.
pub fn fit_prefixes(series: &ObservationSeries, lengths: &[usize], domain: SearchDomain) -> Result<Vec<FitResult>> {
    let Some(&shortest) = lengths.iter().min() else {
        return Ok(Vec::new());
    };
    if shortest < 2 {
        return Err(Error::InsufficientData { needed: 2, got: shortest });
    }
    if let Some(&len) = lengths.iter().find(|&&len| len > series.len()) {
        return Err(Error::InvalidArgument(format!("prefix of {len} points from a series of {}", series.len())));
    }
    let longest = lengths.iter().copied().max().unwrap_or(shortest);
    let observed = series.prefix(longest)?;
    // every prefix grid is contained in the grid of the shortest prefix
    let grid = feasible_grid(&series.prefix(shortest)?, domain);
    let terms = grid.par_iter().map(|config| transition_terms(config, &observed)).collect::<Result<Vec<_>>>()?;

    lengths
        .iter()
        .map(|&len| {
            let prefix = series.prefix(len)?;
            let (min, max) = (prefix.min_count(), prefix.max_count());
            let mut surface = Vec::new();
            let mut best: Option<(StubbornConfig, f64)> = None;
            for (config, terms) in grid.iter().zip(&terms) {
                if config.s1() > min || config.n() - config.s0() < max {
                    continue;
                }
                let loglik = prefix_score(terms, len);
                if let LogLikelihood::Finite(value) = loglik {
                    if best.is_none_or(|(_, b)| value > b) {
                        best = Some((*config, value));
                    }
                }
                surface.push(SurfacePoint { s0: config.s0(), s1: config.s1(), loglik });
            }
            let (best, loglik) = best.ok_or(Error::NoFeasibleModel)?;
            Ok(FitResult { best, loglik, evaluated: surface.len(), surface })
        })
        .collect()
}
