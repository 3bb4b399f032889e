//! Voter model with stubborn nodes on the complete graph.
//!
//! The number of opinion-1 holders `N1(t)` in a population of `n` nodes, of
//! which `s0` never leave state 0 and `s1` never leave state 1, is a
//! birth-death chain on `{s1, ..., n - s0}`. This crate builds that chain,
//! computes its transient and stationary laws, fits `(s0, s1)` to a series of
//! election results by exhaustive maximum likelihood, and runs rolling
//! one-step-ahead backtests against the previous-result baseline.
//!
//! Module map:
//!
//! - [`chain`]: parameter space, tridiagonal generator, stationary law
//! - [`transient`]: rows of `exp(tQ)` by uniformization
//! - [`simulate`]: jump-process simulation, Monte Carlo estimate of a row
//! - [`estimate`]: observation series, log-likelihood, grid search
//! - [`forecast`]: rolling backtest, baseline, MAE, stubborn trace
//! - [`ingest`]: election CSV loading and party-vs-rest binarization

pub mod chain;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod ingest;
pub mod simulate;
pub mod transient;

pub use chain::{Generator, StationaryDistribution, StubbornConfig};
pub use error::{Error, Result};
pub use estimate::{
    fit_stubborn, log_likelihood, FitResult, LogLikelihood, Observation, ObservationSeries, SearchDomain,
};
pub use forecast::{rolling_forecast, ForecastOptions, ForecastReport, ForecastRow};
pub use transient::DistributionRow;
