//! Transient law of the count chain, one row of `exp(tQ)` at a time.
//!
//! Rows are computed by uniformization. With `L = max_k |q(k, k)|` the matrix
//! `P = I + Q/L` is stochastic and tridiagonal, and
//!
//! ```text
//! exp(tQ) = sum_j Poisson(j; L t) P^j
//! ```
//!
//! so a row is a Poisson-weighted sum of the iterates `e_{n1} P^j`. Every term
//! is non-negative, and each step costs `O(dim)`.

use serde::Serialize;

use crate::chain::Generator;
use crate::error::{Error, Result};

/// Poisson mass left out on the right of the truncation window.
pub const POISSON_TAIL_MASS: f64 = 1e-12;

/// Weights below this fraction of the modal weight are dropped before
/// normalisation.
const RELATIVE_WEIGHT_CUTOFF: f64 = 1e-30;

/// Hard cap on `L t`; the weight table is held in memory.
const MAX_POISSON_RATE: f64 = 5e7;

/// Law of `N1(t)` given `N1(0) = start`, over `{low, ..., low + probs.len() - 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionRow {
    pub start: u32,
    pub t: f64,
    pub low: u32,
    pub probs: Vec<f64>,
}

impl DistributionRow {
    pub fn prob(&self, state: u32) -> f64 {
        state.checked_sub(self.low).and_then(|i| self.probs.get(i as usize)).copied().unwrap_or(0.0)
    }

    pub fn states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.probs.len() as u32).map(move |i| self.low + i)
    }

    pub fn mean(&self) -> f64 {
        self.states().zip(&self.probs).map(|(k, p)| k as f64 * p).sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Total-variation distance `0.5 * sum |p - q|` over the union of supports.
    pub fn total_variation(&self, other: &DistributionRow) -> f64 {
        let lo = self.low.min(other.low);
        let hi = (self.low + self.probs.len() as u32).max(other.low + other.probs.len() as u32);
        0.5 * (lo..hi).map(|k| (self.prob(k) - other.prob(k)).abs()).sum::<f64>()
    }
}

/// Truncated, normalised Poisson(`rate`) weights for `j` in `first..first + weights.len()`.
#[derive(Debug, Clone)]
struct PoissonWindow {
    first: usize,
    weights: Vec<f64>,
}

impl PoissonWindow {
    /// Weights are generated outward from the mode by the ratio recurrence,
    /// so nothing underflows however large `rate` is.
    fn new(rate: f64) -> Self {
        let mode = rate.floor() as usize;

        let mut left = Vec::new();
        let mut w = 1.0_f64;
        let mut j = mode;
        while j > 0 {
            w *= j as f64 / rate;
            if w < RELATIVE_WEIGHT_CUTOFF {
                break;
            }
            left.push(w);
            j -= 1;
        }
        let first = mode - left.len();

        let mut right = Vec::new();
        w = 1.0;
        j = mode;
        loop {
            w *= rate / (j + 1) as f64;
            if w < RELATIVE_WEIGHT_CUTOFF {
                break;
            }
            right.push(w);
            j += 1;
        }

        let mut weights: Vec<f64> = left.into_iter().rev().collect();
        weights.push(1.0);
        weights.extend(right);
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        let mut cumulative = 0.0;
        let mut keep = weights.len();
        for (i, w) in weights.iter().enumerate() {
            cumulative += w;
            if cumulative >= 1.0 - POISSON_TAIL_MASS {
                keep = i + 1;
                break;
            }
        }
        weights.truncate(keep);
        Self { first, weights }
    }

    fn last(&self) -> usize {
        self.first + self.weights.len() - 1
    }
}

/// Uniformized kernel of one generator, reusable across many rows.
#[derive(Debug, Clone)]
pub struct Propagator {
    low: u32,
    high: u32,
    rate: f64,
    down: Vec<f64>,
    stay: Vec<f64>,
    up: Vec<f64>,
}

impl Propagator {
    pub fn new(generator: &Generator) -> Self {
        let config = generator.config();
        let rate = generator.max_exit_rate();
        let (down, stay, up) = if rate > 0.0 {
            (
                generator.lower().iter().map(|q| q / rate).collect(),
                generator.diag().iter().map(|q| (1.0 + q / rate).max(0.0)).collect(),
                generator.upper().iter().map(|q| q / rate).collect(),
            )
        } else {
            (vec![0.0; generator.dim()], vec![1.0; generator.dim()], vec![0.0; generator.dim()])
        };
        Self { low: config.lowest(), high: config.highest(), rate, down, stay, up }
    }

    pub fn dim(&self) -> usize {
        self.stay.len()
    }

    fn check(&self, start: u32, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidTime(t));
        }
        if start < self.low || start > self.high {
            return Err(Error::StateOutOfRange { state: start, low: self.low, high: self.high });
        }
        Ok((start - self.low) as usize)
    }

    /// Row `start` of `exp(tQ)`.
    pub fn row(&self, start: u32, t: f64) -> Result<DistributionRow> {
        let origin = self.check(start, t)?;
        let dim = self.dim();
        let mut probs = vec![0.0; dim];

        let rate_t = self.rate * t;
        if rate_t == 0.0 {
            probs[origin] = 1.0;
            return Ok(DistributionRow { start, t, low: self.low, probs });
        }
        if rate_t > MAX_POISSON_RATE {
            return Err(Error::Numerical(format!(
                "uniformization rate {rate_t:.3e} exceeds the supported maximum {MAX_POISSON_RATE:.0e}"
            )));
        }

        let window = PoissonWindow::new(rate_t);
        let mut v = vec![0.0; dim];
        let mut next = vec![0.0; dim];
        v[origin] = 1.0;
        // support of v after j steps is contained in [lo, hi]
        let (mut lo, mut hi) = (origin, origin);
        for step in 0..=window.last() {
            if step >= window.first {
                let w = window.weights[step - window.first];
                for i in lo..=hi {
                    probs[i] += w * v[i];
                }
            }
            if step == window.last() {
                break;
            }
            let new_lo = lo.saturating_sub(1);
            let new_hi = (hi + 1).min(dim - 1);
            for j in new_lo..=new_hi {
                let mut acc = v[j] * self.stay[j];
                if j > 0 {
                    acc += v[j - 1] * self.up[j - 1];
                }
                if j + 1 < dim {
                    acc += v[j + 1] * self.down[j + 1];
                }
                next[j] = acc;
            }
            std::mem::swap(&mut v, &mut next);
            lo = new_lo;
            hi = new_hi;
        }

        for p in probs.iter_mut() {
            if *p < 0.0 {
                if *p < -1e-15 {
                    return Err(Error::Numerical(format!("negative transition probability {p}")));
                }
                *p = 0.0;
            }
        }
        Ok(DistributionRow { start, t, low: self.low, probs })
    }

    pub fn probability(&self, from: u32, to: u32, t: f64) -> Result<f64> {
        if to < self.low || to > self.high {
            return Err(Error::StateOutOfRange { state: to, low: self.low, high: self.high });
        }
        Ok(self.row(from, t)?.prob(to))
    }
}

pub fn transition_row(generator: &Generator, start: u32, t: f64) -> Result<DistributionRow> {
    Propagator::new(generator).row(start, t)
}

pub fn transition_probability(generator: &Generator, from: u32, to: u32, t: f64) -> Result<f64> {
    Propagator::new(generator).probability(from, to, t)
}

/// `E[N1(t) | N1(0) = start]`.
pub fn expected_count(generator: &Generator, start: u32, t: f64) -> Result<f64> {
    Ok(transition_row(generator, start, t)?.mean())
}
