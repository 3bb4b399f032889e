//! Parameter space and birth-death generator of the stubborn voter chain.
//!
//! On the clique, the count `k` of opinion-1 holders moves down at rate
//! `(k - s1)(n - k)/(n - 1)` (a free 1-node copies one of the `n - k` 0-nodes
//! among its `n - 1` neighbours) and up at rate `k(n - k - s0)/(n - 1)`. Every
//! node carries a rate-1 clock, so rates are per unit of chain time.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(s0, s1)` of the admissible set `S_n = {(a, b) : 0 < a + b <= n}`
/// together with the population size it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StubbornConfig {
    n: u32,
    s0: u32,
    s1: u32,
}

impl StubbornConfig {
    pub fn new(n: u32, s0: u32, s1: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegeneratePopulation(n));
        }
        let total = s0 as u64 + s1 as u64;
        if total == 0 || total > n as u64 {
            return Err(Error::InvalidConfig { n, s0, s1 });
        }
        Ok(Self { n, s0, s1 })
    }

    /// Every admissible couple for population `n`, ordered by `(s0, s1)`.
    /// There are `n(n + 3)/2` of them.
    pub fn all(n: u32) -> Result<Vec<Self>> {
        if n < 2 {
            return Err(Error::DegeneratePopulation(n));
        }
        let mut out = Vec::with_capacity((n as usize) * (n as usize + 3) / 2);
        for s0 in 0..=n {
            for s1 in 0..=(n - s0) {
                if s0 + s1 > 0 {
                    out.push(Self { n, s0, s1 });
                }
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s0(&self) -> u32 {
        self.s0
    }

    pub fn s1(&self) -> u32 {
        self.s1
    }

    /// Smallest reachable count of opinion-1 holders, `s1`.
    pub fn lowest(&self) -> u32 {
        self.s1
    }

    /// Largest reachable count of opinion-1 holders, `n - s0`.
    pub fn highest(&self) -> u32 {
        self.n - self.s0
    }

    pub fn states(&self) -> RangeInclusive<u32> {
        self.lowest()..=self.highest()
    }

    pub fn dim(&self) -> usize {
        (self.highest() - self.lowest()) as usize + 1
    }

    pub fn contains(&self, state: u32) -> bool {
        self.states().contains(&state)
    }

    /// `s0 + s1 = n`: the only reachable state is `s1` and the chain never moves.
    pub fn is_frozen(&self) -> bool {
        self.s0 + self.s1 == self.n
    }

    /// Offset of `state` in arrays indexed over the state space.
    pub fn index_of(&self, state: u32) -> Result<usize> {
        if self.contains(state) {
            Ok((state - self.lowest()) as usize)
        } else {
            Err(Error::StateOutOfRange { state, low: self.lowest(), high: self.highest() })
        }
    }

    /// Same population with the two opinions swapped.
    pub fn mirrored(&self) -> Self {
        Self { n: self.n, s0: self.s1, s1: self.s0 }
    }

    /// Expected number of opinion-1 holders at equilibrium, `n s1 / (s0 + s1)`.
    pub fn equilibrium_expectation(&self) -> f64 {
        self.n as f64 * self.s1 as f64 / (self.s0 + self.s1) as f64
    }
}

/// Tridiagonal rate matrix of the count chain. Entry `i` of each array belongs
/// to state `s1 + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    config: StubbornConfig,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Generator {
    pub fn new(config: StubbornConfig) -> Self {
        let n = config.n as f64;
        let s0 = config.s0 as f64;
        let s1 = config.s1 as f64;
        let dim = config.dim();
        let mut lower = Vec::with_capacity(dim);
        let mut diag = Vec::with_capacity(dim);
        let mut upper = Vec::with_capacity(dim);
        for k in config.states() {
            let kf = k as f64;
            let down = (kf - s1) * (n - kf) / (n - 1.0);
            let up = kf * (n - kf - s0) / (n - 1.0);
            lower.push(down);
            upper.push(up);
            diag.push(-(down + up));
        }
        Self { config, lower, diag, upper }
    }

    pub fn config(&self) -> &StubbornConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Down-rates `q(k, k-1)`; the first entry is zero.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Up-rates `q(k, k+1)`; the last entry is zero.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `q(k, l)` for states `k`, `l` (zero off the band).
    pub fn rate(&self, k: u32, l: u32) -> Result<f64> {
        let i = self.config.index_of(k)?;
        self.config.index_of(l)?;
        Ok(if l == k {
            self.diag[i]
        } else if l + 1 == k {
            self.lower[i]
        } else if l == k + 1 {
            self.upper[i]
        } else {
            0.0
        })
    }

    /// Largest exit rate `max_k |q(k, k)|`, the uniformization constant.
    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0_f64, |acc, d| acc.max(-d))
    }

    /// Row-vector product `v Q`.
    pub fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "vector length must match the generator dimension");
        let dim = self.dim();
        (0..dim)
            .map(|j| {
                let mut acc = v[j] * self.diag[j];
                if j > 0 {
                    acc += v[j - 1] * self.upper[j - 1];
                }
                if j + 1 < dim {
                    acc += v[j + 1] * self.lower[j + 1];
                }
                acc
            })
            .collect()
    }
}

/// Equilibrium law of the count chain over `{s1, ..., n - s0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution {
    low: u32,
    probs: Vec<f64>,
}

impl StationaryDistribution {
    /// Detailed balance `pi(k) q(k, k+1) = pi(k+1) q(k+1, k)`, accumulated in
    /// log space and normalised with a log-sum-exp.
    ///
    /// With `s1 = 0` the state 0 is absorbing and with `s0 = 0` the state `n`
    /// is; the law is then a point mass there.
    pub fn of(generator: &Generator) -> Self {
        let config = generator.config();
        let dim = generator.dim();
        let low = config.lowest();
        let mut probs = vec![0.0; dim];
        if dim == 1 || config.s1() == 0 {
            probs[0] = 1.0;
        } else if config.s0() == 0 {
            probs[dim - 1] = 1.0;
        } else {
            let up = generator.upper();
            let down = generator.lower();
            let mut log_w = Vec::with_capacity(dim);
            log_w.push(0.0_f64);
            for i in 1..dim {
                log_w.push(log_w[i - 1] + up[i - 1].ln() - down[i].ln());
            }
            let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let total: f64 = log_w.iter().map(|w| (w - max).exp()).sum();
            for (p, w) in probs.iter_mut().zip(&log_w) {
                *p = (w - max).exp() / total;
            }
        }
        Self { low, probs }
    }

    pub fn low(&self) -> u32 {
        self.low
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, state: u32) -> f64 {
        state.checked_sub(self.low).and_then(|i| self.probs.get(i as usize)).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| (self.low as f64 + i as f64) * p).sum()
    }
}

pub fn build_generator(config: StubbornConfig) -> Generator {
    Generator::new(config)
}

pub fn stationary_distribution(generator: &Generator) -> StationaryDistribution {
    StationaryDistribution::of(generator)
}

pub fn equilibrium_expectation(config: &StubbornConfig) -> f64 {
    config.equilibrium_expectation()
}
