//! Exact simulation of the count chain.
//!
//! On the clique every node's rate-1 clock only matters through the count of
//! opinion-1 holders, so the process is simulated directly as the jump chain
//! of the birth-death generator: exponential holding time with the total exit
//! rate, then one step up or down in proportion to the two rates.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; run `r` of a batch uses
//! stream `r` of that key, so a batch is reproducible whatever the number of
//! worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{Generator, StubbornConfig};
use crate::error::{Error, Result};
use crate::transient::DistributionRow;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub start: u32,
    /// Event times, strictly increasing, all below the horizon.
    pub times: Vec<f64>,
    /// Count of opinion-1 holders right after each event.
    pub counts: Vec<u32>,
}

impl Trajectory {
    pub fn events(&self) -> usize {
        self.times.len()
    }

    pub fn terminal(&self) -> u32 {
        self.counts.last().copied().unwrap_or(self.start)
    }
}

/// Generator for run `run` of a batch keyed by `seed`.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

fn validate(config: &StubbornConfig, start: u32, horizon: f64) -> Result<()> {
    config.index_of(start)?;
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidTime(horizon));
    }
    Ok(())
}

/// Drives the jump chain up to `horizon`, reporting every event to `on_event`.
/// Returns the terminal state.
fn run_chain<R: Rng>(
    generator: &Generator,
    start: u32,
    horizon: f64,
    rng: &mut R,
    mut on_event: impl FnMut(f64, u32),
) -> u32 {
    let low = generator.config().lowest();
    let (down, up) = (generator.lower(), generator.upper());
    let mut state = start;
    let mut now = 0.0;
    loop {
        let i = (state - low) as usize;
        let exit = down[i] + up[i];
        if exit <= 0.0 {
            return state;
        }
        let hold: f64 = rng.sample(Exp1);
        now += hold / exit;
        if now >= horizon {
            return state;
        }
        let u: f64 = rng.random();
        if u * exit < up[i] {
            state += 1;
        } else {
            state -= 1;
        }
        on_event(now, state);
    }
}

/// One trajectory of `N1` on `[0, horizon)` started at `start`.
pub fn gillespie_run(config: &StubbornConfig, start: u32, horizon: f64, seed: u64) -> Result<Trajectory> {
    validate(config, start, horizon)?;
    let generator = Generator::new(*config);
    let mut rng = run_rng(seed, 0);
    let mut trajectory = Trajectory { start, times: Vec::new(), counts: Vec::new() };
    run_chain(&generator, start, horizon, &mut rng, |t, k| {
        trajectory.times.push(t);
        trajectory.counts.push(k);
    });
    Ok(trajectory)
}

/// Frequencies of `N1(t)` over `runs` independent trajectories.
pub fn empirical_distribution(
    config: &StubbornConfig,
    start: u32,
    t: f64,
    runs: u64,
    seed: u64,
) -> Result<DistributionRow> {
    validate(config, start, t)?;
    if runs == 0 {
        return Err(Error::InvalidArgument("the number of runs must be at least 1".into()));
    }
    let generator = Generator::new(*config);
    let dim = generator.dim();
    let low = config.lowest();
    let counts = (0..runs)
        .into_par_iter()
        .fold(
            || vec![0u64; dim],
            |mut acc, run| {
                let mut rng = run_rng(seed, run);
                let end = run_chain(&generator, start, t, &mut rng, |_, _| {});
                acc[(end - low) as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; dim],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let probs = counts.iter().map(|&c| c as f64 / runs as f64).collect();
    Ok(DistributionRow { start, t, low, probs })
}
