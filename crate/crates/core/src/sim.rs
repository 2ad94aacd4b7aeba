//! Seeded Monte-Carlo estimates used to cross-check the exact solvers.
//!
//! Randomness comes from ChaCha8. The sample count is cut into fixed-size
//! chunks; chunk `i` draws from stream `i` of the generator seeded with the
//! configured seed, and chunk statistics are merged in chunk order, so
//! results do not depend on the number of worker threads.
//!
//! A successor is drawn by comparing one uniform 64-bit integer `u` with the
//! thresholds `ceil(c_j * 2^64)` of the cumulative probabilities `c_j` in
//! document order; successor `j` is taken for the first `j` with
//! `u < ceil(c_j * 2^64)`. Each probability is thus realised exactly up to
//! rounding of the cumulative sums to multiples of `2^-64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::arena::{Arena, Play, StrategyProfile, WeightedPrioritySystem};
use crate::discounted::{to_f64, DiscountMap};
use crate::Rational;

/// Samples per generator stream.
pub const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// Stop at `s` with probability `1 - λ(s)` on each visit and collect `r(s)`.
    DiscountedStopping,
    /// Filtered weighted average over the second half of a fixed-length play.
    PmpTruncated,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("samples must be at least 1")]
    Samples,
    #[error("horizon must be at least {min}")]
    Horizon { min: u64 },
    #[error("initial state {0} out of range")]
    Initial(usize),
    #[error("{got} entries for an arena of {expected} states")]
    Length { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub samples: u64,
    pub horizon: u64,
    pub estimator: Estimator,
}

impl SimConfig {
    pub fn new(
        seed: u64,
        samples: u64,
        horizon: u64,
        estimator: Estimator,
    ) -> Result<Self, SimError> {
        if samples == 0 {
            return Err(SimError::Samples);
        }
        let min = match estimator {
            Estimator::DiscountedStopping => 1,
            Estimator::PmpTruncated => 2,
        };
        if horizon < min {
            return Err(SimError::Horizon { min });
        }
        Ok(SimConfig {
            seed,
            samples,
            horizon,
            estimator,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples_used: u64,
    /// Fraction of plays cut by the horizon. Always 1 for the truncated
    /// priority estimator, which is biased (though consistent) and only meant
    /// for cross-checks.
    pub truncated_fraction: f64,
}

/// `ceil(p * 2^64)` as a `u128` (at most `2^64`).
fn threshold(p: &Rational) -> u128 {
    let scaled = p.numer() << 64u32;
    let (q, r) = scaled.div_rem(p.denom());
    let q = if r == BigInt::from(0) { q } else { q + 1 };
    q.to_u128().expect("probability in [0, 1]")
}

/// Inverse-CDF tables of the actions chosen by a profile.
struct Walker {
    /// Per state: `(cumulative threshold, successor)` in document order.
    steps: Vec<Vec<(u128, usize)>>,
}

impl Walker {
    fn new(arena: &Arena, profile: &StrategyProfile) -> Self {
        let steps = arena
            .states()
            .iter()
            .enumerate()
            .map(|(s, st)| {
                let mut cum = Rational::from_integer(0.into());
                st.actions[profile.choice(s)]
                    .successors
                    .iter()
                    .map(|(t, p)| {
                        cum += p;
                        (threshold(&cum), *t)
                    })
                    .collect()
            })
            .collect();
        Walker { steps }
    }

    #[inline]
    fn next(&self, s: usize, rng: &mut ChaCha8Rng) -> usize {
        let row = &self.steps[s];
        if row.len() == 1 {
            return row[0].1;
        }
        let u = u128::from(rng.next_u64());
        row.iter()
            .find(|(c, _)| u < *c)
            .map_or(row[row.len() - 1].1, |&(_, t)| t)
    }
}

/// Draws a play of `horizon` states starting at `initial`.
pub fn sample_play(
    arena: &Arena,
    profile: &StrategyProfile,
    initial: usize,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Play, SimError> {
    if initial >= arena.len() {
        return Err(SimError::Initial(initial));
    }
    let walker = Walker::new(arena, profile);
    let mut states = Vec::with_capacity(horizon);
    let mut s = initial;
    for i in 0..horizon {
        states.push(s);
        if i + 1 < horizon {
            s = walker.next(s, rng);
        }
    }
    let actions = states[..states.len().saturating_sub(1)]
        .iter()
        .map(|&s| profile.choice(s))
        .collect();
    Ok(Play { states, actions })
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    truncated: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64),
            truncated: self.truncated + other.truncated,
        }
    }

    fn estimate(self) -> SimEstimate {
        let std_error = if self.n > 1 {
            (self.m2.max(0.0) / (self.n - 1) as f64).sqrt() / (self.n as f64).sqrt()
        } else {
            0.0
        };
        SimEstimate {
            mean: self.mean,
            std_error,
            samples_used: self.n,
            truncated_fraction: self.truncated as f64 / self.n as f64,
        }
    }
}

fn run_chunks(
    config: &SimConfig,
    one: impl Fn(&mut ChaCha8Rng) -> (f64, bool) + Sync,
) -> SimEstimate {
    let chunks = config.samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i);
            let size = CHUNK.min(config.samples - i * CHUNK);
            let mut m = Moments::default();
            for _ in 0..size {
                let (x, cut) = one(&mut rng);
                m.push(x);
                m.truncated += u64::from(cut);
            }
            m
        })
        .collect();
    parts
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate()
}

/// Stopping-game estimate of the discounted value from `initial`. Plays
/// that reach the horizon without stopping score 0 and are counted as
/// truncated.
pub fn estimate_discounted(
    arena: &Arena,
    discounts: &DiscountMap,
    profile: &StrategyProfile,
    initial: usize,
    config: &SimConfig,
) -> Result<SimEstimate, SimError> {
    if initial >= arena.len() {
        return Err(SimError::Initial(initial));
    }
    if discounts.as_slice().len() != arena.len() {
        return Err(SimError::Length {
            expected: arena.len(),
            got: discounts.as_slice().len(),
        });
    }
    let walker = Walker::new(arena, profile);
    let stop: Vec<u128> = discounts
        .as_slice()
        .iter()
        .map(|l| threshold(&(Rational::one() - l)))
        .collect();
    let reward: Vec<f64> = arena.states().iter().map(|s| to_f64(&s.reward)).collect();
    Ok(run_chunks(config, |rng| {
        let mut s = initial;
        for _ in 0..config.horizon {
            if u128::from(rng.next_u64()) < stop[s] {
                return (reward[s], false);
            }
            s = walker.next(s, rng);
        }
        (0.0, true)
    }))
}

/// Priority mean-payoff estimate from `initial`: the play priority is taken
/// as the smallest priority over steps `[horizon/2, horizon)`, and the
/// payoff as the filtered weighted reward average over the same steps.
pub fn estimate_pmp(
    arena: &Arena,
    system: &WeightedPrioritySystem,
    profile: &StrategyProfile,
    initial: usize,
    config: &SimConfig,
) -> Result<SimEstimate, SimError> {
    if initial >= arena.len() {
        return Err(SimError::Initial(initial));
    }
    if system.len() != arena.len() {
        return Err(SimError::Length {
            expected: arena.len(),
            got: system.len(),
        });
    }
    let walker = Walker::new(arena, profile);
    let weight: Vec<f64> = system.weights().iter().map(to_f64).collect();
    let wr: Vec<f64> = arena
        .states()
        .iter()
        .zip(system.weights())
        .map(|(s, w)| to_f64(&(w * &s.reward)))
        .collect();
    let prio = system.priorities();
    let half = config.horizon / 2;
    Ok(run_chunks(config, |rng| {
        let mut s = initial;
        for _ in 0..half {
            s = walker.next(s, rng);
        }
        // Filtered sums for the smallest priority seen so far.
        let mut best = u32::MAX;
        let (mut num, mut den) = (0.0, 0.0);
        for i in half..config.horizon {
            let p = prio[s];
            if p < best {
                best = p;
                num = 0.0;
                den = 0.0;
            }
            if p == best {
                num += wr[s];
                den += weight[s];
            }
            if i + 1 < config.horizon {
                s = walker.next(s, rng);
            }
        }
        (num / den, true)
    }))
}
