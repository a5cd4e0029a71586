//! Monte Carlo pricing from the exact lognormal terminal law.
//!
//! Every payoff here depends on `S_T` alone, so there are no paths to
//! discretise: `S_T = S_t exp((r_f - sigma^2/2) tau + sigma sqrt(tau) Z)`.
//!
//! Draws come from ChaCha8 (`rand_chacha` 0.9) seeded with
//! `seed_from_u64(seed)`. Path `i` always reads the 64-bit word at stream
//! position `i`, so which thread evaluates it does not matter. Paths are
//! split into fixed chunks, each chunk keeps running (count, mean, M2)
//! moments, and chunks are merged by a fixed pairwise tree. The result is
//! bit-identical for any worker count.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{decay_factors, MarketParams, PricingPoint};
use crate::error::{domain, ensure_non_negative, ensure_positive, Error, Result};
use crate::normal;
use crate::payoff::impermanent_gain;

/// Paths per work unit. Part of the reproducibility contract: changing it
/// changes the reduction tree and therefore the last bits of the mean.
const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    /// Independent draws; with `antithetic` each draw is used twice.
    pub n_paths: u64,
    pub seed: u64,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default = "one")]
    pub workers: usize,
}

fn one() -> usize {
    1
}

impl McConfig {
    pub fn new(n_paths: u64, seed: u64) -> Self {
        Self { n_paths, seed, antithetic: false, workers: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(domain("n_paths must be at least 1"));
        }
        if self.workers == 0 {
            return Err(domain("workers must be at least 1"));
        }
        Ok(())
    }

    /// Number of payoff evaluations.
    pub fn effective_draws(&self) -> u64 {
        if self.antithetic {
            2 * self.n_paths
        } else {
            self.n_paths
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Payoff evaluations behind the estimate.
    pub n_effective: u64,
}

impl McEstimate {
    /// `(mean - reference) / std_error`; infinite when the error is zero and
    /// the mean is off.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = self.mean - reference;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Exact terminal price for a standard normal draw `z`.
pub fn sample_terminal(s_t: f64, market: &MarketParams, tau: f64, z: f64) -> Result<f64> {
    ensure_positive("s_t", s_t)?;
    ensure_non_negative("tau", tau)?;
    if !z.is_finite() {
        return Err(domain(format!("draw must be finite, got {z}")));
    }
    if tau == 0.0 {
        return Ok(s_t);
    }
    let sigma = market.sigma;
    let drift = (market.r_f() - 0.5 * sigma * sigma) * tau;
    Ok(s_t * (drift + sigma * tau.sqrt() * z).exp())
}

/// Payoffs the engine can average. Prices (`LockedLp`, `Ig`, vanillas) are
/// discounted at `r_f`; the two moments are plain expectations of `S_T`
/// and `sqrt(S_T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum McPayoff {
    /// `V0 (sqrt(S_T / S0) + phi T)` at maturity.
    LockedLp,
    /// `V0 (1 + r/2 - sqrt(1 + r))` with `r = S_T / K - 1`.
    Ig,
    SqrtMoment,
    Forward,
    VanillaCall(f64),
    VanillaPut(f64),
}

impl McPayoff {
    fn is_discounted(&self) -> bool {
        !matches!(self, McPayoff::SqrtMoment | McPayoff::Forward)
    }

    fn validate(&self, point: &PricingPoint) -> Result<()> {
        match self {
            McPayoff::LockedLp => {
                point.lp_state(true)?.validate()?;
            }
            McPayoff::Ig => {
                point.ig_contract()?.validate()?;
            }
            McPayoff::VanillaCall(k) | McPayoff::VanillaPut(k) => ensure_positive("strike", *k)?,
            McPayoff::SqrtMoment | McPayoff::Forward => {}
        }
        ensure_positive("spot", point.spot)?;
        ensure_non_negative("tau", point.tau())
    }

    fn eval(&self, point: &PricingPoint, s_terminal: f64) -> f64 {
        let v0 = point.notional_v0;
        match *self {
            McPayoff::LockedLp => {
                v0 * ((s_terminal / point.entry_price_s0).sqrt() + point.market.phi * point.maturity)
            }
            McPayoff::Ig => impermanent_gain(s_terminal / point.strike_k - 1.0)
                .map(|g| v0 * g)
                .unwrap_or(f64::NAN),
            McPayoff::SqrtMoment => s_terminal.sqrt(),
            McPayoff::Forward => s_terminal,
            McPayoff::VanillaCall(k) => (s_terminal - k).max(0.0),
            McPayoff::VanillaPut(k) => (k - s_terminal).max(0.0),
        }
    }
}

impl fmt::Display for McPayoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McPayoff::LockedLp => f.write_str("locked_lp"),
            McPayoff::Ig => f.write_str("ig"),
            McPayoff::SqrtMoment => f.write_str("sqrt_moment"),
            McPayoff::Forward => f.write_str("forward"),
            McPayoff::VanillaCall(k) => write!(f, "vanilla_call({k})"),
            McPayoff::VanillaPut(k) => write!(f, "vanilla_put({k})"),
        }
    }
}

impl FromStr for McPayoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let strike = |inner: &str| {
            inner
                .strip_suffix(')')
                .and_then(|k| k.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("bad strike in `{s}`")))
        };
        match s {
            "locked_lp" => Ok(McPayoff::LockedLp),
            "ig" => Ok(McPayoff::Ig),
            "sqrt_moment" => Ok(McPayoff::SqrtMoment),
            "forward" => Ok(McPayoff::Forward),
            _ => {
                if let Some(rest) = s.strip_prefix("vanilla_call(") {
                    strike(rest).map(McPayoff::VanillaCall)
                } else if let Some(rest) = s.strip_prefix("vanilla_put(") {
                    strike(rest).map(McPayoff::VanillaPut)
                } else {
                    Err(Error::Config(format!("unknown payoff `{s}`")))
                }
            }
        }
    }
}

/// Running moments of a sample, mergeable in any fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let wb = b.n as f64 / n as f64;
        Moments {
            n,
            mean: a.mean + d * wb,
            m2: a.m2 + b.m2 + d * d * a.n as f64 * wb,
        }
    }

    fn tree(parts: &[Moments]) -> Moments {
        match parts.len() {
            0 => Moments::default(),
            1 => parts[0],
            len => {
                let mid = len / 2;
                Moments::merge(Moments::tree(&parts[..mid]), Moments::tree(&parts[mid..]))
            }
        }
    }
}

/// Maps a raw 64-bit word to a standard normal draw via the open-interval
/// uniform `(k + 1/2) / 2^52` on its top 52 bits. Exact in binary64 and
/// symmetric: `u(k) + u(2^52 - 1 - k) = 1`.
fn normal_from_word(word: u64) -> f64 {
    let u = ((word >> 12) as f64 + 0.5) / (1u64 << 52) as f64;
    normal::inv_cdf(u)
}

fn run_chunk(
    payoff: McPayoff,
    point: &PricingPoint,
    cfg: &McConfig,
    base: &ChaCha8Rng,
    start: u64,
    end: u64,
) -> Result<Moments> {
    let mut rng = base.clone();
    // one u64 is two 32-bit stream words
    rng.set_word_pos(2 * start as u128);
    let tau = point.tau();
    let mut acc = Moments::default();
    for path in start..end {
        let z = normal_from_word(rng.next_u64());
        let eval = |z: f64| -> Result<f64> {
            let s = sample_terminal(point.spot, &point.market, tau, z)?;
            let v = payoff.eval(point, s);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite { path })
            }
        };
        let y = if cfg.antithetic {
            0.5 * (eval(z)? + eval(-z)?)
        } else {
            eval(z)?
        };
        acc.push(y);
    }
    Ok(acc)
}

/// Discounted sample mean of `payoff` with its standard error.
pub fn mc_price(payoff: McPayoff, point: &PricingPoint, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    payoff.validate(point)?;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chunks: Vec<(u64, u64)> = (0..cfg.n_paths.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(cfg.n_paths)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<Result<Moments>> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(a, b)| run_chunk(payoff, point, cfg, &base, a, b))
            .collect()
    });
    // the lowest failing path wins, whatever thread finished first
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let m = Moments::tree(&parts);
    let var = if m.n > 1 { m.m2 / (m.n - 1) as f64 } else { 0.0 };
    let disc = if payoff.is_discounted() {
        decay_factors(&point.market, point.tau())?.gamma_disc
    } else {
        1.0
    };
    Ok(McEstimate {
        mean: disc * m.mean,
        std_error: disc * (var / m.n as f64).sqrt(),
        n_effective: cfg.effective_draws(),
    })
}
