//! Static replication of the impermanent-loss payoff by a strip of vanilla
//! options.
//!
//! Any twice differentiable payoff `h` satisfies
//!
//! ```text
//! h(S_T) = h(S_0) + h'(S_0)(S_T - S_0)
//!        + int_0^S_0   h''(K) (K - S_T)^+ dK
//!        + int_S_0^inf h''(K) (S_T - K)^+ dK
//! ```
//!
//! For the loss `h(x) = sqrt(x/S_0) - x/(2 S_0) - 1/2` the first two terms
//! vanish and `h''(K) = -1 / (4 K^{3/2} sqrt(S_0))`, so the LP is short puts
//! below the entry price and short calls above it; IG is the same strip held
//! long.
//!
//! The integrals are truncated to `[S_0 e^{-m}, S_0 e^{m}]` and evaluated
//! with the composite trapezoid rule in a mildly sinh-stretched log-strike
//! coordinate that packs nodes around `S_0`. Put and call legs are integrated
//! separately, so the entry price is a node of both.
//!
//! The payoff kink at `S_T` caps any composite rule at second order, and a
//! higher-order rule only makes the error oscillate with the kink position.
//! The trapezoid error shrinks by at least half with every doubling, which
//! keeps the Richardson estimate honest.

use std::fmt;

use crate::analytics::{decay_factors, forward_price, IgContract, MarketParams};
use crate::error::{domain, ensure_non_negative, ensure_positive, Error, Result};
use crate::normal;
use crate::report::{csv, fmt_f64};

/// Stretch of the sinh node map; node spacing at `S_0` is
/// `CLUSTER / sinh(CLUSTER)` of the average. Much stronger stretching breaks
/// the monotone error decay under doubling.
const CLUSTER: f64 = 1.0;
const MIN_INTERVALS: usize = 8;
const MAX_INTERVALS: usize = 1 << 20;

/// Terminal prices, as log-offsets in units of the half-width, at which the
/// assembly error is estimated. Irregular so no probe sits on a node.
const PROBE_COUNT: usize = 61;
const PROBE_JITTER: f64 = std::f64::consts::FRAC_1_PI;

pub const DEFAULT_TARGET_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Put,
    Call,
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptionKind::Put => "put",
            OptionKind::Call => "call",
        })
    }
}

impl OptionKind {
    pub fn intrinsic(&self, strike: f64, s_t: f64) -> f64 {
        match self {
            OptionKind::Put => (strike - s_t).max(0.0),
            OptionKind::Call => (s_t - strike).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Composite trapezoid on each leg in `xi`, with `ln(K/S_0) = ±m sinh(c xi)/sinh(c)`.
    TrapezoidSinhLogStrike,
}

impl fmt::Display for QuadratureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("trapezoid-sinh-log-strike")
    }
}

/// One option of the strip. `weight` already includes the density `|h''(K)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrikeNode {
    pub strike: f64,
    pub weight: f64,
    pub kind: OptionKind,
}

/// Discretised replicating strip around an entry price.
///
/// Nodes are ordered by strike, puts first; the entry price carries both a
/// put and a call node, every other strike appears once.
#[derive(Debug, Clone, PartialEq)]
pub struct StrikeGrid {
    pub s0: f64,
    pub nodes: Vec<StrikeNode>,
    pub lower_cut: f64,
    pub upper_cut: f64,
    pub scheme: QuadratureScheme,
    /// Trapezoid intervals per leg.
    pub intervals: usize,
    /// Estimated payoff-assembly error as a fraction of `1 + |payoff|`.
    pub error_estimate: f64,
}

/// `h''(K)` of the loss payoff struck at `s0`; always negative.
pub fn strip_density(k_strike: f64, s0: f64) -> Result<f64> {
    ensure_positive("k_strike", k_strike)?;
    ensure_positive("s0", s0)?;
    Ok(-1.0 / (4.0 * k_strike.powf(1.5) * s0.sqrt()))
}

/// `(h(S_0), h'(S_0))` of the loss payoff. Both are zero; they are evaluated
/// rather than dropped so the replication identity is used in full.
pub fn il_anchor_terms(s0: f64) -> Result<(f64, f64)> {
    ensure_positive("s0", s0)?;
    let h = |x: f64| (x / s0).sqrt() - x / (2.0 * s0) - 0.5;
    let dh = |x: f64| 1.0 / (2.0 * (x * s0).sqrt()) - 1.0 / (2.0 * s0);
    Ok((h(s0), dh(s0)))
}

/// Half-width of the truncated log-strike range.
pub fn log_half_width(sigma: f64, tau: f64) -> f64 {
    (8.0 * sigma * tau.sqrt()).max(5.0)
}

impl StrikeGrid {
    /// Grid with a fixed number of intervals per leg and no error estimate
    /// attached.
    pub fn with_intervals(s0: f64, half_width: f64, intervals: usize) -> Result<Self> {
        ensure_positive("s0", s0)?;
        ensure_positive("half_width", half_width)?;
        if intervals == 0 || intervals > MAX_INTERVALS {
            return Err(domain(format!(
                "interval count must lie in [1, {MAX_INTERVALS}], got {intervals}"
            )));
        }
        let n = intervals;
        let sinh_c = CLUSTER.sinh();
        let leg: Vec<(f64, f64)> = (0..=n)
            .map(|j| {
                let xi = j as f64 / n as f64;
                let u = half_width * (CLUSTER * xi).sinh() / sinh_c;
                let du = half_width * CLUSTER * (CLUSTER * xi).cosh() / sinh_c;
                let end = if j == 0 || j == n { 0.5 } else { 1.0 };
                (u, end * du / n as f64)
            })
            .collect();

        let node = |u: f64, w: f64, kind| {
            let strike = s0 * u.exp();
            // dK = K du, density |h''(K)| = 1 / (4 K^{3/2} sqrt(s0))
            let weight = w * strike / (4.0 * strike.powf(1.5) * s0.sqrt());
            StrikeNode { strike, weight, kind }
        };
        let mut nodes = Vec::with_capacity(2 * n + 2);
        nodes.extend(leg.iter().rev().map(|&(u, w)| node(-u, w, OptionKind::Put)));
        nodes.extend(leg.iter().map(|&(u, w)| node(u, w, OptionKind::Call)));
        // pin the shared node to s0 exactly
        nodes[n].strike = s0;
        nodes[n + 1].strike = s0;

        Ok(Self {
            s0,
            lower_cut: nodes[0].strike,
            upper_cut: nodes[2 * n + 1].strike,
            nodes,
            scheme: QuadratureScheme::TrapezoidSinhLogStrike,
            intervals: n,
            error_estimate: f64::NAN,
        })
    }

    fn half_width(&self) -> f64 {
        (self.upper_cut / self.s0).ln()
    }

    /// Raw quadrature sum `-sum w (payoff)`, no anchor or tail terms.
    fn assemble(&self, s_terminal: f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .map(|n| n.weight * n.kind.intrinsic(n.strike, s_terminal))
            .collect();
        -pairwise_sum(&terms)
    }

    /// Same grid with half the intervals per leg; every coarse node is also
    /// a node of `self`.
    pub fn coarsened(&self) -> Result<Self> {
        if self.intervals < 2 || !self.intervals.is_multiple_of(2) {
            return Err(domain(format!("cannot halve {} intervals", self.intervals)));
        }
        Self::with_intervals(self.s0, self.half_width(), self.intervals / 2)
    }

    pub fn to_csv(&self) -> String {
        csv(
            &["strike", "weight", "kind"],
            self.nodes
                .iter()
                .map(|n| vec![fmt_f64(n.strike), fmt_f64(n.weight), n.kind.to_string()]),
        )
    }
}

/// Builds a strip for an entry price `s0`, refining until the Richardson
/// estimate of the payoff-assembly error is below `target_tol`. The error is
/// measured against `1 + |payoff|`: far out on a wide grid the payoff grows
/// like `S / 2 s0` and an absolute target would sit below `f64` resolution.
pub fn build_strike_grid(s0: f64, sigma: f64, tau: f64, target_tol: f64) -> Result<StrikeGrid> {
    ensure_positive("s0", s0)?;
    ensure_non_negative("sigma", sigma)?;
    ensure_non_negative("tau", tau)?;
    if !(target_tol > 0.0 && target_tol <= 1e-2) {
        return Err(domain(format!("target_tol must lie in (0, 1e-2], got {target_tol}")));
    }
    let m = log_half_width(sigma, tau);
    let probes: Vec<f64> = (0..PROBE_COUNT)
        .map(|i| {
            let x = (i as f64 + PROBE_JITTER) / PROBE_COUNT as f64;
            s0 * ((2.0 * x - 1.0) * m).exp()
        })
        .collect();
    let mut coarse = StrikeGrid::with_intervals(s0, m, MIN_INTERVALS)?;
    let mut coarse_vals: Vec<f64> = probes.iter().map(|&s| coarse.assemble(s)).collect();
    while coarse.intervals < MAX_INTERVALS {
        let mut fine = StrikeGrid::with_intervals(s0, m, coarse.intervals * 2)?;
        let fine_vals: Vec<f64> = probes.iter().map(|&s| fine.assemble(s)).collect();
        let est = coarse_vals
            .iter()
            .zip(&fine_vals)
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        if est <= target_tol {
            fine.error_estimate = est;
            return Ok(fine);
        }
        coarse = fine;
        coarse_vals = fine_vals;
    }
    Err(domain(format!(
        "strike grid did not reach tolerance {target_tol} within {MAX_INTERVALS} intervals"
    )))
}

/// A value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// `int_S^a (K - S) / K^{3/2} dK` for `S < a`, equivalently the call-side
/// integral for `S > a`: `2 (sqrt(a) - sqrt(S))^2 / sqrt(a)`.
fn truncated_strip_payoff(s: f64, cut: f64) -> f64 {
    let d = cut.sqrt() - s.sqrt();
    2.0 * d * d / cut.sqrt()
}

/// Reconstructs the loss payoff at `s_terminal` from the strip's intrinsic
/// values. The returned error adds the exact contribution of strikes outside
/// the grid, which is zero inside `[lower_cut, upper_cut]`.
pub fn replicate_il_payoff(grid: &StrikeGrid, s_terminal: f64) -> Result<Estimate> {
    ensure_positive("s_terminal", s_terminal)?;
    let (h0, dh0) = il_anchor_terms(grid.s0)?;
    let value = h0 + dh0 * (s_terminal - grid.s0) + grid.assemble(s_terminal);
    let tail = if s_terminal < grid.lower_cut {
        truncated_strip_payoff(s_terminal, grid.lower_cut)
    } else if s_terminal > grid.upper_cut {
        truncated_strip_payoff(s_terminal, grid.upper_cut)
    } else {
        0.0
    } / (4.0 * grid.s0.sqrt());
    let est = if grid.error_estimate.is_nan() { 0.0 } else { grid.error_estimate * (1.0 + value.abs()) };
    Ok(Estimate { value, error_estimate: est + tail })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanillaQuote {
    pub strike: f64,
    pub tau: f64,
    pub kind: OptionKind,
    /// Token y per unit of token x notional.
    pub premium: f64,
}

/// Lognormal vanilla on the forward `s_t e^{r_f tau}`, discounted at `r_f`.
pub fn vanilla_price(
    strike: f64,
    s_t: f64,
    market: &MarketParams,
    tau: f64,
    kind: OptionKind,
) -> Result<VanillaQuote> {
    ensure_positive("strike", strike)?;
    let fwd = forward_price(s_t, market, tau)?;
    let disc = decay_factors(market, tau)?.gamma_disc;
    let vol = market.sigma * tau.sqrt();
    let undiscounted = if vol == 0.0 {
        kind.intrinsic(strike, fwd)
    } else {
        let d1 = ((fwd / strike).ln() + 0.5 * vol * vol) / vol;
        let d2 = d1 - vol;
        match kind {
            OptionKind::Call => fwd * normal::cdf(d1) - strike * normal::cdf(d2),
            OptionKind::Put => strike * normal::cdf(-d2) - fwd * normal::cdf(-d1),
        }
    };
    Ok(VanillaQuote { strike, tau, kind, premium: disc * undiscounted.max(0.0) })
}

/// Expected discounted contribution of the strikes cut off by the grid,
/// per unit notional.
fn strip_tail(grid: &StrikeGrid, s_t: f64, market: &MarketParams, tau: f64) -> Result<f64> {
    let disc = decay_factors(market, tau)?.gamma_disc;
    let vol = market.sigma * tau.sqrt();
    let mu = s_t.ln() + (market.r_f() - 0.5 * market.sigma * market.sigma) * tau;
    // E[S^p 1{S < a}] and E[S^p 1{S > a}] for ln S ~ N(mu, vol^2)
    let partial = |p: f64, a: f64, below: bool| -> f64 {
        let full = (p * mu + 0.5 * p * p * vol * vol).exp();
        if vol == 0.0 {
            let s = mu.exp();
            return if (s < a) == below { full } else { 0.0 };
        }
        let d = (a.ln() - mu - p * vol * vol) / vol;
        full * normal::cdf(if below { d } else { -d })
    };
    let tail = |a: f64, below: bool| {
        2.0 * a.sqrt() * partial(0.0, a, below) + 2.0 / a.sqrt() * partial(1.0, a, below)
            - 4.0 * partial(0.5, a, below)
    };
    let lower = tail(grid.lower_cut, true).max(0.0);
    let upper = tail(grid.upper_cut, false).max(0.0);
    Ok(disc * (lower + upper) / (4.0 * grid.s0.sqrt()))
}

fn strip_value(grid: &StrikeGrid, s_t: f64, market: &MarketParams, tau: f64) -> Result<f64> {
    let terms = grid
        .nodes
        .iter()
        .map(|n| vanilla_price(n.strike, s_t, market, tau, n.kind).map(|q| n.weight * q.premium))
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Prices an IG contract as the cost of its replicating strip.
///
/// The error estimate is the Richardson difference against the grid with
/// half the intervals plus the expected value of the truncated strikes.
pub fn price_ig_via_strip(
    contract: &IgContract,
    s_t: f64,
    market: &MarketParams,
    grid: &StrikeGrid,
) -> Result<Estimate> {
    contract.validate()?;
    ensure_positive("s_t", s_t)?;
    let k = contract.strike_k;
    if (grid.s0 - k).abs() > 1e-12 * k {
        return Err(Error::Precondition(format!(
            "strike grid is centred on {} but the contract strike is {k}",
            grid.s0
        )));
    }
    let tau = contract.tau();
    let v0 = contract.notional_v0;
    let fine = strip_value(grid, s_t, market, tau)?;
    let richardson = if grid.intervals >= 2 && grid.intervals.is_multiple_of(2) {
        (fine - strip_value(&grid.coarsened()?, s_t, market, tau)?).abs()
    } else {
        f64::INFINITY
    };
    let tail = strip_tail(grid, s_t, market, tau)?;
    Ok(Estimate { value: v0 * fine, error_estimate: v0 * (richardson + tail) })
}

/// Fixed-order pairwise summation; the result depends only on the order of
/// `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}
