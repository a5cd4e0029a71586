//! Closed-form risk-neutral prices.
//!
//! Under the pricing measure the price of token x in token y follows a GBM
//! with drift `r_f = r_x - r_y` and volatility `sigma`, so
//! `S_T = S_t * exp((r_f - sigma^2/2) tau + sigma sqrt(tau) Z)`. Every payoff
//! in this crate depends on `S_T` only through `S_T` and `sqrt(S_T)`, whose
//! expectations are elementary.

use serde::{Deserialize, Serialize};

use crate::amm::{FeeParams, PoolPosition};
use crate::error::{domain, ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Model inputs shared by every pricer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Lending rate of token x, decimal per year.
    pub r_x: f64,
    /// Lending rate of token y, decimal per year.
    pub r_y: f64,
    /// Lognormal volatility of the x/y price, per sqrt(year).
    pub sigma: f64,
    /// Pool fee APY, decimal per year.
    pub phi: f64,
}

impl MarketParams {
    pub fn new(r_x: f64, r_y: f64, sigma: f64, phi: f64) -> Result<Self> {
        ensure_finite("r_x", r_x)?;
        ensure_finite("r_y", r_y)?;
        ensure_non_negative("sigma", sigma)?;
        ensure_non_negative("phi", phi)?;
        if !(r_x - r_y).is_finite() {
            return Err(domain("r_x - r_y overflows"));
        }
        Ok(Self { r_x, r_y, sigma, phi })
    }

    /// Builds the market from the rate differential alone (`r_x = r_f`,
    /// `r_y = 0`); prices only ever see the difference.
    pub fn from_rate_diff(r_f: f64, sigma: f64, phi: f64) -> Result<Self> {
        Self::new(r_f, 0.0, sigma, phi)
    }

    pub fn r_f(&self) -> f64 {
        self.r_x - self.r_y
    }

    /// Same market with the rate differential moved to `r_f`, keeping `r_y`.
    pub fn with_rate_diff(&self, r_f: f64) -> Self {
        Self { r_x: r_f + self.r_y, ..*self }
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        Self { sigma, ..*self }
    }

    pub fn fees(&self) -> FeeParams {
        FeeParams { phi: self.phi }
    }

    /// `r_f/2 + sigma^2/8`, the decay rate of the square-root payoff.
    pub fn sqrt_decay_rate(&self) -> f64 {
        0.5 * self.r_f() + self.sigma * self.sigma / 8.0
    }
}

/// A priced LP scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpState {
    pub position: PoolPosition,
    pub market: MarketParams,
    pub s_t: f64,
    /// Current time in years since the deposit.
    pub t: f64,
    /// Unlock time in years.
    pub maturity: f64,
    pub locked: bool,
}

impl LpState {
    pub fn new(
        position: PoolPosition,
        market: MarketParams,
        s_t: f64,
        t: f64,
        maturity: f64,
        locked: bool,
    ) -> Result<Self> {
        let state = Self { position, market, s_t, t, maturity, locked };
        state.validate()?;
        Ok(state)
    }

    pub fn tau(&self) -> f64 {
        self.maturity - self.t
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("s_t", self.s_t)?;
        ensure_finite("t", self.t)?;
        ensure_finite("maturity", self.maturity)?;
        ensure_non_negative("tau = maturity - t", self.tau())?;
        if !self.locked {
            ensure_non_negative("t", self.t)?;
        }
        Ok(())
    }
}

/// Terms of an Impermanent Gain contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgContract {
    pub notional_v0: f64,
    pub strike_k: f64,
    pub maturity: f64,
    /// Current time in years.
    pub t: f64,
}

impl IgContract {
    pub fn new(notional_v0: f64, strike_k: f64, maturity: f64, t: f64) -> Result<Self> {
        let c = Self { notional_v0, strike_k, maturity, t };
        c.validate()?;
        Ok(c)
    }

    pub fn tau(&self) -> f64 {
        self.maturity - self.t
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("notional_v0", self.notional_v0)?;
        ensure_positive("strike_k", self.strike_k)?;
        ensure_finite("t", self.t)?;
        ensure_finite("maturity", self.maturity)?;
        ensure_non_negative("tau = maturity - t", self.tau())
    }
}

/// The two exponentials every locked/IG formula is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFactors {
    /// `exp(-tau (r_f/2 + sigma^2/8))`
    pub beta: f64,
    /// `exp(-r_f tau)`
    pub gamma_disc: f64,
}

pub fn decay_factors(market: &MarketParams, tau: f64) -> Result<DecayFactors> {
    ensure_non_negative("tau", tau)?;
    Ok(DecayFactors {
        beta: (-tau * market.sqrt_decay_rate()).exp(),
        gamma_disc: (-market.r_f() * tau).exp(),
    })
}

/// `E[sqrt(S_T)] = sqrt(S_t) exp((r_f/2 - sigma^2/8) tau)`.
pub fn expected_sqrt_price(s_t: f64, market: &MarketParams, tau: f64) -> Result<f64> {
    ensure_positive("s_t", s_t)?;
    ensure_non_negative("tau", tau)?;
    let drift = 0.5 * market.r_f() - market.sigma * market.sigma / 8.0;
    Ok(s_t.sqrt() * (drift * tau).exp())
}

/// `E[S_T] = S_t exp(r_f tau)`.
pub fn forward_price(s_t: f64, market: &MarketParams, tau: f64) -> Result<f64> {
    ensure_positive("s_t", s_t)?;
    ensure_non_negative("tau", tau)?;
    Ok(s_t * (market.r_f() * tau).exp())
}

/// An unlocked position is worth its reserves plus accrued fees.
pub fn price_unlocked_lp(state: &LpState) -> Result<f64> {
    if state.locked {
        return Err(domain("price_unlocked_lp called with a locked state"));
    }
    state.validate()?;
    state
        .position
        .lp_value(state.s_t, state.t, state.market.fees())
}

/// Fair value of a position locked until `maturity`:
/// `V0 (sqrt(S_t/S_0) beta + phi T gamma)`.
///
/// The fee leg credits the full-horizon fees `V0 phi T`, discounted.
pub fn price_locked_lp(state: &LpState) -> Result<f64> {
    if !state.locked {
        return Err(domain("price_locked_lp called with an unlocked state"));
    }
    state.validate()?;
    let f = decay_factors(&state.market, state.tau())?;
    let pos = &state.position;
    let sqrt_ratio = (state.s_t / pos.entry_price_s0).sqrt();
    Ok(pos.notional_v0
        * (sqrt_ratio * f.beta + state.market.phi * state.maturity * f.gamma_disc))
}

/// Dispatches on the `locked` flag.
pub fn price_lp(state: &LpState) -> Result<f64> {
    if state.locked {
        price_locked_lp(state)
    } else {
        price_unlocked_lp(state)
    }
}

/// Impermanent Gain premium: `V0 (gamma/2 + S_t/(2K) - sqrt(S_t/K) beta)`.
pub fn price_ig(contract: &IgContract, s_t: f64, market: &MarketParams) -> Result<f64> {
    contract.validate()?;
    ensure_positive("s_t", s_t)?;
    let f = decay_factors(market, contract.tau())?;
    let m = s_t / contract.strike_k;
    Ok(contract.notional_v0 * (0.5 * f.gamma_disc + 0.5 * m - m.sqrt() * f.beta))
}

/// Flat parameter set covering every pricer, used by the finite-difference
/// and Monte Carlo oracles and by the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingPoint {
    pub notional_v0: f64,
    /// LP entry price.
    pub entry_price_s0: f64,
    /// IG strike.
    pub strike_k: f64,
    pub spot: f64,
    pub t: f64,
    pub maturity: f64,
    pub market: MarketParams,
}

impl PricingPoint {
    pub fn tau(&self) -> f64 {
        self.maturity - self.t
    }

    pub fn position(&self) -> Result<PoolPosition> {
        PoolPosition::from_deposit(self.notional_v0, self.entry_price_s0)
    }

    pub fn lp_state(&self, locked: bool) -> Result<LpState> {
        LpState::new(self.position()?, self.market, self.spot, self.t, self.maturity, locked)
    }

    pub fn ig_contract(&self) -> Result<IgContract> {
        IgContract::new(self.notional_v0, self.strike_k, self.maturity, self.t)
    }
}

/// Closed-form pricers addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    UnlockedLp,
    LockedLp,
    ImpermanentGain,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::UnlockedLp, Strategy::LockedLp, Strategy::ImpermanentGain];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::UnlockedLp => "unlocked-lp",
            Strategy::LockedLp => "locked-lp",
            Strategy::ImpermanentGain => "ig",
        }
    }

    pub fn price(&self, point: &PricingPoint) -> Result<f64> {
        match self {
            Strategy::UnlockedLp => price_unlocked_lp(&point.lp_state(false)?),
            Strategy::LockedLp => price_locked_lp(&point.lp_state(true)?),
            Strategy::ImpermanentGain => price_ig(&point.ig_contract()?, point.spot, &point.market),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}` (expected unlocked-lp, locked-lp or ig)")))
    }
}
