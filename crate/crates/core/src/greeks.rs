//! Closed-form sensitivities of the three strategies and of the locked LP +
//! IG hedge.
//!
//! Conventions: theta is `dP/dt` with the maturity held fixed (so it is
//! `-dP/dtau`), rho differentiates in `r_f = r_x - r_y`. All values are raw;
//! the per-1% and per-day scalings live in [`GreeksReport::display`].

use std::fmt::Write as _;

use crate::analytics::{decay_factors, DecayFactors, IgContract, LpState, MarketParams};
use crate::error::{ensure_positive, Error, Result};
use crate::report::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreeksReport {
    pub delta: f64,
    /// `delta * s_t / 100`
    pub delta_pct: f64,
    pub gamma: f64,
    /// `gamma * (s_t / 100)^2`
    pub gamma_pct: f64,
    pub vega: f64,
    pub theta: f64,
    pub rho: f64,
}

/// Presentation scalings of a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplayGreeks {
    pub delta_pct: f64,
    pub gamma_pct: f64,
    /// Per 1 vol point, `vega / 100`.
    pub vega_pct: f64,
    /// Per calendar day, `theta / 365`.
    pub theta_daily: f64,
    /// Per 1% of `r_f`, `rho / 100`.
    pub rho_pct: f64,
}

impl GreeksReport {
    fn with_scalings(s_t: f64, delta: f64, gamma: f64, vega: f64, theta: f64, rho: f64) -> Self {
        let step = s_t / 100.0;
        Self {
            delta,
            delta_pct: delta * step,
            gamma,
            gamma_pct: gamma * step * step,
            vega,
            theta,
            rho,
        }
    }

    pub fn display(&self) -> DisplayGreeks {
        DisplayGreeks {
            delta_pct: self.delta_pct,
            gamma_pct: self.gamma_pct,
            vega_pct: self.vega / 100.0,
            theta_daily: self.theta / 365.0,
            rho_pct: self.rho / 100.0,
        }
    }

    /// `(name, raw, display-scaled)` rows in table order.
    pub fn rows(&self) -> [(&'static str, f64, f64); 7] {
        let d = self.display();
        [
            ("delta", self.delta, self.delta),
            ("delta_1pct", self.delta_pct, d.delta_pct),
            ("gamma", self.gamma, self.gamma),
            ("gamma_1pct", self.gamma_pct, d.gamma_pct),
            ("vega", self.vega, d.vega_pct),
            ("theta", self.theta, d.theta_daily),
            ("rho", self.rho, d.rho_pct),
        ]
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            delta: self.delta + other.delta,
            delta_pct: self.delta_pct + other.delta_pct,
            gamma: self.gamma + other.gamma,
            gamma_pct: self.gamma_pct + other.gamma_pct,
            vega: self.vega + other.vega,
            theta: self.theta + other.theta,
            rho: self.rho + other.rho,
        }
    }
}

pub fn greeks_unlocked_lp(state: &LpState) -> Result<GreeksReport> {
    if state.locked {
        return Err(Error::Domain("greeks_unlocked_lp called with a locked state".into()));
    }
    state.validate()?;
    let pos = &state.position;
    let (v0, s0, s) = (pos.notional_v0, pos.entry_price_s0, state.s_t);
    let delta = v0 / (2.0 * (s0 * s).sqrt());
    let gamma = -v0 / (4.0 * s0.sqrt() * s.powf(1.5));
    Ok(GreeksReport::with_scalings(s, delta, gamma, 0.0, state.market.phi * v0, 0.0))
}

pub fn greeks_locked_lp(state: &LpState) -> Result<GreeksReport> {
    if !state.locked {
        return Err(Error::Domain("greeks_locked_lp called with an unlocked state".into()));
    }
    state.validate()?;
    let tau = state.tau();
    let DecayFactors { beta, gamma_disc } = decay_factors(&state.market, tau)?;
    let pos = &state.position;
    let (v0, s0, s) = (pos.notional_v0, pos.entry_price_s0, state.s_t);
    let m = &state.market;
    let sqrt_ratio = (s / s0).sqrt();
    let fee_leg = m.phi * state.maturity * gamma_disc;

    let delta = v0 * beta / (2.0 * (s0 * s).sqrt());
    let gamma = -v0 * beta / (4.0 * s0.sqrt() * s.powf(1.5));
    let vega = -v0 * (m.sigma * tau / 4.0) * sqrt_ratio * beta;
    let theta = v0 * (sqrt_ratio * m.sqrt_decay_rate() * beta + m.r_f() * fee_leg);
    let rho = -v0 * (0.5 * tau * sqrt_ratio * beta + tau * fee_leg);
    Ok(GreeksReport::with_scalings(s, delta, gamma, vega, theta, rho))
}

pub fn greeks_lp(state: &LpState) -> Result<GreeksReport> {
    if state.locked {
        greeks_locked_lp(state)
    } else {
        greeks_unlocked_lp(state)
    }
}

pub fn greeks_ig(contract: &IgContract, s_t: f64, market: &MarketParams) -> Result<GreeksReport> {
    contract.validate()?;
    ensure_positive("s_t", s_t)?;
    let tau = contract.tau();
    let DecayFactors { beta, gamma_disc } = decay_factors(market, tau)?;
    let (v0, k, s) = (contract.notional_v0, contract.strike_k, s_t);
    let sqrt_m = (s / k).sqrt();

    let delta = v0 * (1.0 / (2.0 * k) - beta / (2.0 * (k * s).sqrt()));
    let gamma = v0 * beta / (4.0 * k.sqrt() * s.powf(1.5));
    let vega = v0 * (market.sigma * tau / 4.0) * sqrt_m * beta;
    let theta = v0 * (0.5 * market.r_f() * gamma_disc - sqrt_m * market.sqrt_decay_rate() * beta);
    let rho = 0.5 * v0 * tau * (sqrt_m * beta - gamma_disc);
    Ok(GreeksReport::with_scalings(s, delta, gamma, vega, theta, rho))
}

/// Greeks of a locked LP hedged with an IG struck at the LP entry price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgedGreeks {
    pub lp: GreeksReport,
    pub ig: GreeksReport,
    pub total: GreeksReport,
    /// `V0 / (2K)`
    pub delta_pred: f64,
    /// `V0 r_f (1/2 + phi T) gamma`
    pub theta_pred: f64,
    /// `-V0 tau (1/2 + phi T) gamma`
    pub rho_pred: f64,
}

impl HedgedGreeks {
    /// Gamma sum relative to the larger leg.
    pub fn gamma_residual(&self) -> f64 {
        relative_residual(self.total.gamma, self.lp.gamma, self.ig.gamma)
    }

    pub fn vega_residual(&self) -> f64 {
        relative_residual(self.total.vega, self.lp.vega, self.ig.vega)
    }

    /// True when gamma and vega cancel to `tol` relative to the leg sizes.
    pub fn is_neutral(&self, tol: f64) -> bool {
        self.gamma_residual() <= tol && self.vega_residual() <= tol
    }
}

fn relative_residual(sum: f64, a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        sum.abs()
    } else {
        sum.abs() / scale
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub fn hedge_report(lp: &LpState, ig: &IgContract) -> Result<HedgedGreeks> {
    if !lp.locked {
        return Err(Error::Precondition("the hedged LP position must be locked".into()));
    }
    let pos = &lp.position;
    if !same(ig.strike_k, pos.entry_price_s0) {
        return Err(Error::Precondition(format!(
            "IG strike {} differs from LP entry price {}",
            ig.strike_k, pos.entry_price_s0
        )));
    }
    if !same(ig.notional_v0, pos.notional_v0) {
        return Err(Error::Precondition(format!(
            "IG notional {} differs from LP notional {}",
            ig.notional_v0, pos.notional_v0
        )));
    }
    if !same(ig.maturity, lp.maturity) || ig.t != lp.t {
        return Err(Error::Precondition(format!(
            "IG maturity {} (t = {}) differs from LP lock {} (t = {})",
            ig.maturity, ig.t, lp.maturity, lp.t
        )));
    }
    let lp_greeks = greeks_locked_lp(lp)?;
    let ig_greeks = greeks_ig(ig, lp.s_t, &lp.market)?;
    let f = decay_factors(&lp.market, lp.tau())?;
    let v0 = pos.notional_v0;
    let carry = (0.5 + lp.market.phi * lp.maturity) * f.gamma_disc;
    Ok(HedgedGreeks {
        lp: lp_greeks,
        ig: ig_greeks,
        total: lp_greeks.add(&ig_greeks),
        delta_pred: v0 / (2.0 * ig.strike_k),
        theta_pred: v0 * lp.market.r_f() * carry,
        rho_pred: -v0 * lp.tau() * carry,
    })
}

/// The three-strategy comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct GreeksTable {
    pub unlocked: GreeksReport,
    pub locked: GreeksReport,
    pub ig: GreeksReport,
    pub locked_factors: DecayFactors,
    pub ig_factors: DecayFactors,
}

const TABLE_ROWS: [&str; 7] = ["Delta", "Delta 1%", "Gamma", "Gamma 1%", "Vega", "Theta", "Rho"];

impl GreeksTable {
    fn values(r: &GreeksReport) -> [f64; 7] {
        [r.delta, r.delta_pct, r.gamma, r.gamma_pct, r.vega, r.theta, r.rho]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:>22} {:>22} {:>22}", "Greek", "Unlocked LP", "Locked LP", "Impermanent Gain");
        let cols = [Self::values(&self.unlocked), Self::values(&self.locked), Self::values(&self.ig)];
        for (i, name) in TABLE_ROWS.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:<10} {:>22.10e} {:>22.10e} {:>22.10e}",
                name, cols[0][i], cols[1][i], cols[2][i]
            );
        }
        let _ = writeln!(
            out,
            "beta (locked) = {:.12}  gamma (locked) = {:.12}",
            self.locked_factors.beta, self.locked_factors.gamma_disc
        );
        let _ = writeln!(
            out,
            "beta (IG)     = {:.12}  gamma (IG)     = {:.12}",
            self.ig_factors.beta, self.ig_factors.gamma_disc
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("greek,unlocked_lp,locked_lp,impermanent_gain\n");
        let cols = [Self::values(&self.unlocked), Self::values(&self.locked), Self::values(&self.ig)];
        for (i, name) in ["delta", "delta_1pct", "gamma", "gamma_1pct", "vega", "theta", "rho"].iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", name, fmt_f64(cols[0][i]), fmt_f64(cols[1][i]), fmt_f64(cols[2][i]));
        }
        let _ = writeln!(out, "beta,,{},{}", fmt_f64(self.locked_factors.beta), fmt_f64(self.ig_factors.beta));
        let _ = writeln!(
            out,
            "gamma_disc,,{},{}",
            fmt_f64(self.locked_factors.gamma_disc),
            fmt_f64(self.ig_factors.gamma_disc)
        );
        out
    }
}

/// Builds the comparison table. The market and spot given here override the
/// ones stored in the LP states.
pub fn greeks_table(
    lp_unlocked: &LpState,
    lp_locked: &LpState,
    ig: &IgContract,
    market: &MarketParams,
    s_t: f64,
) -> Result<GreeksTable> {
    let unlocked = LpState { market: *market, s_t, locked: false, ..*lp_unlocked };
    let locked = LpState { market: *market, s_t, locked: true, ..*lp_locked };
    Ok(GreeksTable {
        unlocked: greeks_unlocked_lp(&unlocked)?,
        locked: greeks_locked_lp(&locked)?,
        ig: greeks_ig(ig, s_t, market)?,
        locked_factors: decay_factors(market, locked.tau())?,
        ig_factors: decay_factors(market, ig.tau())?,
    })
}
