//! The oracle suite: every closed form checked against something computed
//! independently of it.
//!
//! * moments: Monte Carlo `E[sqrt(S_T)]` and `E[S_T]` on five (sigma, tau)
//!   sets plus the scenario's own;
//! * prices: Monte Carlo discounted payoffs of the locked LP, the IG and an
//!   at-the-money vanilla call;
//! * greeks: central finite differences of all three pricers;
//! * replication: the option strip's payoff and IG price.
//!
//! Monte Carlo rows pass at `|z| <= 3`. Deterministic rows report the
//! allowed absolute deviation as `std_error`, so they pass at `|z| <= 1`.

use std::fmt::Write as _;

use crate::analytics::{expected_sqrt_price, forward_price, MarketParams, PricingPoint, Strategy};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::fd::{fd_greek, Greek};
use crate::greeks::{greeks_ig, greeks_lp, GreeksReport};
use crate::mc::{mc_price, McConfig, McPayoff};
use crate::payoff::impermanent_loss;
use crate::replication::{build_strike_grid, price_ig_via_strip, replicate_il_payoff, vanilla_price, OptionKind};
use crate::report::fmt_f64;

pub const MC_Z_LIMIT: f64 = 3.0;
pub const FD_TOL: f64 = 1e-6;
pub const FD_TOL_SECOND_ORDER: f64 = 1e-5;
pub const STRIP_PRICE_TOL: f64 = 1e-2;
pub const STRIP_PAYOFF_TOL: f64 = 1e-4;

/// `(sigma, tau)` sets for the moment checks, on top of the scenario's own.
pub const MOMENT_SETS: [(f64, f64); 5] = [(0.2, 0.25), (0.7, 7.0 / 365.0), (0.7, 1.0), (1.4, 0.5), (2.0, 2.0)];

/// Closed form under test for `E[sqrt(S_T)]`; swappable so a deliberately
/// wrong formula can prove the suite notices.
pub type SqrtMomentFn = fn(f64, &MarketParams, f64) -> Result<f64>;

#[derive(Debug, Clone, Copy)]
pub struct ClosedForms {
    pub expected_sqrt_price: SqrtMomentFn,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self { expected_sqrt_price }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub closed_form: f64,
    /// Monte Carlo mean, or the independent value for deterministic checks.
    pub mc_mean: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub pass: bool,
}

impl Check {
    fn mc(name: String, closed_form: f64, mean: f64, std_error: f64) -> Self {
        let z = z(mean - closed_form, std_error);
        Check { name, closed_form, mc_mean: mean, std_error, z_score: z, pass: z.abs() <= MC_Z_LIMIT }
    }

    fn exact(name: String, closed_form: f64, value: f64, allowed: f64) -> Self {
        let z = z(value - closed_form, allowed);
        Check { name, closed_form, mc_mean: value, std_error: allowed, z_score: z, pass: z.abs() <= 1.0 }
    }
}

fn z(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY.copysign(diff)
    } else {
        diff / scale
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Finite-difference checks that could not be run, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,closed_form,mc_mean,std_error,z_score,pass\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.name,
                fmt_f64(c.closed_form),
                fmt_f64(c.mc_mean),
                fmt_f64(c.std_error),
                fmt_f64(c.z_score),
                c.pass
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {} (z = {:.3})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.z_score);
        }
        for (name, why) in &self.skipped {
            let _ = writeln!(out, "SKIP {name}: {why}");
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed, {} skipped", self.checks.len(), failed, self.skipped.len());
        out
    }
}

/// Moment checks for one market and horizon.
pub fn moment_checks(
    label: &str,
    point: &PricingPoint,
    cfg: &McConfig,
    forms: &ClosedForms,
) -> Result<Vec<Check>> {
    let tau = point.tau();
    let sq = mc_price(McPayoff::SqrtMoment, point, cfg)?;
    let fw = mc_price(McPayoff::Forward, point, cfg)?;
    Ok(vec![
        Check::mc(
            format!("sqrt_moment[{label}]"),
            (forms.expected_sqrt_price)(point.spot, &point.market, tau)?,
            sq.mean,
            sq.std_error,
        ),
        Check::mc(format!("forward[{label}]"), forward_price(point.spot, &point.market, tau)?, fw.mean, fw.std_error),
    ])
}

fn pick(g: &GreeksReport, which: Greek) -> f64 {
    match which {
        Greek::Delta => g.delta,
        Greek::Gamma => g.gamma,
        Greek::Vega => g.vega,
        Greek::Theta => g.theta,
        Greek::Rho => g.rho,
    }
}

/// Closed-form greeks of `strategy` at `point`.
pub fn closed_form_greeks(strategy: Strategy, point: &PricingPoint) -> Result<GreeksReport> {
    match strategy {
        Strategy::UnlockedLp => greeks_lp(&point.lp_state(false)?),
        Strategy::LockedLp => greeks_lp(&point.lp_state(true)?),
        Strategy::ImpermanentGain => greeks_ig(&point.ig_contract()?, point.spot, &point.market),
    }
}

/// Finite-difference checks of all seven greeks of `strategy`. The 1%
/// variants are the same difference quotient rescaled.
pub fn fd_checks(strategy: Strategy, point: &PricingPoint, report: &mut VerifyReport) -> Result<()> {
    let cf = closed_form_greeks(strategy, point)?;
    let step = point.spot / 100.0;
    for which in Greek::ALL {
        let name = format!("fd_{}[{}]", which.name(), strategy.name());
        let fd = match fd_greek(strategy, point, which, which.default_bump()) {
            Ok(v) => v,
            Err(Error::StepCollapse(why)) => {
                report.skipped.push((name, why));
                continue;
            }
            Err(e) => return Err(e),
        };
        let tol = if which == Greek::Gamma { FD_TOL_SECOND_ORDER } else { FD_TOL };
        let c = pick(&cf, which);
        report.checks.push(Check::exact(name, c, fd, tol * c.abs()));
        let pct = match which {
            Greek::Delta => Some(("delta_1pct", cf.delta_pct, fd * step)),
            Greek::Gamma => Some(("gamma_1pct", cf.gamma_pct, fd * step * step)),
            _ => None,
        };
        if let Some((label, c, v)) = pct {
            report.checks.push(Check::exact(format!("fd_{label}[{}]", strategy.name()), c, v, tol * c.abs()));
        }
    }
    Ok(())
}

/// Strip reconstruction of the payoff at 21 log-spaced terminal prices in
/// `[0.1, 10] * k` (worst deviation) and the strip price of the IG.
pub fn replication_checks(point: &PricingPoint, target_tol: f64) -> Result<Vec<Check>> {
    let k = point.strike_k;
    let tau = point.tau();
    let grid = build_strike_grid(k, point.market.sigma, tau, target_tol)?;
    let mut worst: f64 = 0.0;
    for i in 0..21 {
        let s = k * 10f64.powf(-1.0 + i as f64 / 10.0);
        let rep = replicate_il_payoff(&grid, s)?;
        worst = worst.max((rep.value - impermanent_loss(s / k - 1.0)?).abs());
    }
    let contract = point.ig_contract()?;
    let strip = price_ig_via_strip(&contract, point.spot, &point.market, &grid)?;
    let closed = Strategy::ImpermanentGain.price(point)?;
    Ok(vec![
        Check::exact("strip_payoff_max_error".into(), 0.0, worst, STRIP_PAYOFF_TOL),
        Check::exact("strip_ig_price".into(), closed, strip.value, STRIP_PRICE_TOL * closed.abs()),
    ])
}

/// Runs the whole suite on a scenario with an `mc` block.
pub fn verify(scenario: &Scenario, forms: &ClosedForms) -> Result<VerifyReport> {
    let cfg = scenario
        .mc
        .ok_or_else(|| Error::Config("mc: verification needs an mc block (n_paths, seed)".into()))?;
    let mut report = VerifyReport::default();
    let lp = scenario.point(scenario.lp_strategy());
    let ig = scenario.point(Strategy::ImpermanentGain);

    report.checks.extend(moment_checks("scenario", &lp, &cfg, forms)?);
    for (sigma, tau) in MOMENT_SETS {
        let p = PricingPoint {
            t: 0.0,
            maturity: tau,
            market: lp.market.with_sigma(sigma),
            ..lp
        };
        report.checks.extend(moment_checks(&format!("sigma={sigma},tau={tau:.6}"), &p, &cfg, forms)?);
    }

    if scenario.locked {
        let est = mc_price(McPayoff::LockedLp, &lp, &cfg)?;
        report.checks.push(Check::mc("price[locked-lp]".into(), Strategy::LockedLp.price(&lp)?, est.mean, est.std_error));
    }
    let est = mc_price(McPayoff::Ig, &ig, &cfg)?;
    report.checks.push(Check::mc("price[ig]".into(), Strategy::ImpermanentGain.price(&ig)?, est.mean, est.std_error));
    let k = ig.strike_k;
    let est = mc_price(McPayoff::VanillaCall(k), &ig, &cfg)?;
    let call = vanilla_price(k, ig.spot, &ig.market, ig.tau(), OptionKind::Call)?.premium;
    report.checks.push(Check::mc("price[vanilla_call]".into(), call, est.mean, est.std_error));

    if scenario.t >= 0.0 {
        fd_checks(Strategy::UnlockedLp, &lp, &mut report)?;
    }
    fd_checks(Strategy::LockedLp, &lp, &mut report)?;
    fd_checks(Strategy::ImpermanentGain, &ig, &mut report)?;

    report.checks.extend(replication_checks(&ig, scenario.target_tol())?);
    Ok(report)
}
