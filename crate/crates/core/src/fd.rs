//! Central finite differences of the closed-form pricers, used to check the
//! closed-form greeks.
//!
//! Steps are relative: `h = bump * s_t` for the spot greeks and
//! `h = bump * max(|x|, 1)` for sigma, t and r_f, so a zero rate or a
//! just-started position still gets a usable step.

use std::fmt;
use std::str::FromStr;

use crate::analytics::{PricingPoint, Strategy};
use crate::error::{domain, Error, Result};

pub const MIN_BUMP: f64 = 1e-8;
pub const MAX_BUMP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Greek {
    Delta,
    Gamma,
    Vega,
    Theta,
    Rho,
}

impl Greek {
    pub const ALL: [Greek; 5] = [Greek::Delta, Greek::Gamma, Greek::Vega, Greek::Theta, Greek::Rho];

    pub fn name(&self) -> &'static str {
        match self {
            Greek::Delta => "delta",
            Greek::Gamma => "gamma",
            Greek::Vega => "vega",
            Greek::Theta => "theta",
            Greek::Rho => "rho",
        }
    }

    /// Step that balances truncation against rounding for prices of order
    /// `V0` in double precision.
    pub fn default_bump(&self) -> f64 {
        match self {
            Greek::Delta | Greek::Vega | Greek::Theta => 1e-5,
            Greek::Gamma => 1e-4,
            Greek::Rho => 1e-4,
        }
    }
}

impl fmt::Display for Greek {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Greek {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Greek::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown greek `{s}`")))
    }
}

fn collapse(msg: String) -> Error {
    Error::StepCollapse(msg)
}

/// Central difference of `strategy`'s price in the input behind `which`
/// (second central difference for gamma). Theta moves `t` with the
/// maturity fixed; rho moves `r_f` with `r_y` fixed.
pub fn fd_greek(strategy: Strategy, point: &PricingPoint, which: Greek, bump: f64) -> Result<f64> {
    if !(MIN_BUMP..=MAX_BUMP).contains(&bump) {
        return Err(domain(format!("bump must lie in [{MIN_BUMP}, {MAX_BUMP}], got {bump}")));
    }
    // the unbumped scenario must be valid on its own
    let mid = strategy.price(point)?;
    let price = |p: PricingPoint| strategy.price(&p);

    match which {
        Greek::Delta | Greek::Gamma => {
            let h = bump * point.spot;
            let up = price(PricingPoint { spot: point.spot + h, ..*point })?;
            let dn = price(PricingPoint { spot: point.spot - h, ..*point })?;
            Ok(if which == Greek::Delta {
                (up - dn) / (2.0 * h)
            } else {
                (up - 2.0 * mid + dn) / (h * h)
            })
        }
        Greek::Vega => {
            let sigma = point.market.sigma;
            let h = bump * sigma.abs().max(1.0);
            if sigma - h < 0.0 {
                return Err(collapse(format!("sigma - h = {} < 0", sigma - h)));
            }
            let up = price(PricingPoint { market: point.market.with_sigma(sigma + h), ..*point })?;
            let dn = price(PricingPoint { market: point.market.with_sigma(sigma - h), ..*point })?;
            Ok((up - dn) / (2.0 * h))
        }
        Greek::Theta => {
            let t = point.t;
            let h = bump * t.abs().max(1.0);
            if t + h > point.maturity {
                return Err(collapse(format!("t + h = {} passes maturity {}", t + h, point.maturity)));
            }
            if strategy == Strategy::UnlockedLp && t - h < 0.0 {
                return Err(collapse(format!("t - h = {} < 0 for an unlocked position", t - h)));
            }
            let up = price(PricingPoint { t: t + h, ..*point })?;
            let dn = price(PricingPoint { t: t - h, ..*point })?;
            Ok((up - dn) / (2.0 * h))
        }
        Greek::Rho => {
            let r_f = point.market.r_f();
            let h = bump * r_f.abs().max(1.0);
            let up = price(PricingPoint { market: point.market.with_rate_diff(r_f + h), ..*point })?;
            let dn = price(PricingPoint { market: point.market.with_rate_diff(r_f - h), ..*point })?;
            Ok((up - dn) / (2.0 * h))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::MarketParams;
    use crate::greeks::{greeks_ig, greeks_locked_lp, GreeksReport};

    fn locked_point() -> PricingPoint {
        PricingPoint {
            notional_v0: 10_000.0,
            entry_price_s0: 1000.0,
            strike_k: 1000.0,
            spot: 1000.0,
            t: 0.25,
            maturity: 0.5,
            market: MarketParams::from_rate_diff(0.03, 0.7, 0.10).unwrap(),
        }
    }

    fn ig_point() -> PricingPoint {
        PricingPoint {
            t: 0.0,
            maturity: 7.0 / 365.0,
            market: MarketParams::from_rate_diff(0.03, 0.7, 0.0).unwrap(),
            ..locked_point()
        }
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

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn locked_delta_matches_closed_form() {
        let p = locked_point();
        let fd = fd_greek(Strategy::LockedLp, &p, Greek::Delta, 1e-5).unwrap();
        let cf = greeks_locked_lp(&p.lp_state(true).unwrap()).unwrap().delta;
        assert!(rel(fd, cf) < 1e-6, "{fd} vs {cf}");
    }

    #[test]
    fn ig_gamma_matches_closed_form() {
        let p = ig_point();
        let fd = fd_greek(Strategy::ImpermanentGain, &p, Greek::Gamma, 1e-4).unwrap();
        let cf = greeks_ig(&p.ig_contract().unwrap(), p.spot, &p.market).unwrap().gamma;
        assert!(rel(fd, cf) < 1e-5, "{fd} vs {cf}");
    }

    #[test]
    fn every_greek_of_both_priced_strategies() {
        for p in [locked_point(), ig_point()] {
            let lg = greeks_locked_lp(&p.lp_state(true).unwrap()).unwrap();
            let ig = greeks_ig(&p.ig_contract().unwrap(), p.spot, &p.market).unwrap();
            for which in Greek::ALL {
                let tol = if which == Greek::Gamma { 1e-5 } else { 1e-6 };
                for (strategy, cf) in [(Strategy::LockedLp, pick(&lg, which)), (Strategy::ImpermanentGain, pick(&ig, which))] {
                    let fd = fd_greek(strategy, &p, which, which.default_bump()).unwrap();
                    assert!(rel(fd, cf) < tol, "{strategy:?} {which}: {fd} vs {cf}");
                }
            }
        }
    }

    #[test]
    fn unlocked_vega_and_rho_are_exactly_zero() {
        let p = PricingPoint { t: 0.3, ..locked_point() };
        for bump in [1e-8, 1e-5, 1e-2] {
            assert_eq!(fd_greek(Strategy::UnlockedLp, &p, Greek::Vega, bump).unwrap(), 0.0);
            assert_eq!(fd_greek(Strategy::UnlockedLp, &p, Greek::Rho, bump).unwrap(), 0.0);
        }
    }

    #[test]
    fn bump_range_is_enforced() {
        let p = locked_point();
        assert!(fd_greek(Strategy::LockedLp, &p, Greek::Delta, 1e-9).is_err());
        assert!(fd_greek(Strategy::LockedLp, &p, Greek::Delta, 0.1).is_err());
        assert!(fd_greek(Strategy::LockedLp, &p, Greek::Delta, f64::NAN).is_err());
    }

    #[test]
    fn steps_that_leave_the_domain_collapse() {
        let at_maturity = PricingPoint { t: 0.5, ..locked_point() };
        let e = fd_greek(Strategy::LockedLp, &at_maturity, Greek::Theta, 1e-5).unwrap_err();
        assert!(matches!(e, Error::StepCollapse(_)), "{e:?}");

        let fresh = PricingPoint { t: 0.0, ..locked_point() };
        let e = fd_greek(Strategy::UnlockedLp, &fresh, Greek::Theta, 1e-5).unwrap_err();
        assert!(matches!(e, Error::StepCollapse(_)), "{e:?}");
        // a locked position may be valued before its deposit date
        assert!(fd_greek(Strategy::LockedLp, &fresh, Greek::Theta, 1e-5).is_ok());

        let mut flat = locked_point();
        flat.market = flat.market.with_sigma(1e-6);
        let e = fd_greek(Strategy::LockedLp, &flat, Greek::Vega, 1e-5).unwrap_err();
        assert!(matches!(e, Error::StepCollapse(_)), "{e:?}");
    }

    #[test]
    fn greek_names_round_trip() {
        for g in Greek::ALL {
            assert_eq!(g.name().parse::<Greek>().unwrap(), g);
        }
        assert!("vanna".parse::<Greek>().is_err());
    }
}
