use lp_greeks::analytics::{decay_factors, price_ig, MarketParams, PricingPoint, Strategy};
use lp_greeks::fd::{fd_greek, Greek};
use lp_greeks::greeks::hedge_report;
use lp_greeks::payoff::impermanent_loss;
use lp_greeks::replication::{build_strike_grid, replicate_il_payoff, vanilla_price, OptionKind};
use lp_greeks::verify::closed_form_greeks;
use proptest::prelude::*;
use proptest::strategy::Strategy as PropStrategy;

#[derive(Debug, Clone, Copy)]
struct Case {
    v0: f64,
    k: f64,
    spot: f64,
    t: f64,
    maturity: f64,
    r_f: f64,
    sigma: f64,
    phi: f64,
}

impl Case {
    fn market(&self) -> MarketParams {
        MarketParams::from_rate_diff(self.r_f, self.sigma, self.phi).unwrap()
    }

    fn point(&self) -> PricingPoint {
        PricingPoint {
            notional_v0: self.v0,
            entry_price_s0: self.k,
            strike_k: self.k,
            spot: self.spot,
            t: self.t,
            maturity: self.maturity,
            market: self.market(),
        }
    }
}

fn cases() -> impl PropStrategy<Value = Case> {
    (
        100.0f64..1e6,
        1.0f64..5000.0,
        0.3f64..3.0,
        0.0f64..1.0,
        0.02f64..2.0,
        -0.05f64..0.1,
        0.05f64..1.5,
        0.0f64..0.3,
    )
        .prop_map(|(v0, k, moneyness, t, tau, r_f, sigma, phi)| Case {
            v0,
            k,
            spot: k * moneyness,
            t,
            maturity: t + tau,
            r_f,
            sigma,
            phi,
        })
}

fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn put_call_parity(c in cases(), strike_scale in 0.2f64..5.0) {
        let m = c.market();
        let tau = c.maturity - c.t;
        let strike = c.spot * strike_scale;
        let call = vanilla_price(strike, c.spot, &m, tau, OptionKind::Call).unwrap().premium;
        let put = vanilla_price(strike, c.spot, &m, tau, OptionKind::Put).unwrap().premium;
        let disc = decay_factors(&m, tau).unwrap().gamma_disc;
        let fwd = c.spot * (c.r_f * tau).exp();
        prop_assert!(close(call - put, disc * (fwd - strike), 1e-12, 1e-12 * (c.spot + strike)));
    }

    #[test]
    fn ig_price_is_non_negative_and_bounded(c in cases()) {
        let p = c.point();
        let ig = price_ig(&p.ig_contract().unwrap(), c.spot, &p.market).unwrap();
        prop_assert!(ig >= 0.0);
        // the payoff never exceeds V0 (S/2K + 1/2)
        let disc = decay_factors(&p.market, p.tau()).unwrap().gamma_disc;
        prop_assert!(ig <= c.v0 * (c.spot / (2.0 * c.k) + 0.5 * disc) * (1.0 + 1e-12));
    }

    #[test]
    fn locked_lp_plus_ig_is_static(c in cases()) {
        // V0 (sqrt(S/K) + phi T) + V0 (S/2K + 1/2 - sqrt(S/K)) = V0 (S/2K + 1/2 + phi T)
        let p = c.point();
        let lp = Strategy::LockedLp.price(&p).unwrap();
        let ig = Strategy::ImpermanentGain.price(&p).unwrap();
        let disc = decay_factors(&p.market, p.tau()).unwrap().gamma_disc;
        let want = c.v0 * (c.spot / (2.0 * c.k) + disc * (0.5 + c.phi * c.maturity));
        prop_assert!(close(lp + ig, want, 1e-12, 0.0), "{} vs {}", lp + ig, want);
    }

    #[test]
    fn hedge_is_gamma_and_vega_neutral(c in cases()) {
        let p = c.point();
        let h = hedge_report(&p.lp_state(true).unwrap(), &p.ig_contract().unwrap()).unwrap();
        prop_assert!(h.is_neutral(1e-10), "{:e} {:e}", h.gamma_residual(), h.vega_residual());
        prop_assert!(close(h.total.delta, h.delta_pred, 1e-10, 0.0));
        prop_assert!(close(h.total.theta, h.theta_pred, 1e-10, 1e-12 * c.v0));
        prop_assert!(close(h.total.rho, h.rho_pred, 1e-10, 0.0));
    }

    #[test]
    fn finite_differences_match_closed_forms(c in cases()) {
        let p = c.point();
        for strategy in [Strategy::UnlockedLp, Strategy::LockedLp, Strategy::ImpermanentGain] {
            let g = closed_form_greeks(strategy, &p).unwrap();
            for greek in Greek::ALL {
                let want = match greek {
                    Greek::Delta => g.delta,
                    Greek::Gamma => g.gamma,
                    Greek::Vega => g.vega,
                    Greek::Theta => g.theta,
                    Greek::Rho => g.rho,
                };
                // unlocked theta at t = 0 has no backward room
                let got = match fd_greek(strategy, &p, greek, greek.default_bump()) {
                    Ok(v) => v,
                    Err(_) if strategy == Strategy::UnlockedLp && p.t < 1e-5 => continue,
                    Err(e) => panic!("{strategy:?} {greek}: {e}"),
                };
                let floor = match greek {
                    Greek::Delta => 1e-7 * c.v0 / c.spot,
                    Greek::Gamma => 1e-6 * c.v0 / (c.spot * c.spot),
                    _ => 1e-7 * c.v0,
                };
                prop_assert!(close(got, want, 1e-5, floor), "{:?} {}: fd {} vs {}", strategy, greek, got, want);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strip_reconstructs_the_loss(
        s0 in 1.0f64..5000.0,
        sigma in 0.1f64..1.5,
        tau in 0.02f64..2.0,
        probes in prop::collection::vec(-1.5f64..1.5, 8),
    ) {
        let tol = 1e-6;
        let grid = build_strike_grid(s0, sigma, tau, tol).unwrap();
        prop_assert!(grid.error_estimate <= tol);
        let half_width = grid.upper_cut.ln() - s0.ln();
        for x in probes {
            let s = s0 * (x * half_width).exp();
            let rep = replicate_il_payoff(&grid, s).unwrap();
            let exact = impermanent_loss(s / s0 - 1.0).unwrap();
            let err = (rep.value - exact).abs();
            // inside the strikes the quadrature alone; outside, the estimate
            // also carries the exact truncated tail
            let allowed = 10.0 * tol * (1.0 + exact.abs()) + if x.abs() > 1.0 { 1.01 * rep.error_estimate } else { 0.0 };
            prop_assert!(err <= allowed, "at {}: {} vs {}", s, rep.value, exact);
        }
    }
}
