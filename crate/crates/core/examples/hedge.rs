//! A locked LP plus an IG struck at the entry price: gamma and vega cancel,
//! delta is a constant and what is left of theta and rho is carry.

use lp_greeks::analytics::{IgContract, LpState, MarketParams};
use lp_greeks::amm::PoolPosition;
use lp_greeks::greeks::hedge_report;
use lp_greeks::Result;

fn main() -> Result<()> {
    let market = MarketParams::from_rate_diff(0.03, 0.7, 0.1)?;
    let pos = PoolPosition::from_deposit(10_000.0, 1000.0)?;
    let ig = IgContract::new(10_000.0, 1000.0, 1.0, 0.0)?;

    println!("{:>6} {:>10} {:>10} {:>12} {:>12} {:>10} {:>10}", "spot", "delta", "lp gamma", "total gamma", "total vega", "theta", "rho");
    for spot in [400.0, 700.0, 1000.0, 1500.0, 3000.0] {
        let lp = LpState::new(pos, market, spot, 0.0, 1.0, true)?;
        let h = hedge_report(&lp, &ig)?;
        println!(
            "{:>6} {:>10.6} {:>10.3e} {:>12.1e} {:>12.1e} {:>10.4} {:>10.2}",
            spot, h.total.delta, h.lp.gamma, h.total.gamma, h.total.vega, h.total.theta, h.total.rho
        );
    }
    let h = hedge_report(&LpState::new(pos, market, 1000.0, 0.0, 1.0, true)?, &ig)?;
    println!("predicted: delta {:.6}, theta {:.4}, rho {:.2}", h.delta_pred, h.theta_pred, h.rho_pred);
    Ok(())
}
