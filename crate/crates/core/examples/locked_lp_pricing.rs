//! Unlocked and locked LP values from a scenario file.

use std::path::PathBuf;

use lp_greeks::analytics::{decay_factors, Strategy};
use lp_greeks::config::Scenario;
use lp_greeks::Result;

fn main() -> Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/locked_lp.json");
    let scenario = Scenario::load(&path)?;

    let p = scenario.point(Strategy::LockedLp);
    let f = decay_factors(&p.market, p.tau())?;
    println!("tau = {}, beta = {:.10}, discount = {:.10}", p.tau(), f.beta, f.gamma_disc);
    println!("locked LP   {:.6}", Strategy::LockedLp.price(&p)?);
    println!("unlocked LP {:.6}", Strategy::UnlockedLp.price(&p)?);

    // the lock is worth less the further it runs
    for maturity in [0.25, 0.5, 1.0, 2.0, 5.0] {
        let q = lp_greeks::analytics::PricingPoint { maturity, ..p };
        println!("unlock at {maturity:>4}y: {:.4}", Strategy::LockedLp.price(&q)?);
    }
    Ok(())
}
