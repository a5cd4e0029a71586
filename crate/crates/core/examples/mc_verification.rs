//! Closed forms against Monte Carlo, and the full oracle report.

use std::path::PathBuf;

use lp_greeks::analytics::{expected_sqrt_price, Strategy};
use lp_greeks::config::Scenario;
use lp_greeks::mc::{mc_price, McConfig, McPayoff};
use lp_greeks::verify::{verify, ClosedForms};
use lp_greeks::Result;

fn main() -> Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/ig_7day.json");
    let scenario = Scenario::load(&path)?;
    let p = scenario.point(Strategy::ImpermanentGain);
    let mc = McConfig { workers: 4, ..McConfig::new(400_000, 7) };

    let est = mc_price(McPayoff::SqrtMoment, &p, &mc)?;
    let exact = expected_sqrt_price(p.spot, &p.market, p.tau())?;
    println!("E[sqrt S_T]: exact {exact:.8}, MC {:.8} +- {:.1e} (z = {:+.2})", est.mean, est.std_error, est.z_score(exact));

    let est = mc_price(McPayoff::Ig, &p, &mc)?;
    let exact = Strategy::ImpermanentGain.price(&p)?;
    println!("IG price:    exact {exact:.6}, MC {:.6} +- {:.1e} (z = {:+.2})", est.mean, est.std_error, est.z_score(exact));

    let report = verify(&Scenario { mc: Some(mc), ..scenario }, &ClosedForms::default())?;
    print!("\n{}", report.summary());
    Ok(())
}
