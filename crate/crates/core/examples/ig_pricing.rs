//! Impermanent Gain premium across strikes, volatilities and maturities.

use lp_greeks::analytics::{price_ig, IgContract, MarketParams};
use lp_greeks::Result;

fn main() -> Result<()> {
    let market = MarketParams::from_rate_diff(0.03, 0.7, 0.0)?;
    let week = IgContract::new(10_000.0, 1000.0, 7.0 / 365.0, 0.0)?;
    println!("7-day at-the-money IG on 10000: {:.6}", price_ig(&week, 1000.0, &market)?);

    println!("\n{:>6} {:>10} {:>10} {:>10}", "sigma", "7d", "30d", "1y");
    for sigma in [0.2, 0.5, 0.7, 1.0, 1.5] {
        let m = market.with_sigma(sigma);
        let mut row = format!("{sigma:>6.2}");
        for days in [7.0, 30.0, 365.0] {
            let c = IgContract::new(10_000.0, 1000.0, days / 365.0, 0.0)?;
            row.push_str(&format!(" {:>10.4}", price_ig(&c, 1000.0, &m)?));
        }
        println!("{row}");
    }

    println!("\nspot moves away from a 1000 strike (30d, sigma 0.7):");
    let c = IgContract::new(10_000.0, 1000.0, 30.0 / 365.0, 0.0)?;
    for s in [600.0, 800.0, 1000.0, 1250.0, 1600.0] {
        println!("  S = {s:>6}: {:.4}", price_ig(&c, s, &market)?);
    }
    Ok(())
}
