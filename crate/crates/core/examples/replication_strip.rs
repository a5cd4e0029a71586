//! Static replication of the IG with a strip of vanilla options.

use lp_greeks::analytics::{price_ig, IgContract, MarketParams};
use lp_greeks::payoff::impermanent_loss;
use lp_greeks::replication::{build_strike_grid, price_ig_via_strip, replicate_il_payoff, StrikeGrid};
use lp_greeks::Result;

fn main() -> Result<()> {
    let (k, sigma, tau) = (1000.0, 0.7, 30.0 / 365.0);
    let market = MarketParams::from_rate_diff(0.03, sigma, 0.0)?;
    let contract = IgContract::new(10_000.0, k, tau, 0.0)?;

    let grid = build_strike_grid(k, sigma, tau, 1e-8)?;
    println!(
        "{} intervals per leg, strikes {:.2} .. {:.0}, estimated error {:.1e}",
        grid.intervals, grid.lower_cut, grid.upper_cut, grid.error_estimate
    );
    for s in [300.0, 800.0, 1000.0, 1300.0, 3000.0] {
        let rep = replicate_il_payoff(&grid, s)?;
        println!("  payoff at {s:>6}: strip {:+.10}, exact {:+.10}", rep.value, impermanent_loss(s / k - 1.0)?);
    }

    let closed = price_ig(&contract, k, &market)?;
    println!("\nclosed form {closed:.8}");
    let half_width = (grid.upper_cut / k).ln();
    for n in [16, 64, 256, 1024, 4096] {
        let g = StrikeGrid::with_intervals(k, half_width, n)?;
        let strip = price_ig_via_strip(&contract, k, &market, &g)?.value;
        println!("{n:>6} intervals: {strip:.8} (error {:.1e})", (strip - closed).abs());
    }
    Ok(())
}
