//! The loss curve and the gain payoff that offsets it.

use lp_greeks::payoff::{ig_return_from_strike, il_curve, impermanent_gain};
use lp_greeks::Result;

fn main() -> Result<()> {
    for (r, il) in il_curve(-1.0, 3.0, 17)? {
        let bar = "#".repeat((-il * 80.0).round() as usize);
        println!("r = {r:>5.2}  IL = {il:>8.5}  {bar}");
    }

    let k = 1000.0;
    println!();
    for s_t in [500.0, 900.0, 1000.0, 1100.0, 2000.0] {
        let r = ig_return_from_strike(s_t, k)?;
        println!("S_T = {s_t:>6}: IG payoff per unit notional {:.6}", impermanent_gain(r)?);
    }
    Ok(())
}
