//! Reserves, pool constant and LP value against holding, as the price moves.

use lp_greeks::amm::{FeeParams, PoolPosition};
use lp_greeks::Result;

fn main() -> Result<()> {
    let pos = PoolPosition::from_deposit(10_000.0, 1000.0)?;
    println!(
        "deposit: x0 = {:.4}, y0 = {:.2}, L = {:.4}, x*y = {:.2}",
        pos.reserve_x0,
        pos.reserve_y0,
        pos.invariant_l,
        pos.constant_product()
    );

    let fees = FeeParams::new(0.10)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}", "price", "x", "y", "hodl", "lp", "lp+fees");
    for s_t in [250.0, 500.0, 800.0, 1000.0, 1250.0, 2000.0, 4000.0] {
        let r = pos.reserves_at_price(s_t)?;
        println!(
            "{:>8.0} {:>10.4} {:>10.2} {:>10.2} {:>10.2} {:>10.2}",
            s_t,
            r.x,
            r.y,
            pos.hodl_value(s_t)?,
            pos.lp_value(s_t, 0.0, fees)?,
            pos.lp_value(s_t, 0.5, fees)?,
        );
    }
    Ok(())
}
