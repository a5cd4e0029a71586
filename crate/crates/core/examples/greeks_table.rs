//! Greeks of the three strategies side by side.

use std::path::PathBuf;

use lp_greeks::analytics::Strategy;
use lp_greeks::config::Scenario;
use lp_greeks::greeks::greeks_table;
use lp_greeks::Result;

fn main() -> Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/hedge_1y.json");
    let s = Scenario::load(&path)?;
    let unlocked = s.point(Strategy::UnlockedLp).lp_state(false)?;
    let locked = s.point(Strategy::LockedLp).lp_state(true)?;
    let ig = s.point(Strategy::ImpermanentGain).ig_contract()?;
    print!("{}", greeks_table(&unlocked, &locked, &ig, &s.market, s.spot)?.to_text());
    Ok(())
}
