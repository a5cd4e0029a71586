//! Writes every figure series for a scenario as CSV files.

use std::path::PathBuf;

use lp_greeks::config::Scenario;
use lp_greeks::figures::{figure, figure_ids};
use lp_greeks::{Error, Result};

fn main() -> Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let scenario = Scenario::load(&root.join("configs/locked_lp.json"))?;
    let out = std::env::temp_dir().join("lpgreeks-figures");
    std::fs::create_dir_all(&out).map_err(|e| Error::Io(e.to_string()))?;

    for id in figure_ids() {
        let f = figure(&id, &scenario)?;
        let path = out.join(format!("{id}.csv"));
        std::fs::write(&path, f.to_csv()).map_err(|e| Error::Io(e.to_string()))?;
        let (lo, hi) = f.rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[2]), hi.max(r[2])));
        println!("{id:<20} {:>4} rows, display range [{lo:.4e}, {hi:.4e}]", f.rows.len());
    }
    println!("written to {}", out.display());
    Ok(())
}
