//! Curves behind the plots: the impermanent-loss curve and every price and
//! greek of the three strategies against the current price.
//!
//! Ids are `il-curve` or `<strategy>-<series>` with strategy `unlocked`
//! (unlocked LP), `lp` (locked LP) or `ig`, and series one of `price`,
//! `delta`, `delta-pct`, `gamma`, `gamma-pct`, `vega`, `theta`, `rho`.
//!
//! Price curves run over `s_t` in `[0.1, 3]` times the reference price
//! (`s0` for LP curves, `k` for IG). Each row holds the abscissa, the raw
//! closed-form value and the value as plotted: vega per vol point
//! (`/100`), theta per day (`/365`), rho per rate point (`/100`).

use crate::analytics::{PricingPoint, Strategy};
use crate::config::Scenario;
use crate::error::{domain, Error, Result};
use crate::greeks::{greeks_ig, greeks_lp, GreeksReport};
use crate::payoff::il_curve;
use crate::report::{csv, fmt_f64};

pub const CURVE_POINTS: usize = 400;
pub const IL_POINTS: usize = 401;
pub const IL_RANGE: (f64, f64) = (-1.0, 3.0);
/// Price range as multiples of the reference price.
pub const SPOT_RANGE: (f64, f64) = (0.1, 3.0);

const SERIES: [&str; 8] = ["price", "delta", "delta-pct", "gamma", "gamma-pct", "vega", "theta", "rho"];
const STRATEGIES: [(&str, Strategy); 3] = [
    ("unlocked", Strategy::UnlockedLp),
    ("lp", Strategy::LockedLp),
    ("ig", Strategy::ImpermanentGain),
];

/// Every valid figure id.
pub fn figure_ids() -> Vec<String> {
    let mut ids = vec!["il-curve".to_string()];
    for (prefix, _) in STRATEGIES {
        ids.extend(SERIES.iter().map(|s| format!("{prefix}-{s}")));
    }
    ids
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: String,
    pub header: [&'static str; 3],
    /// `(x, value, display)` per point.
    pub rows: Vec<[f64; 3]>,
}

impl Figure {
    pub fn to_csv(&self) -> String {
        csv(&self.header, self.rows.iter().map(|r| r.iter().map(|&v| fmt_f64(v)).collect()))
    }
}

fn unknown(id: &str) -> Error {
    Error::Config(format!("unknown figure id `{id}`; valid ids: {}", figure_ids().join(", ")))
}

/// `(raw, display)` of one series at one point.
fn series_value(strategy: Strategy, series: &str, point: &PricingPoint) -> Result<(f64, f64)> {
    if series == "price" {
        let p = strategy.price(point)?;
        return Ok((p, p));
    }
    let g: GreeksReport = match strategy {
        Strategy::ImpermanentGain => greeks_ig(&point.ig_contract()?, point.spot, &point.market)?,
        Strategy::LockedLp => greeks_lp(&point.lp_state(true)?)?,
        Strategy::UnlockedLp => greeks_lp(&point.lp_state(false)?)?,
    };
    let d = g.display();
    Ok(match series {
        "delta" => (g.delta, g.delta),
        "delta-pct" => (g.delta_pct, d.delta_pct),
        "gamma" => (g.gamma, g.gamma),
        "gamma-pct" => (g.gamma_pct, d.gamma_pct),
        "vega" => (g.vega, d.vega_pct),
        "theta" => (g.theta, d.theta_daily),
        "rho" => (g.rho, d.rho_pct),
        other => return Err(domain(format!("unknown series {other}"))),
    })
}

/// Evenly spaced grid with both endpoints exact.
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / last })
}

pub fn figure(id: &str, scenario: &Scenario) -> Result<Figure> {
    if id == "il-curve" {
        let rows = il_curve(IL_RANGE.0, IL_RANGE.1, IL_POINTS)?
            .into_iter()
            .map(|(r, il)| [r, il, il])
            .collect();
        return Ok(Figure { id: id.into(), header: ["r", "value", "display"], rows });
    }
    let (prefix, series) = id.split_once('-').ok_or_else(|| unknown(id))?;
    let strategy = STRATEGIES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, s)| *s)
        .ok_or_else(|| unknown(id))?;
    if !SERIES.contains(&series) {
        return Err(unknown(id));
    }
    let base = scenario.point(strategy);
    let reference = match strategy {
        Strategy::ImpermanentGain => base.strike_k,
        Strategy::UnlockedLp | Strategy::LockedLp => base.entry_price_s0,
    };
    let rows = linspace(SPOT_RANGE.0 * reference, SPOT_RANGE.1 * reference, CURVE_POINTS)
        .map(|spot| {
            let (raw, display) = series_value(strategy, series, &PricingPoint { spot, ..base })?;
            Ok([spot, raw, display])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure { id: id.into(), header: ["s_t", "value", "display"], rows })
}
