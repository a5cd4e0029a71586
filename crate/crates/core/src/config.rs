//! JSON scenario files.
//!
//! Rates and volatilities are decimals and times are years. Any time key
//! also has a `_days` twin (`t_days`, `maturity_days`) counted in
//! 365-day years; giving both spellings of one key is an error. The schema
//! is `schema/scenario.schema.json`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{MarketParams, PricingPoint, Strategy};
use crate::error::{Error, Result};
use crate::mc::McConfig;
use crate::replication::DEFAULT_TARGET_TOL;

pub const DAYS_PER_YEAR: f64 = 365.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub market: MarketConfig,
    pub position: PositionConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ig: Option<IgConfig>,
    /// Current price of token x in token y.
    pub spot: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_y: Option<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionConfig {
    pub v0: f64,
    pub s0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_days: Option<f64>,
    #[serde(default, alias = "T", skip_serializing_if = "Option::is_none")]
    pub maturity: Option<f64>,
    #[serde(default, alias = "T_days", skip_serializing_if = "Option::is_none")]
    pub maturity_days: Option<f64>,
    #[serde(default)]
    pub locked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IgConfig {
    pub k: f64,
    #[serde(default, alias = "T", skip_serializing_if = "Option::is_none")]
    pub maturity: Option<f64>,
    #[serde(default, alias = "T_days", skip_serializing_if = "Option::is_none")]
    pub maturity_days: Option<f64>,
    /// Notional; defaults to the position's `v0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub target_tol: f64,
}

/// Validated scenario with every time in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub market: MarketParams,
    pub v0: f64,
    pub s0: f64,
    pub t: f64,
    pub maturity: f64,
    pub locked: bool,
    pub ig: Option<IgTerms>,
    pub spot: f64,
    pub mc: Option<McConfig>,
    pub target_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgTerms {
    pub v0: f64,
    pub k: f64,
    pub maturity: f64,
}

fn bad(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn years(field: &str, years: Option<f64>, days: Option<f64>) -> Result<Option<f64>> {
    match (years, days) {
        (Some(_), Some(_)) => Err(bad(field, format!("give either {field} or {field}_days, not both"))),
        (Some(y), None) => Ok(Some(y)),
        (None, Some(d)) => Ok(Some(d / DAYS_PER_YEAR)),
        (None, None) => Ok(None),
    }
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(field, format!("must be positive, got {v}")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(bad(field, format!("must be non-negative, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Checks every field and resolves day counts into years.
    pub fn resolve(&self) -> Result<Scenario> {
        let m = &self.market;
        let sigma = non_negative("market.sigma", m.sigma)?;
        let phi = non_negative("market.phi", m.phi)?;
        let market = match (m.r_f, m.r_x, m.r_y) {
            (Some(r_f), None, None) => MarketParams::from_rate_diff(finite("market.r_f", r_f)?, sigma, phi),
            (None, Some(r_x), Some(r_y)) => {
                MarketParams::new(finite("market.r_x", r_x)?, finite("market.r_y", r_y)?, sigma, phi)
            }
            _ => return Err(bad("market", "give exactly one of r_f or the pair r_x, r_y")),
        }
        .map_err(|e| bad("market", e))?;

        let p = &self.position;
        let v0 = positive("position.v0", p.v0)?;
        let s0 = positive("position.s0", p.s0)?;
        let t = finite("position.t", years("position.t", p.t, p.t_days)?.unwrap_or(0.0))?;
        let maturity = years("position.maturity", p.maturity, p.maturity_days)?
            .ok_or_else(|| bad("position.maturity", "missing (maturity or maturity_days)"))?;
        let maturity = finite("position.maturity", maturity)?;
        if maturity < t {
            return Err(bad("position.maturity", format!("{maturity} is before t = {t}")));
        }
        if !p.locked && t < 0.0 {
            return Err(bad("position.t", "an unlocked position needs t >= 0"));
        }

        let ig = match &self.ig {
            None => None,
            Some(ig) => {
                let maturity = years("ig.maturity", ig.maturity, ig.maturity_days)?.unwrap_or(maturity);
                let maturity = finite("ig.maturity", maturity)?;
                if maturity < t {
                    return Err(bad("ig.maturity", format!("{maturity} is before t = {t}")));
                }
                Some(IgTerms {
                    v0: positive("ig.v0", ig.v0.unwrap_or(v0))?,
                    k: positive("ig.k", ig.k)?,
                    maturity,
                })
            }
        };

        let spot = positive("spot", self.spot)?;
        if let Some(mc) = &self.mc {
            mc.validate().map_err(|e| bad("mc", e))?;
        }
        let target_tol = match &self.quadrature {
            None => None,
            Some(q) if q.target_tol > 0.0 && q.target_tol <= 1e-2 => Some(q.target_tol),
            Some(q) => return Err(bad("quadrature.target_tol", format!("must lie in (0, 1e-2], got {}", q.target_tol))),
        };

        Ok(Scenario { market, v0, s0, t, maturity, locked: p.locked, ig, spot, mc: self.mc, target_tol })
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        ScenarioConfig::load(path)?.resolve()
    }

    /// Canonical config: explicit `r_x`/`r_y`, times in years.
    pub fn to_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            market: MarketConfig {
                r_f: None,
                r_x: Some(self.market.r_x),
                r_y: Some(self.market.r_y),
                sigma: self.market.sigma,
                phi: self.market.phi,
            },
            position: PositionConfig {
                v0: self.v0,
                s0: self.s0,
                t: Some(self.t),
                t_days: None,
                maturity: Some(self.maturity),
                maturity_days: None,
                locked: self.locked,
            },
            ig: self.ig.map(|ig| IgConfig {
                k: ig.k,
                maturity: Some(ig.maturity),
                maturity_days: None,
                v0: Some(ig.v0),
            }),
            spot: self.spot,
            mc: self.mc,
            quadrature: self.target_tol.map(|target_tol| QuadratureConfig { target_tol }),
        }
    }

    pub fn target_tol(&self) -> f64 {
        self.target_tol.unwrap_or(DEFAULT_TARGET_TOL)
    }

    fn ig_or_at_the_money(&self) -> IgTerms {
        self.ig.unwrap_or(IgTerms { v0: self.v0, k: self.s0, maturity: self.maturity })
    }

    /// Pricing inputs for `strategy`: the IG leg uses its own notional and
    /// maturity, the LP legs the position's. Without an `ig` block the IG is
    /// struck at `s0` on the position's terms.
    pub fn point(&self, strategy: Strategy) -> PricingPoint {
        let ig = self.ig_or_at_the_money();
        let (v0, maturity) = match strategy {
            Strategy::ImpermanentGain => (ig.v0, ig.maturity),
            Strategy::UnlockedLp | Strategy::LockedLp => (self.v0, self.maturity),
        };
        PricingPoint {
            notional_v0: v0,
            entry_price_s0: self.s0,
            strike_k: ig.k,
            spot: self.spot,
            t: self.t,
            maturity,
            market: self.market,
        }
    }

    /// The strategy a bare position describes.
    pub fn lp_strategy(&self) -> Strategy {
        if self.locked {
            Strategy::LockedLp
        } else {
            Strategy::UnlockedLp
        }
    }
}
