//! Constant-product pool arithmetic.
//!
//! A pool holding `x` units of token x and `y` units of token y keeps
//! `x * y = L^2` fixed between liquidity events, and quotes the price of x in
//! units of y as `y / x`. Everything here is denominated in token y.

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_non_negative, ensure_positive, Result};

/// Initial deposit of a liquidity provider into a constant-product pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolPosition {
    /// Pool constant `L = sqrt(x * y)`.
    pub invariant_l: f64,
    /// Price of token x in token y at deposit time.
    pub entry_price_s0: f64,
    pub reserve_x0: f64,
    pub reserve_y0: f64,
    /// Deposited capital in token y, `x0 * s0 + y0`.
    pub notional_v0: f64,
}

/// Pool reserves after the price has moved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reserves {
    pub x: f64,
    pub y: f64,
    pub price: f64,
}

/// Deterministic fee yield of the pool.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeeParams {
    /// Expected fee APY as a decimal per year.
    pub phi: f64,
}

impl FeeParams {
    pub fn new(phi: f64) -> Result<Self> {
        ensure_non_negative("phi", phi)?;
        Ok(Self { phi })
    }

    /// Fees accrued on `v0` over `t` years, `v0 * phi * t`.
    pub fn accrued(&self, v0: f64, t: f64) -> f64 {
        v0 * self.phi * t
    }
}

impl PoolPosition {
    /// Splits `v0` token-y worth of capital equally between the two tokens at
    /// price `s0`.
    pub fn from_deposit(v0: f64, s0: f64) -> Result<Self> {
        ensure_positive("v0", v0)?;
        ensure_positive("s0", s0)?;
        let sqrt_s0 = s0.sqrt();
        let invariant_l = v0 / (2.0 * sqrt_s0);
        Ok(Self {
            invariant_l,
            entry_price_s0: s0,
            reserve_x0: v0 / (2.0 * s0),
            reserve_y0: v0 / 2.0,
            notional_v0: v0,
        })
    }

    /// Reserves once the pool price has moved to `s_t`, assuming no liquidity
    /// was added or removed in between.
    pub fn reserves_at_price(&self, s_t: f64) -> Result<Reserves> {
        ensure_positive("s_t", s_t)?;
        let ratio = s_t / self.entry_price_s0;
        let x = self.reserve_x0 / ratio.sqrt();
        let y = self.reserve_y0 * ratio.sqrt();
        Ok(Reserves { x, y, price: s_t })
    }

    /// Value of the LP position at price `s_t` after `t` years of fee accrual:
    /// `V0 * (sqrt(s_t / s0) + phi * t)`.
    pub fn lp_value(&self, s_t: f64, t: f64, fees: FeeParams) -> Result<f64> {
        ensure_positive("s_t", s_t)?;
        ensure_non_negative("t", t)?;
        let alpha = s_t / self.entry_price_s0;
        Ok(self.notional_v0 * (alpha.sqrt() + fees.phi * t))
    }

    /// Value of simply holding the initial reserves: `x0 * s_t + y0`.
    ///
    /// `s_t = 0` is accepted and gives the `y0` floor.
    pub fn hodl_value(&self, s_t: f64) -> Result<f64> {
        if !(s_t.is_finite() && s_t >= 0.0) {
            return Err(domain(format!("s_t must be non-negative and finite, got {s_t}")));
        }
        Ok(self.reserve_x0 * s_t + self.reserve_y0)
    }

    pub fn constant_product(&self) -> f64 {
        self.invariant_l * self.invariant_l
    }
}

impl Reserves {
    /// Token-y value of the reserves at their own price.
    pub fn value(&self) -> f64 {
        self.x * self.price + self.y
    }
}
