//! Terminal payoffs as fractions of the initial capital `V0`.
//!
//! Both functions take the simple return `r = S_T / S_0 - 1` of token x in
//! token y. `r = -1` (token x worthless) is a valid input.

use crate::error::{domain, ensure_positive, Result};

fn check_return(r: f64) -> Result<()> {
    if r.is_finite() && r >= -1.0 {
        Ok(())
    } else {
        Err(domain(format!("return must be finite and >= -1, got {r}")))
    }
}

/// Impermanent loss `sqrt(r + 1) - r/2 - 1`. Never positive.
pub fn impermanent_loss(r: f64) -> Result<f64> {
    check_return(r)?;
    // near r = 0 the true value is -r^2/8, below the rounding error of the sqrt
    Ok(((r + 1.0).sqrt() - r / 2.0 - 1.0).min(0.0))
}

/// Impermanent gain `1 + r/2 - sqrt(r + 1)`, the negation of the loss.
pub fn impermanent_gain(r: f64) -> Result<f64> {
    impermanent_loss(r).map(|il| 0.0 - il)
}

/// Return used to settle an IG contract struck at `k`.
pub fn ig_return_from_strike(s_t: f64, k: f64) -> Result<f64> {
    ensure_positive("s_t", s_t)?;
    ensure_positive("k", k)?;
    Ok(s_t / k - 1.0)
}

/// Samples the loss on `n_points` evenly spaced returns, endpoints included.
pub fn il_curve(r_min: f64, r_max: f64, n_points: usize) -> Result<Vec<(f64, f64)>> {
    check_return(r_min)?;
    if !(r_max.is_finite() && r_max > r_min) {
        return Err(domain(format!("need r_min < r_max, got [{r_min}, {r_max}]")));
    }
    if n_points < 2 {
        return Err(domain(format!("need at least 2 points, got {n_points}")));
    }
    let span = r_max - r_min;
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let r = if i + 1 == n_points {
                r_max
            } else {
                r_min + span * i as f64 / last
            };
            impermanent_loss(r).map(|il| (r, il))
        })
        .collect()
}
