//! Pricing, greeks and independent verification for constant-product AMM
//! liquidity positions (unlocked and locked) and the Impermanent Gain
//! derivative that hedges them.

pub mod amm;
pub mod analytics;
pub mod cli;
pub mod config;
pub mod error;
pub mod fd;
pub mod figures;
pub mod greeks;
pub mod mc;
pub mod normal;
pub mod payoff;
pub mod replication;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
