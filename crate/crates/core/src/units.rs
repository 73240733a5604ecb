//! Squeezing-rate unit conversions.
//!
//! A rate `r` (nats) scales a quadrature variance by `e^{2r}`. Decibels are
//! decibels of that variance ratio, `10 log10(e^{2r})`.

use std::f64::consts::LN_10;

/// Converts a squeezing rate from decibels to nats.
pub fn db_to_nats(db: f64) -> f64 {
    db * LN_10 / 20.0
}

/// Converts a squeezing rate from nats to decibels.
pub fn nats_to_db(nats: f64) -> f64 {
    nats * 20.0 / LN_10
}
