//! Hilbert–Schmidt distance between transmitted even and odd cat states.
//!
//! `Delta = 2 pi ∬ (W'_+ - W'_-)^2 = P_+ - 2 O + P_-`, with purities
//! `P_± = 2 pi ∬ W'_±^2` and overlap `O = 2 pi ∬ W'_+ W'_-` (sometimes
//! written `Q`). All three are Gaussian integrals with closed forms in terms
//! of three factors:
//!
//! ```text
//! M = exp(-2 (f_x^2/V_x) x0^2 - 2 (f_p^2/V_p) p0^2)
//! N = exp(-2 x0^2 - 2 p0^2) + exp(-2 (sigma_x/V_x) p0^2 - 2 (sigma_p/V_p) x0^2)
//! L = exp(-[f_x^2/(2V_x) + f_p^2/(2V_p) + sigma_p/V_p] x0^2
//!         -[f_x^2/(2V_x) + f_p^2/(2V_p) + sigma_x/V_x] p0^2)
//!     * cos(x0 p0 [f_p^2/V_p - f_x^2/V_x])
//! ```
//!
//! The cosine argument is the difference of the two transmitted fractions;
//! with a sum there the identity channel would not preserve the purity of
//! off-axis cats.
//!
//! The overlap denominator `2 (1 - e^{-2 x0^2 - 2 p0^2})` is the product of
//! the even and odd normalizations.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::state::{CatState, Parity};

/// The three exponential factors of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsFactors {
    pub m: f64,
    pub n: f64,
    pub l: f64,
}

/// Purities, overlap and distance of the transmitted parity pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceBreakdown {
    pub purity_even: f64,
    pub purity_odd: f64,
    pub overlap: f64,
    pub distance: f64,
    pub m_factor: f64,
    pub n_factor: f64,
    pub l_factor: f64,
}

pub fn hs_factors(x0: f64, p0: f64, ch: &ChannelParams) -> HsFactors {
    let (x2, p2) = (x0 * x0, p0 * p0);
    let (ax, ap) = (ch.noise_fraction_x(), ch.noise_fraction_p());
    let (tx, tp) = (1.0 - ax, 1.0 - ap);
    let m = (-2.0 * tx * x2 - 2.0 * tp * p2).exp();
    let n = (-2.0 * x2 - 2.0 * p2).exp() + (-2.0 * ax * p2 - 2.0 * ap * x2).exp();
    let half = 0.5 * (tx + tp);
    let l = (-(half + ap) * x2 - (half + ax) * p2).exp() * (x0 * p0 * (tp - tx)).cos();
    HsFactors { m, n, l }
}

fn gaussian_scale(ch: &ChannelParams) -> f64 {
    1.0 / (ch.v_x() * ch.v_p()).sqrt()
}

/// Purity of the transmitted cat state of the given parity.
pub fn purity(state: &CatState, ch: &ChannelParams) -> f64 {
    purity_of(state.x0(), state.p0(), state.parity(), ch)
}

fn purity_of(x0: f64, p0: f64, parity: Parity, ch: &ChannelParams) -> f64 {
    let HsFactors { m, n, l } = hs_factors(x0, p0, ch);
    let s = x0 * x0 + p0 * p0;
    let norm = match parity {
        Parity::Even => 1.0 + (-s).exp(),
        Parity::Odd => -(-s).exp_m1(),
    };
    gaussian_scale(ch) * (1.0 + m + n + parity.sign() * 4.0 * l) / (2.0 * norm * norm)
}

/// Overlap `2 pi ∬ W'_+ W'_-` of the transmitted parity pair.
pub fn overlap(x0: f64, p0: f64, ch: &ChannelParams) -> f64 {
    let HsFactors { m, n, .. } = hs_factors(x0, p0, ch);
    let s = x0 * x0 + p0 * p0;
    gaussian_scale(ch) * (1.0 + m - n) / (-2.0 * (-2.0 * s).exp_m1())
}

/// Full breakdown of the Hilbert–Schmidt distance.
///
/// The distance is not taken as `P_+ - 2 O + P_-`, which cancels terms of
/// order one when the pair has nearly merged. Writing `W'_+ - W'_-` as
/// interference minus `e^{-s}` times the coherent part gives
///
/// ```text
/// Delta = 2 (N - 4 L e^{-s} + (1 + M) e^{-2s}) / (sqrt(V_x V_p) (1 - e^{-2s})^2)
/// ```
///
/// with `s = x0^2 + p0^2`. It is a squared norm, so rounding residue below
/// zero is clamped.
pub fn hs_distance(x0: f64, p0: f64, ch: &ChannelParams) -> DistanceBreakdown {
    let factors = hs_factors(x0, p0, ch);
    let purity_even = purity_of(x0, p0, Parity::Even, ch);
    let purity_odd = purity_of(x0, p0, Parity::Odd, ch);
    let overlap = overlap(x0, p0, ch);
    let HsFactors { m, n, l } = factors;
    let s = x0 * x0 + p0 * p0;
    let e = (-s).exp();
    let bracket = n - 4.0 * l * e + (1.0 + m) * e * e;
    let distance = (2.0 * gaussian_scale(ch) * bracket / (-2.0 * s).exp_m1().powi(2)).max(0.0);
    DistanceBreakdown {
        purity_even,
        purity_odd,
        overlap,
        distance,
        m_factor: factors.m,
        n_factor: factors.n,
        l_factor: factors.l,
    }
}
