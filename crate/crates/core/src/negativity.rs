//! Central negativity and the channel condition for Wigner negativity.
//!
//! A channel can leave negative values in a transmitted cat state only if
//! `f_x^2 f_p^2 - sigma_x sigma_p > 0`. For odd cats the condition is also
//! sufficient: it is exactly the sign of the value at the origin. For even
//! cats it is only necessary. The condition depends on the channel alone.
//!
//! Some derivations state the condition as `f_x f_p - sigma_x sigma_p > 0`;
//! comparing the two exponents of the central value gives the squared gains,
//! which is what is implemented here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::state::{CatState, Parity};

/// Wigner function of a transmitted odd cat at the phase-space origin.
///
/// `W'(0,0) = [exp(-(f_x^2/V_x) x0^2 - (f_p^2/V_p) p0^2)
///            - exp(-(sigma_x/V_x) p0^2 - (sigma_p/V_p) x0^2)]
///            / (pi sqrt(V_x V_p) (1 - e^{-2|xi|^2}))`.
pub fn central_negativity(state: &CatState, ch: &ChannelParams) -> Result<f64> {
    if state.parity() != Parity::Odd {
        return Err(Error::RequiresOddParity);
    }
    let (x0, p0) = (state.x0(), state.p0());
    let (ax, ap) = (ch.noise_fraction_x(), ch.noise_fraction_p());
    // f^2/V written as 1 - sigma/V so the two exponents coincide exactly on
    // the boundary of the negativity condition.
    let coherent = -(1.0 - ax) * x0 * x0 - (1.0 - ap) * p0 * p0;
    let fringe = -ax * p0 * p0 - ap * x0 * x0;
    let norm = PI * (ch.v_x() * ch.v_p()).sqrt() * state.normalization();
    Ok((coherent.exp() - fringe.exp()) / norm)
}

/// `(f_x^2 f_p^2 - sigma_x sigma_p) / (V_x V_p)`, which simplifies to
/// `1 - sigma_x/V_x - sigma_p/V_p`. Its sign decides [`negativity_possible`].
pub fn negativity_margin(ch: &ChannelParams) -> f64 {
    1.0 - ch.noise_fraction_x() - ch.noise_fraction_p()
}

/// Whether `f_x^2 f_p^2 - sigma_x sigma_p > 0`. A margin of exactly zero
/// reports `false`: the central value is then zero, not negative.
pub fn negativity_possible(ch: &ChannelParams) -> bool {
    negativity_margin(ch) > 0.0
}

/// Lossy-channel parameters that keep negativity alive:
/// `2v/(1+2v) < eta < 1` and `v < eta / (2(1-eta))`.
///
/// The region does not depend on the pre-squeezing or on the environment
/// asymmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRegion {
    /// Thermal variance the region was computed for.
    pub v: f64,
    pub eta_min: f64,
    pub eta_max: f64,
}

impl FeasibleRegion {
    pub fn is_empty(&self) -> bool {
        self.eta_min >= self.eta_max
    }

    /// Strict interior test; the lossless end `eta = 1` is included since
    /// the identity channel keeps all negativity.
    pub fn contains(&self, eta: f64) -> bool {
        eta > self.eta_min && eta <= self.eta_max
    }
}

/// Transmittance bounds for a thermal environment of variance `v > 0`.
pub fn feasible_region(v: f64) -> FeasibleRegion {
    FeasibleRegion {
        v,
        eta_min: 2.0 * v / (1.0 + 2.0 * v),
        eta_max: 1.0,
    }
}

/// Largest thermal variance tolerated at transmittance `0 < eta < 1`.
pub fn feasible_v(eta: f64) -> f64 {
    eta / (2.0 * (1.0 - eta))
}

/// Whether a lossy channel with `(eta, v)` can preserve negativity.
pub fn is_feasible(eta: f64, v: f64) -> bool {
    eta >= 1.0 || (eta > 0.0 && v < feasible_v(eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{lossy_channel, LossyStage};
    use crate::state::PhasePoint;
    use crate::wigner::wigner_transformed;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_PI;

    fn odd3() -> CatState {
        CatState::odd(3.0, 0.0).unwrap()
    }

    fn stage_channel(eta: f64, gamma: f64, v: f64, gamma_t: f64) -> ChannelParams {
        lossy_channel(&LossyStage::new(eta, gamma, v, gamma_t).unwrap()).unwrap()
    }

    #[test]
    fn identity_channel_gives_minus_one_over_pi() {
        for (x0, p0) in [(3.0, 0.0), (0.3, -1.1), (5.0, 5.0)] {
            let s = CatState::odd(x0, p0).unwrap();
            let cn = central_negativity(&s, &ChannelParams::identity()).unwrap();
            assert!((cn + FRAC_1_PI).abs() < 1e-12, "{cn}");
        }
        assert!(negativity_possible(&ChannelParams::identity()));
    }

    #[test]
    fn half_loss_obliterates() {
        let ch = stage_channel(0.5, 0.0, 0.5, 0.0);
        assert_eq!(central_negativity(&odd3(), &ch).unwrap(), 0.0);
        assert!(!negativity_possible(&ch));
        assert_eq!(negativity_margin(&ch), 0.0);
    }

    #[test]
    fn eighty_percent_transmission() {
        let ch = stage_channel(0.8, 0.0, 0.5, 0.0);
        let cn = central_negativity(&odd3(), &ch).unwrap();
        assert!((cn + 0.05238).abs() < 1e-5);
        let w = wigner_transformed(&odd3(), &ch, PhasePoint::ORIGIN);
        assert!((cn - w).abs() < 1e-12);
    }

    #[test]
    fn even_parity_rejected() {
        let even = CatState::even(3.0, 0.0).unwrap();
        assert!(matches!(
            central_negativity(&even, &ChannelParams::identity()),
            Err(Error::RequiresOddParity)
        ));
    }

    #[test]
    fn heavy_loss_fails_condition() {
        // 0.16 < 0.36
        assert!(!negativity_possible(&stage_channel(0.4, 0.0, 0.5, 0.0)));
    }

    #[test]
    fn feasible_region_bounds() {
        let r = feasible_region(1.0);
        assert_eq!(r.eta_min, 2.0 / 3.0);
        assert_eq!(r.eta_max, 1.0);
        assert!(!r.is_empty());
        assert_eq!(feasible_v(0.5), 0.5);
        assert!(is_feasible(0.8, 0.5));
        assert!(!is_feasible(0.5, 0.5));
        assert!(is_feasible(1.0, 10.0));
    }

    #[test]
    fn boundary_flips_condition() {
        for v in [0.5, 0.75, 1.0, 2.0, 5.0] {
            let eta_min = feasible_region(v).eta_min;
            for (gamma, gamma_t) in [(0.0, 0.0), (0.7, -0.2), (-1.1, 0.4)] {
                let inside = stage_channel((eta_min + 1e-6).min(1.0), gamma, v, gamma_t);
                let outside = stage_channel(eta_min - 1e-6, gamma, v, gamma_t);
                assert!(negativity_possible(&inside));
                assert!(!negativity_possible(&outside));
            }
        }
    }

    proptest! {
        #[test]
        fn condition_matches_raw_products(a in 0.1..2.0f64, b in 0.1..2.0f64, c in 0.0..2.0f64, d in 0.0..2.0f64) {
            let ch = ChannelParams::new(a, b, c, d).unwrap();
            let raw = a * a * b * b - c * d;
            prop_assume!(raw.abs() > 1e-12);
            prop_assert_eq!(negativity_possible(&ch), raw > 0.0);
        }

        #[test]
        fn squeezing_leaves_condition_unchanged(eta in 0.05..1.0f64, v in 0.5..3.0f64, g in -2.0..2.0f64, gt in -1.0..1.0f64) {
            let raw = |c: &ChannelParams| (c.f_x() * c.f_p()).powi(2) - c.sigma_x() * c.sigma_p();
            let base = stage_channel(eta, 0.0, v, 0.0);
            let squeezed = stage_channel(eta, g, v, gt);
            prop_assert!((raw(&base) - raw(&squeezed)).abs() < 1e-12);
            prop_assume!(negativity_margin(&base).abs() > 1e-12);
            prop_assert_eq!(negativity_possible(&base), negativity_possible(&squeezed));
        }

        #[test]
        fn central_value_matches_wigner(x0 in -4.0..4.0f64, p0 in -4.0..4.0f64, a in 0.1..2.0f64, b in 0.1..2.0f64, c in 0.0..2.0f64, d in 0.0..2.0f64) {
            prop_assume!(x0 * x0 + p0 * p0 > 0.05);
            let s = CatState::odd(x0, p0).unwrap();
            let ch = ChannelParams::new(a, b, c, d).unwrap();
            let cn = central_negativity(&s, &ch).unwrap();
            let w = wigner_transformed(&s, &ch, PhasePoint::ORIGIN);
            prop_assert!((cn - w).abs() < 1e-12);
        }

        #[test]
        fn condition_ignores_state(a in 0.1..2.0f64, b in 0.1..2.0f64, c in 0.0..2.0f64, d in 0.0..2.0f64, x0 in 0.5..4.0f64, p0 in -4.0..4.0f64) {
            let ch = ChannelParams::new(a, b, c, d).unwrap();
            prop_assume!(negativity_margin(&ch).abs() > 1e-9);
            let cn = central_negativity(&CatState::odd(x0, p0).unwrap(), &ch).unwrap();
            prop_assert_eq!(cn < 0.0, negativity_possible(&ch));
        }
    }
}
