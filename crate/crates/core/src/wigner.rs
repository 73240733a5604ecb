//! Closed-form Wigner functions of cat states, before and after a channel.
//!
//! The transmitted function is evaluated in its real form
//!
//! ```text
//! W'(x, p) = exp(-x^2/V_x - p^2/V_p) / (pi sqrt(V_x V_p) (1 +/- e^{-2|xi|^2}))
//!          * [ e^A cosh(B) +/- e^C cos(D) ]
//! ```
//!
//! with `A = -(f_x^2/V_x) x0^2 - (f_p^2/V_p) p0^2`, `C = -(sigma_x/V_x) p0^2
//! - (sigma_p/V_p) x0^2`, `B = 2 (f_x x0 x / V_x + f_p p0 p / V_p)` and
//! `D = 2 (f_p x0 p / V_p - f_x p0 x / V_x)`. All exponentials are combined
//! relative to the largest exponent so large amplitudes neither overflow
//! through `cosh` nor underflow prematurely.

use std::f64::consts::PI;

use crate::channel::ChannelParams;
use crate::state::{CatState, Parity, PhasePoint};

/// Transmitted cat-state Wigner function with the channel coefficients
/// folded in, for repeated evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TransformedWigner {
    sign: f64,
    inv_vx: f64,
    inv_vp: f64,
    /// Exponent `A` of the coherent (cosh) part.
    coherent_exp: f64,
    /// Exponent `C` of the interference (cos) part.
    fringe_exp: f64,
    bx: f64,
    bp: f64,
    dx: f64,
    dp: f64,
    prefactor: f64,
}

impl TransformedWigner {
    pub fn new(state: &CatState, ch: &ChannelParams) -> Self {
        let (x0, p0) = (state.x0(), state.p0());
        let (vx, vp) = (ch.v_x(), ch.v_p());
        let (ax, ap) = (ch.noise_fraction_x(), ch.noise_fraction_p());
        // f^2 / V = 1 - sigma / V
        let coherent_exp = -(1.0 - ax) * x0 * x0 - (1.0 - ap) * p0 * p0;
        let fringe_exp = -ax * p0 * p0 - ap * x0 * x0;
        TransformedWigner {
            sign: state.parity().sign(),
            inv_vx: 1.0 / vx,
            inv_vp: 1.0 / vp,
            coherent_exp,
            fringe_exp,
            bx: 2.0 * ch.f_x() * x0 / vx,
            bp: 2.0 * ch.f_p() * p0 / vp,
            dx: 2.0 * ch.f_x() * p0 / vx,
            dp: 2.0 * ch.f_p() * x0 / vp,
            prefactor: 1.0 / (PI * (vx * vp).sqrt() * state.normalization()),
        }
    }

    pub fn eval(&self, pt: PhasePoint) -> f64 {
        let envelope = -pt.x * pt.x * self.inv_vx - pt.p * pt.p * self.inv_vp;
        let b = self.bx * pt.x + self.bp * pt.p;
        let d = self.dp * pt.p - self.dx * pt.x;
        let hi = envelope + self.coherent_exp + b.abs();
        let lo = envelope + self.coherent_exp - b.abs();
        let fringe = envelope + self.fringe_exp;
        let m = hi.max(fringe);
        let coherent = 0.5 * ((hi - m).exp() + (lo - m).exp());
        let interference = (fringe - m).exp() * d.cos();
        self.prefactor * (coherent + self.sign * interference) * m.exp()
    }

    pub fn parity(&self) -> Parity {
        if self.sign > 0.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Wigner function of the ideal cat state at `pt`.
pub fn wigner_ideal(state: &CatState, pt: PhasePoint) -> f64 {
    TransformedWigner::new(state, &ChannelParams::identity()).eval(pt)
}

/// Wigner function of the cat state after the channel `ch`, at `pt`.
pub fn wigner_transformed(state: &CatState, ch: &ChannelParams, pt: PhasePoint) -> f64 {
    TransformedWigner::new(state, ch).eval(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Parity;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_PI;

    /// Sum of the four complex blocks, ideal state.
    fn ideal_blocks(state: &CatState, x: f64, p: f64) -> Complex64 {
        let (x0, p0) = (state.x0(), state.p0());
        let s = x0 * x0 + p0 * p0;
        let direct = |sx: f64, sp: f64| {
            Complex64::new(FRAC_1_PI * (-(x - sx).powi(2) - (p - sp).powi(2)).exp(), 0.0)
        };
        let i = Complex64::i();
        let cross = FRAC_1_PI
            * (-(Complex64::new(x, 0.0) - i * p0).powu(2) - (Complex64::new(p, 0.0) + i * x0).powu(2) - s)
                .exp();
        let sign = state.parity().sign();
        let num = direct(x0, p0) + direct(-x0, -p0) + sign * (cross + cross.conj());
        num * 0.5 / (1.0 + sign * (-s).exp())
    }

    #[test]
    fn origin_values() {
        let odd = CatState::odd(3.0, 0.0).unwrap();
        let even = CatState::even(3.0, 0.0).unwrap();
        assert!((wigner_ideal(&odd, PhasePoint::ORIGIN) + FRAC_1_PI).abs() < 1e-15);
        assert!((wigner_ideal(&even, PhasePoint::ORIGIN) - FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn odd_cat_at_displacement_matches_blocks() {
        let odd = CatState::odd(3.0, 0.0).unwrap();
        let blocks = ideal_blocks(&odd, 3.0, 0.0);
        assert!(blocks.im.abs() < 1e-15);
        assert!((wigner_ideal(&odd, PhasePoint::new(3.0, 0.0)) - blocks.re).abs() < 1e-14);
        // half a coherent-state peak, up to e^{-9} interference
        assert!((blocks.re - 0.5 * FRAC_1_PI).abs() < 1e-3);
    }

    #[test]
    fn lossy_origin_values() {
        let odd = CatState::odd(3.0, 0.0).unwrap();
        let ch = ChannelParams::new(0.8f64.sqrt(), 0.8f64.sqrt(), 0.2, 0.2).unwrap();
        let w = wigner_transformed(&odd, &ch, PhasePoint::ORIGIN);
        let expected = ((-7.2f64).exp() - (-1.8f64).exp()) / (PI * (1.0 - (-9f64).exp()));
        assert!((w - expected).abs() < 1e-15);
        assert!((w + 0.05238).abs() < 1e-5);

        let even = CatState::even(3.0, 0.0).unwrap();
        let ch = ChannelParams::new(0.5f64.sqrt(), 0.5f64.sqrt(), 0.5, 0.5).unwrap();
        let w = wigner_transformed(&even, &ch, PhasePoint::ORIGIN);
        let expected = FRAC_1_PI * 2.0 * (-4.5f64).exp() / (1.0 + (-9f64).exp());
        assert!((w - expected).abs() < 1e-15);
    }

    #[test]
    fn large_amplitude_stays_finite() {
        // |xi|^2 = 200
        let odd = CatState::odd(20.0, 0.0).unwrap();
        let ch = ChannelParams::new(0.9, 0.9, 0.3, 0.3).unwrap();
        for x in [-40.0, -18.0, 0.0, 18.0, 40.0] {
            let w = wigner_transformed(&odd, &ch, PhasePoint::new(x, 0.3));
            assert!(w.is_finite());
        }
        let peak = wigner_transformed(&odd, &ch, PhasePoint::new(20.0 * 0.9, 0.0));
        assert!(peak > 0.1);
        let ideal = wigner_ideal(&odd, PhasePoint::ORIGIN);
        assert!((ideal + FRAC_1_PI).abs() < 1e-15);
    }

    fn state() -> impl Strategy<Value = CatState> {
        (-4.0..4.0f64, -4.0..4.0f64, any::<bool>()).prop_filter_map("odd at zero", |(x0, p0, even)| {
            let parity = if even { Parity::Even } else { Parity::Odd };
            CatState::new(x0, p0, parity).ok().filter(|s| s.two_xi_sq() > 0.05)
        })
    }

    fn channel() -> impl Strategy<Value = ChannelParams> {
        (0.2..1.8f64, 0.2..1.8f64, 0.0..1.5f64, 0.0..1.5f64)
            .prop_map(|(a, b, c, d)| ChannelParams::new(a, b, c, d).unwrap())
    }

    proptest! {
        #[test]
        fn ideal_real_form_matches_complex_blocks(s in state(), x in -6.0..6.0f64, p in -6.0..6.0f64) {
            let blocks = ideal_blocks(&s, x, p);
            prop_assert!(blocks.im.abs() < 1e-12);
            prop_assert!((wigner_ideal(&s, PhasePoint::new(x, p)) - blocks.re).abs() < 1e-12);
        }

        #[test]
        fn point_reflection_symmetry(s in state(), c in channel(), x in -6.0..6.0f64, p in -6.0..6.0f64) {
            let pt = PhasePoint::new(x, p);
            let a = wigner_transformed(&s, &c, pt);
            let b = wigner_transformed(&s, &c, pt.reflected());
            prop_assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()));
        }

        #[test]
        fn identity_channel_reduces_to_ideal(s in state(), x in -6.0..6.0f64, p in -6.0..6.0f64) {
            let pt = PhasePoint::new(x, p);
            prop_assert_eq!(wigner_transformed(&s, &ChannelParams::identity(), pt), wigner_ideal(&s, pt));
        }
    }
}
