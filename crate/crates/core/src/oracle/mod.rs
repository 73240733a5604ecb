//! Independent numerical reference for the closed forms.
//!
//! The ideal cat-state Wigner function is a sum of four complex Gaussian
//! blocks, each a product of one factor in `x` and one in `p`. The channel
//! integral
//!
//! ```text
//! W'(x, p) = ∬ K(x, p | x', p') W(x', p') dx' dp',
//! K = exp(-(x - f_x x')^2/sigma_x - (p - f_p p')^2/sigma_p) / (pi sqrt(sigma_x sigma_p))
//! ```
//!
//! therefore splits into one-dimensional integrals per block, which are done
//! here by quadrature. Purities and overlaps are integrated the same way over
//! products of blocks. Nothing in this module calls the closed-form code.
//!
//! For these factorized integrals `truncation_radius` counts widths of the
//! local Gaussian envelope rather than absolute phase-space units, and
//! `points_per_axis` is a floor: more nodes are used when the envelope is
//! narrow or the fringes are fast.

pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::state::{CatState, Parity, PhasePoint};

pub use quadrature::{integrate_phase_space, Estimate, QuadratureSpec, Scheme};

/// `exp(a x^2 + b x + c)`.
#[derive(Debug, Clone, Copy)]
struct Quadratic {
    a: f64,
    b: Complex64,
    c: Complex64,
}

impl Quadratic {
    /// `exp(-(x - centre)^2 / var + offset)`.
    fn centred(centre: Complex64, var: f64, offset: Complex64) -> Self {
        Quadratic {
            a: -1.0 / var,
            b: 2.0 * centre / var,
            c: offset - centre * centre / var,
        }
    }

    fn times(&self, other: &Quadratic) -> Quadratic {
        Quadratic {
            a: self.a + other.a,
            b: self.b + other.b,
            c: self.c + other.c,
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        (self.b * x + self.c + self.a * x * x).exp()
    }

    fn centre(&self) -> Complex64 {
        -self.b / (2.0 * self.a)
    }

    fn var(&self) -> f64 {
        -1.0 / self.a
    }

    fn offset(&self) -> Complex64 {
        let m = self.centre();
        self.c + m * m / self.var()
    }

    /// Exact Gaussian smoothing `∫ (pi s)^{-1/2} exp(-(y - f x)^2/s) g(x) dx`.
    fn through(&self, f: f64, s: f64) -> Quadratic {
        let var = self.var();
        let out = s + f * f * var;
        Quadratic::centred(f * self.centre(), out, self.offset() + 0.5 * (var / out).ln())
    }
}

/// One separable block `coeff * X(x) * P(p)`.
#[derive(Debug, Clone, Copy)]
struct Block {
    coeff: f64,
    x: Quadratic,
    p: Quadratic,
}

fn norm(s: f64, parity: Parity) -> f64 {
    match parity {
        Parity::Even => 1.0 + (-s).exp(),
        Parity::Odd => -(-s).exp_m1(),
    }
}

/// Blocks of the ideal state. The imaginary parts cancel between the two
/// interference blocks.
fn ideal_blocks(x0: f64, p0: f64, parity: Parity) -> [Block; 4] {
    let s = x0 * x0 + p0 * p0;
    let k = 1.0 / (2.0 * PI * norm(s, parity));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let real = |c: f64| Quadratic::centred(one * c, 1.0, zero);
    let cross_x = Quadratic::centred(Complex64::new(0.0, p0), 1.0, one * -p0 * p0);
    let cross_p = Quadratic::centred(Complex64::new(0.0, -x0), 1.0, one * -x0 * x0);
    let conj = |q: Quadratic| Quadratic {
        a: q.a,
        b: q.b.conj(),
        c: q.c.conj(),
    };
    let sign = parity.sign();
    [
        Block { coeff: k, x: real(x0), p: real(p0) },
        Block { coeff: k, x: real(-x0), p: real(-p0) },
        Block { coeff: sign * k, x: cross_x, p: cross_p },
        Block { coeff: sign * k, x: conj(cross_x), p: conj(cross_p) },
    ]
}

fn transmitted_blocks(x0: f64, p0: f64, parity: Parity, ch: &ChannelParams) -> [Block; 4] {
    ideal_blocks(x0, p0, parity).map(|b| Block {
        coeff: b.coeff,
        x: b.x.through(ch.f_x(), ch.sigma_x()),
        p: b.p.through(ch.f_p(), ch.sigma_p()),
    })
}

fn eval_blocks(blocks: &[Block], pt: PhasePoint) -> Complex64 {
    blocks
        .iter()
        .map(|b| b.coeff * b.x.eval(pt.x) * b.p.eval(pt.p))
        .sum()
}

/// Transmitted Wigner function summed from its complex Gaussian blocks.
pub fn wigner_blocks(state: &CatState, ch: &ChannelParams, pt: PhasePoint) -> f64 {
    eval_blocks(&transmitted_blocks(state.x0(), state.p0(), state.parity(), ch), pt).re
}

/// `∫ exp(q(x)) dx` by quadrature, at full or half resolution.
fn line_integral(q: &Quadratic, spec: &QuadratureSpec, coarse: bool) -> Result<Complex64> {
    if !(q.a < 0.0) {
        return Err(Error::NonFinite("integrand does not decay".into()));
    }
    let precision = -q.a;
    let width = 1.0 / precision.sqrt();
    // radians per unit length of the fringes
    let freq = q.b.im.abs();
    let panel = (3.0 / freq.max(1e-300)).min(1.5 * width);
    let span = 2.0 * spec.truncation_radius * width;
    let panels = (span / panel).ceil() as usize;
    let mut points = (panels * quadrature::PANEL).max(spec.points_per_axis);
    if coarse {
        points /= 2;
    }
    let half = spec.truncation_radius * width;
    // completed square, so narrow kernels do not cancel large exponents
    let m = q.centre();
    let offset = q.c - q.b * q.b / (4.0 * q.a);
    let shift = m.im * Complex64::i();
    let term = |u: f64| (q.a * (u - shift) * (u - shift) + offset).exp();
    let rule = quadrature::axis_rule(-half, half, points, spec.scheme);
    let re = quadrature::compensated_sum(rule.iter().map(|&(u, w)| w * term(u).re));
    let im = quadrature::compensated_sum(rule.iter().map(|&(u, w)| w * term(u).im));
    Ok(Complex64::new(re, im))
}

/// Runs `f` at full and half resolution and checks the two agree.
fn with_estimate<F>(spec: &QuadratureSpec, f: F) -> Result<Estimate>
where
    F: Fn(bool) -> Result<f64>,
{
    spec.validate()?;
    let fine = f(false)?;
    let coarse = f(true)?;
    if !fine.is_finite() {
        return Err(Error::NonFinite("oracle integral".into()));
    }
    let error_estimate = (fine - coarse).abs();
    if error_estimate > spec.tolerance {
        return Err(Error::QuadratureNotConverged {
            value: fine,
            estimate: error_estimate,
        });
    }
    Ok(Estimate {
        value: fine,
        error_estimate,
    })
}

/// Kernel factor `(pi s)^{-1/2} exp(-(y - f x)^2 / s)` as a function of `x`.
fn kernel(y: f64, f: f64, s: f64) -> Quadratic {
    Quadratic {
        a: -f * f / s,
        b: Complex64::new(2.0 * f * y / s, 0.0),
        c: Complex64::new(-y * y / s - 0.5 * (PI * s).ln(), 0.0),
    }
}

/// One axis of the channel integral; a noiseless axis is a delta function.
fn smooth_axis(g: &Quadratic, y: f64, f: f64, s: f64, spec: &QuadratureSpec, coarse: bool) -> Result<Complex64> {
    if s == 0.0 {
        return Ok(g.eval(y / f) / f);
    }
    line_integral(&g.times(&kernel(y, f, s)), spec, coarse)
}

/// The transmitted Wigner function at `pt`, by quadrature of the channel
/// integral.
pub fn wigner_numeric(state: &CatState, ch: &ChannelParams, pt: PhasePoint, spec: &QuadratureSpec) -> Result<Estimate> {
    let blocks = ideal_blocks(state.x0(), state.p0(), state.parity());
    with_estimate(spec, |coarse| {
        let mut total = Complex64::new(0.0, 0.0);
        for b in &blocks {
            let ix = smooth_axis(&b.x, pt.x, ch.f_x(), ch.sigma_x(), spec, coarse)?;
            let ip = smooth_axis(&b.p, pt.p, ch.f_p(), ch.sigma_p(), spec, coarse)?;
            total += b.coeff * ix * ip;
        }
        Ok(total.re)
    })
}

/// `∬ W'` over phase space; should be one.
pub fn normalization_numeric(state: &CatState, ch: &ChannelParams, spec: &QuadratureSpec) -> Result<Estimate> {
    let blocks = transmitted_blocks(state.x0(), state.p0(), state.parity(), ch);
    with_estimate(spec, |coarse| {
        let mut total = Complex64::new(0.0, 0.0);
        for b in &blocks {
            total += b.coeff * line_integral(&b.x, spec, coarse)? * line_integral(&b.p, spec, coarse)?;
        }
        Ok(total.re)
    })
}

/// `2 pi ∬ U V` for two block sums.
fn pair_integral(u: &[Block], v: &[Block], spec: &QuadratureSpec, coarse: bool) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    for a in u {
        for b in v {
            let ix = line_integral(&a.x.times(&b.x), spec, coarse)?;
            let ip = line_integral(&a.p.times(&b.p), spec, coarse)?;
            total += a.coeff * b.coeff * ix * ip;
        }
    }
    Ok(2.0 * PI * total.re)
}

/// Purity `2 pi ∬ W'^2` by quadrature.
pub fn purity_numeric(state: &CatState, ch: &ChannelParams, spec: &QuadratureSpec) -> Result<Estimate> {
    let blocks = transmitted_blocks(state.x0(), state.p0(), state.parity(), ch);
    with_estimate(spec, |coarse| pair_integral(&blocks, &blocks, spec, coarse))
}

/// Overlap `2 pi ∬ W'_+ W'_-` by quadrature.
pub fn overlap_numeric(x0: f64, p0: f64, ch: &ChannelParams, spec: &QuadratureSpec) -> Result<Estimate> {
    let even = transmitted_blocks(x0, p0, Parity::Even, ch);
    let odd = transmitted_blocks(x0, p0, Parity::Odd, ch);
    with_estimate(spec, |coarse| pair_integral(&even, &odd, spec, coarse))
}

/// Hilbert–Schmidt distance `2 pi ∬ (W'_+ - W'_-)^2` by quadrature.
pub fn hs_distance_numeric(x0: f64, p0: f64, ch: &ChannelParams, spec: &QuadratureSpec) -> Result<Estimate> {
    let mut diff: Vec<Block> = transmitted_blocks(x0, p0, Parity::Even, ch).to_vec();
    diff.extend(transmitted_blocks(x0, p0, Parity::Odd, ch).map(|b| Block { coeff: -b.coeff, ..b }));
    with_estimate(spec, |coarse| pair_integral(&diff, &diff, spec, coarse))
}
