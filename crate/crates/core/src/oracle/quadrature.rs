//! Tensor-product quadrature on rectangles of phase space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes per Gauss–Legendre panel.
pub const PANEL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Composite Gauss–Legendre, [`PANEL`] nodes per panel.
    GaussLegendre,
    /// Uniform trapezoid rule.
    Trapezoid,
}

/// Box size and resolution of a phase-space quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the square integration box.
    pub truncation_radius: f64,
    pub points_per_axis: usize,
    pub scheme: Scheme,
    /// Largest accepted change between full and half resolution.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            truncation_radius: 10.0,
            points_per_axis: 256,
            scheme: Scheme::GaussLegendre,
            tolerance: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_radius > 0.0) || !self.truncation_radius.is_finite() {
            return Err(Error::InvalidQuadrature(format!(
                "truncation radius {} must be positive",
                self.truncation_radius
            )));
        }
        if self.points_per_axis < 64 {
            return Err(Error::InvalidQuadrature(format!(
                "{} points per axis, need at least 64",
                self.points_per_axis
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidQuadrature("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn with_points(self, points_per_axis: usize) -> Self {
        QuadratureSpec {
            points_per_axis,
            ..self
        }
    }

    pub fn with_radius(self, truncation_radius: f64) -> Self {
        QuadratureSpec {
            truncation_radius,
            ..self
        }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        QuadratureSpec { scheme, ..self }
    }

    pub fn halved(self) -> Self {
        self.with_points(self.points_per_axis / 2)
    }
}

/// Integral value with the change observed when halving the resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Neumaier-compensated sum; the result does not depend on thread count.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut slope = 1.0;
        for _ in 0..100 {
            // P_n(x) and P_{n-1}(x)
            let (mut pn, mut prev) = (1.0f64, 0.0f64);
            for j in 1..=n {
                let j = j as f64;
                let next = ((2.0 * j - 1.0) * x * pn - (j - 1.0) * prev) / j;
                prev = pn;
                pn = next;
            }
            slope = n as f64 * (x * pn - prev) / (x * x - 1.0);
            let dx = pn / slope;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * slope * slope);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// One-dimensional rule on `[lo, hi]` with about `points` nodes.
pub fn axis_rule(lo: f64, hi: f64, points: usize, scheme: Scheme) -> Vec<(f64, f64)> {
    match scheme {
        Scheme::GaussLegendre => {
            let panels = points.div_ceil(PANEL).max(1);
            let (t, w) = gauss_legendre(PANEL);
            let width = (hi - lo) / panels as f64;
            (0..panels)
                .flat_map(|k| {
                    let centre = lo + width * (k as f64 + 0.5);
                    t.iter()
                        .zip(&w)
                        .map(move |(t, w)| (centre + 0.5 * width * t, 0.5 * width * w))
                })
                .collect()
        }
        Scheme::Trapezoid => {
            let n = points.max(2);
            let h = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
                    (lo + h * i as f64, w)
                })
                .collect()
        }
    }
}

/// `sum_i sum_j wx_i wp_j f(x_i, p_j)`, parallel over rows.
pub fn integrate_rules<F>(f: &F, xs: &[(f64, f64)], ps: &[(f64, f64)]) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|&(x, wx)| wx * compensated_sum(ps.iter().map(|&(p, wp)| wp * f(x, p))))
        .collect();
    compensated_sum(rows)
}

/// Integral over `[x_lo, x_hi] x [p_lo, p_hi]`.
pub fn integrate_box<F>(f: &F, x: (f64, f64), p: (f64, f64), points: usize, scheme: Scheme) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let xs = axis_rule(x.0, x.1, points, scheme);
    let ps = axis_rule(p.0, p.1, points, scheme);
    integrate_rules(f, &xs, &ps)
}

/// `∬ f dx dp` over the square `[-R, R]^2` of `spec`, checked against the
/// same integral at half resolution.
pub fn integrate_phase_space<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    spec.validate()?;
    let r = spec.truncation_radius;
    let fine = integrate_box(&f, (-r, r), (-r, r), spec.points_per_axis, spec.scheme);
    let coarse = integrate_box(&f, (-r, r), (-r, r), spec.points_per_axis / 2, spec.scheme);
    let error_estimate = (fine - coarse).abs();
    if !fine.is_finite() {
        return Err(Error::NonFinite("quadrature sum".into()));
    }
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
