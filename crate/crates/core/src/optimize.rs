//! Optimal protective squeezing.
//!
//! The objectives have no convenient derivatives, so every search is a
//! coarse grid scan over the bracket followed by Brent's parabolic /
//! golden-section refinement around the best grid point. The scan picks the
//! global maximum if the objective has several.

use serde::{Deserialize, Serialize};

use crate::channel::{composite_channel, effective_single, lossy_channel, CompositeSpec, LossyStage};
use crate::distance::hs_distance;
use crate::error::{Error, Result};
use crate::negativity::{central_negativity, is_feasible, negativity_possible};
use crate::state::{CatState, Parity};

/// Evaluation budget of a single [`scalar_maximize`] call.
pub const MAX_EVALUATIONS: usize = 500;

/// Result of a one-dimensional maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub argmax: f64,
    pub max: f64,
    pub evaluations: usize,
}

/// Brent's method for a local maximum of `f` on `[lo, hi]`.
///
/// Converges to within `tol + sqrt(eps) |x|` of the maximizer of a unimodal
/// function. Fails with [`Error::NotConverged`] after [`MAX_EVALUATIONS`].
pub fn scalar_maximize<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<ScalarMax>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let golden = 0.5 * (3.0 - 5f64.sqrt());
    let rel = f64::EPSILON.sqrt();
    // minimize g = -f
    let mut g = |x: f64| -f(x);

    let (mut a, mut b) = (lo, hi);
    let mut x = a + golden * (b - a);
    let (mut w, mut v) = (x, x);
    let mut gx = g(x);
    let (mut gw, mut gv) = (gx, gx);
    let mut evaluations = 1;
    let (mut d, mut e) = (0.0f64, 0.0f64);

    loop {
        let mid = 0.5 * (a + b);
        let tol1 = rel * x.abs() + tol;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(ScalarMax {
                argmax: x,
                max: -gx,
                evaluations,
            });
        }
        if evaluations >= MAX_EVALUATIONS {
            return Err(Error::NotConverged {
                evaluations,
                best_x: x,
            });
        }

        let mut parabolic = false;
        if e.abs() > tol1 {
            let r = (x - w) * (gx - gv);
            let mut q = (x - v) * (gx - gw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < mid { tol1 } else { -tol1 };
                }
                parabolic = true;
            }
        }
        if !parabolic {
            e = if x < mid { b - x } else { a - x };
            d = golden * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let gu = g(u);
        evaluations += 1;

        if gu <= gx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            gv = gw;
            w = x;
            gw = gx;
            x = u;
            gx = gu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if gu <= gw || w == x {
                v = w;
                gv = gw;
                w = u;
                gw = gu;
            } else if gu <= gv || v == x || v == w {
                v = u;
                gv = gu;
            }
        }
    }
}

/// Search settings shared by the squeezing optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Squeezing-rate bracket in nats.
    pub bracket: (f64, f64),
    /// Absolute tolerance on the rate.
    pub tol: f64,
    /// Points of the coarse pre-scan.
    pub scan_points: usize,
    /// Objective spread (relative) below which the objective counts as flat.
    pub flat_tol: f64,
    /// Coordinate-descent rounds for two-rate searches.
    pub max_rounds: usize,
    /// Per-round movement below which coordinate descent stops.
    pub round_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bracket: (-3.0, 3.0),
            tol: 1e-8,
            scan_points: 61,
            flat_tol: 1e-12,
            max_rounds: 50,
            round_tol: 1e-6,
        }
    }
}

/// Outcome of a squeezing optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Optimal pre-squeezing rate (nats).
    pub gamma_opt: f64,
    /// Optimal mid-squeezing rate for two-stage channels.
    pub gamma_mid_opt: Option<f64>,
    /// Objective at the optimum: the central value (negative when
    /// protected) or the Hilbert–Schmidt distance.
    pub objective: f64,
    /// Objective with no squeezing at all.
    pub baseline: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// The objective does not depend on the squeezing rate; `gamma_opt` is 0.
    pub flat: bool,
    /// Final refinement bracket of `gamma_opt`.
    pub bracket: (f64, f64),
}

struct Found {
    argmax: f64,
    max: f64,
    evaluations: usize,
    converged: bool,
    flat: bool,
    bracket: (f64, f64),
}

/// Grid scan of `f` on the bracket, then Brent refinement around the best
/// grid point.
fn maximize_on_bracket<F>(f: F, cfg: &SearchConfig) -> Result<Found>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = cfg.bracket;
    if !(lo < hi) || cfg.scan_points < 3 {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let n = cfg.scan_points;
    let step = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("objective at {}", grid[bad])));
    }
    let (best, &best_val) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty scan");
    let worst = values.iter().copied().fold(f64::INFINITY, f64::min);

    if best_val - worst <= cfg.flat_tol * best_val.abs().max(1.0) {
        let x = 0.0f64.clamp(lo, hi);
        return Ok(Found {
            argmax: x,
            max: f(x),
            evaluations: n + 1,
            converged: true,
            flat: true,
            bracket: (lo, hi),
        });
    }

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    match scalar_maximize(&f, a, b, cfg.tol) {
        Ok(r) => {
            let (mut argmax, mut max) = if r.max >= best_val {
                (r.argmax, r.max)
            } else {
                (grid[best], best_val)
            };
            let mut evaluations = n + r.evaluations;
            // never report less than no squeezing at all
            if lo <= 0.0 && 0.0 <= hi {
                evaluations += 1;
                let at_zero = f(0.0);
                if at_zero > max {
                    (argmax, max) = (0.0, at_zero);
                }
            }
            Ok(Found {
                argmax,
                max,
                evaluations,
                converged: true,
                flat: false,
                bracket: (a, b),
            })
        }
        Err(Error::NotConverged { evaluations, .. }) => Ok(Found {
            argmax: grid[best],
            max: best_val,
            evaluations: n + evaluations,
            converged: false,
            flat: false,
            bracket: (a, b),
        }),
        Err(e) => Err(e),
    }
}

fn cn_of_stage(state: &CatState, stage: &LossyStage) -> f64 {
    lossy_channel(stage)
        .and_then(|ch| central_negativity(state, &ch))
        .unwrap_or(f64::NAN)
}

fn require_odd(state: &CatState) -> Result<()> {
    if state.parity() == Parity::Odd {
        Ok(())
    } else {
        Err(Error::RequiresOddParity)
    }
}

/// Pre-squeezing that makes the central value of a transmitted odd cat as
/// negative as possible.
pub fn optimize_presqueeze_cn(
    state: &CatState,
    eta: f64,
    v: f64,
    gamma_t: f64,
) -> Result<OptimizationResult> {
    optimize_presqueeze_cn_with(state, eta, v, gamma_t, &SearchConfig::default())
}

pub fn optimize_presqueeze_cn_with(
    state: &CatState,
    eta: f64,
    v: f64,
    gamma_t: f64,
    cfg: &SearchConfig,
) -> Result<OptimizationResult> {
    require_odd(state)?;
    let stage = LossyStage::new(eta, 0.0, v, gamma_t)?;
    // the condition does not depend on gamma
    if !negativity_possible(&lossy_channel(&stage)?) {
        return Err(Error::NoProtectionPossible { eta, v });
    }
    let objective = |g: f64| -cn_of_stage(state, &stage.with_gamma(g));
    let found = maximize_on_bracket(objective, cfg)?;
    Ok(OptimizationResult {
        gamma_opt: found.argmax,
        gamma_mid_opt: None,
        objective: -found.max,
        baseline: cn_of_stage(state, &stage),
        evaluations: found.evaluations,
        converged: found.converged,
        flat: found.flat,
        bracket: found.bracket,
    })
}

/// Joint pre- and mid-squeezing for a two-stage chain, by alternating
/// one-dimensional searches. The squeezing rates stored in `spec` are
/// ignored.
pub fn optimize_composite(state: &CatState, spec: &CompositeSpec) -> Result<OptimizationResult> {
    optimize_composite_with(state, spec, &SearchConfig::default())
}

pub fn optimize_composite_with(
    state: &CatState,
    spec: &CompositeSpec,
    cfg: &SearchConfig,
) -> Result<OptimizationResult> {
    require_odd(state)?;
    match effective_single(spec) {
        Ok(eff) if !is_feasible(eff.eta, eff.v) => {
            return Err(Error::NoProtectionPossible {
                eta: eff.eta,
                v: eff.v,
            })
        }
        Ok(_) | Err(Error::DegenerateComposite) => {}
        Err(e) => return Err(e),
    }

    let cn = |g: f64, mid: f64| -> f64 {
        let s = spec.with_gamma(0, g).with_gamma(1, mid);
        composite_channel(&s)
            .and_then(|ch| central_negativity(state, &ch))
            .unwrap_or(f64::NAN)
    };

    let (mut gamma, mut mid) = (0.0f64, 0.0f64);
    let mut evaluations = 0;
    let mut converged = false;
    let mut flat = false;
    let mut bracket = cfg.bracket;
    let mut best = -cn(gamma, mid);

    for round in 0..cfg.max_rounds {
        let pre = maximize_on_bracket(|g| -cn(g, mid), cfg)?;
        let post = maximize_on_bracket(|m| -cn(pre.argmax, m), cfg)?;
        evaluations += pre.evaluations + post.evaluations;
        if round == 0 && pre.flat && post.flat {
            flat = true;
            converged = true;
            best = post.max;
            gamma = pre.argmax;
            mid = post.argmax;
            break;
        }
        let moved = (pre.argmax - gamma).abs().max((post.argmax - mid).abs());
        gamma = pre.argmax;
        mid = post.argmax;
        best = post.max;
        bracket = pre.bracket;
        if moved < cfg.round_tol && pre.converged && post.converged {
            converged = true;
            break;
        }
    }

    Ok(OptimizationResult {
        gamma_opt: gamma,
        gamma_mid_opt: Some(mid),
        objective: -best,
        baseline: cn(0.0, 0.0),
        evaluations,
        converged,
        flat,
        bracket,
    })
}

/// Pre-squeezing that maximizes the Hilbert–Schmidt distance between the
/// transmitted even and odd cats, for a symmetric thermal environment.
pub fn optimize_presqueeze_hs(x0: f64, p0: f64, eta: f64, v: f64) -> Result<OptimizationResult> {
    optimize_presqueeze_hs_with(x0, p0, eta, v, &SearchConfig::default())
}

pub fn optimize_presqueeze_hs_with(
    x0: f64,
    p0: f64,
    eta: f64,
    v: f64,
    cfg: &SearchConfig,
) -> Result<OptimizationResult> {
    optimize_stage_hs(x0, p0, &LossyStage::new(eta, 0.0, v, 0.0)?, cfg)
}

/// Distance-maximizing pre-squeezing for an arbitrary stage; the rate
/// stored in `stage` is ignored.
pub fn optimize_stage_hs(x0: f64, p0: f64, stage: &LossyStage, cfg: &SearchConfig) -> Result<OptimizationResult> {
    stage.validate()?;
    let stage = stage.with_gamma(0.0);
    let distance = |g: f64| {
        lossy_channel(&stage.with_gamma(g))
            .map(|ch| hs_distance(x0, p0, &ch).distance)
            .unwrap_or(f64::NAN)
    };
    let found = maximize_on_bracket(distance, cfg)?;
    Ok(OptimizationResult {
        gamma_opt: found.argmax,
        gamma_mid_opt: None,
        objective: found.max,
        baseline: distance(0.0),
        evaluations: found.evaluations,
        converged: found.converged,
        flat: found.flat,
        bracket: found.bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::db_to_nats;
    use std::f64::consts::FRAC_1_PI;

    fn odd3() -> CatState {
        CatState::odd(3.0, 0.0).unwrap()
    }

    /// Brute-force argmax on a uniform grid.
    fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step).round() as usize;
        (0..=n)
            .map(|i| lo + step * i as f64)
            .max_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap()
    }

    #[test]
    fn parabola() {
        let r = scalar_maximize(|x| -(x - 1.0) * (x - 1.0), -4.0, 4.0, 1e-8).unwrap();
        assert!((r.argmax - 1.0).abs() < 1e-7, "{r:?}");
        assert!(r.max.abs() < 1e-14);
    }

    #[test]
    fn cosine() {
        let r = scalar_maximize(f64::cos, -1.0, 1.0, 1e-8).unwrap();
        assert!(r.argmax.abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn bad_bracket() {
        assert!(scalar_maximize(f64::cos, 1.0, -1.0, 1e-8).is_err());
        assert!(scalar_maximize(f64::cos, 0.0, f64::INFINITY, 1e-8).is_err());
    }

    #[test]
    fn monotone_function_runs_to_the_edge() {
        let r = scalar_maximize(|x| x, 0.0, 2.0, 1e-9).unwrap();
        assert!((r.argmax - 2.0).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn cn_objective_matches_grid() {
        let stage = LossyStage::new(0.8, 0.0, 0.5, 0.0).unwrap();
        let f = |g: f64| -cn_of_stage(&odd3(), &stage.with_gamma(g));
        let r = scalar_maximize(f, 0.0, 2.0, 1e-8).unwrap();
        let grid = grid_argmax(f, 0.0, 2.0, 1e-5);
        assert!((r.argmax - grid).abs() < 1e-4, "{} vs {grid}", r.argmax);
    }

    #[test]
    fn lossless_is_flat() {
        let r = optimize_presqueeze_cn(&odd3(), 1.0, 0.5, 0.0).unwrap();
        assert!(r.flat);
        assert_eq!(r.gamma_opt, 0.0);
        assert!((r.objective + FRAC_1_PI).abs() < 1e-12);

        let r = optimize_presqueeze_hs(3.0, 0.0, 1.0, 0.5).unwrap();
        assert!(r.flat);
        assert!((r.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_channel_is_reported() {
        let err = optimize_presqueeze_cn(&odd3(), 0.5, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::NoProtectionPossible { .. }));
        let even = CatState::even(3.0, 0.0).unwrap();
        assert!(matches!(
            optimize_presqueeze_cn(&even, 0.8, 0.5, 0.0),
            Err(Error::RequiresOddParity)
        ));
    }

    #[test]
    fn pure_loss_optimum_beats_unprotected() {
        let r = optimize_presqueeze_cn(&odd3(), 0.8, 0.5, 0.0).unwrap();
        assert!(r.converged && !r.flat);
        let stage = LossyStage::new(0.8, 0.0, 0.5, 0.0).unwrap();
        let grid = grid_argmax(|g| -cn_of_stage(&odd3(), &stage.with_gamma(g)), -3.0, 3.0, 1e-5);
        assert!((r.gamma_opt - grid).abs() < 1e-4);
        assert!(r.objective <= r.baseline);
        assert!((r.baseline + 0.05238).abs() < 1e-5);
    }

    #[test]
    fn asymmetry_shifts_the_optimum() {
        let base = optimize_presqueeze_cn(&odd3(), 0.8, 1.0, 0.0).unwrap();
        for db in [-3.0, -1.0, 1.0, 3.0] {
            let gt = db_to_nats(db);
            let r = optimize_presqueeze_cn(&odd3(), 0.8, 1.0, gt).unwrap();
            assert!((r.gamma_opt - base.gamma_opt - gt).abs() < 1e-4);
            assert!((r.objective - base.objective).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetric_identical_environments_need_no_mid_squeeze() {
        let stage = LossyStage::new(0.9, 0.0, 1.0, 0.0).unwrap();
        let spec = CompositeSpec::new(vec![stage, stage]).unwrap();
        let r = optimize_composite(&odd3(), &spec).unwrap();
        assert!(r.converged);
        assert!(r.gamma_mid_opt.unwrap().abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn mid_squeeze_follows_environment_difference() {
        let eta = 0.9;
        let second = LossyStage::new(eta, 0.0, 2.0, db_to_nats(1.0)).unwrap();
        for db in [-2.0, -1.0, 1.0, 2.0] {
            let first = LossyStage::new(eta, 0.0, 1.0, db_to_nats(db)).unwrap();
            let r = optimize_composite(&odd3(), &CompositeSpec::new(vec![first, second]).unwrap()).unwrap();
            assert!(r.converged, "{r:?}");
            let mid = r.gamma_mid_opt.unwrap();
            assert!((mid - db_to_nats(1.0 - db)).abs() < 1e-4, "{db} dB: {mid}");
        }
    }

    #[test]
    fn hs_optimum_is_roughly_linear_in_eta() {
        let etas: Vec<f64> = (0..=12).map(|i| 0.3 + 0.05 * i as f64).collect();
        let gammas: Vec<f64> = etas
            .iter()
            .map(|&eta| optimize_presqueeze_hs(3.0, 0.0, eta, 0.5).unwrap().gamma_opt)
            .collect();
        let n = etas.len() as f64;
        let (mx, my) = (etas.iter().sum::<f64>() / n, gammas.iter().sum::<f64>() / n);
        let sxy: f64 = etas.iter().zip(&gammas).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = etas.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let worst = etas
            .iter()
            .zip(&gammas)
            .map(|(x, y)| (y - my - slope * (x - mx)).abs())
            .fold(0.0, f64::max);
        let spread = gammas.iter().copied().fold(f64::MIN, f64::max) - gammas.iter().copied().fold(f64::MAX, f64::min);
        assert!(worst < 0.1 * spread, "residual {worst}, variation {spread}, {gammas:?}");
    }

    proptest::proptest! {
        #[test]
        fn optimum_never_worse_than_no_squeezing(eta in 0.05..1.0f64, v in 0.5..2.5f64, gt in -0.5..0.5f64, x0 in 0.5..4.0f64) {
            if let Ok(r) = optimize_presqueeze_cn(&CatState::odd(x0, 0.0).unwrap(), eta, v, gt) {
                proptest::prop_assert!(r.objective <= r.baseline + 1e-12);
            }
            let r = optimize_presqueeze_hs(x0, 0.4, eta, v).unwrap();
            proptest::prop_assert!(r.objective >= r.baseline - 1e-12);
        }

        #[test]
        fn argmax_near_fine_grid(eta in 0.7..0.99f64, v in 0.5..1.0f64) {
            let stage = LossyStage::new(eta, 0.0, v, 0.0).unwrap();
            let r = optimize_presqueeze_cn(&odd3(), eta, v, 0.0).unwrap();
            let grid = grid_argmax(|g| -cn_of_stage(&odd3(), &stage.with_gamma(g)), -3.0, 3.0, 1e-3);
            proptest::prop_assert!((r.gamma_opt - grid).abs() <= 2e-3, "{} vs {grid}", r.gamma_opt);
        }
    }

    #[test]
    fn hs_optimum_matches_grid() {
        let r = optimize_presqueeze_hs(3.0, 0.0, 0.6, 0.5).unwrap();
        let stage = LossyStage::new(0.6, 0.0, 0.5, 0.0).unwrap();
        let f = |g: f64| hs_distance(3.0, 0.0, &lossy_channel(&stage.with_gamma(g)).unwrap()).distance;
        let grid = grid_argmax(f, -3.0, 3.0, 1e-5);
        assert!((r.gamma_opt - grid).abs() < 1e-4, "{} vs {grid}", r.gamma_opt);
        assert!(r.objective >= r.baseline - 1e-12);
    }
}
