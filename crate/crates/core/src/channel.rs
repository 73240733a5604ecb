//! Separable Gaussian channels.
//!
//! A channel acts on each quadrature independently: the input is scaled by a
//! gain `f` and Gaussian noise is added, so a Wigner-function Gaussian of
//! width `V` (in units where the vacuum has `V = 1`) maps to `f^2 V + sigma`.
//! Physical lossy channels are described by [`LossyStage`]: an optional
//! squeezer followed by a beam splitter that mixes the signal with a
//! squeezed thermal environment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gains and added noise variances of a separable Gaussian channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub struct ChannelParams {
    f_x: f64,
    f_p: f64,
    sigma_x: f64,
    sigma_p: f64,
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    f_x: f64,
    f_p: f64,
    sigma_x: f64,
    sigma_p: f64,
}

impl TryFrom<RawChannel> for ChannelParams {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        ChannelParams::new(raw.f_x, raw.f_p, raw.sigma_x, raw.sigma_p)
    }
}

impl From<ChannelParams> for RawChannel {
    fn from(c: ChannelParams) -> Self {
        RawChannel {
            f_x: c.f_x,
            f_p: c.f_p,
            sigma_x: c.sigma_x,
            sigma_p: c.sigma_p,
        }
    }
}

impl ChannelParams {
    pub fn new(f_x: f64, f_p: f64, sigma_x: f64, sigma_p: f64) -> Result<Self> {
        let all = [f_x, f_p, sigma_x, sigma_p];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidChannel(format!(
                "non-finite coefficient in {all:?}"
            )));
        }
        if f_x <= 0.0 || f_p <= 0.0 {
            return Err(Error::InvalidChannel(format!(
                "gains must be positive, got f_x = {f_x}, f_p = {f_p}"
            )));
        }
        if sigma_x < 0.0 || sigma_p < 0.0 {
            return Err(Error::InvalidChannel(format!(
                "noise variances must be non-negative, got {sigma_x}, {sigma_p}"
            )));
        }
        Ok(ChannelParams {
            f_x,
            f_p,
            sigma_x,
            sigma_p,
        })
    }

    pub const fn identity() -> Self {
        ChannelParams {
            f_x: 1.0,
            f_p: 1.0,
            sigma_x: 0.0,
            sigma_p: 0.0,
        }
    }

    /// Noiseless squeezer with rate `s`: `x -> e^{-s} x`, `p -> e^{s} p`.
    pub fn squeeze(s: f64) -> Self {
        ChannelParams {
            f_x: (-s).exp(),
            f_p: s.exp(),
            sigma_x: 0.0,
            sigma_p: 0.0,
        }
    }

    pub fn f_x(&self) -> f64 {
        self.f_x
    }

    pub fn f_p(&self) -> f64 {
        self.f_p
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    /// `V_x = sigma_x + f_x^2`: output width of a vacuum-width input.
    pub fn v_x(&self) -> f64 {
        self.sigma_x + self.f_x * self.f_x
    }

    pub fn v_p(&self) -> f64 {
        self.sigma_p + self.f_p * self.f_p
    }

    /// `sigma_x / V_x`, the share of the output x-variance that is added noise.
    pub fn noise_fraction_x(&self) -> f64 {
        self.sigma_x / self.v_x()
    }

    pub fn noise_fraction_p(&self) -> f64 {
        self.sigma_p / self.v_p()
    }

    /// Applies `self` first, then `next`.
    pub fn then(&self, next: &ChannelParams) -> ChannelParams {
        concatenate(self, next)
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self::identity()
    }
}

/// Composition of two channels, `first` acting before `second`.
///
/// Per axis `f = f2 f1` and `sigma = f2^2 sigma1 + sigma2`.
pub fn concatenate(first: &ChannelParams, second: &ChannelParams) -> ChannelParams {
    ChannelParams {
        f_x: second.f_x * first.f_x,
        f_p: second.f_p * first.f_p,
        sigma_x: second.f_x * second.f_x * first.sigma_x + second.sigma_x,
        sigma_p: second.f_p * second.f_p * first.sigma_p + second.sigma_p,
    }
}

/// Pre-squeezer followed by a beam splitter coupling to a squeezed thermal
/// environment.
///
/// Rates are in nats. `v = 0.5` is the vacuum, so `v = 0.5, gamma_t = 0`
/// is pure loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyStage {
    /// Intensity transmittance, `0 < eta <= 1`.
    pub eta: f64,
    /// Pre-squeezing rate applied to the signal before the beam splitter.
    #[serde(default)]
    pub gamma: f64,
    /// Symmetric variance of the thermal environment.
    pub v: f64,
    /// Squeezing rate of the environment, making its variances `e^{-/+2 gamma_t} v`.
    #[serde(default)]
    pub gamma_t: f64,
}

impl LossyStage {
    pub fn new(eta: f64, gamma: f64, v: f64, gamma_t: f64) -> Result<Self> {
        let stage = LossyStage {
            eta,
            gamma,
            v,
            gamma_t,
        };
        stage.validate()?;
        Ok(stage)
    }

    /// Pure loss with a vacuum environment.
    pub fn pure_loss(eta: f64) -> Result<Self> {
        Self::new(eta, 0.0, 0.5, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidStage(format!(
                "transmittance {} outside (0, 1]",
                self.eta
            )));
        }
        if !(self.v >= 0.5) || !self.v.is_finite() {
            return Err(Error::InvalidStage(format!(
                "thermal variance {} below the vacuum value 0.5",
                self.v
            )));
        }
        if !self.gamma.is_finite() || !self.gamma_t.is_finite() {
            return Err(Error::InvalidStage("non-finite squeezing rate".into()));
        }
        Ok(())
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        LossyStage { gamma, ..self }
    }

    /// Whether the environment stays classical, see [`classicality_check`].
    pub fn is_classical(&self) -> bool {
        classicality_check(self.v, self.gamma_t).classical
    }
}

/// Kernel coefficients of a single lossy stage.
///
/// `f_x = sqrt(eta) e^{-gamma}`, `f_p = sqrt(eta) e^{gamma}`,
/// `sigma_x = 2 (1 - eta) e^{-2 gamma_t} v`, `sigma_p = 2 (1 - eta) e^{2 gamma_t} v`.
pub fn lossy_channel(stage: &LossyStage) -> Result<ChannelParams> {
    stage.validate()?;
    let gain = stage.eta.sqrt();
    let noise = 2.0 * (1.0 - stage.eta) * stage.v;
    ChannelParams::new(
        gain * (-stage.gamma).exp(),
        gain * stage.gamma.exp(),
        noise * (-2.0 * stage.gamma_t).exp(),
        noise * (2.0 * stage.gamma_t).exp(),
    )
}

/// Ordered chain of lossy stages. Each stage's `gamma` squeezes the signal
/// right before that stage's beam splitter, so for the second stage it is
/// the mid-squeezing rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LossyStage>", into = "Vec<LossyStage>")]
pub struct CompositeSpec {
    stages: Vec<LossyStage>,
}

impl TryFrom<Vec<LossyStage>> for CompositeSpec {
    type Error = Error;

    fn try_from(stages: Vec<LossyStage>) -> Result<Self> {
        CompositeSpec::new(stages)
    }
}

impl From<CompositeSpec> for Vec<LossyStage> {
    fn from(spec: CompositeSpec) -> Self {
        spec.stages
    }
}

impl CompositeSpec {
    pub fn new(stages: Vec<LossyStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::StageCount {
                expected: 1,
                found: 0,
            });
        }
        for stage in &stages {
            stage.validate()?;
        }
        Ok(CompositeSpec { stages })
    }

    /// Two stages with pre-squeezing `gamma` and mid-squeezing `gamma_mid`.
    pub fn two_stage(first: LossyStage, second: LossyStage, gamma: f64, gamma_mid: f64) -> Result<Self> {
        Self::new(vec![first.with_gamma(gamma), second.with_gamma(gamma_mid)])
    }

    pub fn stages(&self) -> &[LossyStage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Copy with the squeezing rate of stage `index` replaced.
    pub fn with_gamma(&self, index: usize, gamma: f64) -> Self {
        let mut stages = self.stages.clone();
        stages[index].gamma = gamma;
        CompositeSpec { stages }
    }

    fn expect_two(&self) -> Result<(&LossyStage, &LossyStage)> {
        match self.stages.as_slice() {
            [a, b] => Ok((a, b)),
            other => Err(Error::StageCount {
                expected: 2,
                found: other.len(),
            }),
        }
    }
}

/// Kernel coefficients of the whole chain, folded left to right.
pub fn composite_channel(spec: &CompositeSpec) -> Result<ChannelParams> {
    spec.stages
        .iter()
        .try_fold(ChannelParams::identity(), |acc, stage| {
            Ok(concatenate(&acc, &lossy_channel(stage)?))
        })
}

/// Single lossy stage equivalent to a symmetrized two-stage chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveChannel {
    pub eta: f64,
    pub v: f64,
    /// Mid-squeezing `gamma_t' - gamma_t` that makes the reduction exact.
    pub mid_squeeze: f64,
}

impl EffectiveChannel {
    /// Symmetric stage with the effective parameters and pre-squeezing `gamma`.
    pub fn stage(&self, gamma: f64) -> Result<LossyStage> {
        LossyStage::new(self.eta, gamma, self.v, 0.0)
    }
}

/// Reduces a two-stage chain to one symmetric lossy stage.
///
/// With the mid-squeeze set to `gamma_t' - gamma_t`, the chain pre-squeezed
/// by `gamma` equals the effective stage pre-squeezed by `gamma - gamma_t`
/// followed by an output squeezer. The squeezing rates stored in `spec` are
/// ignored.
pub fn effective_single(spec: &CompositeSpec) -> Result<EffectiveChannel> {
    let (first, second) = spec.expect_two()?;
    let eta = first.eta * second.eta;
    if eta >= 1.0 {
        return Err(Error::DegenerateComposite);
    }
    // (1-eta')V' + (1-eta)eta'V over 1 - eta eta', written as an offset from V'
    // so that equal variances reduce exactly.
    let v = second.v + (1.0 - first.eta) * second.eta * (first.v - second.v) / (1.0 - eta);
    Ok(EffectiveChannel {
        eta,
        v,
        mid_squeeze: second.gamma_t - first.gamma_t,
    })
}

/// Verdict of [`classicality_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classicality {
    pub classical: bool,
    /// Largest `|gamma_t|` that keeps the environment classical, `ln(2v) / 2`.
    pub threshold: f64,
    /// Smaller environment variance relative to the vacuum, `2 v e^{-2|gamma_t|}`.
    pub min_variance_ratio: f64,
}

/// Whether a squeezed thermal environment stays classical: neither
/// quadrature variance drops below the vacuum.
pub fn classicality_check(v: f64, gamma_t: f64) -> Classicality {
    let min_variance_ratio = 2.0 * v * (-2.0 * gamma_t.abs()).exp();
    Classicality {
        classical: min_variance_ratio >= 1.0,
        threshold: 0.5 * (2.0 * v).ln(),
        min_variance_ratio,
    }
}
