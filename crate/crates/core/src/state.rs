//! Cat states and phase-space points.
//!
//! Quadratures follow `[x, p] = i`, so the vacuum Wigner function is
//! `exp(-x^2 - p^2) / pi`. A coherent amplitude `xi` is stored through its
//! quadrature displacement, `sqrt(2) xi = x0 + i p0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative sign of the two coherent components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "+" => Ok(Parity::Even),
            "odd" | "-" => Ok(Parity::Odd),
            other => Err(Error::InvalidState(format!("unknown parity `{other}`"))),
        }
    }
}

/// Superposition `|xi> +/- |-xi>` of two coherent states, normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCatState", into = "RawCatState")]
pub struct CatState {
    x0: f64,
    p0: f64,
    parity: Parity,
}

#[derive(Serialize, Deserialize)]
struct RawCatState {
    x0: f64,
    #[serde(default)]
    p0: f64,
    parity: Parity,
}

impl TryFrom<RawCatState> for CatState {
    type Error = Error;

    fn try_from(raw: RawCatState) -> Result<Self> {
        CatState::new(raw.x0, raw.p0, raw.parity)
    }
}

impl From<CatState> for RawCatState {
    fn from(s: CatState) -> Self {
        RawCatState {
            x0: s.x0,
            p0: s.p0,
            parity: s.parity,
        }
    }
}

impl CatState {
    /// Builds a cat state from its quadrature displacement.
    ///
    /// The odd state does not exist at zero amplitude, its normalization
    /// `1 - exp(-2|xi|^2)` vanishes.
    pub fn new(x0: f64, p0: f64, parity: Parity) -> Result<Self> {
        if !x0.is_finite() || !p0.is_finite() {
            return Err(Error::InvalidState(format!(
                "displacement ({x0}, {p0}) is not finite"
            )));
        }
        if parity == Parity::Odd && x0 == 0.0 && p0 == 0.0 {
            return Err(Error::InvalidState(
                "odd cat state needs a nonzero amplitude".into(),
            ));
        }
        Ok(CatState { x0, p0, parity })
    }

    pub fn even(x0: f64, p0: f64) -> Result<Self> {
        Self::new(x0, p0, Parity::Even)
    }

    pub fn odd(x0: f64, p0: f64) -> Result<Self> {
        Self::new(x0, p0, Parity::Odd)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Same amplitude, other parity.
    pub fn with_parity(&self, parity: Parity) -> Result<Self> {
        Self::new(self.x0, self.p0, parity)
    }

    /// `2|xi|^2 = x0^2 + p0^2`.
    pub fn two_xi_sq(&self) -> f64 {
        self.x0 * self.x0 + self.p0 * self.p0
    }

    /// `|xi|^2`, the mean photon number of each coherent component.
    pub fn xi_sq(&self) -> f64 {
        0.5 * self.two_xi_sq()
    }

    /// `1 +/- exp(-2|xi|^2)`, the normalization of the superposition.
    pub fn normalization(&self) -> f64 {
        let s = self.two_xi_sq();
        match self.parity {
            Parity::Even => 1.0 + (-s).exp(),
            Parity::Odd => -(-s).exp_m1(),
        }
    }
}

/// A point `(x, p)` of quadrature phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { x: 0.0, p: 0.0 };

    pub fn new(x: f64, p: f64) -> Self {
        PhasePoint { x, p }
    }

    pub fn reflected(&self) -> Self {
        PhasePoint {
            x: -self.x,
            p: -self.p,
        }
    }
}
