//! Boundary parameters, the physical boundary fields they encode, and the
//! four boundary regimes.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The six real boundary parameters `(ξ, θ, φ, ξ′, θ′, φ′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryParams {
    pub xi: f64,
    pub theta: f64,
    pub phi: f64,
    pub xi_prime: f64,
    pub theta_prime: f64,
    pub phi_prime: f64,
}

impl BoundaryParams {
    pub fn new(xi: f64, theta: f64, phi: f64, xi_prime: f64, theta_prime: f64, phi_prime: f64) -> Result<Self> {
        let p = Self { xi, theta, phi, xi_prime, theta_prime, phi_prime };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with only `ξ`, `ξ′` and the left polar angle set; the
    /// remaining angles are zero. This is the layout used by every figure.
    pub fn with_tilt(xi: f64, xi_prime: f64, theta: f64) -> Result<Self> {
        Self::new(xi, theta, 0.0, xi_prime, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.xi, self.theta, self.phi, self.xi_prime, self.theta_prime, self.phi_prime];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("all six boundary parameters must be finite reals".into()));
        }
        if self.xi == 0.0 {
            return Err(Error::Pole("xi = 0".into()));
        }
        if self.xi_prime == 1.0 {
            return Err(Error::Pole("xi' = 1".into()));
        }
        Ok(())
    }

    /// Constant in front of the inhomogeneous term of the T-Q relation;
    /// one minus the cosine of the angle between the two boundary fields.
    pub fn h(&self) -> f64 {
        1.0 - (self.theta.cos() * self.theta_prime.cos()
            + self.theta.sin() * self.theta_prime.sin() * (self.phi - self.phi_prime).cos())
    }

    /// The same `ξ, ξ′` with both fields along the z axis (so `h = 0`).
    pub fn parallel_companion(&self) -> Self {
        Self { theta: 0.0, phi: 0.0, theta_prime: 0.0, phi_prime: 0.0, ..*self }
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.xi, self.xi_prime)
    }
}

/// Boundary chemical potentials and magnetic fields of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFields {
    pub chi_1: f64,
    pub chi_l: f64,
    pub h_1: [f64; 3],
    pub h_l: [f64; 3],
}

impl BoundaryFields {
    pub fn zero() -> Self {
        Self { chi_1: 0.0, chi_l: 0.0, h_1: [0.0; 3], h_l: [0.0; 3] }
    }
}

/// Maps the boundary parameters onto the chemical potentials and fields.
pub fn map_boundary_params(p: &BoundaryParams) -> Result<BoundaryFields> {
    p.validate()?;
    let a = 1.0 / (2.0 * p.xi);
    let b = 1.0 / (2.0 * (1.0 - p.xi_prime));
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let (stp, ctp) = p.theta_prime.sin_cos();
    let (spp, cpp) = p.phi_prime.sin_cos();
    Ok(BoundaryFields {
        chi_1: -1.0 + a,
        chi_l: -1.0 + b,
        h_1: [-a * st * cp, -a * st * sp, a * ct],
        h_l: [b * stp * cpp, b * stp * spp, -b * ctp],
    })
}

/// Boundary regime, fixed by the signs of `ξ` and `ξ′ − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// ξ > 0, ξ′ < 1
    I,
    /// ξ > 0, ξ′ > 1
    II,
    /// ξ < 0, ξ′ < 1
    III,
    /// ξ < 0, ξ′ > 1
    IV,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::I, Regime::II, Regime::III, Regime::IV];

    pub fn classify(xi: f64, xi_prime: f64) -> Regime {
        match (xi > 0.0, xi_prime < 1.0) {
            (true, true) => Regime::I,
            (true, false) => Regime::II,
            (false, true) => Regime::III,
            (false, false) => Regime::IV,
        }
    }

    pub fn check(self, p: &BoundaryParams) -> Result<()> {
        let actual = p.regime();
        if actual != self {
            return Err(Error::RegimeMismatch(format!(
                "xi = {}, xi' = {} belong to regime {}, not {}",
                p.xi, p.xi_prime, actual, self
            )));
        }
        Ok(())
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::I => "i",
            Regime::II => "ii",
            Regime::III => "iii",
            Regime::IV => "iv",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Regime::I),
            "ii" | "2" => Ok(Regime::II),
            "iii" | "3" => Ok(Regime::III),
            "iv" | "4" => Ok(Regime::IV),
            other => Err(Error::Parse(format!("unknown regime '{other}'"))),
        }
    }
}
