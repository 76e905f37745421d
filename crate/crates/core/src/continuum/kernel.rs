use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `a_m(λ) = (1/2π) m / (λ² + m²/4)`.
pub fn kernel_a(m: f64, lambda: f64) -> f64 {
    m / (2.0 * PI * (lambda * lambda + 0.25 * m * m))
}

/// `θ_m(λ) = 2 arctan(2λ/m)`, so that `a_m = θ_m′ / 2π`.
pub fn kernel_theta(m: f64, lambda: f64) -> f64 {
    2.0 * (2.0 * lambda / m).atan()
}

/// A Lorentzian kernel of width parameter `m > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub m: f64,
}

impl KernelSpec {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput(format!("kernel width must be positive and finite, got {m}")));
        }
        Ok(KernelSpec { m })
    }

    pub fn a(&self, lambda: f64) -> f64 {
        kernel_a(self.m, lambda)
    }

    pub fn theta(&self, lambda: f64) -> f64 {
        kernel_theta(self.m, lambda)
    }

    /// `∫ a_m(λ) e^{iwλ} dλ = e^{−m|w|/2}`.
    pub fn fourier(&self, w: f64) -> f64 {
        (-0.5 * self.m * w.abs()).exp()
    }

    /// `∫_{x}^{∞} a_m`.
    pub fn upper_tail(&self, x: f64) -> f64 {
        0.5 - self.theta(x) / (2.0 * PI)
    }
}
