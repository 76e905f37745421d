use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

use super::roots::QuantumNumbers;
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, Regime};

/// `θ_m(λ) = 2 arctan(2λ/m)`.
pub fn theta(m: f64, lambda: f64) -> f64 {
    2.0 * (2.0 * lambda / m).atan()
}

/// `dθ_m/dλ = 2π a_m(λ)`.
pub fn theta_prime(m: f64, lambda: f64) -> f64 {
    let x = 2.0 * lambda / m;
    4.0 / (m * (1.0 + x * x))
}

/// One boundary phase `sign · θ_width(λ)` on the right-hand side of the logarithmic equations.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPhase {
    pub sign: f64,
    pub width: f64,
}

/// Solves `2Lθ₂(λ_l) = 2πI_l + Σ_b s_b θ_{m_b}(λ_l) + Σ_j [θ₂(λ_l − λ_j) + θ₂(λ_l + λ_j)]`
/// for real centers by damped Newton with the analytic Jacobian.
pub fn solve_log_bae(q: &QuantumNumbers, len: usize, phases: &[BoundaryPhase]) -> Result<Vec<f64>> {
    q.validate()?;
    let m = q.values.len();
    if phases.iter().any(|b| b.width <= 0.0) {
        return Err(Error::InvalidInput("phase widths must be positive".into()));
    }
    let two_l = 2.0 * len as f64;
    let residual = |x: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|l| {
                let mut f = two_l * theta(2.0, x[l]) - 2.0 * PI * q.values[l] as f64;
                for b in phases {
                    f -= b.sign * theta(b.width, x[l]);
                }
                for j in 0..m {
                    f -= theta(2.0, x[l] - x[j]) + theta(2.0, x[l] + x[j]);
                }
                f
            })
            .collect()
    };
    let jac = |x: &[f64]| -> DMatrix<f64> {
        DMatrix::from_fn(m, m, |l, j| {
            if l == j {
                let mut d = two_l * theta_prime(2.0, x[l]);
                for b in phases {
                    d -= b.sign * theta_prime(b.width, x[l]);
                }
                for k in 0..m {
                    if k != l {
                        d -= theta_prime(2.0, x[l] - x[k]) + theta_prime(2.0, x[l] + x[k]);
                    }
                }
                d - 2.0 * theta_prime(2.0, 2.0 * x[l])
            } else {
                theta_prime(2.0, x[l] - x[j]) - theta_prime(2.0, x[l] + x[j])
            }
        })
    };
    // bulk-only estimate: θ₂(λ) ≈ π I / (L − M + ½)
    let denom = len as f64 - m as f64 + 0.5;
    let mut x: Vec<f64> = q.values.iter().map(|&i| (0.5 * PI * i as f64 / denom).tan()).collect();
    let norm = |f: &[f64]| f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut f = residual(&x);
    let mut merit = norm(&f);
    for iter in 0..500 {
        if merit <= 1e-13 {
            return Ok(x);
        }
        let step = jac(&x)
            .lu()
            .solve(&(-DVector::from_vec(f.clone())))
            .ok_or_else(|| Error::Singular(format!("logarithmic Jacobian at iteration {iter}")))?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=20 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let ft = residual(&trial);
            let mt = norm(&ft);
            if mt < merit {
                x = trial;
                f = ft;
                merit = mt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if merit <= 1e-10 {
        return Ok(x);
    }
    Err(Error::NoConvergence { iterations: 500, residual: merit })
}

/// The regime-(i) logarithmic equations for the two-string centers.
pub fn solve_log_bae_regime1(q: &QuantumNumbers, p: &BoundaryParams, len: usize) -> Result<Vec<f64>> {
    Regime::I.check(p)?;
    let phases = [
        BoundaryPhase { sign: 1.0, width: 1.0 },
        BoundaryPhase { sign: -1.0, width: 2.0 * (1.0 - p.xi_prime) },
        BoundaryPhase { sign: -1.0, width: 2.0 * p.xi },
    ];
    solve_log_bae(q, len, &phases)
}
