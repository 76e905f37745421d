use num_complex::Complex64;

use super::newton::{self, NewtonOptions, Residual};
use super::roots::{Convergence, Representation, RootConfiguration};
use crate::error::{Error, Result};
use crate::params::BoundaryParams;

const I: Complex64 = Complex64::new(0.0, 1.0);
const HALF_I: Complex64 = Complex64::new(0.0, 0.5);

/// Pole-cleared reduced equations in the shifted variables `(μ, λ)`.
fn cleared(mu: &[Complex64], lambda: &[Complex64], len: usize, p: &BoundaryParams) -> Residual {
    let two_l = 2 * len as i32;
    let a = I * (0.5 - p.xi_prime);
    let mut value = Vec::with_capacity(mu.len() + lambda.len());
    let mut scale = Vec::with_capacity(mu.len() + lambda.len());
    for &m in mu {
        let mut plus = Complex64::new(1.0, 0.0);
        let mut minus = Complex64::new(1.0, 0.0);
        for &l in lambda {
            plus *= (m - l + HALF_I) * (m + l + HALF_I);
            minus *= (m - l - HALF_I) * (m + l - HALF_I);
        }
        let t1 = (m - a) * (m - HALF_I).powi(two_l) * plus;
        let t2 = (m + a) * (m + HALF_I).powi(two_l) * minus;
        value.push(t1 + t2);
        scale.push(t1.norm().max(t2.norm()));
    }
    for (k, &l) in lambda.iter().enumerate() {
        let mut left = (l + HALF_I) * (l - I * p.xi_prime) * (l - I * p.xi) * (2.0 * l - I);
        let mut right = (l - HALF_I) * (l + I * p.xi_prime) * (l + I * p.xi) * (2.0 * l + I);
        for &m in mu {
            left *= (l - m + HALF_I) * (l + m + HALF_I);
            right *= (l - m - HALF_I) * (l + m - HALF_I);
        }
        for (j, &o) in lambda.iter().enumerate() {
            if j != k {
                left *= (l - o - I) * (l + o - I);
                right *= (l - o + I) * (l + o + I);
            }
        }
        value.push(left - right);
        scale.push(left.norm().max(right.norm()));
    }
    Residual { value, scale }
}

/// Normalized pole-cleared residual of the reduced equations (charge equations first).
pub fn reduced_bae_residual(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let s = r.to_shifted();
    cleared(&s.v, &s.lambda, s.len, p).normalized()
}

/// Un-normalized pole-cleared residual of the reduced equations.
pub fn reduced_bae_residual_cleared(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let s = r.to_shifted();
    cleared(&s.v, &s.lambda, s.len, p).value
}

/// Residuals of the reduced equations in their printed ratio form, `LHS − RHS`.
pub fn reduced_bae_residual_ratio(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let s = r.to_shifted();
    let two_l = 2 * s.len as i32;
    let a = I * (0.5 - p.xi_prime);
    let mut out = Vec::new();
    for &m in &s.v {
        let lhs = (m - a) / (m + a) * ((m - HALF_I) / (m + HALF_I)).powi(two_l);
        let rhs: Complex64 = -s
            .lambda
            .iter()
            .map(|&l| (m - l - HALF_I) / (m - l + HALF_I) * (m + l - HALF_I) / (m + l + HALF_I))
            .product::<Complex64>();
        out.push(lhs - rhs);
    }
    for &l in &s.lambda {
        let lhs = (l + HALF_I) / (l - HALF_I) * (l - I * p.xi_prime) / (l + I * p.xi_prime) * (l - I * p.xi)
            / (l + I * p.xi);
        let charge: Complex64 = s
            .v
            .iter()
            .map(|&m| (l - m - HALF_I) / (l - m + HALF_I) * (l + m - HALF_I) / (l + m + HALF_I))
            .product();
        let spin: Complex64 = s
            .lambda
            .iter()
            .map(|&o| (l - o + I) / (l - o - I) * (l + o + I) / (l + o - I))
            .product();
        out.push(lhs + charge * spin);
    }
    out
}

/// `E_hom = Σ 1/(μ² + ¼) − 2N`.
pub fn energy_reduced(r: &RootConfiguration) -> Result<f64> {
    let s = r.to_shifted();
    let sum: Complex64 = s.v.iter().map(|&m| Complex64::new(1.0, 0.0) / (m * m + 0.25)).sum();
    let e = sum - 2.0 * s.v.len() as f64;
    if e.im.abs() > 1e-9 {
        return Err(Error::ComplexEnergy(e.im));
    }
    Ok(e.re)
}

/// `δ_e = |E − E_hom|`.
pub fn delta_e(e: f64, e_hom: f64) -> f64 {
    (e - e_hom).abs()
}

/// Damped Newton on the pole-cleared reduced equations. `M = seed.lambda.len()` may be below `N`.
pub fn solve_reduced_bae(seed: &RootConfiguration, p: &BoundaryParams, opts: &NewtonOptions) -> Result<RootConfiguration> {
    let s = seed.to_shifted();
    let n = s.v.len();
    if s.lambda.len() > n {
        return Err(Error::InvalidInput(format!("M = {} exceeds N = {n}", s.lambda.len())));
    }
    let len = s.len;
    let x0: Vec<Complex64> = s.v.iter().chain(&s.lambda).copied().collect();
    let out = newton::solve(|x: &[Complex64]| cleared(&x[..n], &x[n..], len, p), &x0, opts)?;
    Ok(RootConfiguration {
        v: out.x[..n].to_vec(),
        lambda: out.x[n..].to_vec(),
        regime: s.regime,
        len,
        representation: Representation::Shifted,
        convergence: Some(Convergence { iterations: out.iterations, residual: out.residual }),
    })
}

/// Maps every root to the half-plane `Re > 0` (or `Re = 0, Im ≥ 0`), the canonical
/// representative of the sign-flip symmetry of the reduced equations.
pub fn canonical(r: &RootConfiguration) -> RootConfiguration {
    let flip = |z: &Complex64| {
        if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
            -z
        } else {
            *z
        }
    };
    let mut s = r.to_shifted();
    s.v = s.v.iter().map(flip).collect();
    s.lambda = s.lambda.iter().map(flip).collect();
    s
}
