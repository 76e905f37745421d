use num_complex::Complex64;

use super::newton::{self, NewtonOptions, Residual};
use super::roots::{Convergence, Representation, RootConfiguration};
use crate::algebra::transfer::MAX_TRANSFER_SITES;
use crate::error::{Error, Result};
use crate::params::BoundaryParams;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const HALF: f64 = 0.5;

/// `Q(u) = ∏ (u − ṽ)(u + ṽ + 1)`.
pub fn q_charge(v: &[Complex64], u: Complex64) -> Complex64 {
    v.iter().map(|&x| (u - x) * (u + x + 1.0)).product()
}

/// `Q⁽¹⁾(u) = ∏ (u − λ̃)(u + λ̃)`.
pub fn q_spin(lambda: &[Complex64], u: Complex64) -> Complex64 {
    lambda.iter().map(|&x| (u - x) * (u + x)).product()
}

pub fn omega3(u: Complex64, p: &BoundaryParams) -> Complex64 {
    p.xi_prime - u - (2.0 * p.xi_prime - 1.0) / (2.0 * u + 1.0)
}

pub fn a_bar(u: Complex64, p: &BoundaryParams) -> Complex64 {
    (u - HALF) / (u + HALF) * (u + p.xi_prime) * (u + p.xi)
}

pub fn d_bar(u: Complex64, p: &BoundaryParams) -> Complex64 {
    (u - p.xi_prime) * (u - p.xi)
}

fn raw(r: &RootConfiguration) -> RootConfiguration {
    r.to_raw()
}

fn near(u: Complex64, z: Complex64) -> bool {
    (u - z).norm() <= 1e-13 * u.norm().max(1.0)
}

/// Eigenvalue of the transfer matrix from the inhomogeneous T-Q relation.
pub fn eval_inhom_tq(u: Complex64, r: &RootConfiguration, p: &BoundaryParams) -> Result<Complex64> {
    let r = raw(r);
    let poles = r
        .v
        .iter()
        .flat_map(|&x| [x, -x - 1.0])
        .chain(r.lambda.iter().flat_map(|&x| [x, -x]))
        .chain(std::iter::once(Complex64::new(-HALF, 0.0)));
    for z in poles {
        if near(u, z) {
            return Err(Error::EvaluationPole(format!("{u}")));
        }
    }
    let two_l = 2 * r.len as i32;
    let q = q_charge(&r.v, u);
    let q_m = q_charge(&r.v, u - 1.0);
    let q1 = q_spin(&r.lambda, u);
    let q1_p = q_spin(&r.lambda, u + 1.0);
    let q1_m = q_spin(&r.lambda, u - 1.0);
    let h = p.h();
    let u2l = u.powi(two_l);
    Ok(omega3(u, p) * (p.xi + u) * (u + 1.0).powi(two_l) * q_m / q
        - u2l * a_bar(u, p) * q_m * q1_p / (q * q1)
        - u2l * d_bar(u, p) * q1_m / q1
        + 2.0 * h * u2l * u * (u - HALF) * q_m / q1)
}

/// Pole-cleared residuals of both inhomogeneous Bethe equation families, as
/// `(value, scale)` with the common factors `(ṽ − ½)(ṽ + ξ)/(ṽ + ½)` and `1/(λ̃ + ½)` removed.
fn cleared(v: &[Complex64], lambda: &[Complex64], len: usize, p: &BoundaryParams) -> Residual {
    let two_l = 2 * len as i32;
    let h = p.h();
    let n = v.len() + lambda.len();
    let mut value = Vec::with_capacity(n);
    let mut scale = Vec::with_capacity(n);
    for &x in v {
        let t1 = (x + 1.0 - p.xi_prime) * (x + 1.0).powi(two_l) * q_spin(lambda, x);
        let t2 = x.powi(two_l) * (x + p.xi_prime) * q_spin(lambda, x + 1.0);
        value.push(t1 + t2);
        scale.push(t1.norm().max(t2.norm()));
    }
    for &y in lambda {
        let qm = q_charge(v, y - 1.0);
        let q0 = q_charge(v, y);
        let t1 = (y - HALF) * (y + p.xi_prime) * (y + p.xi) * qm * q_spin(lambda, y + 1.0);
        let t2 = (y + HALF) * (y - p.xi_prime) * (y - p.xi) * q0 * q_spin(lambda, y - 1.0);
        let t3 = 2.0 * h * y * (y * y - 0.25) * q0 * qm;
        value.push(t1 + t2 - t3);
        scale.push(t1.norm().max(t2.norm()).max(t3.norm()));
    }
    Residual { value, scale }
}

/// Normalized pole-cleared residual vector of length `2N` (charge equations first).
pub fn inhom_bae_residual(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let r = raw(r);
    cleared(&r.v, &r.lambda, r.len, p).normalized()
}

/// Un-normalized pole-cleared residual.
pub fn inhom_bae_residual_cleared(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let r = raw(r);
    cleared(&r.v, &r.lambda, r.len, p).value
}

/// Residuals `LHS − RHS` of the equations in their printed ratio form.
pub fn inhom_bae_residual_ratio(r: &RootConfiguration, p: &BoundaryParams) -> Vec<Complex64> {
    let r = raw(r);
    let two_l = 2 * r.len as i32;
    let h = p.h();
    let mut out = Vec::with_capacity(r.v.len() + r.lambda.len());
    for &x in &r.v {
        let lhs = omega3(x, p) * (p.xi + x) * (x + 1.0).powi(two_l);
        let rhs = x.powi(two_l) * a_bar(x, p) * q_spin(&r.lambda, x + 1.0) / q_spin(&r.lambda, x);
        out.push(lhs - rhs);
    }
    for &y in &r.lambda {
        let q0 = q_charge(&r.v, y);
        let qm = q_charge(&r.v, y - 1.0);
        let lhs = a_bar(y, p) * qm * q_spin(&r.lambda, y + 1.0) + d_bar(y, p) * q0 * q_spin(&r.lambda, y - 1.0);
        let rhs = 2.0 * h * y * (y - HALF) * q0 * qm;
        out.push(lhs - rhs);
    }
    out
}

/// `E = −Σ 1/(ṽ(ṽ+1)) − 2N`; rejects an imaginary part above `1e-9`.
pub fn energy_inhom(r: &RootConfiguration) -> Result<f64> {
    let r = raw(r);
    let sum: Complex64 = r.v.iter().map(|&x| ONE / (x * (x + 1.0))).sum();
    let e = -sum - 2.0 * r.v.len() as f64;
    if e.im.abs() > 1e-9 {
        return Err(Error::ComplexEnergy(e.im));
    }
    Ok(e.re)
}

/// Roots sitting on a spurious zero of the cleared system (`ṽ = −½`, `λ̃ = 0`,
/// coinciding roots) are not Bethe states.
pub fn is_spurious(r: &RootConfiguration, tol: f64) -> bool {
    r.pole_clearance() < tol
}

/// Damped Newton on the pole-cleared inhomogeneous equations from `seed`.
pub fn solve_inhom_bae(seed: &RootConfiguration, p: &BoundaryParams, opts: &NewtonOptions) -> Result<RootConfiguration> {
    let seed = raw(seed);
    let len = seed.len;
    if len > MAX_TRANSFER_SITES {
        return Err(Error::DimensionOverflow { len, max: MAX_TRANSFER_SITES });
    }
    let n = seed.v.len();
    if seed.lambda.len() != n {
        return Err(Error::InvalidInput(format!(
            "inhomogeneous equations need N spin roots, got {} for N = {n}",
            seed.lambda.len()
        )));
    }
    let x0: Vec<Complex64> = seed.v.iter().chain(&seed.lambda).copied().collect();
    let system = |x: &[Complex64]| cleared(&x[..n], &x[n..], len, p);
    let out = newton::solve(system, &x0, opts)?;
    Ok(RootConfiguration {
        v: out.x[..n].to_vec(),
        lambda: out.x[n..].to_vec(),
        regime: seed.regime,
        len,
        representation: Representation::Raw,
        convergence: Some(Convergence { iterations: out.iterations, residual: out.residual }),
    })
}
