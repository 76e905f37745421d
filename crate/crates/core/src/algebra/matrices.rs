//! R-matrix and the two boundary reflection matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::graded::{GradedOperator, Mat3};
use crate::params::BoundaryParams;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `R(u) = u + Π` on two three-dimensional spaces (9×9).
pub fn r_matrix(u: Complex64) -> GradedOperator {
    GradedOperator::graded_permutation(0, 1, 2).scaled_identity_plus(u)
}

/// `R(u)` acting on spaces `i` and `j` of an `n`-space product.
pub fn r_matrix_on(u: Complex64, i: usize, j: usize, n: usize) -> GradedOperator {
    GradedOperator::graded_permutation(i, j, n).scaled_identity_plus(u)
}

/// Reflection matrix `K⁻(u)`.
pub fn k_minus(u: Complex64, p: &BoundaryParams) -> Mat3 {
    let (st, ct) = p.theta.sin_cos();
    let e = Complex64::from_polar(1.0, p.phi);
    let xi = c(p.xi);
    Mat3::new(
        xi + u,
        c(0.0),
        c(0.0),
        c(0.0),
        xi + u * ct,
        e * st * u,
        c(0.0),
        e.conj() * st * u,
        xi - u * ct,
    )
}

/// Dual reflection matrix `K⁺(u)`.
pub fn k_plus(u: Complex64, p: &BoundaryParams) -> Mat3 {
    let (st, ct) = p.theta_prime.sin_cos();
    let e = Complex64::from_polar(1.0, p.phi_prime);
    let xp = c(p.xi_prime);
    let one_minus_2u = c(1.0) - u * 2.0;
    let k1 = xp - 0.5 - one_minus_2u / 2.0 * ct;
    let k2 = -one_minus_2u / 2.0 * st * e;
    let k3 = -one_minus_2u / 2.0 * st * e.conj();
    let k4 = xp - 0.5 + one_minus_2u / 2.0 * ct;
    Mat3::new(xp - u, c(0.0), c(0.0), c(0.0), k1, k2, c(0.0), k3, k4)
}

/// Derivative of `K⁻` with respect to `u` (the matrices are linear in `u`).
pub fn k_minus_slope(p: &BoundaryParams) -> Mat3 {
    k_minus(c(1.0), p) - k_minus(c(0.0), p)
}

pub fn k_plus_slope(p: &BoundaryParams) -> Mat3 {
    k_plus(c(1.0), p) - k_plus(c(0.0), p)
}

pub fn to_dmatrix(m: &Mat3) -> DMatrix<Complex64> {
    DMatrix::from_fn(3, 3, |r, c| m[(r, c)])
}
