//! Double-row transfer matrix `t(u) = str₀{K⁺₀ T₀(u) K⁻₀ T̂₀(u)}` and the
//! Hamiltonian obtained from its logarithmic derivative at `u = 0`.
//!
//! The matrix is assembled column by column: each quantum basis vector is
//! tensored with an auxiliary basis vector and pushed through the chain of
//! R-matrices, which act as `u + Π` with `Π` a signed permutation. Value and
//! `u`-derivative are propagated together, so `t′(u)` is exact.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::graded::{digits, from_digits, graded_swap, pow3, GradedOperator, Mat3, PARITY};
use super::matrices::{k_minus, k_minus_slope, k_plus, k_plus_slope};
use crate::error::{Error, Result};
use crate::params::BoundaryParams;

pub const MAX_TRANSFER_SITES: usize = 8;
/// Bound for matrix-free application of `t(u)` to vectors.
pub const MAX_MATRIX_FREE_SITES: usize = 10;
pub const MAX_LOG_DERIVATIVE_SITES: usize = 6;

/// Precomputed graded permutations between the auxiliary space and each site.
pub struct TransferBuilder {
    len: usize,
    dim: usize,
    params: BoundaryParams,
    /// `perms[j][idx] = (image, sign)` for `Π_{0,j+1}` on the auxiliary-times-quantum space.
    perms: Vec<Vec<(usize, f64)>>,
}

#[derive(Clone)]
struct Jet {
    val: Vec<Complex64>,
    der: Vec<Complex64>,
}

impl TransferBuilder {
    /// Builder for dense construction, `L ≤ 8`.
    pub fn new(len: usize, params: &BoundaryParams) -> Result<Self> {
        Self::with_bound(len, params, MAX_TRANSFER_SITES)
    }

    /// Builder restricted to [`apply`](Self::apply) use, `L ≤ 10`.
    pub fn matrix_free(len: usize, params: &BoundaryParams) -> Result<Self> {
        Self::with_bound(len, params, MAX_MATRIX_FREE_SITES)
    }

    fn with_bound(len: usize, params: &BoundaryParams, max: usize) -> Result<Self> {
        if len == 0 || len > max {
            return Err(Error::DimensionOverflow { len, max });
        }
        params.validate()?;
        let dim = pow3(len);
        let total = 3 * dim;
        let perms = (1..=len)
            .map(|site| {
                (0..total)
                    .map(|idx| {
                        let (img, sign) = graded_swap(&digits(idx, len + 1), 0, site);
                        (from_digits(&img), sign)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { len, dim, params: *params, perms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn apply_r(&self, site: usize, u: Complex64, x: &Jet) -> Jet {
        let perm = &self.perms[site - 1];
        let mut out = Jet { val: vec![Complex64::default(); x.val.len()], der: vec![Complex64::default(); x.val.len()] };
        for (idx, &(img, sign)) in perm.iter().enumerate() {
            out.val[img] += x.val[idx] * sign;
            out.der[img] += x.der[idx] * sign;
        }
        for idx in 0..x.val.len() {
            out.val[idx] += u * x.val[idx];
            out.der[idx] += x.val[idx] + u * x.der[idx];
        }
        out
    }

    fn apply_k(&self, k: &Mat3, dk: &Mat3, x: &Jet) -> Jet {
        let d = self.dim;
        let mut out = Jet { val: vec![Complex64::default(); 3 * d], der: vec![Complex64::default(); 3 * d] };
        for a in 0..3 {
            for b in 0..3 {
                let (kab, dkab) = (k[(a, b)], dk[(a, b)]);
                if kab == Complex64::default() && dkab == Complex64::default() {
                    continue;
                }
                for q in 0..d {
                    let xv = x.val[b * d + q];
                    out.val[a * d + q] += kab * xv;
                    out.der[a * d + q] += dkab * xv + kab * x.der[b * d + q];
                }
            }
        }
        out
    }

    /// `(t(u) ψ, t′(u) ψ)`.
    pub fn apply_with_derivative(&self, u: Complex64, psi: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let d = self.dim;
        assert_eq!(psi.len(), d);
        let kp = k_plus(u, &self.params);
        let km = k_minus(u, &self.params);
        let dkp = k_plus_slope(&self.params);
        let dkm = k_minus_slope(&self.params);
        let mut tv = vec![Complex64::default(); d];
        let mut td = vec![Complex64::default(); d];
        for a in 0..3 {
            let mut x = Jet { val: vec![Complex64::default(); 3 * d], der: vec![Complex64::default(); 3 * d] };
            x.val[a * d..(a + 1) * d].copy_from_slice(psi);
            // T̂ = R_{1,0} ··· R_{L,0}: rightmost factor acts first
            for site in (1..=self.len).rev() {
                x = self.apply_r(site, u, &x);
            }
            x = self.apply_k(&km, &dkm, &x);
            // T = R_{0,L} ··· R_{0,1}
            for site in 1..=self.len {
                x = self.apply_r(site, u, &x);
            }
            x = self.apply_k(&kp, &dkp, &x);
            let sign = if PARITY[a] == 0 { 1.0 } else { -1.0 };
            for q in 0..d {
                tv[q] += x.val[a * d + q] * sign;
                td[q] += x.der[a * d + q] * sign;
            }
        }
        (tv, td)
    }

    /// `t(u) ψ`.
    pub fn apply(&self, u: Complex64, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        assert_eq!(psi.len(), d);
        let kp = k_plus(u, &self.params);
        let km = k_minus(u, &self.params);
        let mut out = vec![Complex64::default(); d];
        let mut x = vec![Complex64::default(); 3 * d];
        let mut y = vec![Complex64::default(); 3 * d];
        let r = |site: usize, x: &[Complex64], y: &mut [Complex64]| {
            for (v, &xv) in y.iter_mut().zip(x) {
                *v = u * xv;
            }
            for (&xv, &(img, sign)) in x.iter().zip(&self.perms[site - 1]) {
                y[img] += xv * sign;
            }
        };
        let k = |m: &Mat3, x: &[Complex64], y: &mut [Complex64]| {
            for a in 0..3 {
                for q in 0..d {
                    y[a * d + q] = m[(a, 0)] * x[q] + m[(a, 1)] * x[d + q] + m[(a, 2)] * x[2 * d + q];
                }
            }
        };
        for a in 0..3 {
            x.iter_mut().for_each(|z| *z = Complex64::default());
            x[a * d..(a + 1) * d].copy_from_slice(psi);
            for site in (1..=self.len).rev() {
                r(site, &x, &mut y);
                std::mem::swap(&mut x, &mut y);
            }
            k(&km, &x, &mut y);
            std::mem::swap(&mut x, &mut y);
            for site in 1..=self.len {
                r(site, &x, &mut y);
                std::mem::swap(&mut x, &mut y);
            }
            k(&kp, &x, &mut y);
            let sign = if PARITY[a] == 0 { 1.0 } else { -1.0 };
            for q in 0..d {
                out[q] += y[a * d + q] * sign;
            }
        }
        out
    }

    /// Dense `t(u)` and `t′(u)`.
    pub fn build_with_derivative(&self, u: Complex64) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let d = self.dim;
        let mut t = DMatrix::zeros(d, d);
        let mut dt = DMatrix::zeros(d, d);
        let mut e = vec![Complex64::default(); d];
        for col in 0..d {
            e[col] = Complex64::new(1.0, 0.0);
            let (v, dv) = self.apply_with_derivative(u, &e);
            e[col] = Complex64::default();
            for row in 0..d {
                t[(row, col)] = v[row];
                dt[(row, col)] = dv[row];
            }
        }
        (t, dt)
    }

    pub fn build(&self, u: Complex64) -> GradedOperator {
        GradedOperator::from_matrix(self.build_with_derivative(u).0, self.len)
    }
}

/// Dense transfer matrix on `L ≤ 8` sites.
pub fn build_transfer_matrix(u: Complex64, len: usize, p: &BoundaryParams) -> Result<GradedOperator> {
    Ok(TransferBuilder::new(len, p)?.build(u))
}

/// Electron-number operator on the full `3^L` space (diagonal).
pub fn number_operator_diagonal(len: usize) -> Vec<f64> {
    (0..pow3(len)).map(|i| digits(i, len).iter().filter(|&&x| x != 0).count() as f64).collect()
}

fn constant_shift(len: usize, p: &BoundaryParams) -> f64 {
    1.0 / (2.0 * p.xi) - (1.0 - 2.0 * p.xi_prime) / (2.0 * (1.0 - p.xi_prime)) + len as f64 - 1.0
}

fn assemble(len: usize, p: &BoundaryParams, t0: DMatrix<Complex64>, dt0: DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let lu = t0.lu();
    let inv = lu.try_inverse().ok_or_else(|| Error::Singular("t(0) is not invertible".into()))?;
    let mut h = (dt0 * inv) * Complex64::new(-0.5, 0.0);
    let shift = constant_shift(len, p);
    let n = number_operator_diagonal(len);
    for k in 0..h.nrows() {
        h[(k, k)] += Complex64::new(shift - 2.0 * n[k], 0.0);
    }
    Ok(h)
}

/// `H = −½ t′(0) t(0)⁻¹ + 1/(2ξ) − (1−2ξ′)/(2(1−ξ′)) − 2N̂ + L − 1` with the
/// exact derivative.
pub fn hamiltonian_from_transfer(len: usize, p: &BoundaryParams) -> Result<DMatrix<Complex64>> {
    if len > MAX_LOG_DERIVATIVE_SITES {
        return Err(Error::DimensionOverflow { len, max: MAX_LOG_DERIVATIVE_SITES });
    }
    let (t0, dt0) = TransferBuilder::new(len, p)?.build_with_derivative(Complex64::default());
    assemble(len, p, t0, dt0)
}

/// Same as [`hamiltonian_from_transfer`] with `t′(0)` from a central
/// difference of the given step.
pub fn hamiltonian_from_transfer_fd(len: usize, p: &BoundaryParams, step: f64) -> Result<DMatrix<Complex64>> {
    if len > MAX_LOG_DERIVATIVE_SITES {
        return Err(Error::DimensionOverflow { len, max: MAX_LOG_DERIVATIVE_SITES });
    }
    let b = TransferBuilder::new(len, p)?;
    let (t0, _) = b.build_with_derivative(Complex64::default());
    let (tp, _) = b.build_with_derivative(Complex64::new(step, 0.0));
    let (tm, _) = b.build_with_derivative(Complex64::new(-step, 0.0));
    let dt0 = (tp - tm) / Complex64::new(2.0 * step, 0.0);
    assemble(len, p, t0, dt0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> BoundaryParams {
        BoundaryParams::new(0.7, 0.4, 0.3, -0.8, 1.1, -0.5).unwrap()
    }

    #[test]
    fn commuting_family_three_sites() {
        let b = TransferBuilder::new(3, &params()).unwrap();
        let tu = b.build(Complex64::new(0.3, 0.2));
        let tv = b.build(Complex64::new(-0.4, 0.7));
        assert!(tu.commutator_norm(&tv) < 1e-10);
    }

    #[test]
    fn t_at_zero_is_scalar() {
        let p = params();
        let t0 = build_transfer_matrix(Complex64::default(), 2, &p).unwrap();
        let s = p.xi * (1.0 - p.xi_prime);
        let id = DMatrix::<Complex64>::identity(9, 9) * Complex64::new(s, 0.0);
        assert!((t0.entries - id).norm() < 1e-12);
    }

    #[test]
    fn exact_and_finite_difference_agree() {
        let p = params();
        let a = hamiltonian_from_transfer(2, &p).unwrap();
        let b = hamiltonian_from_transfer_fd(2, &p, 1e-6).unwrap();
        assert!((a - b).norm() < 1e-7);
    }

    #[test]
    fn eigenvalues_are_polynomials_in_u() {
        // t(u) is a matrix polynomial of degree 2L + 2; a Lagrange interpolant
        // through 4L + 3 nodes reproduces it at a fresh point.
        let p = params();
        let len = 2;
        let b = TransferBuilder::new(len, &p).unwrap();
        let nodes: Vec<Complex64> = (0..4 * len + 3).map(|k| Complex64::from_polar(1.0, 0.55 * k as f64)).collect();
        let mats: Vec<_> = nodes.iter().map(|&u| b.build(u).entries).collect();
        let x = Complex64::new(0.31, -0.57);
        let mut interp = DMatrix::<Complex64>::zeros(9, 9);
        for (i, m) in mats.iter().enumerate() {
            let mut w = Complex64::new(1.0, 0.0);
            for (j, &uj) in nodes.iter().enumerate() {
                if i != j {
                    w *= (x - uj) / (nodes[i] - uj);
                }
            }
            interp += m * w;
        }
        assert!((interp - b.build(x).entries).norm() < 1e-8);
    }

    #[test]
    fn too_long_rejected() {
        assert!(matches!(TransferBuilder::new(9, &params()), Err(Error::DimensionOverflow { .. })));
    }
}
