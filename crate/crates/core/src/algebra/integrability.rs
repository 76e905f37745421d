//! Numerical checks of the graded Yang-Baxter, reflection and dual
//! reflection equations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graded::{GradedOperator, Mat3};
use super::matrices::{k_minus, k_plus, r_matrix_on};
use super::hamiltonian::build_hamiltonian;
use super::transfer::{hamiltonian_from_transfer, TransferBuilder, MAX_LOG_DERIVATIVE_SITES};
use crate::error::Result;
use crate::params::{map_boundary_params, BoundaryParams};

/// Largest residuals observed over the sampled spectral points. Each residual
/// is `‖LHS − RHS‖_F / max(‖LHS‖_F, 1)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegrityReport {
    pub trials: usize,
    pub yang_baxter: f64,
    pub reflection: f64,
    pub dual_reflection: f64,
}

impl IntegrityReport {
    pub fn max(&self) -> f64 {
        self.yang_baxter.max(self.reflection).max(self.dual_reflection)
    }
}

fn rel(lhs: &GradedOperator, rhs: &GradedOperator) -> f64 {
    let diff = (&lhs.entries - &rhs.entries).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    diff / lhs.frobenius_norm().max(1.0)
}

pub fn yang_baxter_residual(u: Complex64, v: Complex64) -> f64 {
    let r01 = r_matrix_on(u - v, 0, 1, 3);
    let r02 = r_matrix_on(u, 0, 2, 3);
    let r12 = r_matrix_on(v, 1, 2, 3);
    let lhs = r01.mul(&r02).mul(&r12);
    let rhs = r12.mul(&r02).mul(&r01);
    rel(&lhs, &rhs)
}

/// Reflection-equation residual for an arbitrary reflection matrix family.
pub fn reflection_residual<K: Fn(Complex64) -> Mat3>(k: K, u: Complex64, v: Complex64) -> f64 {
    let k0 = GradedOperator::local_even(&k(u), 0, 2);
    let k1 = GradedOperator::local_even(&k(v), 1, 2);
    let lhs = r_matrix_on(u - v, 0, 1, 2).mul(&k0).mul(&r_matrix_on(u + v, 1, 0, 2)).mul(&k1);
    let rhs = k1.mul(&r_matrix_on(u + v, 0, 1, 2)).mul(&k0).mul(&r_matrix_on(u - v, 1, 0, 2));
    rel(&lhs, &rhs)
}

/// Dual reflection-equation residual; note the shifted argument `1 − u − v`.
pub fn dual_reflection_residual<K: Fn(Complex64) -> Mat3>(k: K, u: Complex64, v: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let kv = GradedOperator::local_even(&k(v), 0, 2);
    let ku = GradedOperator::local_even(&k(u), 1, 2);
    let lhs = r_matrix_on(u - v, 0, 1, 2).mul(&kv).mul(&r_matrix_on(one - u - v, 1, 0, 2)).mul(&ku);
    let rhs = ku.mul(&r_matrix_on(one - u - v, 0, 1, 2)).mul(&kv).mul(&r_matrix_on(u - v, 1, 0, 2));
    rel(&lhs, &rhs)
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Samples `trials` random `(u, v)` pairs and reports the worst residual of
/// each of the three equations.
pub fn verify_integrability(p: &BoundaryParams, trials: usize, seed: u64) -> IntegrityReport {
    verify_with(p, trials, seed, |u| k_minus(u, p))
}

/// Like [`verify_integrability`], with a caller-supplied `K⁻` (used for
/// mutation tests).
pub fn verify_with<K: Fn(Complex64) -> Mat3>(p: &BoundaryParams, trials: usize, seed: u64, kminus: K) -> IntegrityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IntegrityReport { trials, yang_baxter: 0.0, reflection: 0.0, dual_reflection: 0.0 };
    for _ in 0..trials.max(1) {
        let u = random_point(&mut rng);
        let v = random_point(&mut rng);
        report.yang_baxter = report.yang_baxter.max(yang_baxter_residual(u, v));
        report.reflection = report.reflection.max(reflection_residual(&kminus, u, v));
        report.dual_reflection = report.dual_reflection.max(dual_reflection_residual(|x| k_plus(x, p), u, v));
    }
    report
}

/// Local identities plus the chain-level checks at `len` sites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChainReport {
    pub len: usize,
    pub identities: IntegrityReport,
    /// Largest `‖[t(u), t(v)]‖_F / (‖t(u)‖_F ‖t(v)‖_F)` over the sampled pairs (`|Re|, |Im| ≤ 1`);
    /// independent of the arbitrary scalar normalization of the K-matrices.
    pub commutator: f64,
    /// Largest unnormalized `‖[t(u), t(v)]‖_F` over the same pairs.
    pub commutator_abs: f64,
    /// `‖H_direct − H_transfer‖_F / ‖H_direct‖_F`; absent above the dense log-derivative bound.
    pub hamiltonian_identity: Option<f64>,
}

impl ChainReport {
    pub fn max(&self) -> f64 {
        self.identities.max().max(self.commutator).max(self.hamiltonian_identity.unwrap_or(0.0))
    }
}

/// Runs [`verify_integrability`], the commuting-family check on `trials.min(10)` pairs and the
/// Hamiltonian identity.
pub fn verify_chain(len: usize, p: &BoundaryParams, trials: usize, seed: u64) -> Result<ChainReport> {
    let identities = verify_integrability(p, trials, seed);
    let builder = TransferBuilder::new(len, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1);
    let (mut commutator, mut commutator_abs): (f64, f64) = (0.0, 0.0);
    for _ in 0..trials.clamp(1, 10) {
        let u = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (tu, tv) = (builder.build(u), builder.build(v));
        let c = tu.commutator_norm(&tv);
        commutator_abs = commutator_abs.max(c);
        commutator = commutator.max(c / (tu.frobenius_norm() * tv.frobenius_norm()));
    }
    let hamiltonian_identity = if len <= MAX_LOG_DERIVATIVE_SITES {
        let direct = build_hamiltonian(len, &map_boundary_params(p)?)?.sector_matrix(None).to_dense();
        let from_t = hamiltonian_from_transfer(len, p)?;
        Some((&direct - &from_t).norm() / direct.norm())
    } else {
        None
    };
    Ok(ChainReport { len, identities, commutator, commutator_abs, hamiltonian_identity })
}

/// Random valid boundary parameters, with `|ξ|` and `|1 − ξ′|` kept away
/// from the poles.
pub fn random_params(rng: &mut impl Rng) -> BoundaryParams {
    use std::f64::consts::PI;
    let away = |rng: &mut dyn rand::RngCore, center: f64| {
        let mag: f64 = rng.gen_range(0.1..3.0);
        if rng.gen_bool(0.5) { center + mag } else { center - mag }
    };
    let xi = away(rng, 0.0);
    let xi_prime = away(rng, 1.0);
    BoundaryParams::new(
        xi,
        rng.gen_range(0.0..PI),
        rng.gen_range(-PI..PI),
        xi_prime,
        rng.gen_range(0.0..PI),
        rng.gen_range(-PI..PI),
    )
    .expect("random parameters avoid the poles")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_arguments_yang_baxter() {
        let u = Complex64::new(0.3, 0.8);
        assert!(yang_baxter_residual(u, u) < 1e-15);
    }

    #[test]
    fn identities_hold() {
        let p = BoundaryParams::new(0.413, 1.047, 0.2, -3.0, 0.4, -1.0).unwrap();
        let r = verify_integrability(&p, 20, 7);
        assert!(r.max() <= 1e-12, "{r:?}");
    }

    #[test]
    fn corrupted_k_minus_detected() {
        let p = BoundaryParams::new(0.9, 1.0, 0.3, 1.5, 0.2, 0.0).unwrap();
        let r = verify_with(&p, 10, 3, |u| {
            let mut k = k_minus(u, &p);
            k[(1, 2)] = -k[(1, 2)];
            k
        });
        assert!(r.reflection > 1e-3, "{r:?}");
        assert!(r.yang_baxter < 1e-12);
    }
}
