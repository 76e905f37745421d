use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::inhom::{energy_inhom, eval_inhom_tq, is_spurious, solve_inhom_bae};
use super::newton::NewtonOptions;
use super::roots::{Representation, RootConfiguration};
use super::seeds::seed_roots;
use crate::algebra::hamiltonian::build_hamiltonian;
use crate::algebra::spectrum::lowest_eigenpairs;
use crate::algebra::transfer::TransferBuilder;
use crate::error::{Error, Result};
use crate::params::{map_boundary_params, BoundaryParams};

/// Lowest eigenpair of the chain in the `n`-electron sector, vector embedded in the full space.
pub fn ground_state_vector(len: usize, n: usize, p: &BoundaryParams) -> Result<(f64, Vec<Complex64>)> {
    let h = build_hamiltonian(len, &map_boundary_params(p)?)?;
    let basis = h.basis(Some(n));
    let (vals, vecs) = lowest_eigenpairs(&h.matrix(&basis), 1)?;
    let mut full = vec![Complex64::new(0.0, 0.0); 3usize.pow(len as u32)];
    for (k, idx) in basis.full_indices().into_iter().enumerate() {
        full[idx] = vecs[0][k];
    }
    Ok((vals[0], full))
}

/// All eigenvalues of `t(u)` (dense, via a complex Schur form).
pub fn transfer_eigenvalues(builder: &TransferBuilder, u: Complex64) -> Result<Vec<Complex64>> {
    let m: DMatrix<Complex64> = builder.build(u).entries;
    let schur = Schur::try_new(m, 1e-15, 10_000).ok_or_else(|| Error::Singular("Schur iteration failed".into()))?;
    Ok(schur.eigenvalues().ok_or_else(|| Error::Singular("complex Schur form not triangular".into()))?.iter().copied().collect())
}

/// Relative distance from `value` to the nearest element of `spectrum`.
pub fn nearest_relative(value: Complex64, spectrum: &[Complex64]) -> f64 {
    spectrum.iter().map(|z| (z - value).norm()).fold(f64::INFINITY, f64::min) / value.norm().max(1.0)
}

/// `⟨ψ|t(u)|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn expectation(builder: &TransferBuilder, psi: &[Complex64], u: Complex64) -> Complex64 {
    let t_psi = builder.apply(u, psi);
    let num: Complex64 = psi.iter().zip(&t_psi).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    num / den
}

/// Outcome of checking a root configuration against the transfer matrix and ED.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub roots: RootConfiguration,
    pub energy: f64,
    pub ed_energy: f64,
    /// Largest relative distance of `Λ(u)` to the spectrum of `t(u)` over the sample points.
    pub spectrum_mismatch: f64,
    /// Largest relative distance of `Λ(u)` to the ground-state expectation of `t(u)`.
    pub state_mismatch: f64,
    pub sample_points: Vec<Complex64>,
}

impl Certificate {
    pub fn passes(&self, tol: f64) -> bool {
        self.spectrum_mismatch <= tol
            && self.state_mismatch <= tol
            && (self.energy - self.ed_energy).abs() <= tol * self.ed_energy.abs().max(1.0)
    }
}

/// Random sample points in the annulus `0.3 ≤ |u| ≤ 1.5`.
pub fn sample_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Complex64::from_polar(rng.gen_range(0.3..1.5), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Compares `Λ(u)` from the T-Q relation with `t(u)` at `points`, and the Bethe energy with ED.
pub fn certify(
    roots: &RootConfiguration,
    p: &BoundaryParams,
    builder: &TransferBuilder,
    ground: &(f64, Vec<Complex64>),
    points: &[Complex64],
) -> Result<Certificate> {
    let energy = energy_inhom(roots)?;
    let mut spectrum_mismatch = 0.0f64;
    let mut state_mismatch = 0.0f64;
    for &u in points {
        let lam = eval_inhom_tq(u, roots, p)?;
        spectrum_mismatch = spectrum_mismatch.max(nearest_relative(lam, &transfer_eigenvalues(builder, u)?));
        let e = expectation(builder, &ground.1, u);
        state_mismatch = state_mismatch.max((lam - e).norm() / e.norm().max(1.0));
    }
    Ok(Certificate {
        roots: roots.clone(),
        energy,
        ed_energy: ground.0,
        spectrum_mismatch,
        state_mismatch,
        sample_points: points.to_vec(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub random_starts: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { random_starts: 400, seed: 7, tolerance: 1e-8 }
    }
}

/// Starting points for the inhomogeneous equations: the reduced ground-state pattern
/// completed by the missing spin roots on rings of several radii, then random points.
pub fn inhom_seeds(len: usize, n: usize, p: &BoundaryParams, opts: &SearchOptions) -> Vec<RootConfiguration> {
    let mut seeds = Vec::new();
    if let Ok(pattern) = seed_roots(p.regime(), len, n, p) {
        let raw = pattern.to_raw();
        let missing = n - raw.lambda.len();
        for radius in [1.5, 2.5, 3.5, 5.0] {
            for k in 0..8 {
                let phase = std::f64::consts::PI * (k as f64 + 0.25) / 8.0;
                let mut lambda = raw.lambda.clone();
                for j in 0..missing {
                    lambda.push(Complex64::from_polar(radius * (1.0 + 0.1 * j as f64), phase + 0.7 * j as f64));
                }
                seeds.push(RootConfiguration { lambda, ..raw.clone() });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let v = (0..n).map(|_| Complex64::new(rng.gen_range(-1.5..1.0), rng.gen_range(-3.0..3.0))).collect();
        let lambda = (0..n).map(|_| Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0))).collect();
        seeds.push(RootConfiguration::new(v, lambda, len, Representation::Raw).with_regime(p.regime()));
    }
    seeds
}

/// Searches for inhomogeneous Bethe roots of the `n`-electron ground state, accepting
/// the first solution (in seed order) that passes [`certify`]. The first seed is
/// reconstructed from the ground-state eigenvalue of `t(u)` by [`roots_from_eigenvalue`];
/// the reduced-pattern and random seeds of [`inhom_seeds`] follow.
pub fn find_certified_ground_state(
    len: usize,
    n: usize,
    p: &BoundaryParams,
    opts: &SearchOptions,
) -> Result<Certificate> {
    let builder = TransferBuilder::new(len, p)?;
    let ground = ground_state_vector(len, n, p)?;
    let points = sample_points(5, opts.seed ^ 0x9e37);
    let mut seeds = Vec::new();
    if let Ok((r, _)) = roots_from_eigenvalue(|u| expectation(&builder, &ground.1, u), len, n, n, p) {
        seeds.push(r);
    }
    seeds.extend(inhom_seeds(len, n, p, opts));
    let newton = NewtonOptions { seed: opts.seed, ..Default::default() };
    seeds
        .par_iter()
        .find_map_first(|s| {
            let roots = solve_inhom_bae(s, p, &newton).ok()?;
            if is_spurious(&roots, 1e-6) {
                return None;
            }
            let cert = certify(&roots, p, &builder, &ground, &points).ok()?;
            cert.passes(opts.tolerance).then_some(cert)
        })
        .ok_or(Error::NoConvergence { iterations: seeds.len(), residual: f64::NAN })
}

fn least_squares(a: DMatrix<Complex64>, b: nalgebra::DVector<Complex64>) -> Result<(Vec<Complex64>, f64)> {
    // columns are equilibrated so that the truncation threshold acts on the geometry of the
    // problem rather than on the spread of monomial magnitudes
    let scales: Vec<f64> = a.column_iter().map(|c| c.norm().max(f64::MIN_POSITIVE)).collect();
    let mut scaled = a.clone();
    for (j, mut c) in scaled.column_iter_mut().enumerate() {
        c /= Complex64::new(scales[j], 0.0);
    }
    let svd = scaled.svd(true, true);
    let y = svd.solve(&b, 1e-15).map_err(|e| Error::Singular(e.to_string()))?;
    let x = nalgebra::DVector::from_iterator(y.len(), y.iter().zip(&scales).map(|(v, s)| v / s));
    let res = (&a * &x - &b).norm() / b.norm().max(1.0);
    Ok((x.iter().copied().collect(), res))
}

/// Bethe roots reconstructed from an eigenvalue polynomial `Λ(u)` of `t(u)`.
///
/// Near `u = 0` the T-Q relation reduces to `Λ(u)Q(u) = ω₃(u)(ξ+u)(u+1)^{2L} Q(u−1) + O(u^{2L})`,
/// which fixes the coefficients of `Q` linearly; `Q⁽¹⁾` then follows by linear least squares
/// on the full relation with `m` spin roots (`m = n` for the inhomogeneous relation, `m ≤ n`
/// when `h = 0`). Returns the raw roots with the relative residual of the second fit.
pub fn roots_from_eigenvalue<F: Fn(Complex64) -> Complex64>(
    eigenvalue: F,
    len: usize,
    n: usize,
    m: usize,
    p: &BoundaryParams,
) -> Result<(RootConfiguration, f64)> {
    use super::inhom::{a_bar, d_bar, omega3, q_charge};
    use super::poly::{coefficients_on_circle, monic_roots, mul_trunc, pow_trunc};
    let one = Complex64::new(1.0, 0.0);
    let order = 2 * len;
    let lam = coefficients_on_circle(&eigenvalue, 2 * len + 3, 1.0);
    let mut omega = vec![Complex64::new(0.0, 0.0); order];
    for (k, w) in omega.iter_mut().enumerate() {
        *w = Complex64::new(-(2.0 * p.xi_prime - 1.0) * (-2.0f64).powi(k as i32), 0.0);
    }
    omega[0] += p.xi_prime;
    if order > 1 {
        omega[1] -= 1.0;
    }
    let weight = mul_trunc(
        &mul_trunc(&omega, &[Complex64::new(p.xi, 0.0), one], order),
        &pow_trunc(&[one, one], order, order),
        order,
    );
    let x = [Complex64::new(0.0, 0.0), one, one];
    let y = [Complex64::new(0.0, 0.0), -one, one];
    let column = |j: usize| -> Vec<Complex64> {
        let lx = mul_trunc(&lam, &pow_trunc(&x, j, order), order);
        let wy = mul_trunc(&weight, &pow_trunc(&y, j, order), order);
        lx.iter().zip(&wy).map(|(a, b)| a - b).skip(1).collect()
    };
    let cols: Vec<Vec<Complex64>> = (0..=n).map(column).collect();
    let rows = order - 1;
    let a = DMatrix::from_fn(rows, n, |i, j| cols[j][i]);
    let b = -nalgebra::DVector::from_vec(cols[n].clone());
    let (q, _) = least_squares(a, b)?;
    let xs = monic_roots(&q)?;
    let v: Vec<Complex64> = xs.iter().map(|&s| ((one + 4.0 * s).sqrt() - 1.0) * 0.5).collect();

    let two_l = 2 * len as i32;
    let h = p.h();
    let count = 4 * len + 4 * n + 8;
    let points: Vec<Complex64> = (0..count)
        .map(|k| Complex64::from_polar(0.8, std::f64::consts::TAU * (k as f64 + 0.5) / count as f64))
        .collect();
    let mut a = DMatrix::zeros(points.len(), m);
    let mut b = nalgebra::DVector::zeros(points.len());
    for (i, &u) in points.iter().enumerate() {
        let l = eigenvalue(u);
        let q0 = q_charge(&v, u);
        let qm = q_charge(&v, u - 1.0);
        let u2l = u.powi(two_l);
        let c_same = l * q0 - omega3(u, p) * (p.xi + u) * (u + 1.0).powi(two_l) * qm;
        let c_up = u2l * a_bar(u, p) * qm;
        let c_down = u2l * d_bar(u, p) * q0;
        let basis = |j: usize| c_same * u.powi(2 * j as i32) + c_up * (u + 1.0).powi(2 * j as i32) + c_down * (u - 1.0).powi(2 * j as i32);
        for j in 0..m {
            a[(i, j)] = basis(j);
        }
        b[i] = -(basis(m) - 2.0 * h * u2l * u * (u - 0.5) * qm * q0);
    }
    let d = if m == 0 { Vec::new() } else { least_squares(a, b)?.0 };
    let lambda: Vec<Complex64> = monic_roots(&d)?.into_iter().map(|s| s.sqrt()).collect();

    // the Taylor data at u = 0 constrains outer roots only weakly; refine both sets on the
    // full relation
    let seed = RootConfiguration::new(v, lambda, len, Representation::Raw).with_regime(p.regime());
    Ok(refine_with_eigenvalue(eigenvalue, &seed, p))
}

/// Least-squares fit of raw roots to a known eigenvalue `Λ(u)` on the pole-free T-Q relation,
/// sampled on circles of radius 0.7 to 3.6. Returns the refined roots and the largest
/// relative mismatch over the samples.
pub fn refine_with_eigenvalue<F: Fn(Complex64) -> Complex64>(
    eigenvalue: F,
    seed: &RootConfiguration,
    p: &BoundaryParams,
) -> (RootConfiguration, f64) {
    use super::inhom::{a_bar, d_bar, omega3, q_charge, q_spin};
    let raw = seed.to_raw();
    let (len, n, m) = (raw.len, raw.v.len(), raw.lambda.len());
    let two_l = 2 * len as i32;
    let h = p.h();
    let mut points = Vec::new();
    for radius in [0.7, 1.3, 2.2, 3.6] {
        let count = 2 * (len + n + m) + 4;
        points.extend((0..count).map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.25) / count as f64)));
    }
    let values: Vec<Complex64> = points.iter().map(|&u| eigenvalue(u)).collect();
    let mismatch = |x: &[Complex64]| -> Vec<Complex64> {
        let (v, l) = x.split_at(n);
        points
            .iter()
            .zip(&values)
            .map(|(&u, &lam)| {
                let q0 = q_charge(v, u);
                let qm = q_charge(v, u - 1.0);
                let s0 = q_spin(l, u);
                let u2l = u.powi(two_l);
                let terms = [
                    lam * q0 * s0,
                    -omega3(u, p) * (p.xi + u) * (u + 1.0).powi(two_l) * qm * s0,
                    u2l * a_bar(u, p) * qm * q_spin(l, u + 1.0),
                    u2l * d_bar(u, p) * q0 * q_spin(l, u - 1.0),
                    -2.0 * h * u2l * u * (u - 0.5) * qm * q0,
                ];
                let scale: f64 = terms.iter().map(|t| t.norm()).sum();
                terms.iter().sum::<Complex64>() / scale.max(f64::MIN_POSITIVE)
            })
            .collect()
    };
    let x0: Vec<Complex64> = raw.v.iter().chain(&raw.lambda).copied().collect();
    let opts = NewtonOptions { tolerance: 1e-10, max_iterations: 200, ..Default::default() };
    let refined = super::newton::least_squares(&mismatch, &x0, &opts);
    let residual = mismatch(&refined.x).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (v, lambda) = refined.x.split_at(n);
    let mut out = RootConfiguration::new(v.to_vec(), lambda.to_vec(), len, Representation::Raw);
    out.regime = seed.regime;
    (out, residual)
}

/// Spin-root count of the reduced ground-state pattern: `N/2 − 1` in regime (ii), `N/2` otherwise.
pub fn reduced_spin_count(regime: crate::params::Regime, n: usize) -> usize {
    match regime {
        crate::params::Regime::II => (n / 2).saturating_sub(1),
        _ => n / 2,
    }
}

/// Reduced Bethe roots of the `n`-electron ground state.
///
/// The reduced equations do not involve the field angles, so their solutions describe the
/// spectrum of the `h = 0` chain with the same `ξ, ξ′`. The ground-state eigenvalue of that
/// chain's transfer matrix is fitted by roots started from the Taylor reconstruction and from
/// the regime's string pattern, for every admissible spin-root count (or only `m` when
/// given). The best fit is polished on the pole-cleared reduced equations when needed and accepted only
/// if its energy reproduces the exact-diagonalization energy of the `h = 0` chain.
pub fn reduced_ground_state(len: usize, n: usize, m: Option<usize>, p: &BoundaryParams) -> Result<RootConfiguration> {
    use super::reduced::{energy_reduced, reduced_bae_residual, solve_reduced_bae};
    let companion = p.parallel_companion();
    let builder = TransferBuilder::matrix_free(len, &companion)?;
    let ground = ground_state_vector(len, n, &companion)?;
    let coeffs = super::poly::coefficients_on_circle(|u| expectation(&builder, &ground.1, u), 2 * len + 3, 1.0);
    let eig = |u: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c);
    let counts: Vec<usize> = match m {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let pattern = seed_roots(p.regime(), len, n, p).ok();
    let candidates: Vec<(RootConfiguration, f64)> = counts
        .par_iter()
        .flat_map_iter(|&k| {
            let mut seeds = Vec::new();
            if let Ok((r, _)) = roots_from_eigenvalue(eig, len, n, k, &companion) {
                seeds.push(r);
            }
            if let Some(pat) = pattern.as_ref().filter(|r| r.m() == k) {
                seeds.push(pat.to_raw());
            }
            seeds.into_iter().map(|s| refine_with_eigenvalue(eig, &s, &companion)).collect::<Vec<_>>()
        })
        .collect();
    let best = candidates
        .into_iter()
        .filter(|(_, fit)| fit.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::NoConvergence { iterations: 0, residual: f64::NAN })?;
    if best.1 > 1e-8 {
        return Err(Error::NoConvergence { iterations: 0, residual: best.1 });
    }
    // near-exact strings make the reduced equations ill-conditioned, so Newton is only used
    // when the fitted roots are not already at the residual floor
    let seed = best.0.to_shifted();
    let floor = reduced_bae_residual(&seed, p).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let polished = if floor <= 1e-9 {
        RootConfiguration { convergence: Some(super::roots::Convergence { iterations: 0, residual: floor }), ..seed }
    } else {
        solve_reduced_bae(&seed, p, &NewtonOptions::default())?
    };
    let energy = energy_reduced(&polished)?;
    if (energy - ground.0).abs() > 1e-8 * ground.0.abs().max(1.0) {
        return Err(Error::NoConvergence { iterations: 0, residual: (energy - ground.0).abs() });
    }
    Ok(RootConfiguration { regime: Some(p.regime()), ..polished })
}
