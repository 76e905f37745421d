//! Exact-diagonalization oracle: lowest eigenvalues of Hermitian operators.
//!
//! Small matrices go through a dense Hermitian eigensolver; larger ones
//! through Lanczos with full reorthogonalization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::{Hamiltonian, SparseMatrix};
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const DENSE_LIMIT: usize = 256;

/// Ascending eigenvalues and eigenvectors of a dense Hermitian matrix.
pub fn dense_eigh(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `k` lowest eigenpairs by Lanczos with full reorthogonalization.
pub fn lanczos_lowest(op: &SparseMatrix, k: usize, seed: u64) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = op.dim;
    let max_steps = n.min(400.max(8 * k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut result = None;
    for step in 0..max_steps {
        let mut w = op.matvec(&basis[step]);
        let a = dot(&basis[step], &w).re;
        alpha.push(a);
        // two passes of Gram-Schmidt against every previous vector
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let bnorm = norm(&w);
        let m = alpha.len();
        let tri = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let want = k.min(m);
        let converged = bnorm < 1e-12
            || (m >= k && order[..want].iter().all(|&j| (bnorm * eig.eigenvectors[(m - 1, j)]).abs() < 1e-11));
        if converged || step + 1 == max_steps {
            let vals: Vec<f64> = order[..want].iter().map(|&j| eig.eigenvalues[j]).collect();
            let vecs = order[..want]
                .iter()
                .map(|&j| {
                    let mut x = vec![Complex64::default(); n];
                    for (i, b) in basis.iter().enumerate() {
                        let c = eig.eigenvectors[(i, j)];
                        x.iter_mut().zip(b).for_each(|(xx, bb)| *xx += bb * c);
                    }
                    x
                })
                .collect();
            result = Some((vals, vecs, converged));
            break;
        }
        beta.push(bnorm);
        basis.push(w.into_iter().map(|x| x / bnorm).collect());
    }
    let (vals, vecs, converged) = result.expect("loop always sets a result");
    if !converged {
        return Err(Error::NoConvergence { iterations: max_steps, residual: f64::NAN });
    }
    Ok((vals, vecs))
}

/// `k` lowest eigenvalues of a Hermitian sparse operator, ascending.
pub fn lowest_eigenvalues(op: &SparseMatrix, k: usize) -> Result<Vec<f64>> {
    Ok(lowest_eigenpairs(op, k)?.0)
}

pub fn lowest_eigenpairs(op: &SparseMatrix, k: usize) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if op.dim <= DENSE_LIMIT {
        let (vals, vecs) = dense_eigh(&op.to_dense())?;
        let k = k.min(vals.len());
        let v = (0..k).map(|c| vecs.column(c).iter().copied().collect()).collect();
        Ok((vals[..k].to_vec(), v))
    } else {
        let defect = hermiticity_defect_sparse(op);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        lanczos_lowest(op, k, 0x5eed)
    }
}

fn hermiticity_defect_sparse(op: &SparseMatrix) -> f64 {
    use std::collections::HashMap;
    let mut map: HashMap<(usize, usize), Complex64> = HashMap::new();
    for (r, row) in op.rows.iter().enumerate() {
        for &(c, v) in row {
            *map.entry((r, c)).or_default() += v;
        }
    }
    map.iter()
        .map(|(&(r, c), &v)| (v - map.get(&(c, r)).copied().unwrap_or_default().conj()).norm())
        .fold(0.0, f64::max)
}

/// `k` lowest eigenvalues of the Hamiltonian, optionally in the sector with
/// `electrons` particles.
pub fn exact_spectrum(h: &Hamiltonian, k: usize, electrons: Option<usize>) -> Result<Vec<f64>> {
    lowest_eigenvalues(&h.sector_matrix(electrons), k)
}

/// Ground-state energy in the given sector.
pub fn ground_energy(h: &Hamiltonian, electrons: Option<usize>) -> Result<f64> {
    Ok(exact_spectrum(h, 1, electrons)?[0])
}

pub fn to_dvector(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hamiltonian::build_hamiltonian;
    use crate::params::BoundaryFields;

    #[test]
    fn diagonal_example() {
        let op = SparseMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(lowest_eigenvalues(&op, 2).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(lowest_eigenvalues(&SparseMatrix::from_dense(&m), 1), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn two_site_zero_field() {
        let h = build_hamiltonian(2, &BoundaryFields::zero()).unwrap();
        // one electron hopping between two sites
        assert!((ground_energy(&h, Some(1)).unwrap() + 1.0).abs() < 1e-12);
        // two electrons form a singlet: 2(−3/4 − 1/4)
        assert!((ground_energy(&h, Some(2)).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense() {
        let fields = crate::params::map_boundary_params(&crate::params::BoundaryParams::new(0.8, 1.0, 0.2, -0.5, 0.3, 0.0).unwrap()).unwrap();
        let h = build_hamiltonian(6, &fields).unwrap();
        let op = h.sector_matrix(Some(4));
        let (dense, _) = dense_eigh(&op.to_dense()).unwrap();
        let (lz, _) = lanczos_lowest(&op, 3, 1).unwrap();
        for i in 0..3 {
            assert!((dense[i] - lz[i]).abs() < 1e-9, "{i}: {} vs {}", dense[i], lz[i]);
        }
    }
}
