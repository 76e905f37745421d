//! Direct construction of the open t-J Hamiltonian (t = 1, J = 2) in the
//! `{hole, ↓, ↑}` local basis, optionally restricted to a fixed electron
//! number.
//!
//! No double occupancy is built into the local basis. Nearest-neighbour
//! hopping on an open chain never moves one fermion past another, so the
//! graded sign of every hopping matrix element is `+1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::graded::{digits, pow3};
use crate::error::{Error, Result};
use crate::params::BoundaryFields;

pub const MAX_HAMILTONIAN_SITES: usize = 10;

pub const HOLE: u8 = 0;
pub const DOWN: u8 = 1;
pub const UP: u8 = 2;

/// Row-sparse complex matrix.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub dim: usize,
    pub rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut s = Self::zeros(m.nrows());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if m[(r, c)] != Complex64::default() {
                    s.rows[r].push((c, m[(r, c)]));
                }
            }
        }
        s
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let mut s = Self::zeros(d.len());
        for (k, &x) in d.iter().enumerate() {
            s.rows[k].push((k, Complex64::new(x, 0.0)));
        }
        s
    }

    fn add(&mut self, row: usize, col: usize, v: Complex64) {
        if let Some(e) = self.rows[row].iter_mut().find(|e| e.0 == col) {
            e.1 += v;
        } else {
            self.rows[row].push((col, v));
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Largest `|A_rc − conj(A_cr)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.to_dense();
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..=r {
                worst = worst.max((d[(r, c)] - d[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Basis states of a chain, possibly restricted to electron number `n`.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub len: usize,
    pub electrons: Option<usize>,
    pub states: Vec<Vec<u8>>,
    /// Map from full `3^L` index to position in `states`.
    lookup: Vec<Option<usize>>,
}

impl SectorBasis {
    pub fn new(len: usize, electrons: Option<usize>) -> Self {
        let full = pow3(len);
        let mut states = Vec::new();
        let mut lookup = vec![None; full];
        for idx in 0..full {
            let d = digits(idx, len);
            let n = d.iter().filter(|&&x| x != HOLE).count();
            if electrons.map_or(true, |want| want == n) {
                lookup[idx] = Some(states.len());
                states.push(d);
            }
        }
        Self { len, electrons, states, lookup }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, d: &[u8]) -> Option<usize> {
        self.lookup[super::graded::from_digits(d)]
    }

    /// Full-space index of each sector state.
    pub fn full_indices(&self) -> Vec<usize> {
        self.states.iter().map(|d| super::graded::from_digits(d)).collect()
    }
}

/// Open t-J chain of length `len` with the given boundary terms.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub len: usize,
    pub fields: BoundaryFields,
}

fn sz(x: u8) -> f64 {
    match x {
        UP => 0.5,
        DOWN => -0.5,
        _ => 0.0,
    }
}

pub fn build_hamiltonian(len: usize, fields: &BoundaryFields) -> Result<Hamiltonian> {
    if len < 2 {
        return Err(Error::InvalidInput("the chain needs at least two sites".into()));
    }
    if len > MAX_HAMILTONIAN_SITES {
        return Err(Error::DimensionOverflow { len, max: MAX_HAMILTONIAN_SITES });
    }
    Ok(Hamiltonian { len, fields: *fields })
}

impl Hamiltonian {
    pub fn basis(&self, electrons: Option<usize>) -> SectorBasis {
        SectorBasis::new(self.len, electrons)
    }

    /// Matrix on the given sector basis.
    pub fn matrix(&self, basis: &SectorBasis) -> SparseMatrix {
        let len = self.len;
        let mut m = SparseMatrix::zeros(basis.dim());
        let one = Complex64::new(1.0, 0.0);
        let boundary = [(0usize, self.fields.chi_1, self.fields.h_1), (len - 1, self.fields.chi_l, self.fields.h_l)];
        for (col, d) in basis.states.iter().enumerate() {
            let mut diag = 0.0;
            for j in 0..len - 1 {
                let (a, b) = (d[j], d[j + 1]);
                match (a == HOLE, b == HOLE) {
                    (true, true) => {}
                    (false, false) => {
                        // J (S·S − n n / 4) with J = 2
                        diag += 2.0 * (sz(a) * sz(b) - 0.25);
                        if a != b {
                            let mut e = d.clone();
                            e.swap(j, j + 1);
                            let row = basis.index_of(&e).expect("spin exchange conserves N");
                            m.add(row, col, one);
                        }
                    }
                    _ => {
                        // −t (c†c + h.c.), t = 1
                        let mut e = d.clone();
                        e.swap(j, j + 1);
                        let row = basis.index_of(&e).expect("hopping conserves N");
                        m.add(row, col, -one);
                    }
                }
            }
            for &(site, chi, h) in &boundary {
                let x = d[site];
                if x == HOLE {
                    continue;
                }
                diag += chi + 2.0 * h[2] * sz(x);
                let mut e = d.clone();
                let amp = if x == DOWN {
                    e[site] = UP;
                    Complex64::new(h[0], -h[1])
                } else {
                    e[site] = DOWN;
                    Complex64::new(h[0], h[1])
                };
                if amp != Complex64::default() {
                    let row = basis.index_of(&e).expect("spin flip conserves N");
                    m.add(row, col, amp);
                }
            }
            m.add(col, col, Complex64::new(diag, 0.0));
        }
        m
    }

    pub fn sector_matrix(&self, electrons: Option<usize>) -> SparseMatrix {
        self.matrix(&self.basis(electrons))
    }
}

/// Diagonal of the total `S^z` on a basis.
pub fn sz_total(basis: &SectorBasis) -> Vec<f64> {
    basis.states.iter().map(|d| d.iter().map(|&x| sz(x)).sum()).collect()
}

/// Diagonal of the total electron number on a basis.
pub fn n_total(basis: &SectorBasis) -> Vec<f64> {
    basis.states.iter().map(|d| d.iter().filter(|&&x| x != HOLE).count() as f64).collect()
}

/// Frobenius norm of `[H, D]` for a diagonal operator `D`.
pub fn commutator_with_diagonal(h: &SparseMatrix, d: &[f64]) -> f64 {
    let mut s = 0.0;
    for (r, row) in h.rows.iter().enumerate() {
        for &(c, v) in row {
            s += (v * (d[c] - d[r])).norm_sqr();
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{map_boundary_params, BoundaryParams};
    use std::f64::consts::PI;

    #[test]
    fn hermitian_with_complex_fields() {
        let p = BoundaryParams::new(0.6, 1.0, 0.7, -1.3, 2.0, -0.4).unwrap();
        let h = build_hamiltonian(3, &map_boundary_params(&p).unwrap()).unwrap();
        assert!(h.sector_matrix(None).hermiticity_defect() < 1e-14);
    }

    #[test]
    fn number_conserved_structurally() {
        let p = BoundaryParams::new(0.6, 1.0, 0.7, -1.3, 2.0, -0.4).unwrap();
        let h = build_hamiltonian(4, &map_boundary_params(&p).unwrap()).unwrap();
        let b = h.basis(None);
        assert_eq!(commutator_with_diagonal(&h.matrix(&b), &n_total(&b)), 0.0);
    }

    #[test]
    fn parallel_z_fields_conserve_sz() {
        let p = BoundaryParams::new(0.6, 0.0, 0.0, -1.3, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(3, &map_boundary_params(&p).unwrap()).unwrap();
        let b = h.basis(None);
        assert_eq!(commutator_with_diagonal(&h.matrix(&b), &sz_total(&b)), 0.0);
    }

    #[test]
    fn unparallel_fields_break_sz() {
        let p = BoundaryParams::new(0.6, PI / 3.0, 0.0, -1.3, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(3, &map_boundary_params(&p).unwrap()).unwrap();
        let b = h.basis(None);
        assert!(commutator_with_diagonal(&h.matrix(&b), &sz_total(&b)) > 0.1);
    }

    #[test]
    fn sector_dimensions() {
        assert_eq!(SectorBasis::new(4, Some(4)).dim(), 16);
        assert_eq!(SectorBasis::new(4, Some(2)).dim(), 6 * 4);
        assert_eq!(SectorBasis::new(4, None).dim(), 81);
    }
}
