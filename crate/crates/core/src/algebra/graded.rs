//! Z2-graded operators on products of three-dimensional local spaces.
//!
//! Local basis index `0, 1, 2` carries Grassmann parity `0, 1, 1`. On a
//! physical site index 0 is the empty site, 1 is a spin-down electron and 2
//! is a spin-up electron. Multi-space basis states are stored with the first
//! space as the most significant base-3 digit.
//!
//! Operators acting on one space of a product are embedded with the Koszul
//! sign of moving them past the preceding spaces, so products of embedded
//! operators are ordinary matrix products.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Grassmann parity of the local basis states.
pub const PARITY: [u8; 3] = [0, 1, 1];

pub type Mat3 = Matrix3<Complex64>;

/// Dense complex operator together with the parity of each basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    pub entries: DMatrix<Complex64>,
    pub parities: Vec<u8>,
}

pub fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Base-3 digits of `index` for `n` spaces, most significant first.
pub fn digits(mut index: usize, n: usize) -> Vec<u8> {
    let mut d = vec![0u8; n];
    for k in (0..n).rev() {
        d[k] = (index % 3) as u8;
        index /= 3;
    }
    d
}

pub fn from_digits(d: &[u8]) -> usize {
    d.iter().fold(0, |acc, &x| acc * 3 + x as usize)
}

/// Total parity of a product basis state.
pub fn state_parity(d: &[u8]) -> u8 {
    d.iter().map(|&x| PARITY[x as usize]).sum::<u8>() % 2
}

fn parity_vector(n: usize) -> Vec<u8> {
    (0..pow3(n)).map(|i| state_parity(&digits(i, n))).collect()
}

/// Koszul sign and image of the graded transposition of spaces `i < j`
/// applied to the basis state `d`.
pub fn graded_swap(d: &[u8], i: usize, j: usize) -> (Vec<u8>, f64) {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    let px = PARITY[d[a] as usize] as u32;
    let py = PARITY[d[b] as usize] as u32;
    let between: u32 = d[a + 1..b].iter().map(|&x| PARITY[x as usize] as u32).sum();
    let exponent = px * py + (px + py) * between;
    let mut out = d.to_vec();
    out.swap(a, b);
    (out, if exponent % 2 == 0 { 1.0 } else { -1.0 })
}

impl GradedOperator {
    pub fn n_spaces(&self) -> usize {
        let mut n = 0;
        let mut d = 1;
        while d < self.dim() {
            d *= 3;
            n += 1;
        }
        n
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn identity(n: usize) -> Self {
        let d = pow3(n);
        Self { entries: DMatrix::identity(d, d), parities: parity_vector(n) }
    }

    pub fn from_matrix(entries: DMatrix<Complex64>, n: usize) -> Self {
        assert_eq!(entries.nrows(), pow3(n));
        Self { entries, parities: parity_vector(n) }
    }

    /// Graded permutation of spaces `i` and `j` in an `n`-space product.
    pub fn graded_permutation(i: usize, j: usize, n: usize) -> Self {
        let d = pow3(n);
        let mut m = DMatrix::zeros(d, d);
        for col in 0..d {
            let (img, sign) = graded_swap(&digits(col, n), i, j);
            m[(from_digits(&img), col)] = Complex64::new(sign, 0.0);
        }
        Self::from_matrix(m, n)
    }

    /// Even local operator `a` acting on space `site` of an `n`-space product.
    pub fn local_even(a: &Mat3, site: usize, n: usize) -> Self {
        for r in 0..3 {
            for c in 0..3 {
                if PARITY[r] != PARITY[c] && a[(r, c)] != Complex64::new(0.0, 0.0) {
                    panic!("local_even called with an operator that has odd components");
                }
            }
        }
        let d = pow3(n);
        let mut m = DMatrix::zeros(d, d);
        for col in 0..d {
            let dc = digits(col, n);
            for r in 0..3 {
                let v = a[(r, dc[site] as usize)];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut dr = dc.clone();
                dr[site] = r as u8;
                m[(from_digits(&dr), col)] += v;
            }
        }
        Self::from_matrix(m, n)
    }

    pub fn scaled_identity_plus(&self, u: Complex64) -> Self {
        let mut out = self.clone();
        for k in 0..out.dim() {
            out.entries[(k, k)] += u;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self { entries: &self.entries * &rhs.entries, parities: self.parities.clone() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let c = &self.entries * &other.entries - &other.entries * &self.entries;
        c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Supertrace over the first space: `Σ_β (−1)^{p_β} C_ββ`, returning an
    /// operator on the remaining spaces.
    pub fn supertrace_first(&self) -> Self {
        let n = self.n_spaces();
        let rest = pow3(n - 1);
        let mut m = DMatrix::zeros(rest, rest);
        for (beta, &p) in PARITY.iter().enumerate() {
            let sign = if p == 0 { 1.0 } else { -1.0 };
            let block = self.entries.view((beta * rest, beta * rest), (rest, rest));
            m += block * Complex64::new(sign, 0.0);
        }
        Self::from_matrix(m, n - 1)
    }

    /// Full supertrace.
    pub fn supertrace(&self) -> Complex64 {
        (0..self.dim())
            .map(|k| if self.parities[k] == 0 { self.entries[(k, k)] } else { -self.entries[(k, k)] })
            .sum()
    }

    /// Triplet text format: header `# dim=<d> parity=<p...>` followed by one
    /// `row col re im` line per nonzero entry.
    pub fn to_triplets(&self) -> String {
        let mut s = String::new();
        let par: String = self.parities.iter().map(|p| char::from(b'0' + p)).collect();
        writeln!(s, "# dim={} parity={}", self.dim(), par).unwrap();
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                let z = self.entries[(r, c)];
                if z != Complex64::new(0.0, 0.0) {
                    writeln!(s, "{} {} {:.12e} {:.12e}", r, c, z.re, z.im).unwrap();
                }
            }
        }
        s
    }

    pub fn from_triplets<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty operator file".into()))??;
        let mut dim = None;
        let mut parities = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("dim=") {
                dim = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
            } else if let Some(v) = tok.strip_prefix("parity=") {
                parities = Some(
                    v.bytes()
                        .map(|b| match b {
                            b'0' => Ok(0u8),
                            b'1' => Ok(1u8),
                            _ => Err(Error::Parse(format!("bad parity digit '{}'", b as char))),
                        })
                        .collect::<Result<Vec<u8>>>()?,
                );
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse("header lacks dim=".into()))?;
        let parities = parities.ok_or_else(|| Error::Parse("header lacks parity=".into()))?;
        if parities.len() != dim {
            return Err(Error::Parse("parity string length differs from dim".into()));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("expected 4 fields, got '{line}'")));
            }
            let parse_u = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(e.to_string()));
            let parse_f = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
            let (r, c) = (parse_u(f[0])?, parse_u(f[1])?);
            if r >= dim || c >= dim {
                return Err(Error::Parse(format!("index out of range in '{line}'")));
            }
            m[(r, c)] = Complex64::new(parse_f(f[2])?, parse_f(f[3])?);
        }
        Ok(Self { entries: m, parities })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_space_permutation_signs() {
        let p = GradedOperator::graded_permutation(0, 1, 2);
        // |γδ> -> (−1)^{p_γ p_δ} |δγ>
        for g in 0..3u8 {
            for d in 0..3u8 {
                let col = from_digits(&[g, d]);
                let row = from_digits(&[d, g]);
                let expect = if PARITY[g as usize] * PARITY[d as usize] == 1 { -1.0 } else { 1.0 };
                assert_eq!(p.entries[(row, col)].re, expect);
            }
        }
        // odd-odd diagonal entry is −1
        let k = from_digits(&[1, 1]);
        assert_eq!(p.entries[(k, k)].re, -1.0);
    }

    #[test]
    fn permutation_squares_to_identity() {
        let n = 4;
        let p = GradedOperator::graded_permutation(0, 3, n);
        let id = GradedOperator::identity(n);
        assert!((p.mul(&p).entries - id.entries).norm() < 1e-14);
    }

    #[test]
    fn supertrace_of_identity_is_minus_one() {
        assert_eq!(GradedOperator::identity(1).supertrace().re, -1.0);
    }

    #[test]
    fn supertrace_over_auxiliary_of_permutation_is_identity() {
        let p = GradedOperator::graded_permutation(0, 1, 2);
        let s = p.supertrace_first();
        assert!((s.entries - GradedOperator::identity(1).entries).norm() < 1e-15);
    }

    #[test]
    fn triplet_round_trip() {
        let p = GradedOperator::graded_permutation(0, 1, 2).scaled_identity_plus(Complex64::new(0.3, -1.2));
        let text = p.to_triplets();
        assert!(text.starts_with("# dim=9 parity=011100100\n"));
        let back = GradedOperator::from_triplets(text.as_bytes()).unwrap();
        assert!((back.entries - p.entries).norm() < 1e-11);
        assert_eq!(back.parities, p.parities);
    }
}
