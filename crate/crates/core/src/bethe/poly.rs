use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients (ascending) of a polynomial of degree `< count` sampled on `|u| = radius`.
pub fn coefficients_on_circle<F: Fn(Complex64) -> Complex64>(f: F, count: usize, radius: f64) -> Vec<Complex64> {
    let nodes: Vec<Complex64> = (0..count)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / count as f64))
        .collect();
    let values: Vec<Complex64> = nodes.iter().map(|&w| f(w * radius)).collect();
    (0..count)
        .map(|j| {
            let s: Complex64 = values.iter().zip(&nodes).map(|(v, w)| v * w.powi(-(j as i32))).sum();
            s / (count as f64 * radius.powi(j as i32))
        })
        .collect()
}

/// Product of two ascending coefficient lists, truncated to `order` terms.
pub fn mul_trunc(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order];
    for (i, x) in a.iter().enumerate().take(order) {
        for (j, y) in b.iter().enumerate() {
            if i + j >= order {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `base^k` truncated to `order` terms.
pub fn pow_trunc(base: &[Complex64], k: usize, order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order];
    if order > 0 {
        out[0] = Complex64::new(1.0, 0.0);
    }
    for _ in 0..k {
        out = mul_trunc(&out, base, order);
    }
    out
}

/// Roots of the monic polynomial `x^n + c[n-1] x^{n-1} + … + c[0]` from its companion matrix.
pub fn monic_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut comp = DMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i];
    }
    let schur = Schur::try_new(comp, 1e-15, 10_000).ok_or_else(|| Error::Singular("companion Schur failed".into()))?;
    Ok(schur
        .eigenvalues()
        .ok_or_else(|| Error::Singular("companion Schur not triangular".into()))?
        .iter()
        .copied()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_coefficients_exact_for_low_degree() {
        let coeffs = coefficients_on_circle(|u| u * u * 3.0 - u + c(0.5, 1.0), 5, 0.7);
        let want = [c(0.5, 1.0), c(-1.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for (a, b) in coeffs.iter().zip(&want) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn roots_of_quadratic() {
        // (x − 1)(x + 2i) = x² + (2i − 1)x − 2i
        let mut r = monic_roots(&[c(0.0, -2.0), c(-1.0, 2.0)]).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(0.0, -2.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn truncated_power() {
        let p = pow_trunc(&[c(1.0, 0.0), c(1.0, 0.0)], 3, 3);
        assert_eq!(p, vec![c(1.0, 0.0), c(3.0, 0.0), c(3.0, 0.0)]);
    }
}
