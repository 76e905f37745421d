use crate::error::{Error, Result};

/// Number of repeated pairwise averages applied to the partial sums.
const AVERAGING_LEVELS: usize = 4;
const TARGET: f64 = 1e-13;

/// `β(a) = Σ_{k≥0} (−1)^k / (a + k)` for `a > 0`.
///
/// Partial sums `S_K … S_{K+4}` are averaged pairwise four times; `K` doubles until two
/// successive estimates agree to 1e−13.
pub fn alternating_beta(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("alternating series needs a > 0, got {a}")));
    }
    let estimate = |k: usize| {
        let mut sums = Vec::with_capacity(AVERAGING_LEVELS + 1);
        let mut s = 0.0;
        let mut sign = 1.0;
        for j in 0..k + AVERAGING_LEVELS + 1 {
            s += sign / (a + j as f64);
            sign = -sign;
            if j >= k {
                sums.push(s);
            }
        }
        for _ in 0..AVERAGING_LEVELS {
            sums = sums.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        sums[0]
    };
    let mut k = 256;
    let mut prev = estimate(k);
    while k < 1 << 22 {
        k *= 2;
        let next = estimate(k);
        if (next - prev).abs() <= TARGET {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence { iterations: k, residual: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        assert!((alternating_beta(1.0).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((alternating_beta(0.5).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // β(a) + β(a+1) = 1/a
        let a = 0.37;
        assert!((alternating_beta(a).unwrap() + alternating_beta(a + 1.0).unwrap() - 1.0 / a).abs() < 1e-12);
        assert!(alternating_beta(0.0).is_err());
    }
}
