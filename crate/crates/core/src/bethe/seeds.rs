use num_complex::Complex64;

use super::logbae::{solve_log_bae, BoundaryPhase};
use super::roots::{QuantumNumbers, Representation, RootConfiguration};
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, Regime};

/// Offset added to the imaginary part of boundary strings in seeds.
pub const BOUNDARY_STRING_OFFSET: f64 = 1e-4;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Positive real centers from the logarithmic equations, used as string positions.
///
/// Regime (i) uses its own boundary phases; elsewhere a single `−θ₁` phase stands in for
/// the boundary, which keeps the ground-state quantum numbers `1, …, count` at finite roots.
pub fn string_centers(regime: Regime, len: usize, count: usize, p: &BoundaryParams) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if regime == Regime::I {
        return super::logbae::solve_log_bae_regime1(&QuantumNumbers::ground_state(len, count)?, p, len);
    }
    let q = QuantumNumbers::new((1..=count as i64).collect(), (len - count) as i64)?;
    solve_log_bae(&q, len, &[BoundaryPhase { sign: -1.0, width: 1.0 }])
}

/// Ground-state pattern of the reduced equations for `regime`, in the shifted picture.
pub fn seed_roots(regime: Regime, len: usize, n: usize, p: &BoundaryParams) -> Result<RootConfiguration> {
    seed_roots_with_offset(regime, len, n, p, BOUNDARY_STRING_OFFSET)
}

/// As [`seed_roots`], with an explicit boundary-string offset (0 places exact boundary strings).
pub fn seed_roots_with_offset(
    regime: Regime,
    len: usize,
    n: usize,
    p: &BoundaryParams,
    offset: f64,
) -> Result<RootConfiguration> {
    regime.check(p)?;
    if n == 0 || n % 2 == 1 || n > len {
        return Err(Error::InvalidInput(format!("ground-state patterns need even 0 < N <= L, got N = {n}")));
    }
    let half = n / 2;
    let pair = |x: f64, mu: &mut Vec<Complex64>| {
        mu.push(c(x, 0.5));
        mu.push(c(x, -0.5));
    };
    let mut mu = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(half);
    match regime {
        Regime::I => {
            for x in string_centers(regime, len, half, p)? {
                pair(x, &mut mu);
                lambda.push(c(x, 0.0));
            }
        }
        Regime::II | Regime::III => {
            let centers = string_centers(regime, len, half, p)?;
            for &x in &centers[..half - 1] {
                pair(x, &mut mu);
                lambda.push(c(x, 0.0));
            }
            mu.push(c(centers[half - 1], 0.0));
            if regime == Regime::II {
                mu.push(c(0.0, p.xi_prime - 0.5 + offset));
            } else {
                mu.push(c(0.0, 0.5 - p.xi + offset));
                lambda.push(c(0.0, -p.xi + offset));
            }
        }
        Regime::IV => {
            for x in string_centers(regime, len, half - 1, p)? {
                pair(x, &mut mu);
                lambda.push(c(x, 0.0));
            }
            mu.push(c(0.0, p.xi_prime - 0.5 + offset));
            mu.push(c(0.0, 0.5 - p.xi + offset));
            lambda.push(c(0.0, -p.xi + offset));
        }
    }
    Ok(RootConfiguration::new(mu, lambda, len, Representation::Shifted).with_regime(regime))
}
