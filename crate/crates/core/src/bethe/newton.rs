use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Residual vector together with per-component magnitudes used for normalization.
pub struct Residual {
    pub value: Vec<Complex64>,
    pub scale: Vec<f64>,
}

impl Residual {
    /// Largest component of `value / max(1, scale)`.
    pub fn merit(&self) -> f64 {
        self.value
            .iter()
            .zip(&self.scale)
            .map(|(v, s)| v.norm() / s.max(1.0))
            .fold(0.0, f64::max)
    }

    pub fn normalized(&self) -> Vec<Complex64> {
        self.value.iter().zip(&self.scale).map(|(v, s)| v / s.max(1.0)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub max_jitter_retries: usize,
    pub jitter: f64,
    pub seed: u64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tolerance: 1e-12,
            max_iterations: 500,
            max_halvings: 20,
            max_jitter_retries: 3,
            jitter: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

fn finite(x: &[Complex64]) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Central-difference Jacobian of a holomorphic map.
pub fn jacobian<F: Fn(&[Complex64]) -> Residual>(f: &F, x: &[Complex64]) -> DMatrix<Complex64> {
    let n = x.len();
    let m = f(x).value.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    for j in 0..n {
        let h = 1e-6 * x[j].norm().max(1.0);
        xp[j] = x[j] + h;
        let fp = f(&xp).value;
        xp[j] = x[j] - h;
        let fm = f(&xp).value;
        xp[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Damped Newton iteration on a square holomorphic system.
///
/// Each step is halved up to `max_halvings` times while the merit does not decrease.
/// A singular Jacobian or a stalled line search perturbs the iterate by a random
/// jitter, at most `max_jitter_retries` times.
pub fn solve<F: Fn(&[Complex64]) -> Residual>(f: F, x0: &[Complex64], opts: &NewtonOptions) -> Result<NewtonOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let mut merit = r.merit();
    let mut retries = 0;
    for iter in 0..opts.max_iterations {
        if merit <= opts.tolerance {
            return Ok(NewtonOutcome { x, residual: merit, iterations: iter });
        }
        let jac = jacobian(&f, &x);
        let rhs = -DVector::from_vec(r.value.clone());
        let step = jac.lu().solve(&rhs).filter(|s| finite(s.as_slice()));
        let mut accepted = false;
        if let Some(step) = step {
            let mut t = 1.0;
            for _ in 0..=opts.max_halvings {
                let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
                if finite(&trial) {
                    let rt = f(&trial);
                    let mt = rt.merit();
                    if mt.is_finite() && mt < merit {
                        x = trial;
                        r = rt;
                        merit = mt;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
        }
        if !accepted {
            if retries >= opts.max_jitter_retries {
                return Err(Error::NoConvergence { iterations: iter, residual: merit });
            }
            retries += 1;
            for z in x.iter_mut() {
                let scale = opts.jitter * z.norm().max(1.0);
                *z += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            }
            r = f(&x);
            merit = r.merit();
        }
    }
    if merit <= opts.tolerance {
        return Ok(NewtonOutcome { x, residual: merit, iterations: opts.max_iterations });
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, residual: merit })
}

/// Levenberg-Marquardt minimization of `‖f(x)‖₂` for an overdetermined holomorphic system.
///
/// Returns the minimizer with the final residual norm; stops when a step no longer improves
/// the norm by a relative `opts.tolerance`, or after `opts.max_iterations` steps.
pub fn least_squares<F: Fn(&[Complex64]) -> Vec<Complex64>>(f: F, x0: &[Complex64], opts: &NewtonOptions) -> NewtonOutcome {
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let wrapped = |x: &[Complex64]| Residual { value: f(x), scale: Vec::new() };
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let mut cost = norm(&r);
    let mut damping = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iterations && cost.is_finite() {
        iterations += 1;
        let jac = jacobian(&wrapped, &x);
        let jh = jac.adjoint();
        let normal = &jh * &jac;
        let grad = &jh * DVector::from_vec(r.clone());
        let mut improved = false;
        for _ in 0..=opts.max_halvings {
            let mut damped = normal.clone();
            for i in 0..damped.nrows() {
                let d = damped[(i, i)];
                damped[(i, i)] = d + d.norm().max(1e-300) * damping;
            }
            let step = damped.lu().solve(&(-&grad)).filter(|s| finite(s.as_slice()));
            if let Some(step) = step {
                let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
                let rt = f(&trial);
                let ct = norm(&rt);
                if ct.is_finite() && ct < cost {
                    let gain = (cost - ct) / cost.max(f64::MIN_POSITIVE);
                    x = trial;
                    r = rt;
                    cost = ct;
                    damping = (damping * 0.3).max(1e-12);
                    improved = gain > opts.tolerance;
                    break;
                }
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    NewtonOutcome { x, residual: cost, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_complex_polynomial_system() {
        // z² = −4, z·w = 2i  →  z = 2i, w = 1 from a nearby start
        let f = |x: &[Complex64]| Residual {
            value: vec![x[0] * x[0] + 4.0, x[0] * x[1] - Complex64::new(0.0, 2.0)],
            scale: vec![4.0, 2.0],
        };
        let out = solve(f, &[Complex64::new(0.3, 1.5), Complex64::new(0.8, 0.2)], &NewtonOptions::default()).unwrap();
        assert!((out.x[0] - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((out.x[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        // constant residual: no root exists
        let f = |x: &[Complex64]| Residual { value: vec![x[0] * 0.0 + 1.0], scale: vec![1.0] };
        let err = solve(f, &[Complex64::new(0.0, 0.0)], &NewtonOptions { max_iterations: 5, ..Default::default() });
        assert!(matches!(err, Err(Error::NoConvergence { .. })));
    }
}
