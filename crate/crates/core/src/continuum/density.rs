use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::kernel::{kernel_a, kernel_theta};
use super::quadrature::{half_line, Rule};
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, Regime};

/// Largest accepted condition estimate of the discretized equation.
pub const MAX_CONDITION: f64 = 1e12;
/// Tolerance on the filling reached by [`find_q0`].
pub const FILLING_TOLERANCE: f64 = 1e-10;

/// Discretization of the half-line support `[Q₀, ∞)`.
///
/// `[Q₀, Λ_max]` is covered by Gauss-Legendre panels; `[Λ_max, ∞)` by a Gauss-Legendre rule in
/// `s = Λ_max/λ`, which integrates the algebraic `λ⁻²` tail of the density without truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lambda_max: f64,
    pub panel_width: f64,
    pub panel_order: usize,
    pub tail_order: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { lambda_max: 40.0, panel_width: 1.0, panel_order: 10, tail_order: 32 }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_max >= 20.0) || !self.lambda_max.is_finite() {
            return Err(Error::InvalidInput(format!("lambda_max must be finite and >= 20, got {}", self.lambda_max)));
        }
        if !(self.panel_width > 0.0) || self.panel_order == 0 || self.tail_order == 0 {
            return Err(Error::InvalidInput("panel width and quadrature orders must be positive".into()));
        }
        Ok(())
    }

    /// The same grid with half the panel width and twice the tail order.
    pub fn refined(&self) -> Self {
        GridSpec { panel_width: 0.5 * self.panel_width, tail_order: 2 * self.tail_order, ..*self }
    }

    fn rule(&self, q0: f64) -> Rule {
        half_line(q0, self.lambda_max, self.panel_width, self.panel_order, self.tail_order)
    }
}

/// Boundary source terms `(s, m)` of the regime: the density equation carries
/// `−(1/2L) Σ s a_m(λ)` next to the bulk `a₂(λ)`. Hole terms at `μ_{N−1} = ∞` are absent.
pub fn boundary_terms(regime: Regime, p: &BoundaryParams) -> Result<Vec<(f64, f64)>> {
    regime.check(p)?;
    let (xi, xp) = (p.xi, p.xi_prime);
    Ok(match regime {
        Regime::I => vec![(1.0, 1.0), (-1.0, 2.0 * (1.0 - xp)), (-1.0, 2.0 * xi)],
        Regime::II => vec![(1.0, 1.0), (-1.0, 2.0 * xi), (1.0, 2.0 * xp)],
        Regime::III => vec![(1.0, 1.0), (-1.0, 2.0 * (1.0 - xp)), (1.0, 2.0 * (1.0 - xi))],
        Regime::IV => vec![(1.0, 1.0), (1.0, 2.0 * (1.0 - xi)), (1.0, 2.0 * xp)],
    })
}

/// `1/(2L)`, zero for an infinite chain.
pub fn inverse_double_length(len: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Err(Error::InvalidInput(format!("system size must be positive, got {len}")));
    }
    Ok(0.5 / len)
}

/// Target of `∫_{|λ|>Q₀} ρ` for filling `n`.
///
/// Regimes (ii) and (iii) lose one real root to `μ_{N−1} = ∞`; its source terms carry weight
/// `1/(2L)` that is dropped from the density, so the printed `n/2 − 1/L` is raised by `1/(2L)`.
pub fn filling_target(regime: Regime, n: f64, len: f64) -> Result<f64> {
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::InvalidInput(format!("filling must lie in (0, 1], got {n}")));
    }
    let e = inverse_double_length(len)?;
    Ok(match regime {
        Regime::I => 0.5 * n,
        Regime::II | Regime::III => 0.5 * n - e,
        Regime::IV => 0.5 * n - 2.0 * e,
    })
}

/// Solution of the density equation, stored on `[Q₀, ∞)` (even extension implied).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityProfile {
    pub regime: Regime,
    pub params: BoundaryParams,
    pub q0: f64,
    pub lambda_max: f64,
    /// System size in the `1/(2L)` source terms; infinite drops them.
    pub len: f64,
    pub grid: Vec<f64>,
    pub weights: Vec<f64>,
    pub rho: Vec<f64>,
    /// Weight of the `δ(λ)` hole term at half filling (`−1/(2L)`), zero otherwise.
    pub hole_weight: f64,
    terms: Vec<(f64, f64)>,
}

fn kernel(x: f64, y: f64) -> f64 {
    kernel_a(2.0, x - y) + kernel_a(2.0, x + y)
}

/// `∫_{Q₀}^{∞} [a₂(λ−μ) + a₂(λ+μ)] dμ`.
fn kernel_mass(lambda: f64, q0: f64) -> f64 {
    1.0 + (kernel_theta(2.0, lambda - q0) - kernel_theta(2.0, lambda + q0)) / (2.0 * PI)
}

impl DensityProfile {
    /// Right-hand side of the regular part of the equation.
    pub fn source(&self, lambda: f64) -> f64 {
        let e = inverse_double_length(self.len).unwrap_or(0.0);
        let boundary: f64 = self.terms.iter().map(|&(s, m)| s * kernel_a(m, lambda)).sum();
        // δ(λ) leaves an atom of weight −1/(2L) and feeds back a₂/(2L) into the regular part
        kernel_a(2.0, lambda) - e * boundary - self.hole_weight * kernel_a(2.0, lambda)
    }

    /// Density at any `λ ≥ 0` by Nyström interpolation (equal to `rho` on the grid).
    pub fn eval(&self, lambda: f64) -> f64 {
        let lambda = lambda.abs();
        let mut num = self.source(lambda);
        let mut den = 1.0 + kernel_mass(lambda, self.q0);
        for ((&x, &w), &r) in self.grid.iter().zip(&self.weights).zip(&self.rho) {
            let k = w * kernel(lambda, x);
            num -= k * r;
            den -= k;
        }
        num / den
    }

    /// `∫_{|λ|>Q₀} ρ` over the whole line, including the hole atom.
    pub fn filling(&self) -> f64 {
        2.0 * self.weights.iter().zip(&self.rho).map(|(w, r)| w * r).sum::<f64>() + self.hole_weight
    }

    /// `∫_{|λ|>Q₀} f(λ) ρ(λ) dλ` for even `f`, including the hole atom.
    pub fn moment<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        2.0 * self.grid.iter().zip(&self.weights).zip(&self.rho).map(|((&x, &w), &r)| w * r * f(x)).sum::<f64>()
            + self.hole_weight * f(0.0)
    }

    /// Sup-norm residual of the equation at the nodes of `rule` (on `[Q₀, ∞)`), using the
    /// interpolated density and `rule` for the integral.
    pub fn residual_on(&self, rule: &Rule, up_to: f64) -> f64 {
        let values: Vec<f64> = rule.nodes.iter().map(|&x| self.eval(x)).collect();
        rule.nodes
            .iter()
            .filter(|&&x| x <= up_to)
            .map(|&x| {
                let integral: f64 =
                    rule.nodes.iter().zip(&rule.weights).zip(&values).map(|((&y, &w), &r)| w * kernel(x, y) * r).sum();
                (self.eval(x) + integral - self.source(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn solve(
    regime: Regime,
    p: &BoundaryParams,
    q0: f64,
    len: f64,
    hole: bool,
    grid: &GridSpec,
) -> Result<DensityProfile> {
    grid.validate()?;
    if !(q0 >= 0.0) || q0 >= grid.lambda_max {
        return Err(Error::InvalidInput(format!("Q0 must lie in [0, {}), got {q0}", grid.lambda_max)));
    }
    let terms = boundary_terms(regime, p)?;
    let e = inverse_double_length(len)?;
    let rule = grid.rule(q0);
    let mut profile = DensityProfile {
        regime,
        params: *p,
        q0,
        lambda_max: grid.lambda_max,
        len,
        grid: rule.nodes.clone(),
        weights: rule.weights.clone(),
        rho: Vec::new(),
        hole_weight: if hole { -e } else { 0.0 },
        terms,
    };
    let n = rule.len();
    // ρ(x_i)[1 + ∫K − Σ_j w_j K_ij] + Σ_j w_j K_ij ρ(x_j) = g(x_i): the diagonal carries the
    // exact kernel mass so that the peak of a₂ is integrated exactly even between sparse nodes
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for i in 0..n {
        let x = rule.nodes[i];
        let mut diag = 1.0 + kernel_mass(x, q0);
        for j in 0..n {
            let k = rule.weights[j] * kernel(x, rule.nodes[j]);
            a[(i, j)] = k;
            diag -= k;
        }
        a[(i, i)] += diag;
        b[i] = profile.source(x);
    }
    let lu = a.lu();
    let u = lu.u();
    let diag = u.diagonal().map(f64::abs);
    let condition = diag.max() / diag.min();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let x = lu.solve(&b).ok_or_else(|| Error::Singular("density equation".into()))?;
    profile.rho = x.iter().copied().collect();
    Ok(profile)
}

/// Solves the density equation on `|λ| > Q₀` without the half-filling hole term.
pub fn solve_density(regime: Regime, p: &BoundaryParams, q0: f64, len: f64, grid: &GridSpec) -> Result<DensityProfile> {
    solve(regime, p, q0, len, false, grid)
}

/// The half-filling density: `Q₀ = 0` with the `δ(λ)` hole term.
pub fn solve_half_filling(regime: Regime, p: &BoundaryParams, len: f64, grid: &GridSpec) -> Result<DensityProfile> {
    solve(regime, p, 0.0, len, true, grid)
}

/// `Q₀` reaching filling `n` by bisection; `n = 1` is the half-filled band `Q₀ = 0`.
pub fn find_q0(regime: Regime, p: &BoundaryParams, n: f64, len: f64, grid: &GridSpec) -> Result<f64> {
    let target = filling_target(regime, n, len)?;
    if n == 1.0 {
        let f = solve_half_filling(regime, p, len, grid)?.filling();
        if (f - target).abs() > 1e-8 {
            return Err(Error::UnreachableFilling { target, lambda_max: grid.lambda_max });
        }
        return Ok(0.0);
    }
    let excess = |q0: f64| -> Result<f64> { Ok(solve_density(regime, p, q0, len, grid)?.filling() - target) };
    if excess(0.0)? <= FILLING_TOLERANCE {
        return Ok(0.0);
    }
    let mut hi = grid.lambda_max * (1.0 - 1e-9);
    if excess(hi)? > 0.0 {
        return Err(Error::UnreachableFilling { target, lambda_max: grid.lambda_max });
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = excess(mid)?;
        if f.abs() <= FILLING_TOLERANCE || hi - lo < 1e-14 {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: 200, residual: excess(0.5 * (lo + hi))?.abs() })
}
