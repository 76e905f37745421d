use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::density::{find_q0, inverse_double_length, solve_density, solve_half_filling, DensityProfile, GridSpec};
use super::kernel::kernel_a;
use super::quadrature::{w_rule, W_MAX};
use super::series::alternating_beta;
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, Regime};

/// Ground-state energy with its printed components.
///
/// For a finite chain the extensive fields are totals; for `len = ∞` they are per site
/// (boundary constants, hole and surface terms vanish there).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub regime: Regime,
    pub n: f64,
    pub len: f64,
    pub q0: f64,
    pub total: f64,
    pub per_site: f64,
    /// Density part: `−2N + 2πL∫a₂ρ`, or `−2L∫ρ[2 − 1/(1+λ²)]` in regime (i).
    pub bulk: f64,
    /// Constants `1/(ξ′−ξ′²)` and/or `1/(ξ−ξ²)` of the boundary strings.
    pub boundary_string: f64,
    /// `1/(μ_{N−1}² + 1/4)` with `μ_{N−1} = ∞`.
    pub hole: f64,
    /// `total − L·e_∞(n)`.
    pub surface: f64,
}

/// Energy constants of the boundary strings present in `regime`.
pub fn boundary_string_energy(regime: Regime, p: &BoundaryParams) -> f64 {
    let xi = 1.0 / (p.xi - p.xi * p.xi);
    let xp = 1.0 / (p.xi_prime - p.xi_prime * p.xi_prime);
    match regime {
        Regime::I => 0.0,
        Regime::II => xp,
        Regime::III => xi,
        Regime::IV => xi + xp,
    }
}

/// Density part of the energy per unit `L` (`L = 1` for an infinite chain).
fn density_energy(profile: &DensityProfile, n: f64) -> f64 {
    match profile.regime {
        Regime::I => -2.0 * profile.moment(|x| 2.0 - 1.0 / (1.0 + x * x)),
        _ => -2.0 * n + 2.0 * PI * profile.moment(|x| kernel_a(2.0, x)),
    }
}

/// Density at filling `n`: half filling uses `Q₀ = 0` with the hole term.
pub fn density_at_filling(regime: Regime, p: &BoundaryParams, n: f64, len: f64, grid: &GridSpec) -> Result<DensityProfile> {
    if n == 1.0 {
        find_q0(regime, p, n, len, grid)?;
        solve_half_filling(regime, p, len, grid)
    } else {
        let q0 = find_q0(regime, p, n, len, grid)?;
        solve_density(regime, p, q0, len, grid)
    }
}

/// Ground-state energy per site of the infinite chain at filling `n`.
pub fn bulk_energy_per_site(regime: Regime, p: &BoundaryParams, n: f64, grid: &GridSpec) -> Result<f64> {
    Ok(density_energy(&density_at_filling(regime, p, n, f64::INFINITY, grid)?, n))
}

/// Ground-state energy at filling `n` for a chain of `len` sites (`f64::INFINITY` allowed).
pub fn ground_energy(regime: Regime, p: &BoundaryParams, n: f64, len: f64, grid: &GridSpec) -> Result<EnergyReport> {
    let profile = density_at_filling(regime, p, n, len, grid)?;
    let per_unit = density_energy(&profile, n);
    if len.is_infinite() {
        return Ok(EnergyReport {
            regime,
            n,
            len,
            q0: profile.q0,
            total: per_unit,
            per_site: per_unit,
            bulk: per_unit,
            boundary_string: 0.0,
            hole: 0.0,
            surface: 0.0,
        });
    }
    let bulk = len * per_unit;
    let boundary_string = boundary_string_energy(regime, p);
    let hole = 0.0;
    let total = bulk + boundary_string + hole;
    let surface = total - len * bulk_energy_per_site(regime, p, n, grid)?;
    Ok(EnergyReport { regime, n, len, q0: profile.q0, total, per_site: total / len, bulk, boundary_string, hole, surface })
}

/// Smallest decay rate for which `e^{−c W_MAX}` stays below 1e−16.
const MIN_DECAY: f64 = 36.9 / W_MAX;

fn decaying(rates: &[f64]) -> Result<()> {
    let slowest = rates.iter().copied().fold(f64::INFINITY, f64::min);
    if !(slowest >= MIN_DECAY) {
        return Err(Error::InvalidInput(format!(
            "surface-energy integrand decays as e^(-{slowest}|w|), too slowly for the cutoff {W_MAX}"
        )));
    }
    Ok(())
}

/// Surface energy at half filling from the printed `w`-integrals (even integrands, folded to the
/// half-line) plus the boundary-string constants.
pub fn surface_energy(regime: Regime, p: &BoundaryParams) -> Result<f64> {
    regime.check(p)?;
    let (xi, xp) = (p.xi, p.xi_prime);
    let e = |c: f64, w: f64| (-c * w).exp();
    let rule = w_rule();
    let integral = match regime {
        Regime::I => {
            decaying(&[1.5, 1.0 + xi, 2.0 - xp, 1.0])?;
            -rule.integrate(|w| e(1.0, w) / (1.0 + e(1.0, w)) * (e(0.5, w) - e(xi, w) - e(1.0 - xp, w) + 1.0))
        }
        Regime::II => {
            decaying(&[1.5, 1.0 + xi, 1.0 + xp, 1.0])?;
            -rule.integrate(|w| e(1.0, w) * (e(0.5, w) - e(xi, w) + e(xp, w) + 1.0) / (1.0 + e(1.0, w)))
        }
        Regime::III => {
            decaying(&[2.0 - xp, 1.5, 2.0 - xi, 1.0])?;
            rule.integrate(|w| (e(2.0 - xp, w) - e(1.5, w) - e(2.0 - xi, w) - e(1.0, w)) / (1.0 + e(1.0, w)))
        }
        Regime::IV => {
            decaying(&[1.5, 2.0 - xi, 1.0 + xp, 1.0])?;
            -rule.integrate(|w| e(1.0, w) * (e(0.5, w) + e(1.0 - xi, w) + e(xp, w) + 1.0) / (1.0 + e(1.0, w)))
        }
    };
    Ok(integral + boundary_string_energy(regime, p))
}

/// The same surface energy from alternating series, `∫_0^∞ e^{−aw}/(1+e^{−w}) dw = β(a)`.
pub fn surface_energy_series(regime: Regime, p: &BoundaryParams) -> Result<f64> {
    regime.check(p)?;
    let (xi, xp) = (p.xi, p.xi_prime);
    let b = alternating_beta;
    let series = match regime {
        Regime::I => -(b(1.5)? - b(1.0 + xi)? - b(2.0 - xp)? + b(1.0)?),
        Regime::II => -(b(1.5)? - b(1.0 + xi)? + b(1.0 + xp)? + b(1.0)?),
        Regime::III => b(2.0 - xp)? - b(1.5)? - b(2.0 - xi)? - b(1.0)?,
        Regime::IV => -(b(1.5)? + b(2.0 - xi)? + b(1.0 + xp)? + b(1.0)?),
    };
    Ok(series + boundary_string_energy(regime, p))
}

/// Fourier transform of the half-filling density, including the `δ(λ)` hole term.
///
/// In regime (ii) the hole enters with the same sign as in the other regimes, which is the
/// sign implied by the surface energy.
pub fn halffilling_density_fourier(regime: Regime, p: &BoundaryParams, w: f64, len: f64) -> Result<f64> {
    regime.check(p)?;
    let inv = inverse_double_length(len)?;
    let (xi, xp) = (p.xi, p.xi_prime);
    let w = w.abs();
    let e = |c: f64| (-c * w).exp();
    let bracket = match regime {
        Regime::I => e(0.5) - e(1.0 - xp) - e(xi) + 1.0,
        Regime::II => e(0.5) - e(xi) + e(xp) + 1.0,
        Regime::III => e(0.5) - e(1.0 - xp) + e(1.0 - xi) + 1.0,
        Regime::IV => e(0.5) + e(1.0 - xi) + e(xp) + 1.0,
    };
    Ok((e(1.0) - inv * bracket) / (1.0 + e(1.0)))
}

/// Regular part of the half-filling density at `λ` (the `δ(λ)` atom removed), by inverse
/// cosine transform of [`halffilling_density_fourier`].
pub fn halffilling_density_regular(regime: Regime, p: &BoundaryParams, lambda: f64, len: f64) -> Result<f64> {
    let inv = inverse_double_length(len)?;
    let rule = w_rule();
    let mut acc = 0.0;
    for (&w, &wt) in rule.nodes.iter().zip(&rule.weights) {
        acc += wt * (halffilling_density_fourier(regime, p, w, len)? + inv) * (w * lambda).cos();
    }
    Ok(acc / PI)
}
