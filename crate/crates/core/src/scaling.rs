//! Finite-size scaling of the inhomogeneous-term contribution `δ_e = γ L^β`.

use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_hamiltonian, ground_energy};
use crate::bethe::{delta_e, energy_reduced, find_certified_ground_state, reduced_ground_state, SearchOptions};
use crate::error::{Error, Result};
use crate::params::{map_boundary_params, BoundaryParams};

/// Result of a log-log least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub beta: f64,
    pub r_squared: f64,
    /// Standard error of the slope; zero for fewer than three points or exact data.
    pub beta_std_error: f64,
}

/// Ordinary least squares of `ln δ` against `ln L`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!("a power-law fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(l, d)) = points.iter().find(|&&(l, d)| !(l > 0.0) || !(d > 0.0)) {
        return Err(Error::InvalidInput(format!("sizes and values must be positive, got ({l}, {d})")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all sizes are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - beta * x).powi(2)).sum();
    // a constant series is fitted exactly by β = 0
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let beta_std_error = (sse / (n - 2.0) / sxx).sqrt();
    Ok(PowerLawFit { gamma: intercept.exp(), beta, r_squared, beta_std_error })
}

/// `δ_e` values at increasing system sizes with their fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub points: Vec<(usize, f64)>,
    pub fit: Option<PowerLawFit>,
}

impl ScalingSeries {
    /// Validates the points (sizes strictly increasing, values positive) and fits them
    /// when there are at least three.
    pub fn new(points: Vec<(usize, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("system sizes must be strictly increasing".into()));
        }
        if let Some(&(l, d)) = points.iter().find(|p| !(p.1 > 0.0)) {
            return Err(Error::InvalidInput(format!("delta_e must be positive, got {d} at L = {l}")));
        }
        let fit = if points.len() >= 3 {
            Some(fit_power_law(&points.iter().map(|&(l, d)| (l as f64, d)).collect::<Vec<_>>())?)
        } else {
            None
        };
        Ok(ScalingSeries { points, fit })
    }
}

/// Reads `L,delta_e` rows (with header).
pub fn read_points_csv<R: Read>(reader: R) -> Result<Vec<(usize, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        if row.len() < 2 {
            return Err(Error::Parse(format!("expected `L,delta_e`, got {row:?}")));
        }
        let l = usize::from_str(&row[0]).map_err(|e| Error::Parse(format!("L = {:?}: {e}", &row[0])))?;
        let d = f64::from_str(&row[1]).map_err(|e| Error::Parse(format!("delta_e = {:?}: {e}", &row[1])))?;
        out.push((l, d));
    }
    Ok(out)
}

/// Writes the fit as a `gamma,beta,r_squared` row with header.
pub fn write_fit_csv<W: Write>(fit: &PowerLawFit, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let cell = |x: f64| format!("{x:.11e}");
    w.write_record(["gamma", "beta", "r_squared"]).map_err(|e| Error::Parse(e.to_string()))?;
    w.write_record([cell(fit.gamma), cell(fit.beta), cell(fit.r_squared)]).map_err(|e| Error::Parse(e.to_string()))?;
    w.flush()?;
    Ok(())
}

/// Source of the full energy `E` in `δ_e = |E − E_hom|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergySource {
    /// Exact diagonalization of the Hamiltonian.
    Ed,
    /// Certified roots of the inhomogeneous Bethe equations (small L only).
    Bae,
}

impl FromStr for EnergySource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ed" => Ok(EnergySource::Ed),
            "bae" => Ok(EnergySource::Bae),
            other => Err(Error::InvalidInput(format!("unknown energy source {other:?} (expected ed or bae)"))),
        }
    }
}

/// One `δ_e` evaluation at half filling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEPoint {
    pub len: usize,
    pub energy: f64,
    pub energy_hom: f64,
    pub delta_e: f64,
}

/// `δ_e` at half filling: `E` from `source`, `E_hom` from the reduced ground-state roots.
pub fn delta_e_point(len: usize, p: &BoundaryParams, source: EnergySource) -> Result<DeltaEPoint> {
    let energy = match source {
        EnergySource::Ed => ground_energy(&build_hamiltonian(len, &map_boundary_params(p)?)?, Some(len))?,
        EnergySource::Bae => find_certified_ground_state(len, len, p, &SearchOptions::default())?.energy,
    };
    let energy_hom = energy_reduced(&reduced_ground_state(len, len, None, p)?)?;
    Ok(DeltaEPoint { len, energy, energy_hom, delta_e: delta_e(energy, energy_hom) })
}

/// [`delta_e_point`] over several sizes, evaluated in parallel.
pub fn delta_e_series(lens: &[usize], p: &BoundaryParams, source: EnergySource) -> Result<Vec<DeltaEPoint>> {
    lens.par_iter().map(|&l| delta_e_point(l, p, source)).collect()
}
