use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::GridSpec;
use super::energy::{ground_energy, surface_energy};
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, Regime};

/// `(n, E/L)` at each filling, evaluated in parallel.
pub fn energy_vs_filling(
    regime: Regime,
    p: &BoundaryParams,
    len: f64,
    fillings: &[f64],
    grid: &GridSpec,
) -> Result<Vec<(f64, f64)>> {
    fillings.par_iter().map(|&n| Ok((n, ground_energy(regime, p, n, len, grid)?.per_site))).collect()
}

/// Boundary parameter varied along a surface-energy curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceAxis {
    Xi,
    XiPrime,
}

impl SurfaceAxis {
    pub fn column(self) -> &'static str {
        match self {
            SurfaceAxis::Xi => "xi",
            SurfaceAxis::XiPrime => "xi_prime",
        }
    }
}

impl FromStr for SurfaceAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xi" => Ok(SurfaceAxis::Xi),
            "xi-prime" | "xi_prime" => Ok(SurfaceAxis::XiPrime),
            other => Err(Error::InvalidInput(format!("unknown axis {other:?} (expected xi or xi-prime)"))),
        }
    }
}

/// `(x, E_b)` with `ξ` or `ξ′` of `p` replaced by each `x`, evaluated in parallel.
pub fn surface_vs_parameter(
    regime: Regime,
    p: &BoundaryParams,
    axis: SurfaceAxis,
    values: &[f64],
) -> Result<Vec<(f64, f64)>> {
    values
        .par_iter()
        .map(|&x| {
            let q = match axis {
                SurfaceAxis::Xi => BoundaryParams { xi: x, ..*p },
                SurfaceAxis::XiPrime => BoundaryParams { xi_prime: x, ..*p },
            };
            q.validate()?;
            Ok((x, surface_energy(regime, &q)?))
        })
        .collect()
}

/// Two-column CSV with header, values to 12 significant digits.
pub fn write_curve_csv<W: Write>(columns: [&str; 2], rows: &[(f64, f64)], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(columns).map_err(err)?;
    for &(x, y) in rows {
        w.write_record([format!("{x:.11e}"), format!("{y:.11e}")]).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}
