use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};
use tjchain::algebra::{build_hamiltonian, ground_energy as ed_ground_energy, verify_chain};
use tjchain::bethe::{energy_reduced, find_certified_ground_state, reduced_ground_state, SearchOptions};
use tjchain::continuum::{
    density_at_filling, energy_vs_filling, ground_energy, surface_energy, surface_vs_parameter, GridSpec, SurfaceAxis,
};
use tjchain::scaling::{delta_e_series, fit_power_law, read_points_csv, EnergySource};
use tjchain::{map_boundary_params, BoundaryParams, Regime};

use crate::config::Settings;
use crate::failure::Failure;
use crate::output::{emit, fmt12, Payload};
use crate::Command;

/// Largest residual accepted by `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

fn params(s: &Settings) -> Result<BoundaryParams, Failure> {
    Ok(BoundaryParams::new(
        s.value("xi", 1.9)?,
        s.value("theta", PI / 3.0)?,
        s.value("phi", 0.0)?,
        s.value("xi-prime", 0.5)?,
        s.value("theta-prime", 0.0)?,
        s.value("phi-prime", 0.0)?,
    )?)
}

/// Regime from the settings, checked against `p`, or derived from it.
fn regime(s: &Settings, p: &BoundaryParams) -> Result<Regime, Failure> {
    match s.optional::<Regime>("regime")? {
        Some(r) => {
            r.check(p)?;
            Ok(r)
        }
        None => {
            let r = p.regime();
            s.note("regime", r);
            Ok(r)
        }
    }
}

fn grid(s: &Settings) -> Result<GridSpec, Failure> {
    let d = GridSpec::default();
    Ok(GridSpec { lambda_max: s.value("lambda-max", d.lambda_max)?, panel_width: s.value("panel-width", d.panel_width)?, ..d })
}

fn sites(s: &Settings, default: usize) -> Result<usize, Failure> {
    let l: usize = s.value("L", default)?;
    if l < 2 {
        return Err(Failure::validation(format!("L must be at least 2, got {l}")));
    }
    Ok(l)
}

/// `L` as a real number; `inf` selects the thermodynamic limit.
fn continuum_len(s: &Settings) -> Result<f64, Failure> {
    let l: f64 = s.value("L", f64::INFINITY)?;
    if !(l > 0.0) {
        return Err(Failure::validation(format!("L must be positive, got {l}")));
    }
    Ok(l)
}

fn filling(s: &Settings) -> Result<f64, Failure> {
    let n: f64 = s.value("n", 1.0)?;
    if !(n > 0.0 && n <= 1.0) {
        return Err(Failure::validation(format!("n must lie in (0, 1], got {n}")));
    }
    Ok(n)
}

fn json_of<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::io(e.to_string()))
}

fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|z| json!([z.re, z.im])).collect())
}

fn is_json(s: &Settings, default: &str) -> Result<bool, Failure> {
    match s.value("format", default.to_string())?.as_str() {
        "json" => Ok(true),
        "csv" => Ok(false),
        other => Err(Failure::validation(format!("format must be csv or json, got {other:?}"))),
    }
}

fn curve(columns: &[&str], rows: &[(f64, f64)]) -> Payload {
    Payload::Csv {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows: rows.iter().map(|&(x, y)| vec![fmt12(x), fmt12(y)]).collect(),
        notes: Vec::new(),
    }
}

/// Evenly spaced points on `[from, to]`.
fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(Failure::validation(format!("points must be at least 2, got {points}")));
    }
    Ok((0..points).map(|k| from + (to - from) * k as f64 / (points - 1) as f64).collect())
}

pub fn dispatch(command: Command, s: &Settings) -> Result<(), Failure> {
    match command {
        Command::Verify => verify(s),
        Command::Ed => ed(s),
        Command::Bae => bae(s),
        Command::DeltaE => delta_e(s, "delta-e"),
        Command::Fit => fit(s),
        Command::Density => density(s),
        Command::GroundEnergy => energy(s),
        Command::SurfaceEnergy => surface(s),
        Command::Sweep => sweep(s),
    }
}

fn verify(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let report = verify_chain(sites(s, 3)?, &p, s.value("trials", 100)?, s.value("seed", 7)?)?;
    let max = report.max();
    let mut v = json_of(&report)?;
    v["max_residual"] = json!(max);
    v["tolerance"] = json!(VERIFY_TOLERANCE);
    emit("verify", s, Payload::Json(v))?;
    if max <= VERIFY_TOLERANCE {
        Ok(())
    } else {
        Err(Failure::convergence(format!("largest residual {max:.3e} exceeds {VERIFY_TOLERANCE:e}")))
    }
}

fn ed(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let len = sites(s, 4)?;
    let n: usize = s.value("N", len)?;
    let e = ed_ground_energy(&build_hamiltonian(len, &map_boundary_params(&p)?)?, Some(n))?;
    emit("ed", s, Payload::Json(json!({ "L": len, "N": n, "energy": e })))
}

fn bae(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let len = sites(s, 2)?;
    let n: usize = s.value("N", len)?;
    let v = match s.value("equations", "inhomogeneous".to_string())?.as_str() {
        "inhomogeneous" => {
            let opts = SearchOptions { seed: s.value("seed", SearchOptions::default().seed)?, ..Default::default() };
            let c = find_certified_ground_state(len, n, &p, &opts)?;
            json!({
                "L": len, "N": n, "energy": c.energy, "ed_energy": c.ed_energy,
                "spectrum_mismatch": c.spectrum_mismatch, "state_mismatch": c.state_mismatch,
                "v": complex_list(&c.roots.v), "lambda": complex_list(&c.roots.lambda),
            })
        }
        "reduced" => {
            let r = reduced_ground_state(len, n, None, &p)?;
            json!({
                "L": len, "N": n, "energy_hom": energy_reduced(&r)?,
                "mu": complex_list(&r.v), "lambda": complex_list(&r.lambda),
            })
        }
        other => return Err(Failure::validation(format!("equations must be inhomogeneous or reduced, got {other:?}"))),
    };
    emit("bae", s, Payload::Json(v))
}

fn energy_source(s: &Settings) -> Result<EnergySource, Failure> {
    Ok(s.value("solver", "ed".to_string())?.parse()?)
}

fn delta_e(s: &Settings, command: &str) -> Result<(), Failure> {
    let p = params(s)?;
    let sizes: Vec<usize> = s.list("sizes", &[4, 6, 8, 10])?;
    let points = delta_e_series(&sizes, &p, energy_source(s)?)?;
    let mut notes = Vec::new();
    if points.len() >= 3 {
        let pairs: Vec<(f64, f64)> = points.iter().map(|q| (q.len as f64, q.delta_e)).collect();
        if let Ok(f) = fit_power_law(&pairs) {
            notes.push(format!("fit gamma = {} beta = {} r_squared = {}", fmt12(f.gamma), fmt12(f.beta), fmt12(f.r_squared)));
        }
    }
    let rows = points
        .iter()
        .map(|q| vec![q.len.to_string(), fmt12(q.delta_e), fmt12(q.energy), fmt12(q.energy_hom)])
        .collect();
    let columns = ["L", "delta_e", "E", "E_hom"].iter().map(|c| c.to_string()).collect();
    emit(command, s, Payload::Csv { columns, rows, notes })
}

fn fit(s: &Settings) -> Result<(), Failure> {
    let path: String = s.required("input")?;
    let file = std::fs::File::open(&path).map_err(|e| Failure::io(format!("{path}: {e}")))?;
    let points = read_points_csv(file)?;
    let f = fit_power_law(&points.iter().map(|&(l, d)| (l as f64, d)).collect::<Vec<_>>())?;
    if is_json(s, "csv")? {
        emit("fit", s, Payload::Json(json_of(&f)?))
    } else {
        let row = vec![fmt12(f.gamma), fmt12(f.beta), fmt12(f.r_squared)];
        let columns = ["gamma", "beta", "r_squared"].iter().map(|c| c.to_string()).collect();
        emit("fit", s, Payload::Csv { columns, rows: vec![row], notes: Vec::new() })
    }
}

fn density(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let r = regime(s, &p)?;
    let g = grid(s)?;
    let d = density_at_filling(r, &p, filling(s)?, continuum_len(s)?, &g)?;
    if is_json(s, "csv")? {
        let core: Vec<usize> = (0..d.grid.len()).filter(|&k| d.grid[k] <= d.lambda_max).collect();
        let v = json!({
            "regime": r.to_string(), "q0": d.q0, "filling": d.filling(), "hole_weight": d.hole_weight,
            "lambda": core.iter().map(|&k| d.grid[k]).collect::<Vec<_>>(),
            "rho": core.iter().map(|&k| d.rho[k]).collect::<Vec<_>>(),
        });
        emit("density", s, Payload::Json(v))
    } else {
        let rows: Vec<(f64, f64)> =
            d.grid.iter().zip(&d.rho).filter(|(x, _)| **x <= d.lambda_max).map(|(&x, &r)| (x, r)).collect();
        let mut payload = curve(&["lambda", "rho"], &rows);
        if let Payload::Csv { notes, .. } = &mut payload {
            notes.push(format!("q0 = {} filling = {} hole_weight = {}", fmt12(d.q0), fmt12(d.filling()), fmt12(d.hole_weight)));
        }
        emit("density", s, payload)
    }
}

fn energy(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let r = regime(s, &p)?;
    let report = ground_energy(r, &p, filling(s)?, continuum_len(s)?, &grid(s)?)?;
    let mut v = json_of(&report)?;
    if report.len.is_infinite() {
        v["len"] = json!("inf");
    }
    emit("ground-energy", s, Payload::Json(v))
}

fn surface(s: &Settings) -> Result<(), Failure> {
    let p = params(s)?;
    let r = regime(s, &p)?;
    emit("surface-energy", s, Payload::Json(json!(surface_energy(r, &p)?)))
}

/// Default sweep range of `ξ` or `ξ′` inside `regime`.
fn default_range(regime: Regime, axis: SurfaceAxis) -> (f64, f64) {
    match (axis, regime) {
        (SurfaceAxis::Xi, Regime::I | Regime::II) => (0.05, 3.0),
        (SurfaceAxis::Xi, _) => (-3.0, -0.05),
        (SurfaceAxis::XiPrime, Regime::I | Regime::III) => (-2.0, 0.95),
        (SurfaceAxis::XiPrime, _) => (1.05, 3.0),
    }
}

fn sweep(s: &Settings) -> Result<(), Failure> {
    let kind: String = s.value("curve", "E-vs-n".to_string())?;
    match kind.as_str() {
        "E-vs-n" => {
            let p = params(s)?;
            let r = regime(s, &p)?;
            let points: usize = s.value("points", 20)?;
            let ns = linspace(s.value("from", 0.05)?, s.value("to", 1.0)?, points)?;
            if ns.iter().any(|&n| !(n > 0.0 && n <= 1.0)) {
                return Err(Failure::validation("fillings must lie in (0, 1]"));
            }
            let rows = energy_vs_filling(r, &p, continuum_len(s)?, &ns, &grid(s)?)?;
            emit("sweep", s, curve(&["n", "E_over_L"], &rows))
        }
        "E_b-vs-xi" | "E_b-vs-xi-prime" => {
            let axis = if kind == "E_b-vs-xi" { SurfaceAxis::Xi } else { SurfaceAxis::XiPrime };
            let base = BoundaryParams {
                xi: s.value("xi", 1.9)?,
                theta: s.value("theta", PI / 3.0)?,
                phi: s.value("phi", 0.0)?,
                xi_prime: s.value("xi-prime", 0.5)?,
                theta_prime: s.value("theta-prime", 0.0)?,
                phi_prime: s.value("phi-prime", 0.0)?,
            };
            let r = match s.optional::<Regime>("regime")? {
                Some(r) => r,
                None => {
                    let r = base.regime();
                    s.note("regime", r);
                    r
                }
            };
            let (lo, hi) = default_range(r, axis);
            let xs = linspace(s.value("from", lo)?, s.value("to", hi)?, s.value("points", 20)?)?;
            let rows = surface_vs_parameter(r, &base, axis, &xs)?;
            emit("sweep", s, curve(&[axis.column(), "E_b"], &rows))
        }
        "delta-e-vs-L" => delta_e(s, "sweep"),
        other => Err(Failure::validation(format!(
            "unknown curve {other:?} (expected E-vs-n, E_b-vs-xi, E_b-vs-xi-prime or delta-e-vs-L)"
        ))),
    }
}
