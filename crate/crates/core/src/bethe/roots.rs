use std::fmt::Write as _;
use std::io::BufRead;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Regime;

/// How the roots are stored: raw (`ṽ`, `λ̃`) or shifted (`μ = −i(ṽ + ½)`, `λ = −i λ̃`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Raw,
    Shifted,
}

/// Newton diagnostics attached to a solved configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub iterations: usize,
    pub residual: f64,
}

/// A set of Bethe roots. `v` holds the charge roots (`ṽ` or `μ`), `lambda` the spin roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootConfiguration {
    pub v: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
    pub regime: Option<Regime>,
    pub len: usize,
    pub representation: Representation,
    pub convergence: Option<Convergence>,
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);

impl RootConfiguration {
    pub fn new(v: Vec<Complex64>, lambda: Vec<Complex64>, len: usize, representation: Representation) -> Self {
        RootConfiguration { v, lambda, regime: None, len, representation, convergence: None }
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = Some(regime);
        self
    }

    /// Number of electrons.
    pub fn electrons(&self) -> usize {
        self.v.len()
    }

    /// Number of spin roots.
    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn to_shifted(&self) -> Self {
        match self.representation {
            Representation::Shifted => self.clone(),
            Representation::Raw => RootConfiguration {
                v: self.v.iter().map(|&x| -I * (x + HALF)).collect(),
                lambda: self.lambda.iter().map(|&x| -I * x).collect(),
                representation: Representation::Shifted,
                ..self.clone()
            },
        }
    }

    pub fn to_raw(&self) -> Self {
        match self.representation {
            Representation::Raw => self.clone(),
            Representation::Shifted => RootConfiguration {
                v: self.v.iter().map(|&x| I * x - HALF).collect(),
                lambda: self.lambda.iter().map(|&x| I * x).collect(),
                representation: Representation::Raw,
                ..self.clone()
            },
        }
    }

    /// Smallest distance from any root to a singular point of its equation family
    /// (coinciding roots, `μ = 0`, `λ = 0`), in the shifted picture.
    pub fn pole_clearance(&self) -> f64 {
        let s = self.to_shifted();
        let mut d = f64::INFINITY;
        for (k, a) in s.v.iter().enumerate() {
            d = d.min(a.norm());
            for b in &s.v[k + 1..] {
                d = d.min((a - b).norm()).min((a + b).norm());
            }
        }
        for (k, a) in s.lambda.iter().enumerate() {
            d = d.min(a.norm());
            for b in &s.lambda[k + 1..] {
                d = d.min((a - b).norm()).min((a + b).norm());
            }
        }
        d
    }

    /// Line-oriented text form: a header then one `v`/`l` line per root.
    pub fn to_text(&self) -> String {
        let regime = self.regime.map_or("none", |r| r.label());
        let repr = match self.representation {
            Representation::Raw => "raw",
            Representation::Shifted => "shifted",
        };
        let mut s = format!(
            "# regime={regime} L={} N={} M={} repr={repr}\n",
            self.len,
            self.electrons(),
            self.m()
        );
        for z in &self.v {
            let _ = writeln!(s, "v {:.12e} {:.12e}", z.re, z.im);
        }
        for z in &self.lambda {
            let _ = writeln!(s, "l {:.12e} {:.12e}", z.re, z.im);
        }
        s
    }

    pub fn from_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty root file".into()))??;
        let body = header
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
        let mut regime = None;
        let mut len = None;
        let mut n = None;
        let mut m = None;
        let mut representation = Representation::Raw;
        for kv in body.split_whitespace() {
            let (k, val) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field '{kv}'")))?;
            let int = || val.parse::<usize>().map_err(|e| Error::Parse(format!("{k}: {e}")));
            match k {
                "regime" => regime = if val == "none" { None } else { Some(val.parse::<Regime>()?) },
                "L" => len = Some(int()?),
                "N" => n = Some(int()?),
                "M" => m = Some(int()?),
                "repr" => {
                    representation = match val {
                        "raw" => Representation::Raw,
                        "shifted" => Representation::Shifted,
                        other => return Err(Error::Parse(format!("unknown representation '{other}'"))),
                    }
                }
                other => return Err(Error::Parse(format!("unknown header key '{other}'"))),
            }
        }
        let len = len.ok_or_else(|| Error::Parse("missing L".into()))?;
        let mut v = Vec::new();
        let mut lambda = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad root line '{line}'")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")));
            let z = Complex64::new(num(parts[1])?, num(parts[2])?);
            match parts[0] {
                "v" => v.push(z),
                "l" => lambda.push(z),
                other => return Err(Error::Parse(format!("unknown root tag '{other}'"))),
            }
        }
        if n.is_some_and(|n| n != v.len()) || m.is_some_and(|m| m != lambda.len()) {
            return Err(Error::Parse("root counts disagree with header".into()));
        }
        Ok(RootConfiguration { v, lambda, regime, len, representation, convergence: None })
    }
}

/// Quantum numbers of the positive string centers in the logarithmic equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub values: Vec<i64>,
    pub max: i64,
}

impl QuantumNumbers {
    pub fn new(values: Vec<i64>, max: i64) -> Result<Self> {
        let q = QuantumNumbers { values, max };
        q.validate()?;
        Ok(q)
    }

    /// The ground-state choice: the `m` largest admissible values `I_max − m + 1, …, I_max`
    /// with `I_max = len − m`.
    pub fn ground_state(len: usize, m: usize) -> Result<Self> {
        if m == 0 || m > len {
            return Err(Error::InvalidInput(format!("need 0 < M <= L, got M = {m}, L = {len}")));
        }
        let max = (len - m) as i64;
        QuantumNumbers::new((max - m as i64 + 1..=max).collect(), max)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for &i in &self.values {
            if i == 0 {
                return Err(Error::InvalidInput("quantum number 0 is excluded".into()));
            }
            if i.abs() > self.max {
                return Err(Error::InvalidInput(format!("|I| = {} exceeds I_max = {}", i.abs(), self.max)));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidInput(format!("repeated quantum number {i}")));
            }
        }
        Ok(())
    }
}
