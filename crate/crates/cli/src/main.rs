//! `tjchain`: command-line front end of the t-J chain laboratory.

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::Settings;
use failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Integrability identities, commuting transfer matrices and the Hamiltonian identity.
    Verify,
    /// Ground-state energy by exact diagonalization.
    Ed,
    /// Certified ground-state Bethe roots.
    Bae,
    /// Inhomogeneous-term contribution δ_e over several sizes.
    DeltaE,
    /// Power-law fit of `L,delta_e` data.
    Fit,
    /// Root density of the continuum equations.
    Density,
    /// Continuum ground-state energy with its components.
    GroundEnergy,
    /// Half-filling surface energy.
    SurfaceEnergy,
    /// Figure curves.
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "tjchain", version, about = "Bethe-ansatz laboratory for the open supersymmetric t-J chain")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    xi_prime: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    theta_prime: Option<String>,
    #[arg(long)]
    phi_prime: Option<String>,
    /// Boundary regime: i, ii, iii or iv (derived from ξ, ξ′ when absent).
    #[arg(long)]
    regime: Option<String>,
    /// Number of sites (`inf` for the continuum commands).
    #[arg(long = "L")]
    len: Option<String>,
    /// Number of electrons.
    #[arg(long = "N")]
    electrons: Option<String>,
    /// Filling factor in (0, 1].
    #[arg(long = "n")]
    filling: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated system sizes for δ_e.
    #[arg(long)]
    sizes: Option<String>,
    /// Source of E in δ_e: ed or bae.
    #[arg(long)]
    solver: Option<String>,
    /// Which Bethe equations `bae` solves: inhomogeneous or reduced.
    #[arg(long)]
    equations: Option<String>,
    /// Input CSV for `fit`.
    #[arg(long)]
    input: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long, short)]
    output: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Sweep curve: E-vs-n, E_b-vs-xi, E_b-vs-xi-prime or delta-e-vs-L.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    lambda_max: Option<String>,
    #[arg(long)]
    panel_width: Option<String>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Cli {
    fn flags(&self) -> Settings {
        let mut s = Settings::default();
        let pairs: [(&str, &Option<String>); 25] = [
            ("xi", &self.xi),
            ("xi-prime", &self.xi_prime),
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("theta-prime", &self.theta_prime),
            ("phi-prime", &self.phi_prime),
            ("regime", &self.regime),
            ("L", &self.len),
            ("N", &self.electrons),
            ("n", &self.filling),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("sizes", &self.sizes),
            ("solver", &self.solver),
            ("equations", &self.equations),
            ("input", &self.input),
            ("output", &self.output),
            ("format", &self.format),
            ("curve", &self.curve),
            ("points", &self.points),
            ("from", &self.from),
            ("to", &self.to),
            ("lambda-max", &self.lambda_max),
            ("panel-width", &self.panel_width),
            ("jobs", &self.jobs.map(|j| j.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v);
            }
        }
        s
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut settings = match &cli.config {
        Some(path) => Settings::read(path)?,
        None => Settings::default(),
    };
    // the environment overrides the config file but not the flag
    if let Ok(solver) = std::env::var("DELTA_E_SOLVER") {
        settings.set("solver", solver);
    }
    settings.overlay(cli.flags());
    if let Some(jobs) = settings.peek("jobs") {
        let jobs: usize = jobs.parse().map_err(|e| Failure::validation(format!("jobs = {jobs:?}: {e}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::validation(format!("jobs: {e}")))?;
    }
    commands::dispatch(cli.command, &settings)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tjchain: {f}");
            f.exit_code()
        }
    }
}
