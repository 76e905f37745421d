//! Thermodynamic limit: root densities on `|λ| > Q₀`, ground-state energies at any filling
//! and surface energies at half filling in the four boundary regimes.

mod density;
mod energy;
mod kernel;
pub mod quadrature;
mod series;
mod sweep;

pub use density::{
    boundary_terms, filling_target, find_q0, solve_density, solve_half_filling, DensityProfile, GridSpec,
    FILLING_TOLERANCE, MAX_CONDITION,
};
pub use energy::{
    boundary_string_energy, bulk_energy_per_site, density_at_filling, ground_energy, halffilling_density_fourier,
    halffilling_density_regular, surface_energy, surface_energy_series, EnergyReport,
};
pub use kernel::{kernel_a, kernel_theta, KernelSpec};
pub use series::alternating_beta;
pub use sweep::{energy_vs_filling, surface_vs_parameter, write_curve_csv, SurfaceAxis};
