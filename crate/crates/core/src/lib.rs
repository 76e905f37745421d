//! Numerical laboratory for the open supersymmetric t-J chain with
//! unparallel boundary fields.
//!
//! * [`algebra`]: graded R/K matrices, transfer matrix, Hamiltonian, exact
//!   diagonalization.
//! * [`bethe`]: T-Q relation, inhomogeneous and reduced Bethe equations.
//! * [`scaling`]: power-law fits of the inhomogeneous-term contribution.
//! * [`continuum`]: thermodynamic-limit densities, ground-state and surface
//!   energies.

pub mod algebra;
pub mod bethe;
pub mod continuum;
pub mod error;
pub mod params;
pub mod scaling;

pub use error::{Error, Result};
pub use params::{map_boundary_params, BoundaryFields, BoundaryParams, Regime};
