//! Bethe-ansatz side of the chain: the inhomogeneous T-Q relation and its Bethe
//! equations, the reduced (homogeneous) equations, and their energies.
//!
//! Raw roots `(ṽ, λ̃)` enter the T-Q relation; the shifted roots
//! `μ = −i(ṽ + ½)`, `λ = −i λ̃` enter the reduced equations. All solvers iterate on
//! pole-cleared polynomial residuals.

pub mod certify;
pub mod inhom;
pub mod logbae;
pub mod newton;
pub mod poly;
pub mod reduced;
pub mod roots;
pub mod seeds;

pub use certify::{
    find_certified_ground_state, reduced_ground_state, refine_with_eigenvalue, roots_from_eigenvalue, Certificate,
    SearchOptions,
};
pub use inhom::{energy_inhom, eval_inhom_tq, inhom_bae_residual, solve_inhom_bae};
pub use logbae::{solve_log_bae_regime1, theta};
pub use newton::NewtonOptions;
pub use reduced::{delta_e, energy_reduced, reduced_bae_residual, solve_reduced_bae};
pub use roots::{QuantumNumbers, Representation, RootConfiguration};
pub use seeds::seed_roots;
