//! Graded algebra of the open supersymmetric t-J chain: R- and K-matrices,
//! integrability checks, the transfer matrix, the Hamiltonian and the
//! exact-diagonalization oracle.

pub mod graded;
pub mod hamiltonian;
pub mod integrability;
pub mod matrices;
pub mod spectrum;
pub mod transfer;

pub use graded::GradedOperator;
pub use hamiltonian::{build_hamiltonian, Hamiltonian, SectorBasis, SparseMatrix};
pub use integrability::{verify_chain, verify_integrability, ChainReport, IntegrityReport};
pub use matrices::{k_minus, k_plus, r_matrix};
pub use spectrum::{exact_spectrum, ground_energy};
pub use transfer::{build_transfer_matrix, hamiltonian_from_transfer, TransferBuilder};
