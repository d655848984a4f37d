//! Teleportation between a conformal and an inertial observer in de Sitter
//! space, simulated in a truncated bosonic Fock space.
//!
//! * [`fock`]: sparse multi-mode states, density operators, partial traces.
//! * [`vacua`]: (H, k, α) → squeezing, α-vacuum and one-particle expansions.
//! * [`freemode`]: dual-rail teleportation with free modes.
//! * [`cavity`]: cavity mode functions, atom-mediated channel, scheme with cavities.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration of complex integrands.

pub mod cavity;
pub mod error;
pub mod fock;
pub mod freemode;
pub mod quadrature;
pub mod qubit;
pub mod vacua;

pub use error::{Error, Result};
pub use fock::{
    fidelity_pure_mixed, partial_trace, tensor_product, DensityOperator, OccupationState, Region,
    Register, StateVector,
};
pub use qubit::{bloch_samples, BellOutcome, LogicalQubit};
pub use vacua::{Alpha, DeSitterParams, SqueezingParams, Truncation};

pub use num_complex::Complex64;
