//! Singular values of hypermatrices and the geometric measure of entanglement
//! of pure multipartite states.

pub mod charpoly;
pub mod error;
mod exact;
pub mod hyperdet;
pub mod oracle;
pub mod poly;
pub mod solver;
pub mod state_file;
pub mod tensor;
pub mod three_qubit;

pub use error::{Error, Result};
pub use solver::{critical_spectrum, gme_estimate, hopm_solve, CriticalPoint, SolverConfig};
pub use tensor::{overlap, partial_contract, residual, Hypermatrix, ProductTuple, UnitVector};
