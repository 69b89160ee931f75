// SPDX-License-Identifier: Apache-2.0

//! Driven-dissipative qubit: Hamiltonian, master equation, Liouvillian,
//! spectrum and steady state.

mod generator;
mod liouvillian;
mod matrix;
mod spectrum;
mod state;
mod steady;

pub use generator::{build_hamiltonian, lindblad_rhs, lindblad_rhs_mat, lowering};
pub use liouvillian::{build_liouvillian, Liouvillian};
pub use matrix::{ComplexMat2, C64};
pub use spectrum::{
    analytic_resonant_spectrum, effective_decay_rate, eigenvalues, lep_gamma, liouvillian_spectrum,
    sort_eigenvalues, xi, Phase, SpectrumResult, LEP_REL_TOL,
};
pub use state::{DensityMatrix, DriveParams, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL};
pub use steady::steady_state;

#[derive(Debug, thiserror::Error)]
pub enum LindbladError {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid drive parameters: {0}")]
    InvalidParams(String),
    #[error("eigensolver did not converge for matrix {matrix:?}")]
    EigenNonConvergence { matrix: Box<[[C64; 4]; 4]> },
    #[error("steady state not unique (gamma must be > 0)")]
    SteadyStateNotUnique,
    #[error("domain error: {0}")]
    Domain(String),
}
