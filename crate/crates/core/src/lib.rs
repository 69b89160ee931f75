// SPDX-License-Identifier: Apache-2.0

//! Simulation of a four-stroke quantum heat engine built on a driven,
//! decaying qubit whose Liouvillian has an exceptional point at Δ = 0, γ = 4Ω.
//!
//! Frequencies are angular (rad/s) and rates are in 1/s throughout the
//! library; energies carry ħ = 1 and are therefore also in rad/s. Unit
//! conversion from the kHz-based configuration happens in [`config`].

// `!(x > 0.0)` is deliberate: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod cycle;
pub mod lindblad;
pub mod report;
pub mod sweep;

pub use lindblad::{
    build_hamiltonian, build_liouvillian, lindblad_rhs, liouvillian_spectrum, steady_state,
    ComplexMat2, DensityMatrix, DriveParams, LindbladError, Liouvillian, Phase, SpectrumResult,
};
