// SPDX-License-Identifier: Apache-2.0

use super::matrix::{ComplexMat2, C64};
use super::LindbladError;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Qubit density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat2,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMat2) -> Result<Self, LindbladError> {
        let rho = Self { mat };
        rho.check(HERMITICITY_TOL, TRACE_TOL, POSITIVITY_TOL)?;
        Ok(rho)
    }

    /// Wraps a matrix without validation. Callers own the invariants.
    pub(crate) fn new_unchecked(mat: ComplexMat2) -> Self {
        Self { mat }
    }

    /// |1⟩⟨1|
    pub fn ground() -> Self {
        Self::new_unchecked(ComplexMat2::ket_bra(0, 0))
    }

    /// |2⟩⟨2|
    pub fn excited() -> Self {
        Self::new_unchecked(ComplexMat2::ket_bra(1, 1))
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(ComplexMat2::identity() * 0.5)
    }

    pub fn mat(&self) -> &ComplexMat2 {
        &self.mat
    }

    /// Excited-state population ⟨2|ρ|2⟩.
    pub fn p2(&self) -> f64 {
        self.mat.get(1, 1).re
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.mat.hermitian_eigenvalues()[0]
    }

    pub(crate) fn check(
        &self,
        herm_tol: f64,
        trace_tol: f64,
        pos_tol: f64,
    ) -> Result<(), LindbladError> {
        if !self.mat.is_finite() {
            return Err(LindbladError::InvalidState("non-finite entries".into()));
        }
        let herm = self.mat.hermiticity_defect();
        if herm > herm_tol {
            return Err(LindbladError::InvalidState(format!(
                "hermiticity defect {herm:e} exceeds {herm_tol:e}"
            )));
        }
        let tr = self.mat.trace();
        if (tr - 1.0).norm() > trace_tol {
            return Err(LindbladError::InvalidState(format!(
                "trace {tr} deviates from 1 by more than {trace_tol:e}"
            )));
        }
        let min_ev = self.min_eigenvalue();
        if min_ev < -pos_tol {
            return Err(LindbladError::InvalidState(format!(
                "eigenvalue {min_ev:e} below -{pos_tol:e}"
            )));
        }
        Ok(())
    }
}

impl TryFrom<ComplexMat2> for DensityMatrix {
    type Error = LindbladError;
    fn try_from(mat: ComplexMat2) -> Result<Self, Self::Error> {
        Self::new(mat)
    }
}

/// Instantaneous control parameters: detuning and Rabi frequency in rad/s,
/// laser phase in radians, effective decay rate in 1/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    pub delta: f64,
    pub omega: f64,
    pub phi: f64,
    pub gamma: f64,
}

impl DriveParams {
    pub fn new(delta: f64, omega: f64, phi: f64, gamma: f64) -> Result<Self, LindbladError> {
        let p = Self {
            delta,
            omega,
            phi,
            gamma,
        };
        if ![delta, omega, phi, gamma].iter().all(|x| x.is_finite()) {
            return Err(LindbladError::InvalidParams(
                "non-finite drive parameter".into(),
            ));
        }
        if omega < 0.0 {
            return Err(LindbladError::InvalidParams(format!("omega = {omega} < 0")));
        }
        if gamma < 0.0 {
            return Err(LindbladError::InvalidParams(format!("gamma = {gamma} < 0")));
        }
        Ok(p)
    }

    /// Δ = 0, φ = 0.
    pub fn resonant(omega: f64, gamma: f64) -> Self {
        Self {
            delta: 0.0,
            omega,
            phi: 0.0,
            gamma,
        }
    }
}
