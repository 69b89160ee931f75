// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian and master-equation right-hand side for the driven, decaying qubit.

use super::matrix::{ComplexMat2, C64, I};
use super::state::{DensityMatrix, DriveParams};

/// H = Δ|2⟩⟨2| + Ω(|2⟩⟨1|e^{iφ} + |1⟩⟨2|e^{−iφ})/2, ħ = 1.
pub fn build_hamiltonian(delta: f64, omega: f64, phi: f64) -> ComplexMat2 {
    let coupling = C64::from_polar(0.5 * omega, phi);
    ComplexMat2::new([
        [C64::new(0.0, 0.0), coupling.conj()],
        [coupling, C64::new(delta, 0.0)],
    ])
}

/// σ⁻ = |1⟩⟨2|
pub fn lowering() -> ComplexMat2 {
    ComplexMat2::ket_bra(0, 1)
}

/// dρ/dt for a validated state.
pub fn lindblad_rhs(rho: &DensityMatrix, p: &DriveParams) -> ComplexMat2 {
    lindblad_rhs_mat(rho.mat(), p)
}

/// dρ/dt = −i[H, ρ] + (γ/2)(2σ⁻ρσ⁺ − σ⁺σ⁻ρ − ρσ⁺σ⁻), evaluated on an arbitrary
/// 2×2 matrix (the integrator calls this on intermediate stages).
pub fn lindblad_rhs_mat(rho: &ComplexMat2, p: &DriveParams) -> ComplexMat2 {
    let h = build_hamiltonian(p.delta, p.omega, p.phi);
    let coherent = h.commutator(rho) * (-I);
    if p.gamma == 0.0 {
        return coherent;
    }
    let lower = lowering();
    let raise = lower.dagger();
    let number = raise * lower;
    let jump = lower * *rho * raise;
    let dissipator = (jump * 2.0 - number.anticommutator(rho)) * (0.5 * p.gamma);
    coherent + dissipator
}
