// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Matrix2, Matrix4, Vector4};

use super::generator::{build_hamiltonian, lowering};
use super::matrix::{ComplexMat2, C64, I};
use super::state::{DensityMatrix, DriveParams};

/// Superoperator on column-stacked density matrices, vec(ρ) = [ρ₁₁, ρ₂₁, ρ₁₂, ρ₂₂].
#[derive(Clone, Debug, PartialEq)]
pub struct Liouvillian {
    pub mat: Matrix4<C64>,
}

fn to_na(m: &ComplexMat2) -> Matrix2<C64> {
    Matrix2::new(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1))
}

/// With column stacking, vec(AXB) = (Bᵀ ⊗ A)·vec(X).
pub fn build_liouvillian(p: &DriveParams) -> Liouvillian {
    let h = to_na(&build_hamiltonian(p.delta, p.omega, p.phi));
    let lower = to_na(&lowering());
    let number = lower.adjoint() * lower;
    let id = Matrix2::<C64>::identity();

    let coherent = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-I);
    let jump = lower.conjugate().kronecker(&lower);
    let anti = id.kronecker(&number) + number.transpose().kronecker(&id);
    let dissipator = (jump - anti * C64::new(0.5, 0.0)) * C64::new(p.gamma, 0.0);

    Liouvillian {
        mat: coherent + dissipator,
    }
}

impl Liouvillian {
    pub fn apply(&self, rho: &ComplexMat2) -> ComplexMat2 {
        let v = Vector4::from(rho.vec());
        let out = self.mat * v;
        ComplexMat2::unvec(&[out[0], out[1], out[2], out[3]])
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> ComplexMat2 {
        self.apply(rho.mat())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn entries(&self) -> [[C64; 4]; 4] {
        let mut out = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.mat[(i, j)];
            }
        }
        out
    }
}
