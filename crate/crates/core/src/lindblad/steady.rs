// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Matrix4, Vector4};

use super::liouvillian::build_liouvillian;
use super::matrix::{ComplexMat2, C64};
use super::state::{DensityMatrix, DriveParams};
use super::LindbladError;

/// Kernel of the Liouvillian normalised to unit trace.
///
/// The first row of L is replaced by the trace functional so the system
/// `L' vec(ρ) = e₁` has a unique solution whenever γ > 0.
pub fn steady_state(p: &DriveParams) -> Result<DensityMatrix, LindbladError> {
    if !(p.gamma > 0.0) {
        return Err(LindbladError::SteadyStateNotUnique);
    }
    let l = build_liouvillian(p);
    let mut a: Matrix4<C64> = l.mat;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    a.set_row(0, &nalgebra::RowVector4::new(one, zero, zero, one));
    let b = Vector4::new(one, zero, zero, zero);
    let x = a
        .lu()
        .solve(&b)
        .ok_or(LindbladError::SteadyStateNotUnique)?;
    let raw = ComplexMat2::unvec(&[x[0], x[1], x[2], x[3]]);
    let herm = (raw + raw.dagger()) * 0.5;
    DensityMatrix::new(herm)
}
