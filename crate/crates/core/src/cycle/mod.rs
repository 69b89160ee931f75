// SPDX-License-Identifier: Apache-2.0

//! The four-stroke engine: schedule, integration, work/heat ledger.

mod integrate;
pub mod morphology;
mod run;
mod spec;
mod thermo;

pub use integrate::{
    integrate_stroke, relax_to_steady, step_count, Recording, RelaxRun, RelaxStatus, SegmentTotals,
    StrokeRun, TrajectoryPoint, GUARD_TOL, RENORM_TOL,
};
pub use run::{run_cycle, run_cycle_with, CycleRun, SegmentReport};
pub use spec::{
    build_schedule, encircles_lep, schedule_at, CycleSpec, StrokeKind, StrokeSpec, DEFAULT_DT,
    DEFAULT_ISOCHORIC_DURATION, DEFAULT_RELAX_TOL, DEFAULT_RELAX_T_MAX,
};
pub use thermo::{accumulate_heat, accumulate_work, ThermoLedger};

use crate::lindblad::LindbladError;

#[derive(Debug, thiserror::Error)]
pub enum CycleError {
    #[error("invalid {field}: {constraint}")]
    Validation {
        field: &'static str,
        constraint: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration failed at t = {t:e} s: {reason}")]
    Integration { t: f64, reason: String },
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
}

impl CycleError {
    pub(crate) fn validation(field: &'static str, constraint: impl Into<String>) -> Self {
        CycleError::Validation {
            field,
            constraint: constraint.into(),
        }
    }
}
