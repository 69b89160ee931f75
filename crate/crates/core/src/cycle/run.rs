// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::integrate::{
    relax_with, Propagator, Recording, RelaxStatus, SegmentTotals, TrajectoryPoint,
};
use super::spec::{CycleSpec, StrokeKind};
use super::thermo::ThermoLedger;
use super::CycleError;
use crate::lindblad::{steady_state, DensityMatrix, DriveParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    /// 1–4 strokes, 5 relaxation.
    pub index: u8,
    /// `None` for the relaxation segment.
    pub kind: Option<StrokeKind>,
    pub totals: SegmentTotals,
}

#[derive(Clone, Debug)]
pub struct CycleRun {
    pub spec: CycleSpec,
    /// Empty unless recorded with [`Recording::Full`].
    pub trajectory: Vec<TrajectoryPoint>,
    pub ledger: ThermoLedger,
    pub segments: Vec<SegmentReport>,
    pub rho_start: DensityMatrix,
    pub rho_end: DensityMatrix,
    pub relax: RelaxStatus,
    pub encircled: bool,
}

impl CycleRun {
    pub fn stroke_samples(&self, index: u8) -> impl Iterator<Item = &TrajectoryPoint> {
        self.trajectory.iter().filter(move |p| p.segment == index)
    }

    /// P₂ along one segment.
    pub fn stroke_p2(&self, index: u8) -> Vec<f64> {
        self.stroke_samples(index).map(|p| p.p2).collect()
    }

    /// Sum of all segment totals.
    pub fn combined(&self) -> SegmentTotals {
        let mut acc = SegmentTotals::default();
        for s in &self.segments {
            let t = &s.totals;
            acc.duration += t.duration;
            acc.steps += t.steps;
            acc.work += t.work;
            acc.q_in += t.q_in;
            acc.q_out += t.q_out;
            acc.flux_heat += t.flux_heat;
            acc.flux_work += t.flux_work;
        }
        if let (Some(first), Some(last)) = (self.segments.first(), self.segments.last()) {
            acc.u_start = first.totals.u_start;
            acc.u_end = last.totals.u_end;
        }
        acc
    }

    /// ‖ρ_end − ρ_start‖_F
    pub fn closure_error(&self) -> f64 {
        (*self.rho_end.mat() - *self.rho_start.mat()).frobenius_norm()
    }
}

pub fn run_cycle(c: &CycleSpec) -> Result<CycleRun, CycleError> {
    run_cycle_with(c, Recording::Full)
}

/// Runs strokes 1–4 from the steady state at corner A, then relaxes back at A.
pub fn run_cycle_with(c: &CycleSpec, recording: Recording) -> Result<CycleRun, CycleError> {
    let strokes = c.build_schedule()?;
    let at_a = DriveParams::new(c.delta_min, c.omega, c.phi, c.gamma_max)?;
    let rho_start = steady_state(&at_a)?;

    let mut prop = Propagator::new(c.omega, c.phi, recording);
    let mut segments = Vec::with_capacity(5);
    let mut rho = rho_start;
    for (i, stroke) in strokes.iter().enumerate() {
        let index = i as u8 + 1;
        let (next, totals) = prop.run_stroke(index, rho, stroke, c.dt)?;
        segments.push(SegmentReport {
            index,
            kind: Some(stroke.kind),
            totals,
        });
        rho = next;
    }
    let (rho_end, totals, relax) =
        relax_with(&mut prop, 5, rho, &at_a, c.relax_tol, c.relax_t_max, c.dt)?;
    segments.push(SegmentReport {
        index: 5,
        kind: None,
        totals,
    });

    let w: f64 = segments.iter().map(|s| s.totals.work).sum();
    let q_in: f64 = segments.iter().map(|s| s.totals.q_in).sum();
    let q_out: f64 = segments.iter().map(|s| s.totals.q_out).sum();
    let delta_u = segments[4].totals.u_end - segments[0].totals.u_start;

    Ok(CycleRun {
        spec: *c,
        trajectory: prop.samples,
        ledger: ThermoLedger::new(w, q_in, q_out, delta_u),
        segments,
        rho_start,
        rho_end,
        relax,
        encircled: c.encircles_lep(),
    })
}
