// SPDX-License-Identifier: Apache-2.0

//! Fixed-step RK4 propagation of the master equation along a schedule.
//!
//! Alongside ρ the integrator carries two scalar accumulators driven by the
//! generator itself, the heat flux Tr(H_c·Lρ) = Δ(t)·(Lρ)₂₂ and the power
//! −Tr(ρ·dH_c/dt) = −P₂·dΔ/dt. These give an energy balance that does not
//! telescope on the sample grid, so its residual measures integration error.

use serde::{Deserialize, Serialize};

use super::spec::StrokeSpec;
use super::thermo::{step_heat, step_work, HeatSplit};
use super::CycleError;
use crate::lindblad::{lindblad_rhs_mat, ComplexMat2, DensityMatrix, DriveParams};

/// Below this trace drift the state is renormalised silently.
pub const RENORM_TOL: f64 = 1e-9;
/// Beyond this defect (trace, hermiticity, negativity) integration aborts.
pub const GUARD_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    /// Seconds since the start of the run.
    pub t: f64,
    /// 1–4 for the strokes, 5 for the closing relaxation.
    pub segment: u8,
    pub rho: DensityMatrix,
    pub p2: f64,
    pub delta: f64,
    pub gamma: f64,
    pub w_cum: f64,
    pub q_in_cum: f64,
    pub q_out_cum: f64,
    /// Tr(ρ H_c) = P₂Δ
    pub u: f64,
}

/// Energy exchanged over one integrated segment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SegmentTotals {
    pub duration: f64,
    pub steps: usize,
    /// Midpoint-rule work on the sample grid.
    pub work: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub u_start: f64,
    pub u_end: f64,
    /// Heat from the co-integrated flux Tr(H_c·Lρ).
    pub flux_heat: f64,
    /// Work from the co-integrated power −P₂·dΔ/dt.
    pub flux_work: f64,
}

impl SegmentTotals {
    pub fn delta_u(&self) -> f64 {
        self.u_end - self.u_start
    }

    /// ΔU − (Q_in + Q_out − W) with the sampled midpoint ledger.
    pub fn ledger_residual(&self) -> f64 {
        self.delta_u() - (self.q_in + self.q_out - self.work)
    }

    /// ΔU − (Q − W) with the co-integrated fluxes.
    pub fn flux_residual(&self) -> f64 {
        self.delta_u() - (self.flux_heat - self.flux_work)
    }
}

#[derive(Clone, Debug)]
pub struct StrokeRun {
    pub samples: Vec<TrajectoryPoint>,
    pub rho_end: DensityMatrix,
    pub totals: SegmentTotals,
}

/// Whether per-step samples are kept. Totals are identical either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recording {
    Full,
    TotalsOnly,
}

/// Running state shared by all segments of a run.
pub(crate) struct Propagator {
    pub omega: f64,
    pub phi: f64,
    pub recording: Recording,
    pub t: f64,
    pub w_cum: f64,
    pub heat: HeatSplit,
    pub samples: Vec<TrajectoryPoint>,
}

struct Flux {
    rho: ComplexMat2,
    heat: f64,
    work: f64,
}

impl Propagator {
    pub fn new(omega: f64, phi: f64, recording: Recording) -> Self {
        Self {
            omega,
            phi,
            recording,
            t: 0.0,
            w_cum: 0.0,
            heat: HeatSplit::default(),
            samples: Vec::new(),
        }
    }

    fn params(&self, delta: f64, gamma: f64) -> DriveParams {
        DriveParams {
            delta,
            omega: self.omega,
            phi: self.phi,
            gamma,
        }
    }

    fn derivative(&self, rho: &ComplexMat2, delta: f64, gamma: f64, delta_rate: f64) -> Flux {
        let d = lindblad_rhs_mat(rho, &self.params(delta, gamma));
        Flux {
            heat: delta * d.get(1, 1).re,
            work: -delta_rate * rho.get(1, 1).re,
            rho: d,
        }
    }

    /// One classical RK4 step from local time `s` to `s + h`.
    fn rk4_step<F>(
        &self,
        rho: &ComplexMat2,
        s: f64,
        h: f64,
        schedule: &F,
        delta_rate: f64,
    ) -> (ComplexMat2, f64, f64)
    where
        F: Fn(f64) -> (f64, f64),
    {
        let eval = |s: f64, r: &ComplexMat2| {
            let (d, g) = schedule(s);
            self.derivative(r, d, g, delta_rate)
        };
        let k1 = eval(s, rho);
        let k2 = eval(s + 0.5 * h, &(*rho + k1.rho * (0.5 * h)));
        let k3 = eval(s + 0.5 * h, &(*rho + k2.rho * (0.5 * h)));
        let k4 = eval(s + h, &(*rho + k3.rho * h));
        let sixth = h / 6.0;
        let next = *rho + (k1.rho + (k2.rho + k3.rho) * 2.0 + k4.rho) * sixth;
        let heat = sixth * (k1.heat + 2.0 * (k2.heat + k3.heat) + k4.heat);
        let work = sixth * (k1.work + 2.0 * (k2.work + k3.work) + k4.work);
        (next, heat, work)
    }

    fn guard(&self, mut rho: ComplexMat2, t: f64) -> Result<DensityMatrix, CycleError> {
        let tr = rho.trace();
        if (tr - 1.0).norm() < RENORM_TOL {
            rho = rho * (1.0 / tr.re);
        }
        let state = DensityMatrix::new_unchecked(rho);
        state
            .check(GUARD_TOL, GUARD_TOL, GUARD_TOL)
            .map_err(|e| CycleError::Integration {
                t,
                reason: e.to_string(),
            })?;
        Ok(state)
    }

    fn push_sample(&mut self, segment: u8, rho: DensityMatrix, delta: f64, gamma: f64) {
        if self.recording == Recording::TotalsOnly {
            return;
        }
        let p2 = rho.p2();
        self.samples.push(TrajectoryPoint {
            t: self.t,
            segment,
            rho,
            p2,
            delta,
            gamma,
            w_cum: self.w_cum,
            q_in_cum: self.heat.q_in,
            q_out_cum: self.heat.q_out,
            u: p2 * delta,
        });
    }

    /// Integrates one segment. `stop` is consulted before every step with the
    /// current state and elapsed local time; `n_max` bounds the step count.
    #[allow(clippy::too_many_arguments)]
    pub fn run_segment<F, S>(
        &mut self,
        segment: u8,
        rho0: DensityMatrix,
        schedule: F,
        delta_rate: f64,
        h: f64,
        n_max: usize,
        mut stop: S,
    ) -> Result<(DensityMatrix, SegmentTotals), CycleError>
    where
        F: Fn(f64) -> (f64, f64),
        S: FnMut(&DensityMatrix, f64, f64, f64) -> bool,
    {
        let (d0, g0) = schedule(0.0);
        let mut rho = rho0;
        let mut delta = d0;
        let mut gamma = g0;
        let mut totals = SegmentTotals {
            u_start: rho.p2() * d0,
            ..Default::default()
        };
        let mut w = 0.0;
        let mut heat = HeatSplit::default();
        self.push_sample(segment, rho, delta, gamma);
        let mut s = 0.0;
        let mut k = 0usize;
        while k < n_max && !stop(&rho, s, delta, gamma) {
            let (next, fq, fw) = self.rk4_step(rho.mat(), s, h, &schedule, delta_rate);
            k += 1;
            // exact grid times avoid drift in the schedule
            s = h * k as f64;
            self.t += h;
            let next = self.guard(next, self.t)?;
            let (d1, g1) = schedule(s);
            let dw = step_work(rho.p2(), next.p2(), delta, d1);
            let dq = step_heat(rho.p2(), next.p2(), delta, d1);
            w += dw;
            heat.add(dq);
            self.w_cum += dw;
            self.heat.add(dq);
            totals.flux_heat += fq;
            totals.flux_work += fw;
            rho = next;
            delta = d1;
            gamma = g1;
            self.push_sample(segment, rho, delta, gamma);
        }
        totals.duration = s;
        totals.steps = k;
        totals.work = w;
        totals.q_in = heat.q_in;
        totals.q_out = heat.q_out;
        totals.u_end = rho.p2() * delta;
        Ok((rho, totals))
    }

    pub fn run_stroke(
        &mut self,
        segment: u8,
        rho0: DensityMatrix,
        stroke: &StrokeSpec,
        dt: f64,
    ) -> Result<(DensityMatrix, SegmentTotals), CycleError> {
        stroke.validate()?;
        if !(dt > 0.0) {
            return Err(CycleError::validation("dt", "must be > 0"));
        }
        let n = step_count(stroke.duration, dt);
        let h = stroke.duration / n as f64;
        self.run_segment(
            segment,
            rho0,
            |s| stroke.at_unchecked(s),
            stroke.delta_rate(),
            h,
            n,
            |_, _, _, _| false,
        )
    }
}

/// Number of uniform steps of size ≤ dt covering `duration`; ratios within
/// 1e−6 of an integer are treated as exact.
pub fn step_count(duration: f64, dt: f64) -> usize {
    let r = duration / dt;
    let n = if (r - r.round()).abs() < 1e-6 {
        r.round()
    } else {
        r.ceil()
    };
    (n as usize).max(1)
}

/// Integrates one stroke from `rho0`. Samples are stamped with stroke-local
/// time and cumulative totals starting from zero.
pub fn integrate_stroke(
    rho0: &DensityMatrix,
    stroke: &StrokeSpec,
    omega: f64,
    phi: f64,
    dt: f64,
) -> Result<StrokeRun, CycleError> {
    let mut prop = Propagator::new(omega, phi, Recording::Full);
    let (rho_end, totals) = prop.run_stroke(1, *rho0, stroke, dt)?;
    Ok(StrokeRun {
        samples: prop.samples,
        rho_end,
        totals,
    })
}

#[derive(Clone, Debug)]
pub struct RelaxRun {
    pub rho: DensityMatrix,
    pub t_relax: f64,
    /// ‖Lρ‖_F at the final state.
    pub residual: f64,
    pub converged: bool,
    pub warning: Option<String>,
    pub samples: Vec<TrajectoryPoint>,
    pub totals: SegmentTotals,
}

pub(crate) fn relax_with(
    prop: &mut Propagator,
    segment: u8,
    rho: DensityMatrix,
    p: &DriveParams,
    relax_tol: f64,
    relax_t_max: f64,
    dt: f64,
) -> Result<(DensityMatrix, SegmentTotals, RelaxStatus), CycleError> {
    if !(p.gamma > 0.0) {
        return Err(CycleError::Domain("relaxation needs gamma > 0".to_string()));
    }
    let threshold = relax_tol * p.gamma;
    let (delta, gamma) = (p.delta, p.gamma);
    let n_max = if relax_t_max <= 0.0 {
        0
    } else {
        step_count(relax_t_max, dt)
    };
    let h = if n_max == 0 {
        dt
    } else {
        relax_t_max / n_max as f64
    };
    let residual_of = |r: &DensityMatrix, omega: f64, phi: f64| {
        lindblad_rhs_mat(
            r.mat(),
            &DriveParams {
                delta,
                omega,
                phi,
                gamma,
            },
        )
        .frobenius_norm()
    };
    let (omega, phi) = (prop.omega, prop.phi);
    let (rho_end, totals) = prop.run_segment(
        segment,
        rho,
        |_| (delta, gamma),
        0.0,
        h,
        n_max,
        |r, _, _, _| residual_of(r, omega, phi) <= threshold,
    )?;
    let residual = residual_of(&rho_end, omega, phi);
    let converged = residual <= threshold;
    let warning = (!converged && residual > 10.0 * threshold).then(|| {
        format!(
            "relaxation did not converge within {relax_t_max:e} s: residual {residual:e} > 10 x {threshold:e}"
        )
    });
    Ok((
        rho_end,
        totals,
        RelaxStatus {
            t_relax: totals.duration,
            residual,
            converged,
            warning,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxStatus {
    pub t_relax: f64,
    pub residual: f64,
    pub converged: bool,
    pub warning: Option<String>,
}

/// Integrates at fixed parameters until ‖Lρ‖_F ≤ relax_tol·γ or `relax_t_max`.
pub fn relax_to_steady(
    rho: &DensityMatrix,
    p: &DriveParams,
    relax_tol: f64,
    relax_t_max: f64,
    dt: f64,
) -> Result<RelaxRun, CycleError> {
    let mut prop = Propagator::new(p.omega, p.phi, Recording::Full);
    let (rho, totals, status) = relax_with(&mut prop, 5, *rho, p, relax_tol, relax_t_max, dt)?;
    Ok(RelaxRun {
        rho,
        t_relax: status.t_relax,
        residual: status.residual,
        converged: status.converged,
        warning: status.warning,
        samples: prop.samples,
        totals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::spec::StrokeKind;
    use crate::lindblad::steady_state;

    #[test]
    fn pure_decay_matches_exponential() {
        let gamma = 4e5;
        let s =
            StrokeSpec::new(StrokeKind::Isochoric, (-3e5, -3e5), (gamma, gamma), 10e-6).unwrap();
        let run = integrate_stroke(&DensityMatrix::excited(), &s, 0.0, 0.0, 10e-9).unwrap();
        assert_eq!(run.samples.len(), 1001);
        for p in &run.samples {
            assert!(
                (p.p2 - (-gamma * p.t).exp()).abs() < 1e-6,
                "t={} p2={}",
                p.t,
                p.p2
            );
        }
        // Δ < 0 and P₂ falling: every step absorbs heat
        assert!(run.totals.q_in > 0.0);
        assert_eq!(run.totals.q_out, 0.0);
        assert_eq!(run.totals.work, 0.0);
    }

    #[test]
    fn step_count_handles_decimal_ratios() {
        assert_eq!(step_count(30e-6, 10e-9), 3000);
        assert_eq!(step_count(18e-6, 10e-9), 1800);
        assert_eq!(step_count(1.5e-8, 1e-8), 2);
        assert_eq!(step_count(1e-9, 1e-8), 1);
    }

    #[test]
    fn schedule_is_followed() {
        let s = StrokeSpec::new(StrokeKind::IsoDecay, (-1e6, 2e5), (5e5, 5e5), 3e-6).unwrap();
        let run = integrate_stroke(&DensityMatrix::ground(), &s, 1e5, 0.0, 10e-9).unwrap();
        let first = run.samples.first().unwrap();
        let last = run.samples.last().unwrap();
        assert_eq!(first.delta, -1e6);
        assert!((last.delta - 2e5).abs() < 1e-6);
        assert!((last.t - 3e-6).abs() < 1e-15);
        assert!(run
            .samples
            .iter()
            .all(|p| (p.u - p.p2 * p.delta).abs() <= 1e-10 * p.u.abs().max(1e-300)));
    }

    #[test]
    fn relax_from_steady_state_is_immediate() {
        let p = DriveParams::new(-1.8e6, 1.8e5, 0.0, 8e5).unwrap();
        let rho = steady_state(&p).unwrap();
        let r = relax_to_steady(&rho, &p, 1e-8, 500e-6, 10e-9).unwrap();
        assert_eq!(r.t_relax, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn relax_undriven_excited_state() {
        let gamma = 8e5;
        let p = DriveParams::new(0.0, 0.0, 0.0, gamma).unwrap();
        let tol = 1e-8;
        let r = relax_to_steady(&DensityMatrix::excited(), &p, tol, 500e-6, 10e-9).unwrap();
        assert!(r.converged);
        let estimate = (1.0 / tol).ln() / gamma;
        assert!(
            r.t_relax > 0.5 * estimate && r.t_relax < 2.0 * estimate,
            "{}",
            r.t_relax
        );
        assert!(r.rho.p2() < 1e-7);
    }

    #[test]
    fn relax_non_convergence_warns() {
        let p = DriveParams::new(0.0, 0.0, 0.0, 8e5).unwrap();
        let r = relax_to_steady(&DensityMatrix::excited(), &p, 1e-8, 1e-6, 10e-9).unwrap();
        assert!(!r.converged);
        assert!(r.warning.is_some());
        assert!((r.t_relax - 1e-6).abs() < 1e-15);
    }

    #[test]
    fn relax_requires_decay() {
        let p = DriveParams::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(relax_to_steady(&DensityMatrix::ground(), &p, 1e-8, 1e-6, 1e-8).is_err());
    }
}
