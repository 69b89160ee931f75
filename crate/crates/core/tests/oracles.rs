// SPDX-License-Identifier: Apache-2.0

//! Checks against closed forms and independent numerics.

use nalgebra::Vector4;

use lep_qhe::cycle::{
    integrate_stroke, relax_to_steady, run_cycle, run_cycle_with, CycleSpec, Recording, StrokeKind,
    StrokeSpec,
};
use lep_qhe::lindblad::{
    build_liouvillian, effective_decay_rate, lep_gamma, liouvillian_spectrum, steady_state,
    ComplexMat2, DensityMatrix, DriveParams, Phase, C64,
};
use lep_qhe::sweep::{run_sweep, summarize_sweep, SweepSpec};

const OMEGA: f64 = 2.0 * std::f64::consts::PI * 29e3;
const KHZ: f64 = 2.0 * std::f64::consts::PI * 1e3;

fn lep_gap(gamma: f64) -> f64 {
    let p = DriveParams::resonant(OMEGA, gamma);
    let s = liouvillian_spectrum(&build_liouvillian(&p), &p).unwrap();
    (s.eigenvalues[2] - s.eigenvalues[3]).norm()
}

#[test]
fn lep_square_root_branch() {
    let g0 = lep_gamma(OMEGA);
    assert!(lep_gap(g0) <= 1e-6 * g0);
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let n = 25;
    for k in 0..n {
        let rel = 10f64.powf(-4.0 + 2.0 * k as f64 / (n - 1) as f64);
        let (x, y) = ((rel * g0).ln(), lep_gap(g0 * (1.0 + rel)).ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let nf = n as f64;
    let slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
    assert!((slope - 0.5).abs() < 0.02, "slope {slope}");
}

#[test]
fn phase_boundaries() {
    let g0 = lep_gamma(OMEGA);
    assert_eq!(Phase::classify(0.99 * g0, OMEGA), Phase::Exact);
    assert_eq!(Phase::classify(g0, OMEGA), Phase::AtLEP);
    assert_eq!(Phase::classify(1.01 * g0, OMEGA), Phase::Broken);
    // below the LEP the coalescing pair is complex
    let p = DriveParams::resonant(OMEGA, 1.3e5);
    let s = liouvillian_spectrum(&build_liouvillian(&p), &p).unwrap();
    assert!(
        s.eigenvalues[2].im.abs() > 1e4
            && (s.eigenvalues[2] - s.eigenvalues[3].conj()).norm() < 1e-6
    );
}

#[test]
fn effective_decay_rate_formula() {
    assert_eq!(effective_decay_rate(2.0, 4.0).unwrap(), 1.0);
    assert!(effective_decay_rate(1.0, 0.0).is_err());
}

/// Rabi flopping without loss: P₂ = sin²(Ωt/2).
#[test]
fn closed_system_rabi() {
    let s = StrokeSpec::new(StrokeKind::Isochoric, (0.0, 0.0), (0.0, 0.0), 40e-6).unwrap();
    let run = integrate_stroke(&DensityMatrix::ground(), &s, OMEGA, 0.7, 10e-9).unwrap();
    for p in &run.samples {
        let exact = (0.5 * OMEGA * p.t).sin().powi(2);
        assert!(
            (p.p2 - exact).abs() < 1e-9,
            "t={} {} vs {}",
            p.t,
            p.p2,
            exact
        );
    }
}

/// Fixed parameters: the RK4 trajectory matches exp(L t) from nalgebra.
#[test]
fn constant_generator_matches_matrix_exponential() {
    let p = DriveParams::new(-40.0 * KHZ, OMEGA, 0.3, 3e5).unwrap();
    let s = StrokeSpec::new(
        StrokeKind::Isochoric,
        (p.delta, p.delta),
        (p.gamma, p.gamma),
        12e-6,
    )
    .unwrap();
    let rho0 = DensityMatrix::excited();
    let run = integrate_stroke(&rho0, &s, p.omega, p.phi, 10e-9).unwrap();
    let l = build_liouvillian(&p).mat;
    let v0 = Vector4::from(rho0.mat().vec());
    for pt in run.samples.iter().step_by(97) {
        let v = (l * C64::new(pt.t, 0.0)).exp() * v0;
        let exact = ComplexMat2::unvec(&[v[0], v[1], v[2], v[3]]);
        assert!(
            (*pt.rho.mat() - exact).frobenius_norm() < 1e-10,
            "t = {}",
            pt.t
        );
    }
}

#[test]
fn relaxation_reaches_closed_form_steady_state() {
    let p = DriveParams::new(-100.0 * KHZ, OMEGA, 0.0, 8e5).unwrap();
    let run = relax_to_steady(&DensityMatrix::excited(), &p, 1e-8, 500e-6, 10e-9).unwrap();
    assert!(run.converged);
    let ss = steady_state(&p).unwrap();
    assert!((*run.rho.mat() - *ss.mat()).frobenius_norm() < 1e-7);
    let (d, o, g) = (p.delta, p.omega, p.gamma);
    assert!((ss.p2() - 0.25 * o * o / (d * d + 0.25 * g * g + 0.5 * o * o)).abs() < 1e-14);
}

#[test]
fn no_drive_no_work() {
    let c = CycleSpec {
        omega: 0.0,
        ..CycleSpec::big_cycle()
    };
    let run = run_cycle_with(&c, Recording::TotalsOnly).unwrap();
    assert!(run.ledger.w_net.abs() < 1e-9);
    assert!(run.ledger.q_in.abs() < 1e-9);
}

#[test]
fn presets_encircle_as_drawn() {
    assert!(CycleSpec::big_cycle().encircles_lep());
    assert!(!CycleSpec::small_cycle().encircles_lep());
    let touching = CycleSpec {
        delta_max: 0.0,
        ..CycleSpec::big_cycle()
    };
    assert!(!touching.encircles_lep());
}

#[test]
fn cycle_first_law_per_segment() {
    for c in [CycleSpec::big_cycle(), CycleSpec::small_cycle()] {
        let run = run_cycle(&c).unwrap();
        let bound = 1e-6 * run.ledger.q_in.abs().max(c.omega);
        for s in &run.segments {
            assert!(
                s.totals.ledger_residual().abs() <= bound,
                "segment {}",
                s.index
            );
            assert!(
                s.totals.flux_residual().abs() <= bound,
                "segment {}",
                s.index
            );
        }
        assert!(run.ledger.first_law_residual().abs() <= bound);
        // the cycle starts and ends in the steady state at A
        assert!(run.closure_error() < 1e-6);
        assert!(run.relax.converged);
        // trajectory is time ordered and covers every segment
        assert!(run.trajectory.windows(2).all(|w| w[1].t >= w[0].t));
        for k in 1..=5 {
            assert!(run.stroke_samples(k).count() > 0);
        }
    }
}

#[test]
fn work_converges_under_step_refinement() {
    for c in [CycleSpec::big_cycle(), CycleSpec::small_cycle()] {
        let at = |dt: f64| {
            run_cycle_with(&CycleSpec { dt, ..c }, Recording::TotalsOnly)
                .unwrap()
                .ledger
                .w_net
        };
        let (w1, w2, w4) = (at(5e-9), at(2.5e-9), at(1.25e-9));
        let d1 = ((w1 - w2) / w2).abs();
        let d2 = ((w2 - w4) / w4).abs();
        assert!(d1 <= 1e-7, "halving 5 ns -> 2.5 ns moved w_net by {d1:e}");
        // midpoint quadrature: second order
        assert!((3.0..5.0).contains(&(d1 / d2)), "ratio {}", d1 / d2);
    }
}

#[test]
fn ramp_rate_sets_stroke_durations() {
    let spec = SweepSpec::fig3a();
    let values = spec.delta_max_values();
    let c = spec.point_spec(values[400]);
    let rate = (c.delta_max - c.delta_min) / c.t1;
    assert!((rate - 2.0 * std::f64::consts::PI * 1e10).abs() < 1e-3 * rate);
    assert_eq!(c.t1, c.t3);
    assert!(c.dt <= c.min_duration() / 100.0 * (1.0 + 1e-9));
}

#[test]
fn small_sweep_is_ordered_and_summarised() {
    let mut spec = SweepSpec::fig3a();
    spec.n_points = 5;
    spec.delta_max_start = -50.0 * KHZ;
    spec.delta_max_end = 50.0 * KHZ;
    let rows = run_sweep(&spec, 2).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|w| w[0].delta_max < w[1].delta_max));
    assert!(rows.iter().all(|r| r.error.is_none()));
    assert_eq!(rows.iter().filter(|r| r.encircled).count(), 2);
    let sum = summarize_sweep(&rows).unwrap();
    assert_eq!(sum.n_rows, 5);
    assert_eq!(sum.count_encircled, 2);
}
