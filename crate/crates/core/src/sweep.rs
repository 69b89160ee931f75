// SPDX-License-Identifier: Apache-2.0

//! One engine cycle per Δ_max value, run in parallel and collected by index.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{run_cycle_with, CycleSpec, Recording};

/// 2π·10 kHz per µs, in rad/s².
pub const DEFAULT_RAMP_RATE: f64 = 2.0 * PI * 10e3 / 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DurationMode {
    /// T₁ = T₃ = (Δ_max − Δ_min) / rate, rate in rad/s².
    RampRate(f64),
    /// T₁, T₃ taken from the base cycle for every point.
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: CycleSpec,
    pub delta_max_start: f64,
    pub delta_max_end: f64,
    pub n_points: usize,
    pub durations: DurationMode,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("cannot summarise an empty sweep")]
    Empty,
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta_max: f64,
    pub w_net: f64,
    pub q_in: f64,
    pub eta: Option<f64>,
    pub encircled: bool,
    pub t1: f64,
    pub error: Option<String>,
}

impl SweepSpec {
    /// Big-cycle corner A: A at Δ_min/2π = −290 kHz, γ ∈ [130e3, 800e3] s⁻¹,
    /// Δ_max/2π from −289.9 to 210 kHz, 804 points.
    pub fn fig3a() -> Self {
        let khz = 2.0 * PI * 1e3;
        Self {
            base: CycleSpec::big_cycle(),
            delta_max_start: -289.9 * khz,
            delta_max_end: 210.0 * khz,
            n_points: 804,
            durations: DurationMode::RampRate(DEFAULT_RAMP_RATE),
        }
    }

    /// Small-cycle corner A: A at Δ_min/2π = −223 kHz, γ ∈ [200e3, 800e3] s⁻¹,
    /// Δ_max/2π from −222.9 to 277 kHz, 804 points.
    pub fn fig3b() -> Self {
        let khz = 2.0 * PI * 1e3;
        Self {
            base: CycleSpec::small_cycle(),
            delta_max_start: -222.9 * khz,
            delta_max_end: 277.0 * khz,
            n_points: 804,
            durations: DurationMode::RampRate(DEFAULT_RAMP_RATE),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n_points < 2 {
            return Err(SweepError::Invalid("n_points must be >= 2".into()));
        }
        let lo = self.delta_max_start.min(self.delta_max_end);
        if !(lo > self.base.delta_min) {
            return Err(SweepError::Invalid(
                "every delta_max must exceed the base delta_min".into(),
            ));
        }
        if let DurationMode::RampRate(r) = self.durations {
            if !(r > 0.0) || !r.is_finite() {
                return Err(SweepError::Invalid("ramp rate must be > 0".into()));
            }
        }
        Ok(())
    }

    /// Evenly spaced Δ_max values, both ends included, ascending.
    pub fn delta_max_values(&self) -> Vec<f64> {
        let (a, b) = if self.delta_max_start <= self.delta_max_end {
            (self.delta_max_start, self.delta_max_end)
        } else {
            (self.delta_max_end, self.delta_max_start)
        };
        let n = self.n_points;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    b
                } else {
                    a + (b - a) * (k as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    }

    /// Cycle run at one sweep point. The step is capped at min(T)/100.
    pub fn point_spec(&self, delta_max: f64) -> CycleSpec {
        let mut c = self.base;
        c.delta_max = delta_max;
        if let DurationMode::RampRate(rate) = self.durations {
            let t = (delta_max - c.delta_min) / rate;
            c.t1 = t;
            c.t3 = t;
        }
        c.dt = c.dt.min(c.min_duration() / 100.0);
        c
    }
}

fn run_point(spec: &SweepSpec, delta_max: f64) -> SweepRow {
    let c = spec.point_spec(delta_max);
    let encircled = c.encircles_lep();
    match run_cycle_with(&c, Recording::TotalsOnly) {
        Ok(run) => SweepRow {
            delta_max,
            w_net: run.ledger.w_net,
            q_in: run.ledger.q_in,
            eta: run.ledger.eta,
            encircled,
            t1: c.t1,
            error: None,
        },
        Err(e) => SweepRow {
            delta_max,
            w_net: f64::NAN,
            q_in: f64::NAN,
            eta: None,
            encircled,
            t1: c.t1,
            error: Some(e.to_string()),
        },
    }
}

/// Runs every point on a pool of `workers` threads (0 = rayon default).
/// Rows come back in ascending Δ_max and are independent of `workers`.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>, SweepError> {
    spec.validate()?;
    let values = spec.delta_max_values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    Ok(pool.install(|| values.par_iter().map(|&d| run_point(spec, d)).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n_rows: usize,
    pub n_errors: usize,
    pub argmax_delta_max: f64,
    pub max_w_net: f64,
    pub argmax_encircled: bool,
    pub count_positive: usize,
    pub count_negative: usize,
    pub count_encircled: usize,
    /// Smallest and largest Δ_max among encircled rows.
    pub encircled_range: Option<(f64, f64)>,
}

/// Ties on the maximum resolve to the lowest Δ_max. Failed rows are skipped.
pub fn summarize_sweep(rows: &[SweepRow]) -> Result<SweepSummary, SweepError> {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let first = *ok.first().ok_or(SweepError::Empty)?;
    let mut best = first;
    for r in &ok[1..] {
        if r.w_net > best.w_net {
            best = r;
        }
    }
    let encircled: Vec<f64> = ok
        .iter()
        .filter(|r| r.encircled)
        .map(|r| r.delta_max)
        .collect();
    let encircled_range = encircled
        .iter()
        .copied()
        .fold(None, |acc: Option<(f64, f64)>, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
        });
    Ok(SweepSummary {
        n_rows: rows.len(),
        n_errors: rows.len() - ok.len(),
        argmax_delta_max: best.delta_max,
        max_w_net: best.w_net,
        argmax_encircled: best.encircled,
        count_positive: ok.iter().filter(|r| r.w_net > 0.0).count(),
        count_negative: ok.iter().filter(|r| r.w_net < 0.0).count(),
        count_encircled: encircled.len(),
        encircled_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(delta_max: f64, w_net: f64) -> SweepRow {
        SweepRow {
            delta_max,
            w_net,
            q_in: 1.0,
            eta: Some(w_net),
            encircled: delta_max > 0.0,
            t1: 1e-6,
            error: None,
        }
    }

    #[test]
    fn values_are_inclusive_and_ascending() {
        let mut s = SweepSpec::fig3a();
        s.n_points = 5;
        let v = s.delta_max_values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], s.delta_max_start);
        assert_eq!(v[4], s.delta_max_end);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        std::mem::swap(&mut s.delta_max_start, &mut s.delta_max_end);
        assert_eq!(s.delta_max_values(), v);
    }

    #[test]
    fn ramp_rate_sets_durations() {
        let s = SweepSpec::fig3a();
        let c = s.point_spec(10.0 * 2.0 * PI * 1e3);
        assert!((c.t1 - 30e-6).abs() < 1e-12 * 30e-6);
        assert_eq!(c.t1, c.t3);
        let tiny = s.point_spec(s.delta_max_start);
        assert!(tiny.validate().is_ok());
        assert!(tiny.dt <= tiny.t1 / 100.0);
    }

    #[test]
    fn validation() {
        let mut s = SweepSpec::fig3a();
        s.n_points = 1;
        assert!(s.validate().is_err());
        let mut s = SweepSpec::fig3a();
        s.delta_max_start = s.base.delta_min;
        assert!(s.validate().is_err());
    }

    #[test]
    fn summary_single_row() {
        let s = summarize_sweep(&[row(1.0, 5.0)]).unwrap();
        assert_eq!(s.argmax_delta_max, 1.0);
        assert_eq!(s.count_positive, 1);
    }

    #[test]
    fn summary_tie_break_lowest() {
        let rows = [row(-2.0, 0.0), row(-1.0, 0.0), row(3.0, 0.0)];
        let s = summarize_sweep(&rows).unwrap();
        assert_eq!(s.argmax_delta_max, -2.0);
        assert_eq!((s.count_positive, s.count_negative), (0, 0));
        assert_eq!(s.encircled_range, Some((3.0, 3.0)));
    }

    #[test]
    fn summary_empty() {
        assert!(matches!(summarize_sweep(&[]), Err(SweepError::Empty)));
    }

    #[test]
    fn two_point_sweep() {
        let mut s = SweepSpec::fig3a();
        s.n_points = 2;
        s.delta_max_start = -200.0 * 2.0 * PI * 1e3;
        s.delta_max_end = -199.0 * 2.0 * PI * 1e3;
        s.base.dt = 50e-9;
        let rows = run_sweep(&s, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].delta_max < rows[1].delta_max);
        assert!(rows.iter().all(|r| r.error.is_none() && !r.encircled));
    }
}
