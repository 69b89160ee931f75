// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::CycleError;
use crate::lindblad::lep_gamma;

const KHZ_2PI: f64 = 2.0 * PI * 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrokeKind {
    /// Δ ramps at constant γ; the only strokes that exchange work.
    IsoDecay,
    /// γ ramps at constant Δ.
    Isochoric,
}

/// One leg of the engine cycle with linear ramps in Δ (rad/s) and γ (1/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrokeSpec {
    pub kind: StrokeKind,
    pub delta_start: f64,
    pub delta_end: f64,
    pub gamma_start: f64,
    pub gamma_end: f64,
    pub duration: f64,
}

impl StrokeSpec {
    pub fn new(
        kind: StrokeKind,
        (delta_start, delta_end): (f64, f64),
        (gamma_start, gamma_end): (f64, f64),
        duration: f64,
    ) -> Result<Self, CycleError> {
        let s = Self {
            kind,
            delta_start,
            delta_end,
            gamma_start,
            gamma_end,
            duration,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), CycleError> {
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(CycleError::validation("duration", "must be > 0"));
        }
        match self.kind {
            StrokeKind::IsoDecay if self.gamma_start != self.gamma_end => {
                Err(CycleError::validation(
                    "gamma_end",
                    "iso-decay stroke needs gamma_start = gamma_end",
                ))
            }
            StrokeKind::Isochoric if self.delta_start != self.delta_end => {
                Err(CycleError::validation(
                    "delta_end",
                    "isochoric stroke needs delta_start = delta_end",
                ))
            }
            _ => Ok(()),
        }
    }

    /// Linear schedule (Δ(t), γ(t)) for 0 ≤ t ≤ duration.
    pub fn at(&self, t: f64) -> Result<(f64, f64), CycleError> {
        if !(0.0..=self.duration).contains(&t) {
            return Err(CycleError::Domain(format!(
                "t = {t:e} s outside [0, {:e}] s",
                self.duration
            )));
        }
        Ok(self.at_unchecked(t))
    }

    #[inline]
    pub(crate) fn at_unchecked(&self, t: f64) -> (f64, f64) {
        let f = t / self.duration;
        (
            self.delta_start + (self.delta_end - self.delta_start) * f,
            self.gamma_start + (self.gamma_end - self.gamma_start) * f,
        )
    }

    /// dΔ/dt, constant over the stroke.
    pub fn delta_rate(&self) -> f64 {
        (self.delta_end - self.delta_start) / self.duration
    }
}

/// Free-function form of [`StrokeSpec::at`].
pub fn schedule_at(s: &StrokeSpec, t: f64) -> Result<(f64, f64), CycleError> {
    s.at(t)
}

/// A rectangular engine cycle A → B → C → D → A in the (Δ, γ) plane.
///
/// A = (Δ_min, γ_max), B = (Δ_max, γ_max), C = (Δ_max, γ_min), D = (Δ_min, γ_min).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub omega: f64,
    pub phi: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub relax_tol: f64,
    pub relax_t_max: f64,
    pub dt: f64,
}

pub const DEFAULT_ISOCHORIC_DURATION: f64 = 10e-6;
pub const DEFAULT_DT: f64 = 10e-9;
pub const DEFAULT_RELAX_TOL: f64 = 1e-8;
pub const DEFAULT_RELAX_T_MAX: f64 = 500e-6;

impl CycleSpec {
    /// Encircling cycle: Δ/2π from −290 kHz to 10 kHz, γ from 130e3 to 800e3 s⁻¹,
    /// T₁ = T₃ = 30 µs, Ω/2π = 29 kHz.
    pub fn big_cycle() -> Self {
        Self {
            omega: 29.0 * KHZ_2PI,
            phi: 0.0,
            delta_min: -290.0 * KHZ_2PI,
            delta_max: 10.0 * KHZ_2PI,
            gamma_min: 130e3,
            gamma_max: 800e3,
            t1: 30e-6,
            t2: DEFAULT_ISOCHORIC_DURATION,
            t3: 30e-6,
            t4: DEFAULT_ISOCHORIC_DURATION,
            relax_tol: DEFAULT_RELAX_TOL,
            relax_t_max: DEFAULT_RELAX_T_MAX,
            dt: DEFAULT_DT,
        }
    }

    /// Non-encircling cycle: Δ/2π from −223 kHz to −43 kHz, γ from 200e3 to
    /// 800e3 s⁻¹, T₁ = T₃ = 18 µs.
    pub fn small_cycle() -> Self {
        Self {
            delta_min: -223.0 * KHZ_2PI,
            delta_max: -43.0 * KHZ_2PI,
            gamma_min: 200e3,
            t1: 18e-6,
            t3: 18e-6,
            ..Self::big_cycle()
        }
    }

    pub fn validate(&self) -> Result<(), CycleError> {
        let fields = [
            ("omega", self.omega),
            ("phi", self.phi),
            ("delta_min", self.delta_min),
            ("delta_max", self.delta_max),
            ("gamma_min", self.gamma_min),
            ("gamma_max", self.gamma_max),
            ("t1", self.t1),
            ("t2", self.t2),
            ("t3", self.t3),
            ("t4", self.t4),
            ("relax_tol", self.relax_tol),
            ("relax_t_max", self.relax_t_max),
            ("dt", self.dt),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(CycleError::validation(name, "must be finite"));
            }
        }
        if self.omega < 0.0 {
            return Err(CycleError::validation("omega", "must be >= 0"));
        }
        if self.gamma_min < 0.0 {
            return Err(CycleError::validation("gamma_min", "must be >= 0"));
        }
        if self.delta_min >= self.delta_max {
            return Err(CycleError::validation("delta_max", "must exceed delta_min"));
        }
        if self.gamma_min >= self.gamma_max {
            return Err(CycleError::validation("gamma_max", "must exceed gamma_min"));
        }
        for (name, t) in [
            ("t1", self.t1),
            ("t2", self.t2),
            ("t3", self.t3),
            ("t4", self.t4),
        ] {
            if !(t > 0.0) {
                return Err(CycleError::validation(name, "must be > 0"));
            }
        }
        if !(self.dt > 0.0) {
            return Err(CycleError::validation("dt", "must be > 0"));
        }
        // relative slack for decimal round-off in t/100
        if self.dt > self.min_duration() / 100.0 * (1.0 + 1e-9) {
            return Err(CycleError::validation("dt", "must be <= min(t1..t4)/100"));
        }
        if !(self.relax_tol > 0.0) {
            return Err(CycleError::validation("relax_tol", "must be > 0"));
        }
        if self.relax_t_max < 0.0 {
            return Err(CycleError::validation("relax_t_max", "must be >= 0"));
        }
        Ok(())
    }

    pub fn min_duration(&self) -> f64 {
        self.t1.min(self.t2).min(self.t3).min(self.t4)
    }

    /// The four strokes A→B, B→C, C→D, D→A.
    pub fn build_schedule(&self) -> Result<[StrokeSpec; 4], CycleError> {
        self.validate()?;
        Ok([
            StrokeSpec::new(
                StrokeKind::IsoDecay,
                (self.delta_min, self.delta_max),
                (self.gamma_max, self.gamma_max),
                self.t1,
            )?,
            StrokeSpec::new(
                StrokeKind::Isochoric,
                (self.delta_max, self.delta_max),
                (self.gamma_max, self.gamma_min),
                self.t2,
            )?,
            StrokeSpec::new(
                StrokeKind::IsoDecay,
                (self.delta_max, self.delta_min),
                (self.gamma_min, self.gamma_min),
                self.t3,
            )?,
            StrokeSpec::new(
                StrokeKind::Isochoric,
                (self.delta_min, self.delta_min),
                (self.gamma_min, self.gamma_max),
                self.t4,
            )?,
        ])
    }

    /// True iff the rectangle strictly contains the LEP at (Δ = 0, γ = 4Ω).
    pub fn encircles_lep(&self) -> bool {
        let lep = lep_gamma(self.omega);
        self.delta_min < 0.0 && 0.0 < self.delta_max && self.gamma_min < lep && lep < self.gamma_max
    }

    /// |ΔΔ| / T₁ of the compression stroke.
    pub fn detuning_ramp_rate(&self) -> f64 {
        (self.delta_max - self.delta_min).abs() / self.t1
    }
}

pub fn build_schedule(c: &CycleSpec) -> Result<[StrokeSpec; 4], CycleError> {
    c.build_schedule()
}

pub fn encircles_lep(c: &CycleSpec) -> bool {
    c.encircles_lep()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_cycle_first_stroke() {
        let s = CycleSpec::big_cycle().build_schedule().unwrap();
        assert_eq!(s[0].kind, StrokeKind::IsoDecay);
        assert!((s[0].delta_start + 2.0 * PI * 290e3).abs() < 1e-6);
        assert!((s[0].delta_end - 2.0 * PI * 10e3).abs() < 1e-6);
        assert_eq!((s[0].gamma_start, s[0].gamma_end), (8e5, 8e5));
        assert_eq!(s[0].duration, 30e-6);
    }

    #[test]
    fn small_cycle_third_stroke() {
        let s = CycleSpec::small_cycle().build_schedule().unwrap();
        assert_eq!(s[2].kind, StrokeKind::IsoDecay);
        assert!((s[2].delta_start + 2.0 * PI * 43e3).abs() < 1e-6);
        assert!((s[2].delta_end + 2.0 * PI * 223e3).abs() < 1e-6);
        assert_eq!((s[2].gamma_start, s[2].gamma_end), (2e5, 2e5));
    }

    #[test]
    fn isochoric_strokes_hold_detuning() {
        for c in [CycleSpec::big_cycle(), CycleSpec::small_cycle()] {
            let s = c.build_schedule().unwrap();
            assert_eq!(s[1].delta_start, s[1].delta_end);
            assert_eq!(s[3].delta_start, s[3].delta_end);
            assert_eq!(s[1].delta_rate(), 0.0);
        }
    }

    #[test]
    fn schedule_endpoints_and_midpoint() {
        let s = CycleSpec::big_cycle().build_schedule().unwrap()[1];
        assert_eq!(s.at(0.0).unwrap(), (s.delta_start, s.gamma_start));
        let (d, g) = s.at(s.duration).unwrap();
        assert!((d - s.delta_end).abs() < 1e-9 && (g - s.gamma_end).abs() < 1e-9);
        let (d, g) = s.at(0.5 * s.duration).unwrap();
        assert!((g - 0.5 * (s.gamma_start + s.gamma_end)).abs() < 1e-9);
        assert_eq!(d, s.delta_start);
        assert!(s.at(-1e-12).is_err());
        assert!(s.at(s.duration * 1.001).is_err());
    }

    #[test]
    fn validation_names_field() {
        let mut c = CycleSpec::big_cycle();
        c.delta_max = c.delta_min;
        match c.validate() {
            Err(CycleError::Validation { field, .. }) => assert_eq!(field, "delta_max"),
            other => panic!("{other:?}"),
        }
        let mut c = CycleSpec::big_cycle();
        c.dt = 1e-6;
        match c.validate() {
            Err(CycleError::Validation { field, .. }) => assert_eq!(field, "dt"),
            other => panic!("{other:?}"),
        }
        assert!(StrokeSpec::new(StrokeKind::IsoDecay, (0.0, 1.0), (1.0, 2.0), 1.0).is_err());
        assert!(StrokeSpec::new(StrokeKind::Isochoric, (0.0, 0.0), (1.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn encircling_geometry() {
        assert!(CycleSpec::big_cycle().encircles_lep());
        assert!(!CycleSpec::small_cycle().encircles_lep());
        let mut c = CycleSpec::big_cycle();
        c.delta_max = 0.0;
        assert!(!c.encircles_lep());
        let mut c = CycleSpec::big_cycle();
        c.gamma_min = lep_gamma(c.omega);
        assert!(!c.encircles_lep());
    }

    #[test]
    fn presets_share_ramp_rate() {
        let rate = 2.0 * PI * 10e3 / 1e-6;
        for c in [CycleSpec::big_cycle(), CycleSpec::small_cycle()] {
            assert!((c.detuning_ramp_rate() - rate).abs() <= 1e-9 * rate);
        }
    }
}
