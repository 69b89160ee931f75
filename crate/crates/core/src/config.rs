// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration with unit-suffixed keys.
//!
//! * `*_khz_2pi`: the value X of "Δ/2π = X kHz", i.e. 2π·X·10³ rad/s.
//! * `gamma_*_khz`: X·10³ s⁻¹ with `gamma_units = "per_second"` (default),
//!   2π·X·10³ s⁻¹ with `"two_pi_hz"`.
//! * `*_us`, `dt_ns`: microseconds and nanoseconds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cycle::{CycleError, CycleSpec};
use crate::sweep::{DurationMode, SweepSpec};

pub const KHZ_2PI: f64 = 2.0 * PI * 1e3;

pub const PRESETS: [(&str, &str); 4] = [
    (
        "big-cycle",
        "encircling cycle, Δ/2π ∈ [−290, 10] kHz, γ ∈ [130, 800]e3 1/s, T1=T3=30 µs",
    ),
    (
        "small-cycle",
        "non-encircling cycle, Δ/2π ∈ [−223, −43] kHz, γ ∈ [200, 800]e3 1/s, T1=T3=18 µs",
    ),
    (
        "fig3a",
        "big-cycle corner A, Δ_max/2π swept over [−289.9, 210] kHz, 804 points",
    ),
    (
        "fig3b",
        "small-cycle corner A, Δ_max/2π swept over [−222.9, 277] kHz, 804 points",
    ),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaUnits {
    PerSecond,
    TwoPiHz,
}

impl GammaUnits {
    pub fn khz_to_rate(self, x: f64) -> f64 {
        match self {
            GammaUnits::PerSecond => x * 1e3,
            GammaUnits::TwoPiHz => x * KHZ_2PI,
        }
    }

    pub fn rate_to_khz(self, g: f64) -> f64 {
        match self {
            GammaUnits::PerSecond => g / 1e3,
            GammaUnits::TwoPiHz => g / KHZ_2PI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub delta_max_start_khz_2pi: f64,
    pub delta_max_end_khz_2pi: f64,
    pub n_points: usize,
    /// Detuning ramp in kHz (of Δ/2π) per µs; defaults to 10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp_rate_khz_per_us: Option<f64>,
    /// Keep the base T1/T3 for every point instead of a fixed ramp rate.
    #[serde(default)]
    pub fixed_duration: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub omega_khz_2pi: f64,
    pub phi_rad: f64,
    pub delta_min_khz_2pi: f64,
    pub delta_max_khz_2pi: f64,
    pub gamma_min_khz: f64,
    pub gamma_max_khz: f64,
    pub gamma_units: GammaUnits,
    pub t1_us: f64,
    pub t2_us: f64,
    pub t3_us: f64,
    pub t4_us: f64,
    pub dt_ns: f64,
    pub relax_tol: f64,
    pub relax_t_max_us: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    pub workers: usize,
}

/// Input document: every key optional, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    omega_khz_2pi: Option<f64>,
    phi_rad: Option<f64>,
    delta_min_khz_2pi: Option<f64>,
    delta_max_khz_2pi: Option<f64>,
    gamma_min_khz: Option<f64>,
    gamma_max_khz: Option<f64>,
    gamma_units: Option<GammaUnits>,
    t1_us: Option<f64>,
    t2_us: Option<f64>,
    t3_us: Option<f64>,
    t4_us: Option<f64>,
    dt_ns: Option<f64>,
    relax_tol: Option<f64>,
    relax_t_max_us: Option<f64>,
    sweep: Option<SweepConfig>,
    workers: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Malformed(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("invalid '{key}': {constraint}")]
    Invalid {
        key: &'static str,
        constraint: String,
    },
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Config {
    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let big = Config {
            omega_khz_2pi: 29.0,
            phi_rad: 0.0,
            delta_min_khz_2pi: -290.0,
            delta_max_khz_2pi: 10.0,
            gamma_min_khz: 130.0,
            gamma_max_khz: 800.0,
            gamma_units: GammaUnits::PerSecond,
            t1_us: 30.0,
            t2_us: 10.0,
            t3_us: 30.0,
            t4_us: 10.0,
            dt_ns: 10.0,
            relax_tol: 1e-8,
            relax_t_max_us: 500.0,
            sweep: None,
            workers: default_workers(),
        };
        let small = Config {
            delta_min_khz_2pi: -223.0,
            delta_max_khz_2pi: -43.0,
            gamma_min_khz: 200.0,
            t1_us: 18.0,
            t3_us: 18.0,
            ..big.clone()
        };
        let sweep = |start: f64, end: f64| SweepConfig {
            delta_max_start_khz_2pi: start,
            delta_max_end_khz_2pi: end,
            n_points: 804,
            ramp_rate_khz_per_us: Some(10.0),
            fixed_duration: false,
        };
        match name {
            "big-cycle" => Ok(big),
            "small-cycle" => Ok(small),
            "fig3a" => Ok(Config {
                sweep: Some(sweep(-289.9, 210.0)),
                ..big
            }),
            "fig3b" => Ok(Config {
                sweep: Some(sweep(-222.9, 277.0)),
                ..small
            }),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn to_cycle_spec(&self) -> Result<CycleSpec, ConfigError> {
        let c = CycleSpec {
            omega: self.omega_khz_2pi * KHZ_2PI,
            phi: self.phi_rad,
            delta_min: self.delta_min_khz_2pi * KHZ_2PI,
            delta_max: self.delta_max_khz_2pi * KHZ_2PI,
            gamma_min: self.gamma_units.khz_to_rate(self.gamma_min_khz),
            gamma_max: self.gamma_units.khz_to_rate(self.gamma_max_khz),
            t1: self.t1_us / 1e6,
            t2: self.t2_us / 1e6,
            t3: self.t3_us / 1e6,
            t4: self.t4_us / 1e6,
            relax_tol: self.relax_tol,
            relax_t_max: self.relax_t_max_us / 1e6,
            dt: self.dt_ns / 1e9,
        };
        c.validate().map_err(cycle_error_to_config)?;
        Ok(c)
    }

    pub fn to_sweep_spec(&self) -> Result<Option<SweepSpec>, ConfigError> {
        let Some(sw) = &self.sweep else {
            return Ok(None);
        };
        let base = self.to_cycle_spec()?;
        let durations = if sw.fixed_duration {
            DurationMode::Fixed
        } else {
            let rate = sw.ramp_rate_khz_per_us.unwrap_or(10.0);
            DurationMode::RampRate(rate * KHZ_2PI * 1e6)
        };
        let spec = SweepSpec {
            base,
            delta_max_start: sw.delta_max_start_khz_2pi * KHZ_2PI,
            delta_max_end: sw.delta_max_end_khz_2pi * KHZ_2PI,
            n_points: sw.n_points,
            durations,
        };
        spec.validate().map_err(|e| ConfigError::Invalid {
            key: "sweep",
            constraint: e.to_string(),
        })?;
        Ok(Some(spec))
    }
}

fn cycle_error_to_config(e: CycleError) -> ConfigError {
    match e {
        CycleError::Validation { field, constraint } => ConfigError::Invalid {
            key: config_key(field),
            constraint,
        },
        other => ConfigError::Invalid {
            key: "config",
            constraint: other.to_string(),
        },
    }
}

fn config_key(field: &str) -> &'static str {
    match field {
        "omega" => "omega_khz_2pi",
        "phi" => "phi_rad",
        "delta_min" => "delta_min_khz_2pi",
        "delta_max" => "delta_max_khz_2pi",
        "gamma_min" => "gamma_min_khz",
        "gamma_max" => "gamma_max_khz",
        "t1" => "t1_us",
        "t2" => "t2_us",
        "t3" => "t3_us",
        "t4" => "t4_us",
        "dt" => "dt_ns",
        "relax_tol" => "relax_tol",
        "relax_t_max" => "relax_t_max_us",
        _ => "config",
    }
}

/// Parses and validates a JSON document. A `preset` key seeds every value;
/// explicit keys override it. Without a preset the cycle geometry keys are
/// required and the rest take their defaults.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
    let base = match raw.preset.as_deref() {
        Some(name) => Some(Config::preset(name)?),
        None => None,
    };
    macro_rules! required {
        ($key:ident) => {
            match (raw.$key, &base) {
                (Some(v), _) => v,
                (None, Some(b)) => b.$key,
                (None, None) => return Err(ConfigError::Missing(stringify!($key))),
            }
        };
    }
    macro_rules! optional {
        ($key:ident, $default:expr) => {
            match (raw.$key, &base) {
                (Some(v), _) => v,
                (None, Some(b)) => b.$key,
                (None, None) => $default,
            }
        };
    }
    let cfg = Config {
        omega_khz_2pi: required!(omega_khz_2pi),
        phi_rad: optional!(phi_rad, 0.0),
        delta_min_khz_2pi: required!(delta_min_khz_2pi),
        delta_max_khz_2pi: required!(delta_max_khz_2pi),
        gamma_min_khz: required!(gamma_min_khz),
        gamma_max_khz: required!(gamma_max_khz),
        gamma_units: optional!(gamma_units, GammaUnits::PerSecond),
        t1_us: required!(t1_us),
        t2_us: optional!(t2_us, 10.0),
        t3_us: required!(t3_us),
        t4_us: optional!(t4_us, 10.0),
        dt_ns: optional!(dt_ns, 10.0),
        relax_tol: optional!(relax_tol, 1e-8),
        relax_t_max_us: optional!(relax_t_max_us, 500.0),
        sweep: raw
            .sweep
            .or_else(|| base.as_ref().and_then(|b| b.sweep.clone())),
        workers: optional!(workers, default_workers()),
    };
    cfg.validate()?;
    Ok(cfg)
}

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.workers == 0 {
            return Err(ConfigError::Invalid {
                key: "workers",
                constraint: "must be >= 1".into(),
            });
        }
        self.to_cycle_spec()?;
        self.to_sweep_spec()?;
        Ok(())
    }
}
