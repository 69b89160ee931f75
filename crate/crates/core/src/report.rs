// SPDX-License-Identifier: Apache-2.0

//! Plot-data serialisation: spectrum, trajectory and sweep CSV, ledger and
//! sweep-summary JSON. Numbers are written with 12 significant digits.

use serde::Serialize;

use crate::config::{Config, ConfigError, KHZ_2PI};
use crate::cycle::{run_cycle, CycleError, CycleRun, StrokeKind};
use crate::lindblad::{build_liouvillian, liouvillian_spectrum, DriveParams, LindbladError};
use crate::sweep::{run_sweep, summarize_sweep, SweepError, SweepRow, SweepSummary};

/// Fraction of sweep rows that must succeed for a zero exit status.
pub const SWEEP_SUCCESS_FRACTION: f64 = 0.99;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl ReportError {
    /// 1 for configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Config(_) => 1,
            ReportError::Sweep(SweepError::Invalid(_)) => 1,
            _ => 2,
        }
    }
}

/// `%.12g`-style formatting, locale independent.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        format!(
            "{}e{}{:02}",
            trim_zeros(mant),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Evenly spaced γ values in s⁻¹, both ends included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GammaGrid {
    /// 0 … 8Ω with 101 points, so 4Ω sits on the grid.
    pub fn around_lep(omega: f64) -> Self {
        Self {
            lo: 0.0,
            hi: 8.0 * omega,
            n: 101,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.n {
            0 => vec![],
            1 => vec![self.lo],
            n => (0..n)
                .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

pub const SPECTRUM_HEADER: [&str; 12] = [
    "gamma_per_s",
    "re_l1_per_s",
    "im_l1_per_s",
    "re_l2_per_s",
    "im_l2_per_s",
    "re_l3_per_s",
    "im_l3_per_s",
    "re_l4_per_s",
    "im_l4_per_s",
    "xi_re_per_s",
    "xi_im_per_s",
    "phase",
];

/// Liouvillian spectrum along a γ grid at the config's Ω, φ and the given Δ (rad/s).
pub fn cmd_spectrum(config: &Config, grid: &GammaGrid, delta: f64) -> Result<String, ReportError> {
    let omega = config.omega_khz_2pi * KHZ_2PI;
    let mut rows = Vec::with_capacity(grid.n);
    for gamma in grid.values() {
        let p = DriveParams::new(delta, omega, config.phi_rad, gamma)?;
        let s = liouvillian_spectrum(&build_liouvillian(&p), &p)?;
        let mut row = vec![fmt_num(gamma)];
        for z in s.eigenvalues {
            row.push(fmt_num(z.re));
            row.push(fmt_num(z.im));
        }
        row.push(fmt_num(s.xi.re));
        row.push(fmt_num(s.xi.im));
        row.push(s.phase.to_string());
        rows.push(row);
    }
    csv_text(&SPECTRUM_HEADER, rows)
}

pub const TRAJECTORY_HEADER: [&str; 9] = [
    "t_us",
    "stroke_index",
    "delta_khz_2pi",
    "gamma_khz",
    "p2",
    "w_cum_rad_per_s",
    "q_in_cum_rad_per_s",
    "q_out_cum_rad_per_s",
    "u_rad_per_s",
];

pub fn trajectory_csv(run: &CycleRun, config: &Config) -> Result<String, ReportError> {
    let rows = run.trajectory.iter().map(|p| {
        vec![
            fmt_num(p.t * 1e6),
            p.segment.to_string(),
            fmt_num(p.delta / KHZ_2PI),
            fmt_num(config.gamma_units.rate_to_khz(p.gamma)),
            fmt_num(p.p2),
            fmt_num(p.w_cum),
            fmt_num(p.q_in_cum),
            fmt_num(p.q_out_cum),
            fmt_num(p.u),
        ]
    });
    csv_text(&TRAJECTORY_HEADER, rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct SegmentJson {
    pub index: u8,
    pub kind: &'static str,
    pub duration_us: f64,
    pub w: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub delta_u: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerJson {
    pub energy_units: &'static str,
    pub w_net: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub delta_u: f64,
    pub eta: Option<f64>,
    pub encircled: bool,
    pub t_relax_us: f64,
    pub relax_converged: bool,
    pub relax_warning: Option<String>,
    pub cycle_closure: f64,
    pub segments: Vec<SegmentJson>,
}

impl LedgerJson {
    pub fn from_run(run: &CycleRun) -> Self {
        let l = run.ledger;
        Self {
            energy_units: "rad_per_s (hbar = 1)",
            w_net: l.w_net,
            q_in: l.q_in,
            q_out: l.q_out,
            delta_u: l.delta_u,
            eta: l.eta,
            encircled: run.encircled,
            t_relax_us: run.relax.t_relax * 1e6,
            relax_converged: run.relax.converged,
            relax_warning: run.relax.warning.clone(),
            cycle_closure: run.closure_error(),
            segments: run
                .segments
                .iter()
                .map(|s| SegmentJson {
                    index: s.index,
                    kind: match s.kind {
                        Some(StrokeKind::IsoDecay) => "iso_decay",
                        Some(StrokeKind::Isochoric) => "isochoric",
                        None => "relaxation",
                    },
                    duration_us: s.totals.duration * 1e6,
                    w: s.totals.work,
                    q_in: s.totals.q_in,
                    q_out: s.totals.q_out,
                    delta_u: s.totals.delta_u(),
                })
                .collect(),
        }
    }
}

pub struct CycleOutput {
    pub run: CycleRun,
    pub trajectory_csv: String,
    pub ledger_json: String,
}

pub fn cmd_cycle(config: &Config) -> Result<CycleOutput, ReportError> {
    let spec = config.to_cycle_spec()?;
    let run = run_cycle(&spec)?;
    let trajectory_csv = trajectory_csv(&run, config)?;
    let ledger_json =
        serde_json::to_string_pretty(&LedgerJson::from_run(&run)).expect("ledger serialises");
    Ok(CycleOutput {
        run,
        trajectory_csv,
        ledger_json,
    })
}

pub const SWEEP_HEADER: [&str; 7] = [
    "delta_max_khz_2pi",
    "t1_us",
    "w_net_rad_per_s",
    "q_in_rad_per_s",
    "eta",
    "encircled",
    "error",
];

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, ReportError> {
    let body = rows.iter().map(|r| {
        vec![
            fmt_num(r.delta_max / KHZ_2PI),
            fmt_num(r.t1 * 1e6),
            fmt_num(r.w_net),
            fmt_num(r.q_in),
            r.eta.map(fmt_num).unwrap_or_default(),
            r.encircled.to_string(),
            r.error.clone().unwrap_or_default(),
        ]
    });
    csv_text(&SWEEP_HEADER, body)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummaryJson {
    pub energy_units: &'static str,
    pub argmax_delta_max_khz_2pi: f64,
    pub max_w_net: f64,
    pub argmax_encircled: bool,
    pub count_positive: usize,
    pub count_negative: usize,
    pub count_encircled: usize,
    pub encircled_delta_max_khz_2pi: Option<(f64, f64)>,
    pub n_rows: usize,
    pub n_errors: usize,
}

impl From<&SweepSummary> for SweepSummaryJson {
    fn from(s: &SweepSummary) -> Self {
        Self {
            energy_units: "rad_per_s (hbar = 1)",
            argmax_delta_max_khz_2pi: s.argmax_delta_max / KHZ_2PI,
            max_w_net: s.max_w_net,
            argmax_encircled: s.argmax_encircled,
            count_positive: s.count_positive,
            count_negative: s.count_negative,
            count_encircled: s.count_encircled,
            encircled_delta_max_khz_2pi: s.encircled_range.map(|(a, b)| (a / KHZ_2PI, b / KHZ_2PI)),
            n_rows: s.n_rows,
            n_errors: s.n_errors,
        }
    }
}

pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
    pub sweep_csv: String,
    pub summary_json: String,
    /// At least [`SWEEP_SUCCESS_FRACTION`] of the rows succeeded.
    pub success: bool,
}

pub fn cmd_sweep(config: &Config) -> Result<SweepOutput, ReportError> {
    let spec = config
        .to_sweep_spec()?
        .ok_or(ConfigError::Missing("sweep"))?;
    let rows = run_sweep(&spec, config.workers)?;
    let summary = summarize_sweep(&rows)?;
    let ok = rows.iter().filter(|r| r.error.is_none()).count();
    let success = ok as f64 >= SWEEP_SUCCESS_FRACTION * rows.len() as f64;
    Ok(SweepOutput {
        sweep_csv: sweep_csv(&rows)?,
        summary_json: serde_json::to_string_pretty(&SweepSummaryJson::from(&summary))
            .expect("summary serialises"),
        rows,
        summary,
        success,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(728849.495632832), "728849.495633");
        assert_eq!(fmt_num(1.5e-7), "1.5e-07");
        assert_eq!(fmt_num(-3.0e15), "-3e+15");
        assert_eq!(fmt_num(9.9999999999999e11), "1e+12");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn spectrum_shape_and_lep_row() {
        let cfg = Config::preset("big-cycle").unwrap();
        let omega = cfg.omega_khz_2pi * KHZ_2PI;
        let csv = cmd_spectrum(&cfg, &GammaGrid::around_lep(omega), 0.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 102);
        assert_eq!(lines[0], SPECTRUM_HEADER.join(","));
        assert!(lines[51].ends_with(",AtLEP"), "{}", lines[51]);
        assert!(lines[1].ends_with(",Exact"));
        assert!(lines[101].ends_with(",Broken"));
    }

    #[test]
    fn spectrum_grid_size() {
        let cfg = Config::preset("big-cycle").unwrap();
        let grid = GammaGrid {
            lo: 1e5,
            hi: 9e5,
            n: 100,
        };
        let csv = cmd_spectrum(&cfg, &grid, 0.0).unwrap();
        assert_eq!(csv.lines().count(), 101);
    }
}
