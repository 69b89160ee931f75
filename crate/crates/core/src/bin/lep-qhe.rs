// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lep_qhe::config::{parse_config, Config, ConfigError, KHZ_2PI, PRESETS};
use lep_qhe::report::{cmd_cycle, cmd_spectrum, cmd_sweep, GammaGrid, ReportError};

#[derive(Parser)]
#[command(
    name = "lep-qhe",
    version,
    about = "Dissipative qubit heat engine around a Liouvillian exceptional point"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Liouvillian eigenvalues along a grid of decay rates.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Lower end of the γ grid, in config units (default 0).
        #[arg(long)]
        gamma_lo_khz: Option<f64>,
        /// Upper end of the γ grid, in config units (default 8Ω).
        #[arg(long)]
        gamma_hi_khz: Option<f64>,
        #[arg(long, default_value_t = 101)]
        n_gamma: usize,
        /// Detuning Δ/2π in kHz.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta_khz_2pi: f64,
    },
    /// One four-stroke cycle: trajectory.csv and ledger.json.
    Cycle {
        #[command(flatten)]
        common: Common,
    },
    /// Net work versus Δ_max: sweep.csv and sweep_summary.json.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Built-in parameter sets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset as a config document.
    Show {
        name: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    dt_ns: Option<f64>,
}

enum Failure {
    Config(String),
    Io(String),
    Numeric(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        let (kind, msg, code) = match self {
            Failure::Config(m) => ("config", m, 1),
            Failure::Io(m) => ("io", m, 1),
            Failure::Numeric(m) => ("numerical", m, 2),
        };
        eprintln!(
            "{}",
            json!({ "error": kind, "message": msg, "exit_code": code })
        );
        ExitCode::from(code)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e.exit_code() {
            1 => Failure::Config(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn load(common: &Common) -> Result<Config, Failure> {
    let mut cfg = match (&common.config, &common.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        (None, Some(name)) => Config::preset(name)?,
        (None, None) => {
            return Err(Failure::Config(
                "one of --config or --preset is required".into(),
            ))
        }
    };
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(dt) = common.dt_ns {
        cfg.dt_ns = dt;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Presets {
            action: PresetAction::List,
        } => {
            for (name, about) in PRESETS {
                println!("{name:<12} {about}");
            }
        }
        Command::Presets {
            action: PresetAction::Show { name },
        } => {
            println!("{}", Config::preset(&name)?.to_json());
        }
        Command::Spectrum {
            common,
            gamma_lo_khz,
            gamma_hi_khz,
            n_gamma,
            delta_khz_2pi,
        } => {
            let cfg = load(&common)?;
            let omega = cfg.omega_khz_2pi * KHZ_2PI;
            let mut grid = GammaGrid::around_lep(omega);
            grid.n = n_gamma;
            if let Some(lo) = gamma_lo_khz {
                grid.lo = cfg.gamma_units.khz_to_rate(lo);
            }
            if let Some(hi) = gamma_hi_khz {
                grid.hi = cfg.gamma_units.khz_to_rate(hi);
            }
            if !(grid.lo >= 0.0 && grid.hi >= grid.lo && grid.hi.is_finite()) {
                return Err(Failure::Config(
                    "gamma grid must satisfy 0 <= lo <= hi".into(),
                ));
            }
            let csv = cmd_spectrum(&cfg, &grid, delta_khz_2pi * KHZ_2PI)?;
            write(&common.out, "spectrum.csv", &csv)?;
        }
        Command::Cycle { common } => {
            let cfg = load(&common)?;
            let out = cmd_cycle(&cfg)?;
            write(&common.out, "trajectory.csv", &out.trajectory_csv)?;
            write(&common.out, "ledger.json", &out.ledger_json)?;
            println!("{}", out.ledger_json);
        }
        Command::Sweep { common } => {
            let cfg = load(&common)?;
            let out = cmd_sweep(&cfg)?;
            write(&common.out, "sweep.csv", &out.sweep_csv)?;
            write(&common.out, "sweep_summary.json", &out.summary_json)?;
            println!("{}", out.summary_json);
            if !out.success {
                let msg = format!(
                    "{} of {} sweep rows failed",
                    out.summary.n_errors, out.summary.n_rows
                );
                return Err(Failure::Numeric(msg));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => f.report(),
    }
}
