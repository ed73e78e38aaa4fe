//! Executes one configured run: builds the window and schedule, dispatches on
//! the command, and writes the artifacts — a CSV table, a plot-data file, and
//! the run manifest.
//!
//! The manifest is written for every run, success or failure, before control
//! returns to the caller; a failed run's error record lives there as well as
//! on stderr. Table bytes are a pure function of the configuration: floats are
//! printed at 17 significant digits (which round-trips `f64` exactly), grids
//! and quadratures are deterministic, and wall time appears only in the
//! manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use rindler_core::response::{self, ResponseResult};
use rindler_core::spectral;
use rindler_core::switching::{bump_product_switch, plateau_switch, SwitchingFunction};
use rindler_core::thermality::{self, ScalingSchedule, ThermalityReport};

use crate::config::{Command, ConfigError, RunConfig, SwitchKindConfig};

/// Why a run failed, split by exit semantics: configuration problems exit 2
/// (usage), numerical and i/o failures exit 1.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerical(rindler_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) | RunError::Io(_) => 1,
        }
    }
}

impl From<rindler_core::Error> for RunError {
    fn from(e: rindler_core::Error) -> Self {
        match e {
            // A rejected parameter is a configuration problem: surface the
            // parameter name the way config validation surfaces a field.
            rindler_core::Error::InvalidParameter { name, ref reason } => {
                RunError::Config(ConfigError::new(name, reason.clone()))
            }
            other => RunError::Numerical(other),
        }
    }
}

/// Fitted envelope and norms echoed by the `spectrum` command.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub amplitude: f64,
    pub power: f64,
    pub rate: f64,
    pub exponent: f64,
    pub rms_residual: f64,
    pub norm_l2: f64,
    pub norm_weighted: f64,
}

/// Record of one run. Serialized as `manifest.json` in the run directory —
/// exactly one per directory. Everything here except `wall_time_seconds` is
/// reproducible from `config`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// "ok" or "error".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Outside the reproducibility guarantee.
    pub wall_time_seconds: f64,
    /// Reference Unruh temperature a/2π for the configured acceleration.
    pub unruh_temperature: f64,
    /// Reference inverse temperature 2π/a.
    pub inverse_unruh_temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_exponent: Option<f64>,
    /// Largest reported ln-F error across the table (`response`, `temp-scan`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_error_ln: Option<f64>,
    /// Largest propagated deviation noise across the scan grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_noise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSummary>,
    /// File names written into the run directory, in order.
    pub outputs: Vec<String>,
    /// Full configuration echo; re-running it reproduces every table byte.
    pub config: RunConfig,
}

/// Executes a command and writes its artifacts into the configured run
/// directory. The manifest lands on disk before this returns, whether the
/// run succeeded or failed; only a directory that cannot be created at all
/// leaves nothing behind.
pub fn run(command: Command, cfg: &RunConfig) -> Result<RunManifest, RunError> {
    let started = Instant::now();
    let mut cfg = cfg.clone();
    // Stamp the resolved command for the echo, but let a conflicting one
    // from the document survive into validation.
    if cfg.command.is_none() {
        cfg.command = Some(command);
    }
    let dir = cfg
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("runs/{command}")));
    cfg.output.dir = Some(dir.clone());
    fs::create_dir_all(&dir)?;

    let mut manifest = RunManifest {
        tool: "rindler".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.to_string(),
        status: "error".into(),
        error: None,
        wall_time_seconds: 0.0,
        unruh_temperature: cfg.physics.a / std::f64::consts::TAU,
        inverse_unruh_temperature: std::f64::consts::TAU / cfg.physics.a,
        verdict: None,
        fitted_exponent: None,
        max_abs_error_ln: None,
        max_noise: None,
        spectrum: None,
        outputs: Vec::new(),
        config: cfg.clone(),
    };

    let result = execute(command, &cfg, &dir, &mut manifest);
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    match &result {
        Ok(()) => manifest.status = "ok".into(),
        Err(e) => manifest.error = Some(e.to_string()),
    }
    let rendered =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes to JSON");
    fs::write(dir.join("manifest.json"), rendered + "\n")?;
    result.map(|()| manifest)
}

fn execute(
    command: Command,
    cfg: &RunConfig,
    dir: &Path,
    manifest: &mut RunManifest,
) -> Result<(), RunError> {
    cfg.validate(command)?;
    match command {
        Command::Spectrum => run_spectrum(cfg, dir, manifest),
        Command::Response => run_response(cfg, dir, manifest),
        Command::TempScan => run_temp_scan(cfg, dir, manifest),
        Command::Thermality => run_thermality(cfg, dir, manifest),
        Command::Plateau => run_plateau(cfg, dir, manifest),
    }
}

fn build_window(cfg: &RunConfig) -> Result<SwitchingFunction, RunError> {
    Ok(match cfg.switching.kind {
        SwitchKindConfig::BumpProduct => bump_product_switch(cfg.switching.kappa)?,
        SwitchKindConfig::Plateau => {
            plateau_switch(cfg.switching.delta_tau_s, cfg.switching.delta_tau)?
        }
    })
}

fn run_spectrum(cfg: &RunConfig, dir: &Path, manifest: &mut RunManifest) -> Result<(), RunError> {
    let chi = build_window(cfg)?;
    let grid = cfg.grid_values();
    let profile = spectral::spectral_profile(&chi, &grid)?;
    let rows: Vec<Vec<f64>> = profile
        .omega_grid
        .iter()
        .zip(&profile.density)
        .map(|(&w, &d)| vec![w, d, profile.envelope.bound(w).powi(2)])
        .collect();
    write_table(dir, manifest, "spectrum.csv", &["omega", "density", "envelope_sq"], &rows)?;
    let plot: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[1]]).collect();
    write_table(dir, manifest, "plot.csv", &["x", "y"], &plot)?;
    manifest.spectrum = Some(SpectrumSummary {
        amplitude: profile.envelope.amplitude,
        power: profile.envelope.power,
        rate: profile.envelope.rate,
        exponent: profile.envelope.exponent,
        rms_residual: profile.envelope.rms_residual,
        norm_l2: profile.norm_l2,
        norm_weighted: profile.norm_weighted,
    });
    Ok(())
}

fn run_response(cfg: &RunConfig, dir: &Path, manifest: &mut RunManifest) -> Result<(), RunError> {
    let chi = build_window(cfg)?;
    let a = cfg.physics.a;
    let lambda = cfg.response.lambda;
    let tol = cfg.tolerances.ln_f_abs;
    let mut rows = Vec::new();
    for e in cfg.grid_values() {
        let r: ResponseResult = response::response_frequency_with_tol(&chi, e, lambda, a, tol)?;
        rows.push(vec![e, lambda, r.ln_value, r.abs_error_ln]);
    }
    write_table(dir, manifest, "response.csv", &["E", "lambda", "ln_F", "abs_error_ln"], &rows)?;
    let plot: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[2]]).collect();
    write_table(dir, manifest, "plot.csv", &["x", "y"], &plot)?;
    manifest.max_abs_error_ln = fold_max(rows.iter().map(|r| r[3]));
    Ok(())
}

fn run_temp_scan(cfg: &RunConfig, dir: &Path, manifest: &mut RunManifest) -> Result<(), RunError> {
    let chi = build_window(cfg)?;
    let a = cfg.physics.a;
    let e = cfg.temp_scan.e_fixed;
    let tol = cfg.tolerances.ln_f_abs;
    let beta_unruh = std::f64::consts::TAU / a;
    let mut rows = Vec::new();
    for lambda in cfg.grid_values() {
        let plus = response::response_frequency_with_tol(&chi, e, lambda, a, tol)?;
        let minus = response::response_frequency_with_tol(&chi, -e, lambda, a, tol)?;
        let beta = thermality::temperature_estimate(minus.ln_value, plus.ln_value, e)?;
        // Conservative noise: the shared-node cancellation inside one pair is
        // not visible through two independent single-sided calls.
        let noise = (plus.abs_error_ln + minus.abs_error_ln) / e;
        rows.push(vec![
            lambda,
            minus.ln_value,
            plus.ln_value,
            1.0 / beta,
            beta,
            beta - beta_unruh,
            noise,
        ]);
    }
    write_table(
        dir,
        manifest,
        "temp-scan.csv",
        &["lambda", "ln_F_minus", "ln_F_plus", "T_est", "inv_T_est", "deviation", "noise"],
        &rows,
    )?;
    let plot: Vec<Vec<f64>> = rows
        .iter()
        .filter(|r| r[5] != 0.0)
        .map(|r| vec![r[0].ln(), r[5].abs().ln()])
        .collect();
    write_table(dir, manifest, "plot.csv", &["x", "y"], &plot)?;
    manifest.max_abs_error_ln = fold_max(rows.iter().map(|r| r[6] * e));
    Ok(())
}

fn run_thermality(cfg: &RunConfig, dir: &Path, manifest: &mut RunManifest) -> Result<(), RunError> {
    let chi = build_window(cfg)?;
    let s = ScalingSchedule::new(
        cfg.schedule.alpha,
        cfg.schedule.p,
        cfg.physics.a,
        cfg.switching.kappa,
    )?;
    let grid = cfg.grid_values();
    let report = match cfg.schedule.lambda_fixed {
        Some(lambda) => thermality::thermality_scan_fixed_lambda(&chi, &s, lambda, &grid)?,
        None => thermality::thermality_scan(&chi, &s, &grid)?,
    };
    write_scan_outputs(&report, cfg.physics.a, dir, manifest, "thermality.csv")
}

fn run_plateau(cfg: &RunConfig, dir: &Path, manifest: &mut RunManifest) -> Result<(), RunError> {
    let grid = cfg.grid_values();
    let report = if cfg.plateau.control {
        thermality::plateau_control_scan(
            cfg.switching.delta_tau_s,
            cfg.switching.delta_tau,
            cfg.plateau.p_degree,
            &grid,
            cfg.physics.a,
        )?
    } else {
        thermality::plateau_scan(
            cfg.switching.delta_tau_s,
            cfg.switching.delta_tau,
            cfg.plateau.p_degree,
            &grid,
            cfg.physics.a,
        )?
    };
    write_scan_outputs(&report, cfg.physics.a, dir, manifest, "plateau.csv")
}

/// Column order of the scan tables, fixed across versions.
pub const SCAN_COLUMNS: [&str; 9] = [
    "E",
    "lambda",
    "ln_F_minus",
    "ln_F_plus",
    "inv_T_est",
    "deviation",
    "B_minus",
    "B_plus",
    "noise",
];

fn write_scan_outputs(
    report: &ThermalityReport,
    a: f64,
    dir: &Path,
    manifest: &mut RunManifest,
    csv_name: &str,
) -> Result<(), RunError> {
    let rows: Vec<Vec<f64>> = (0..report.e_grid.len())
        .map(|i| {
            vec![
                report.e_grid[i],
                report.lambda[i],
                report.ln_f_minus[i],
                report.ln_f_plus[i],
                report.inv_t_est[i],
                report.deviation[i],
                report.bounds[i].b_minus,
                report.bounds[i].b_plus,
                report.noise[i],
            ]
        })
        .collect();
    write_table(dir, manifest, csv_name, &SCAN_COLUMNS, &rows)?;
    // ln|deviation| against ln(2πE/a); exact-zero deviations carry no point.
    let plot: Vec<Vec<f64>> = rows
        .iter()
        .filter(|r| r[5] != 0.0)
        .map(|r| vec![(std::f64::consts::TAU * r[0] / a).ln(), r[5].abs().ln()])
        .collect();
    write_table(dir, manifest, "plot.csv", &["x", "y"], &plot)?;
    manifest.verdict = Some(report.verdict.to_string());
    manifest.fitted_exponent = report.fitted_exponent;
    manifest.max_noise = fold_max(report.noise.iter().copied());
    Ok(())
}

fn fold_max(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |m: f64| m.max(v))))
}

fn write_table(
    dir: &Path,
    manifest: &mut RunManifest,
    name: &str,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), RunError> {
    emit_table(&dir.join(name), columns, rows)?;
    manifest.outputs.push(name.into());
    Ok(())
}

/// Writes a CSV table: one header row, then each row at 17 significant
/// digits, every line newline-terminated, UTF-8 throughout. The float format
/// round-trips `f64` exactly, so a parsed column compares bit-for-bit equal
/// to the in-memory values, and identical inputs produce identical bytes. An
/// empty row set writes the header line alone.
pub fn emit_table(path: &Path, columns: &[&str], rows: &[Vec<f64>]) -> Result<(), RunError> {
    let mut out = String::with_capacity(24 * columns.len() * (rows.len() + 1));
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        assert_eq!(row.len(), columns.len(), "table row width must match its header");
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
