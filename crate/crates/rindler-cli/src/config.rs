//! Run configuration: one TOML document describing a complete invocation —
//! which command runs, the switching window, the acceleration, the scaling
//! schedule, the evaluation grid, tolerances, and where artifacts land.
//!
//! Every field has a default, so the empty document is a valid configuration.
//! The echo embedded in each run manifest is itself a complete document that
//! reproduces the run; only wall time is outside that guarantee.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// A configuration problem: the offending field and what is wrong with it.
#[derive(Debug, thiserror::Error)]
#[error("config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub(crate) fn new(field: &str, reason: impl Into<String>) -> Self {
        Self { field: field.into(), reason: reason.into() }
    }
}

/// The laboratory commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// |χ̂(ω)|² on a frequency grid, with norms and the decay envelope.
    Spectrum,
    /// F_λ(E) over a gap grid at fixed λ (frequency route).
    Response,
    /// Detailed-balance temperature at a fixed gap over a λ grid.
    TempScan,
    /// Thermality scan under the scaling schedule over a gap grid.
    Thermality,
    /// Plateau-window scan: flat-top-only stretching, or the whole-window
    /// control family.
    Plateau,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Response => "response",
            Command::TempScan => "temp-scan",
            Command::Thermality => "thermality",
            Command::Plateau => "plateau",
        })
    }
}

/// Which catalog window the run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchKindConfig {
    /// χ(τ) = f(τ)f(1/κ − τ), compactly supported and C∞.
    BumpProduct,
    /// Ramp–flat–ramp window with tails of width Δτ_s and top Δτ.
    Plateau,
}

/// Switching-window parameters. The `plateau` command reads the two widths
/// directly and ignores `kind`; every other command builds the window `kind`
/// names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchingConfig {
    pub kind: SwitchKindConfig,
    /// Sharpness κ of the bump-product window (support [0, 1/κ]).
    pub kappa: f64,
    /// Plateau tail width Δτ_s.
    pub delta_tau_s: f64,
    /// Plateau flat-top width Δτ.
    pub delta_tau: f64,
}

impl Default for SwitchingConfig {
    fn default() -> Self {
        Self { kind: SwitchKindConfig::BumpProduct, kappa: 1.0, delta_tau_s: 1.0, delta_tau: 1.0 }
    }
}

/// Background parameters of the accelerated trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    /// Proper acceleration a (Unruh temperature a/2π).
    pub a: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self { a: 1.0 }
    }
}

/// Scaling schedule λ(E) = α(2πE/a)^{1+p} used by the `thermality` command,
/// or a degenerate fixed λ when `lambda_fixed` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Prefactor α; validity (α > πκ/2a) is checked by the schedule itself.
    pub alpha: f64,
    /// Exponent p; validity (p > 1) is checked by the schedule itself.
    pub p: f64,
    /// When set, hold λ at this value across the whole grid instead of
    /// following the schedule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_fixed: Option<f64>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { alpha: std::f64::consts::PI, p: 2.0, lambda_fixed: None }
    }
}

/// Spacing rule for the evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Evaluation grid. Gap commands read it as an E grid, `temp-scan` as a λ
/// grid, `spectrum` as an ω grid; endpoints are taken exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for GridConfig {
    fn default() -> Self {
        // 2πE/a ∈ {20, …, 160} at the default a = 1.
        let tau = std::f64::consts::TAU;
        Self { min: 20.0 / tau, max: 160.0 / tau, points: 4, spacing: Spacing::Log }
    }
}

/// Accuracy targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Absolute target on ln F for the `response` and `temp-scan` commands.
    /// The scan commands keep the pipeline default, which their noise model
    /// is calibrated against.
    pub ln_f_abs: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { ln_f_abs: rindler_core::response::DEFAULT_LN_TOL }
    }
}

/// Extra knobs of the `response` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseConfig {
    /// Interaction-time scale λ held fixed across the gap grid.
    pub lambda: f64,
}

impl Default for ResponseConfig {
    fn default() -> Self {
        Self { lambda: 1.0 }
    }
}

/// Extra knobs of the `temp-scan` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TempScanConfig {
    /// Gap E held fixed while λ sweeps the grid.
    pub e_fixed: f64,
}

impl Default for TempScanConfig {
    fn default() -> Self {
        Self { e_fixed: 1.0 }
    }
}

/// Extra knobs of the `plateau` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlateauConfig {
    /// Polynomial degree P of the stretching law λ(E) = (2πE/a)^P.
    pub p_degree: u32,
    /// When true, run the whole-window control family instead of the
    /// flat-top-only counterexample.
    pub control: bool,
}

impl Default for PlateauConfig {
    fn default() -> Self {
        Self { p_degree: 2, control: false }
    }
}

/// Artifact destination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Run directory; defaults to `runs/<command>`. Holds the CSV table,
    /// plot data, and exactly one `manifest.json`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Command-line overrides applied on top of the loaded configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub a: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub emin: Option<f64>,
    pub emax: Option<f64>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
}

/// A full run description. All sections are optional in the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Optional command echo; when present it must match the subcommand the
    /// binary was invoked with.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    pub switching: SwitchingConfig,
    pub physics: PhysicsConfig,
    pub schedule: ScheduleConfig,
    pub grid: GridConfig,
    pub tolerances: ToleranceConfig,
    pub response: ResponseConfig,
    pub temp_scan: TempScanConfig,
    pub plateau: PlateauConfig,
    pub output: OutputConfig,
}

fn require_positive(field: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::new(field, format!("must be a finite positive number, got {value}")))
    }
}

impl RunConfig {
    /// Parses a TOML document from disk.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new("<config file>", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Parses a TOML document.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new("<config file>", e.to_string()))
    }

    /// Serializes the configuration back to a TOML document; parsing the
    /// result reproduces the configuration exactly.
    pub fn echo(&self) -> String {
        toml::to_string_pretty(self).expect("run configuration serializes to TOML")
    }

    /// Structural validation for a resolved command. Constraints that belong
    /// to the science objects (schedule validity, grid monotonicity beyond
    /// the endpoints, window admissibility) are left to those constructors.
    pub fn validate(&self, command: Command) -> Result<(), ConfigError> {
        if let Some(named) = self.command {
            if named != command {
                return Err(ConfigError::new(
                    "command",
                    format!("document names `{named}` but the binary ran `{command}`"),
                ));
            }
        }
        require_positive("switching.kappa", self.switching.kappa)?;
        require_positive("switching.delta_tau_s", self.switching.delta_tau_s)?;
        require_positive("switching.delta_tau", self.switching.delta_tau)?;
        require_positive("physics.a", self.physics.a)?;
        require_positive("schedule.alpha", self.schedule.alpha)?;
        if !self.schedule.p.is_finite() {
            return Err(ConfigError::new(
                "schedule.p",
                format!("must be finite, got {}", self.schedule.p),
            ));
        }
        if let Some(l) = self.schedule.lambda_fixed {
            require_positive("schedule.lambda_fixed", l)?;
        }
        if self.grid.points < 1 {
            return Err(ConfigError::new("grid.points", "must be >= 1, got 0"));
        }
        require_positive("grid.min", self.grid.min)?;
        if !self.grid.max.is_finite() {
            return Err(ConfigError::new(
                "grid.max",
                format!("must be finite, got {}", self.grid.max),
            ));
        }
        if self.grid.points == 1 {
            if self.grid.max < self.grid.min {
                return Err(ConfigError::new("grid.max", "must be >= grid.min"));
            }
        } else if self.grid.max <= self.grid.min {
            return Err(ConfigError::new("grid.max", "must be > grid.min for multi-point grids"));
        }
        require_positive("tolerances.ln_f_abs", self.tolerances.ln_f_abs)?;
        if matches!(command, Command::Thermality | Command::Plateau)
            && self.tolerances.ln_f_abs != rindler_core::response::DEFAULT_LN_TOL
        {
            return Err(ConfigError::new(
                "tolerances.ln_f_abs",
                "the scan pipeline's quadrature target is fixed by its noise model; \
                 remove the override for scan commands",
            ));
        }
        require_positive("response.lambda", self.response.lambda)?;
        require_positive("temp_scan.e_fixed", self.temp_scan.e_fixed)?;
        if self.plateau.p_degree < 1 {
            return Err(ConfigError::new("plateau.p_degree", "must be >= 1, got 0"));
        }
        Ok(())
    }

    /// Materializes the evaluation grid. Endpoints are taken exactly; the
    /// interior is uniform in E or in ln E.
    pub fn grid_values(&self) -> Vec<f64> {
        let g = &self.grid;
        if g.points == 1 {
            return vec![g.min];
        }
        let n = g.points;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return g.min;
                }
                if k == n - 1 {
                    return g.max;
                }
                let t = k as f64 / (n - 1) as f64;
                match g.spacing {
                    Spacing::Linear => g.min + (g.max - g.min) * t,
                    Spacing::Log => (g.min.ln() + (g.max.ln() - g.min.ln()) * t).exp(),
                }
            })
            .collect()
    }

    /// Applies command-line overrides on top of the document.
    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(a) = o.a {
            self.physics.a = a;
        }
        if let Some(kappa) = o.kappa {
            self.switching.kappa = kappa;
        }
        if let Some(alpha) = o.alpha {
            self.schedule.alpha = alpha;
        }
        if let Some(p) = o.p {
            self.schedule.p = p;
        }
        if let Some(emin) = o.emin {
            self.grid.min = emin;
        }
        if let Some(emax) = o.emax {
            self.grid.max = emax;
        }
        if let Some(points) = o.points {
            self.grid.points = points;
        }
        if let Some(out) = &o.out {
            self.output.dir = Some(out.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default_configuration() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        cfg.validate(Command::Thermality).unwrap();
        assert_eq!(cfg.schedule.alpha, std::f64::consts::PI);
        assert_eq!(cfg.grid.points, 4);
    }

    #[test]
    fn echo_round_trips_exactly() {
        // parse → validate → echo → parse reproduces the configuration,
        // including a resolved command and non-default fields.
        let mut cfg = RunConfig::parse(
            "[switching]\nkind = \"plateau\"\ndelta_tau = 3.5\n\
             [grid]\nmin = 0.25\nmax = 16.0\npoints = 7\nspacing = \"linear\"\n",
        )
        .unwrap();
        cfg.command = Some(Command::Plateau);
        cfg.output.dir = Some(PathBuf::from("runs/plateau"));
        cfg.validate(Command::Plateau).unwrap();
        let echoed = RunConfig::parse(&cfg.echo()).unwrap();
        assert_eq!(echoed, cfg);
        assert_eq!(echoed.grid_values(), cfg.grid_values());
    }

    #[test]
    fn unknown_fields_and_bad_values_are_usage_errors() {
        assert!(RunConfig::parse("[gird]\npoints = 4\n").is_err());
        assert!(RunConfig::parse("[grid]\npoint = 4\n").is_err());

        let cfg = RunConfig::parse("[grid]\npoints = 0\n").unwrap();
        let err = cfg.validate(Command::Response).unwrap_err();
        assert_eq!(err.field, "grid.points");

        let cfg = RunConfig::parse("[physics]\na = -2.0\n").unwrap();
        let err = cfg.validate(Command::Spectrum).unwrap_err();
        assert_eq!(err.field, "physics.a");

        let cfg = RunConfig::parse("[tolerances]\nln_f_abs = 1e-6\n").unwrap();
        assert!(cfg.validate(Command::Response).is_ok());
        let err = cfg.validate(Command::Thermality).unwrap_err();
        assert_eq!(err.field, "tolerances.ln_f_abs");

        let mut cfg = RunConfig::default();
        cfg.command = Some(Command::Spectrum);
        let err = cfg.validate(Command::Plateau).unwrap_err();
        assert_eq!(err.field, "command");
    }

    #[test]
    fn grids_hit_endpoints_exactly_in_both_spacings() {
        let mut cfg = RunConfig::default();
        cfg.grid = GridConfig { min: 0.3, max: 19.7, points: 9, spacing: Spacing::Log };
        let g = cfg.grid_values();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.3);
        assert_eq!(g[8], 19.7);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        // Log spacing: interior ratios are equal.
        let r0 = g[1] / g[0];
        for w in g.windows(2) {
            assert!((w[1] / w[0] - r0).abs() < 1e-12 * r0);
        }

        cfg.grid.spacing = Spacing::Linear;
        let g = cfg.grid_values();
        let step = g[1] - g[0];
        for w in g.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12 * step);
        }

        cfg.grid.points = 1;
        assert_eq!(cfg.grid_values(), vec![0.3]);
    }

    #[test]
    fn overrides_land_on_the_right_fields() {
        let mut cfg = RunConfig::default();
        cfg.apply_overrides(&Overrides {
            a: Some(2.0),
            kappa: Some(0.5),
            alpha: Some(7.0),
            p: Some(3.0),
            emin: Some(1.0),
            emax: Some(64.0),
            points: Some(13),
            out: Some(PathBuf::from("elsewhere")),
        });
        assert_eq!(cfg.physics.a, 2.0);
        assert_eq!(cfg.switching.kappa, 0.5);
        assert_eq!(cfg.schedule.alpha, 7.0);
        assert_eq!(cfg.schedule.p, 3.0);
        assert_eq!(cfg.grid.min, 1.0);
        assert_eq!(cfg.grid.max, 64.0);
        assert_eq!(cfg.grid.points, 13);
        assert_eq!(cfg.output.dir.as_deref(), Some(Path::new("elsewhere")));
    }
}
