//! JSON run configuration. All quantities are SI: m, s, N, kg, W, Ω, V.

use std::fs;
use std::path::{Path, PathBuf};

use h2cruise::atmosphere::{Environment, STANDARD_GRAVITY};
use h2cruise::mission::{check_grid, MissionMode};
use h2cruise::{AircraftParams, CostModel, CruiseModel, FuelCellParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Reference cruise speed used by `validate` when none is configured (145 km/h).
pub const DEFAULT_REFERENCE_SPEED: f64 = 145.0 / 3.6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub aircraft: AircraftParams,
    pub fuelcell: FuelCellParams,
    pub environment: EnvironmentConfig,
    #[serde(default)]
    pub cost: Option<CostConfig>,
    #[serde(default)]
    pub ci_grid: Option<GridConfig>,
    pub mission: MissionConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Dotted paths of values that are estimates rather than published data.
    #[serde(default)]
    pub estimates: Vec<String>,
}

/// Exactly one of `altitude_m` (ISA troposphere) or `air_density`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    /// m, 0 to 11000
    #[serde(default)]
    pub altitude_m: Option<f64>,
    /// kg/m³
    #[serde(default)]
    pub air_density: Option<f64>,
    /// m/s², default 9.80665
    #[serde(default)]
    pub gravity: Option<f64>,
}

/// Either `cost_index` (N/s) alone, or `c_time` and `c_fuel` together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostConfig {
    #[serde(default)]
    pub cost_index: Option<f64>,
    #[serde(default)]
    pub c_time: Option<f64>,
    #[serde(default)]
    pub c_fuel: Option<f64>,
}

/// Explicit list, or `count` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    List(Vec<f64>),
    Range(GridRange),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionConfig {
    /// Cruise distance (m).
    pub x_d: f64,
    #[serde(default = "default_mode")]
    pub mode: MissionMode,
    /// Speed (m/s) at which `validate` checks the stack.
    #[serde(default)]
    pub reference_speed: Option<f64>,
}

fn default_mode() -> MissionMode {
    MissionMode::Suboptimal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub directory: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            formats: default_formats(),
        }
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Svg]
}

impl GridConfig {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::List(v) => v.clone(),
            Self::Range(r) if r.count == 1 => vec![r.start],
            Self::Range(r) => (0..r.count)
                .map(|i| r.start + (r.stop - r.start) * i as f64 / (r.count - 1) as f64)
                .collect(),
        }
    }
}

fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> CliError {
    CliError::Config(format!("{}: {}", field.into(), constraint.into()))
}

/// Prefix a core validation error with the config section it came from.
fn in_section(section: &str, err: h2cruise::Error) -> CliError {
    match err {
        h2cruise::Error::InvalidParameter { field, reason } => invalid(format!("{section}.{field}"), reason),
        h2cruise::Error::OutOfRange { quantity, value, range } => {
            invalid(format!("{section}.{quantity}"), format!("{value} is outside {range}"))
        }
        other => invalid(section, other.to_string()),
    }
}

impl EnvironmentConfig {
    pub fn resolve(&self) -> Result<Environment, CliError> {
        let env = match (self.altitude_m, self.air_density) {
            (Some(h), None) => Environment::at_altitude(h),
            (None, Some(rho)) => Environment::with_density(rho),
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "environment",
                    "give exactly one of altitude_m or air_density, not both",
                ))
            }
            (None, None) => return Err(invalid("environment", "one of altitude_m or air_density is required")),
        }
        .map_err(|e| in_section("environment", e))?;
        env.with_gravity(self.gravity.unwrap_or(STANDARD_GRAVITY))
            .map_err(|e| in_section("environment", e))
    }
}

impl CostConfig {
    pub fn resolve(&self) -> Result<CostModel, CliError> {
        let cost = match (self.cost_index, self.c_time, self.c_fuel) {
            (Some(ci), None, None) => CostModel::index(ci),
            (None, Some(ct), Some(ch)) => CostModel::from_rates(ct, ch).map_err(|e| in_section("cost", e))?,
            _ => {
                return Err(invalid(
                    "cost",
                    "give either cost_index alone or c_time and c_fuel together",
                ))
            }
        };
        cost.validate().map_err(|e| in_section("cost", e))?;
        Ok(cost)
    }
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model()?;
        if let Some(cost) = &self.cost {
            cost.resolve()?;
        }
        if let Some(grid) = &self.ci_grid {
            if let GridConfig::Range(r) = grid {
                if r.count == 0 {
                    return Err(invalid("ci_grid.count", "must be at least 1"));
                }
                if r.count > 1 && r.stop.partial_cmp(&r.start) != Some(std::cmp::Ordering::Greater) {
                    return Err(invalid("ci_grid.stop", "must exceed start"));
                }
            }
            check_grid(&grid.values()).map_err(|e| match e {
                h2cruise::Error::InvalidParameter { reason, .. } => invalid("ci_grid", reason),
                other => invalid("ci_grid", other.to_string()),
            })?;
        }
        if !(self.mission.x_d > 0.0 && self.mission.x_d.is_finite()) {
            return Err(invalid("mission.x_d", "must be positive and finite"));
        }
        if let Some(v) = self.mission.reference_speed {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid("mission.reference_speed", "must be positive and finite"));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> Result<CruiseModel, CliError> {
        self.aircraft.validate().map_err(|e| in_section("aircraft", e))?;
        self.fuelcell.validate().map_err(|e| in_section("fuelcell", e))?;
        let env = self.environment.resolve()?;
        Ok(CruiseModel {
            aircraft: self.aircraft,
            fuel_cell: self.fuelcell,
            env,
        })
    }

    /// Configured cost model, or `C_I` from the command line when given.
    pub fn cost(&self, ci_override: Option<f64>) -> Result<CostModel, CliError> {
        match (ci_override, &self.cost) {
            (Some(ci), _) => CostConfig {
                cost_index: Some(ci),
                c_time: None,
                c_fuel: None,
            }
            .resolve(),
            (None, Some(c)) => c.resolve(),
            (None, None) => Err(invalid("cost", "no cost in the config; pass --ci")),
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        self.ci_grid
            .as_ref()
            .map(GridConfig::values)
            .ok_or_else(|| invalid("ci_grid", "required for sweeps"))
    }

    pub fn reference_speed(&self) -> f64 {
        self.mission.reference_speed.unwrap_or(DEFAULT_REFERENCE_SPEED)
    }

    pub fn wants(&self, format: Format) -> bool {
        self.output.formats.contains(&format)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    RunConfig::from_json(&text, &path.display().to_string())
}
