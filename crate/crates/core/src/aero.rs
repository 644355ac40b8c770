//! Steady level-cruise aerodynamics (L = W, T = D).
//!
//! Drag polar: D = ½·C_D0·ρ·S·v² + 2K·W²/(ρ·S·v²). The first term is the
//! parasite drag, the second the induced drag with the lift coefficient
//! eliminated through L = W.

use serde::{Deserialize, Serialize};

use crate::atmosphere::Environment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AircraftParams {
    /// Reference wing area (m²).
    pub wing_area: f64,
    /// Zero-lift drag coefficient.
    pub cd0: f64,
    /// Induced drag constant.
    pub k_induced: f64,
    /// Take-off weight (N).
    pub initial_weight: f64,
    /// Usable hydrogen weight on board (N).
    pub fuel_weight: f64,
}

impl AircraftParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wing_area", self.wing_area),
            ("cd0", self.cd0),
            ("k_induced", self.k_induced),
            ("initial_weight", self.initial_weight),
            ("fuel_weight", self.fuel_weight),
        ];
        for (field, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(field, format!("must be positive, got {value}")));
            }
        }
        if self.fuel_weight >= self.initial_weight {
            return Err(Error::invalid(
                "fuel_weight",
                format!(
                    "must be below initial_weight ({} >= {})",
                    self.fuel_weight, self.initial_weight
                ),
            ));
        }
        Ok(())
    }

    /// Weight with empty tanks (N).
    pub fn dry_weight(&self) -> f64 {
        self.initial_weight - self.fuel_weight
    }

    /// ½·C_D0·ρ·S, the coefficient of v² in the drag polar.
    pub(crate) fn parasite_factor(&self, env: &Environment) -> f64 {
        0.5 * self.cd0 * env.air_density * self.wing_area
    }

    /// 2K·W²/(ρ·S), the coefficient of v⁻² in the drag polar.
    pub(crate) fn induced_factor(&self, env: &Environment, w: f64) -> f64 {
        2.0 * self.k_induced * w * w / (env.air_density * self.wing_area)
    }
}

fn check_speed(v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("airspeed must be positive, got {v}")))
    }
}

/// Drag (N) at true airspeed `v` (m/s) and weight `w` (N).
pub fn drag(params: &AircraftParams, env: &Environment, v: f64, w: f64) -> Result<f64> {
    check_speed(v)?;
    let v2 = v * v;
    Ok(params.parasite_factor(env) * v2 + params.induced_factor(env, w) / v2)
}

/// ∂D/∂v (N·s/m).
pub fn drag_dv(params: &AircraftParams, env: &Environment, v: f64, w: f64) -> Result<f64> {
    check_speed(v)?;
    let rho_s = env.air_density * params.wing_area;
    Ok(params.cd0 * rho_s * v - 4.0 * params.k_induced * w * w / (rho_s * v.powi(3)))
}

/// ∂D/∂W (dimensionless).
pub fn drag_dw(params: &AircraftParams, env: &Environment, v: f64, w: f64) -> Result<f64> {
    check_speed(v)?;
    Ok(4.0 * params.k_induced * w / (env.air_density * params.wing_area * v * v))
}

/// ∂²D/∂v² (N·s²/m²).
pub(crate) fn drag_dvv(params: &AircraftParams, env: &Environment, v: f64, w: f64) -> f64 {
    2.0 * params.parasite_factor(env) + 6.0 * params.induced_factor(env, w) / v.powi(4)
}

/// Speed of minimum drag, where parasite and induced drag are equal.
pub fn min_drag_speed(params: &AircraftParams, env: &Environment, w: f64) -> f64 {
    (params.induced_factor(env, w) / params.parasite_factor(env)).powf(0.25)
}

/// Speed of minimum drag power D·v.
pub fn min_power_speed(params: &AircraftParams, env: &Environment, w: f64) -> f64 {
    (params.induced_factor(env, w) / (3.0 * params.parasite_factor(env))).powf(0.25)
}
