//! Troposphere density from the International Standard Atmosphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.80665;

const SEA_LEVEL_DENSITY: f64 = 1.225; // kg/m³
const SEA_LEVEL_TEMPERATURE: f64 = 288.15; // K
const LAPSE_RATE: f64 = 0.0065; // K/m
const GAS_CONSTANT_AIR: f64 = 287.053; // J/(kg·K)
const TROPOPAUSE: f64 = 11_000.0; // m

/// Air density (kg/m³) at `altitude_m` in the ISA troposphere.
///
/// ρ = ρ₀·(1 − L·h/T₀)^(g/(R·L) − 1)
pub fn density_at(altitude_m: f64) -> Result<f64> {
    if !(0.0..=TROPOPAUSE).contains(&altitude_m) {
        return Err(Error::OutOfRange {
            quantity: "altitude_m",
            value: altitude_m,
            range: "[0, 11000] m",
        });
    }
    let exponent = STANDARD_GRAVITY / (GAS_CONSTANT_AIR * LAPSE_RATE) - 1.0;
    let theta = 1.0 - LAPSE_RATE * altitude_m / SEA_LEVEL_TEMPERATURE;
    Ok(SEA_LEVEL_DENSITY * theta.powf(exponent))
}

/// Flight environment: density and gravity at the cruise altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Cruise altitude (m); `None` when the density was given directly.
    pub altitude_m: Option<f64>,
    /// kg/m³
    pub air_density: f64,
    /// m/s²
    pub gravity: f64,
}

impl Environment {
    pub fn at_altitude(altitude_m: f64) -> Result<Self> {
        Ok(Self {
            altitude_m: Some(altitude_m),
            air_density: density_at(altitude_m)?,
            gravity: STANDARD_GRAVITY,
        })
    }

    pub fn with_density(air_density: f64) -> Result<Self> {
        let env = Self {
            altitude_m: None,
            air_density,
            gravity: STANDARD_GRAVITY,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn with_gravity(mut self, gravity: f64) -> Result<Self> {
        self.gravity = gravity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.air_density > 0.0 && self.air_density.is_finite()) {
            return Err(Error::invalid("air_density", "must be positive"));
        }
        if !(self.gravity > 0.0 && self.gravity.is_finite()) {
            return Err(Error::invalid("gravity", "must be positive"));
        }
        if let Some(h) = self.altitude_m {
            if !(h >= 0.0) {
                return Err(Error::invalid("altitude_m", "must be non-negative"));
            }
        }
        Ok(())
    }
}
