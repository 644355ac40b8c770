//! Fuel-cell chain in the ohmic region: propulsive power → stack current →
//! hydrogen flow → weight rate.
//!
//! Each of the `n` series cells delivers `U_c = E_oc − I·r`. The power balance
//! `D·v = η·n·U_c·I` is a quadratic in `I`; the smaller root is the operating
//! point, and it exists only while `E_oc² − 4·r·D·v/(η·n) ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::aero::{self, AircraftParams};
use crate::atmosphere::Environment;
use crate::error::{Error, Result};

pub const MOLAR_MASS_H2: f64 = 2.016e-3; // kg/mol
pub const FARADAY: f64 = 96_485.332; // C/mol

/// Relative band below zero in which a negative discriminant is treated as
/// round-off and clamped.
const DISCRIMINANT_EPS: f64 = 1e-12;

fn default_molar_mass() -> f64 {
    MOLAR_MASS_H2
}

fn default_faraday() -> f64 {
    FARADAY
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelCellParams {
    pub n_cells: u32,
    /// Ω per cell.
    pub internal_resistance: f64,
    /// V per cell.
    pub open_circuit_voltage: f64,
    /// Propulsive efficiency from stack electrical power to thrust power.
    pub efficiency: f64,
    #[serde(default = "default_molar_mass")]
    pub molar_mass_h2: f64,
    #[serde(default = "default_faraday")]
    pub faraday: f64,
}

impl FuelCellParams {
    pub fn new(n_cells: u32, internal_resistance: f64, open_circuit_voltage: f64, efficiency: f64) -> Self {
        Self {
            n_cells,
            internal_resistance,
            open_circuit_voltage,
            efficiency,
            molar_mass_h2: MOLAR_MASS_H2,
            faraday: FARADAY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 1 {
            return Err(Error::invalid("n_cells", "must be at least 1"));
        }
        for (field, value) in [
            ("internal_resistance", self.internal_resistance),
            ("open_circuit_voltage", self.open_circuit_voltage),
            ("molar_mass_h2", self.molar_mass_h2),
            ("faraday", self.faraday),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(field, format!("must be positive, got {value}")));
            }
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::invalid(
                "efficiency",
                format!("must lie in (0, 1], got {}", self.efficiency),
            ));
        }
        Ok(())
    }

    fn n(&self) -> f64 {
        f64::from(self.n_cells)
    }

    /// Largest thrust power the stack can sustain, E_oc²·η·n/(4r) (W).
    pub fn max_net_power(&self) -> f64 {
        self.open_circuit_voltage.powi(2) * self.efficiency * self.n() / (4.0 * self.internal_resistance)
    }

    /// E_oc² − 4·r·P/(η·n), or `None` outside the envelope.
    fn discriminant(&self, net_power: f64) -> Option<f64> {
        let e2 = self.open_circuit_voltage.powi(2);
        let disc = e2 - 4.0 * self.internal_resistance * net_power / (self.efficiency * self.n());
        if disc >= 0.0 {
            Some(disc)
        } else if disc >= -DISCRIMINANT_EPS * e2 {
            Some(0.0)
        } else {
            None
        }
    }

    /// Cell terminal voltage at stack current `current` (V).
    pub fn cell_voltage(&self, current: f64) -> f64 {
        self.open_circuit_voltage - current * self.internal_resistance
    }

    /// Hydrogen mass flow of the whole stack at `current` (kg/s).
    pub fn hydrogen_flow(&self, current: f64) -> f64 {
        self.n() * current * self.molar_mass_h2 / (2.0 * self.faraday)
    }
}

/// Power demand checked against the stack envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFeasibility {
    pub max_net_power: f64,
    pub requested_power: f64,
    pub feasible: bool,
}

impl PowerFeasibility {
    /// `max_net_power − requested_power` (W).
    pub fn margin(&self) -> f64 {
        self.max_net_power - self.requested_power
    }
}

/// Charge released per cell by consuming `m_h` kg of hydrogen, Q = 2F·m/M (C).
pub fn charge_from_mass(fc: &FuelCellParams, m_h: f64) -> Result<f64> {
    if !(m_h >= 0.0) {
        return Err(Error::Domain(format!("hydrogen mass must be non-negative, got {m_h}")));
    }
    Ok(2.0 * fc.faraday * m_h / fc.molar_mass_h2)
}

/// Stack current (A) delivering `net_power` W of thrust power.
///
/// Smaller root of r·I² − E_oc·I + P/(η·n) = 0, evaluated in the
/// cancellation-free form 2P/(η·n·(E_oc + √disc)).
pub fn stack_current(fc: &FuelCellParams, net_power: f64) -> Result<f64> {
    if !(net_power >= 0.0) {
        return Err(Error::Domain(format!("net power must be non-negative, got {net_power}")));
    }
    let disc = fc.discriminant(net_power).ok_or_else(|| {
        Error::Infeasible(PowerFeasibility {
            max_net_power: fc.max_net_power(),
            requested_power: net_power,
            feasible: false,
        })
    })?;
    Ok(2.0 * net_power / (fc.efficiency * fc.n() * (fc.open_circuit_voltage + disc.sqrt())))
}

/// Envelope check for cruising at `v` with weight `w`. Never fails for valid
/// inputs; a non-positive speed reports an infinite demand.
pub fn feasibility(
    fc: &FuelCellParams,
    params: &AircraftParams,
    env: &Environment,
    v: f64,
    w: f64,
) -> PowerFeasibility {
    let requested_power = aero::drag(params, env, v, w).map_or(f64::INFINITY, |d| d * v);
    PowerFeasibility {
        max_net_power: fc.max_net_power(),
        requested_power,
        feasible: fc.discriminant(requested_power).is_some(),
    }
}

/// Stack current (A) in steady cruise at `v` and `w`.
pub fn cruise_current(
    fc: &FuelCellParams,
    params: &AircraftParams,
    env: &Environment,
    v: f64,
    w: f64,
) -> Result<f64> {
    let d = aero::drag(params, env, v, w)?;
    stack_current(fc, d * v)
}

/// Rate of weight loss (N/s) in steady cruise, n·M_H·g·I/(2F).
///
/// Returned as a non-negative magnitude: the aircraft weight evolves as
/// `W' = −weight_rate`.
pub fn weight_rate(
    fc: &FuelCellParams,
    params: &AircraftParams,
    env: &Environment,
    v: f64,
    w: f64,
) -> Result<f64> {
    let current = cruise_current(fc, params, env, v, w)?;
    Ok(fc.hydrogen_flow(current) * env.gravity)
}

/// Rate of change of cell charge, Q' = −I (C/s), from the explicit
/// speed-and-weight form of the current.
pub fn charge_rate(
    fc: &FuelCellParams,
    params: &AircraftParams,
    env: &Environment,
    v: f64,
    w: f64,
) -> Result<f64> {
    let requested = aero::drag(params, env, v, w)? * v;
    if fc.discriminant(requested).is_none() {
        return Err(Error::Infeasible(feasibility(fc, params, env, v, w)));
    }
    let (e, r) = (fc.open_circuit_voltage, fc.internal_resistance);
    let eta_n = fc.efficiency * fc.n();
    let rho_s = env.air_density * params.wing_area;
    let bracket = params.cd0 * rho_s * v.powi(3) + 4.0 * params.k_induced * w * w / (rho_s * v);
    let radicand = ((eta_n * e).powi(2) - 2.0 * eta_n * r * bracket).max(0.0);
    Ok(-e / (2.0 * r) + radicand.sqrt() / (2.0 * eta_n * r))
}

/// Speeds `[v_lo, v_hi]` at which cruise power stays inside the envelope, or
/// `None` when even the minimum-power speed is infeasible.
pub fn speed_envelope(
    fc: &FuelCellParams,
    params: &AircraftParams,
    env: &Environment,
    w: f64,
) -> Option<(f64, f64)> {
    let a = params.parasite_factor(env);
    let b = params.induced_factor(env, w);
    let power = |v: f64| a * v.powi(3) + b / v;
    // Exact sign here, so the edges sit strictly inside the round-off band.
    let e2 = fc.open_circuit_voltage.powi(2);
    let c = 4.0 * fc.internal_resistance / (fc.efficiency * fc.n());
    let feasible = |v: f64| e2 - c * power(v) >= 0.0;
    let v_min_power = (b / (3.0 * a)).powf(0.25);
    if !feasible(v_min_power) {
        return None;
    }
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if feasible(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let mut lo_out = 0.5 * v_min_power;
    while feasible(lo_out) {
        lo_out *= 0.5;
    }
    let mut hi_out = 2.0 * v_min_power;
    while feasible(hi_out) {
        hi_out *= 2.0;
    }
    Some((bisect(v_min_power, lo_out), bisect(v_min_power, hi_out)))
}
