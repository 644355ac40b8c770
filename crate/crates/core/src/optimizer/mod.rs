//! Cost-index optimal cruise speed.
//!
//! With state (x, W) and costates (J_x, J_W), the Hamiltonian of the
//! minimum-DOC problem is
//!
//! ```text
//! H = (1 + J_W)·Ẇ_fuel(v, W) + J_x·v + C_I
//! ```
//!
//! where `Ẇ_fuel` is the fuel-cell weight rate. Free final time gives H = 0,
//! stationarity in `v` fixes J_x, and eliminating J_x leaves one scalar
//! equation in `v` (see [`optimality_residual`]). Multiplying that equation
//! by the square root, isolating it and squaring turns it into a degree-8
//! polynomial whose admissible positive real roots are the candidate speeds.

mod poly;
mod shooting;

pub use poly::{complex_roots, horner, real_roots};
pub use shooting::{solve_shooting, solve_shooting_with, ShootingOptions, ShootingResult};

use serde::{Deserialize, Serialize};

use crate::aero;
use crate::error::{Error, Result};
use crate::fuelcell::{self, PowerFeasibility};
use crate::model::CruiseModel;

/// Residual threshold (relative to `max(1, C_I)`) above which a polynomial
/// root is treated as an artefact of squaring.
pub const SPURIOUS_RESIDUAL_TOL: f64 = 1e-6;

/// Trade-off between time-related and fuel costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// C_I = C_t / C_H (N/s).
    pub cost_index: f64,
    /// Time-related cost per second.
    pub c_time: Option<f64>,
    /// Fuel cost per newton of hydrogen weight.
    pub c_fuel: Option<f64>,
}

impl CostModel {
    pub fn index(cost_index: f64) -> Self {
        Self {
            cost_index,
            c_time: None,
            c_fuel: None,
        }
    }

    pub fn from_rates(c_time: f64, c_fuel: f64) -> Result<Self> {
        let cost = Self {
            cost_index: c_time / c_fuel,
            c_time: Some(c_time),
            c_fuel: Some(c_fuel),
        };
        cost.validate()?;
        Ok(cost)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cost_index >= 0.0 && self.cost_index.is_finite()) {
            return Err(Error::invalid(
                "cost_index",
                format!("must be finite and non-negative, got {}", self.cost_index),
            ));
        }
        match (self.c_time, self.c_fuel) {
            (Some(ct), Some(ch)) => {
                if !(ch > 0.0) || !(ct >= 0.0) {
                    return Err(Error::invalid("c_fuel", "c_fuel must be positive and c_time non-negative"));
                }
                let ratio = ct / ch;
                if (ratio - self.cost_index).abs() > 1e-12 * self.cost_index.max(1.0) {
                    return Err(Error::invalid(
                        "cost_index",
                        format!("must equal c_time/c_fuel = {ratio}, got {}", self.cost_index),
                    ));
                }
            }
            (None, None) => {}
            _ => return Err(Error::invalid("c_time", "c_time and c_fuel must be given together")),
        }
        Ok(())
    }

    /// C_t, defaulting to C_I when only the index is known.
    pub fn time_rate(&self) -> f64 {
        self.c_time.unwrap_or(self.cost_index)
    }

    /// C_H, defaulting to 1.
    pub fn fuel_price(&self) -> f64 {
        self.c_fuel.unwrap_or(1.0)
    }
}

/// Why a real polynomial root was not accepted as a cruise speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Negative,
    DiscriminantViolating,
    SpuriousFromSquaring,
    NotAMinimum,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Negative => "negative",
            Self::DiscriminantViolating => "discriminant-violating",
            Self::SpuriousFromSquaring => "spurious-from-squaring",
            Self::NotAMinimum => "not-a-minimum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedSolution {
    /// m/s
    pub v_opt: f64,
    /// Optimality residual at `v_opt` (N/s).
    pub residual: f64,
    /// Every real root of the degree-8 polynomial, after polishing (m/s).
    pub all_real_roots: Vec<f64>,
    pub rejected_roots: Vec<(f64, RejectReason)>,
    pub j_w: f64,
    /// Position costate implied by stationarity at `v_opt`.
    pub j_x: f64,
    /// H at `v_opt` with `j_x` (N/s); zero up to round-off.
    pub hamiltonian_value: f64,
}

/// Drag and fuel-rate derivatives at one (v, W) point.
#[derive(Debug, Clone, Copy)]
struct CruiseTerms {
    drag: f64,
    drag_dv: f64,
    /// √(E_oc² − 4·r·D·v/(η·n)), strictly positive.
    root: f64,
    /// Fuel weight rate and its partials.
    f: f64,
    f_v: f64,
    f_vv: f64,
    f_w: f64,
}

fn cruise_terms(model: &CruiseModel, v: f64, w: f64) -> Result<CruiseTerms> {
    let CruiseModel {
        aircraft, fuel_cell: fc, env, ..
    } = model;
    let drag = aero::drag(aircraft, env, v, w)?;
    let drag_dv = aero::drag_dv(aircraft, env, v, w)?;
    let drag_dw = aero::drag_dw(aircraft, env, v, w)?;
    let drag_dvv = aero::drag_dvv(aircraft, env, v, w);

    let n = f64::from(fc.n_cells);
    let e = fc.open_circuit_voltage;
    let c = 4.0 * fc.internal_resistance / (fc.efficiency * n);
    let power = drag * v;
    let disc = e * e - c * power;
    if !(disc > 0.0) {
        return Err(Error::Infeasible(PowerFeasibility {
            max_net_power: fc.max_net_power(),
            requested_power: power,
            feasible: false,
        }));
    }
    let root = disc.sqrt();
    // d(D·v)/dv and d²(D·v)/dv²
    let power_v = drag_dv * v + drag;
    let power_vv = drag_dvv * v + 2.0 * drag_dv;
    let k = fc.molar_mass_h2 * env.gravity / (2.0 * fc.faraday * fc.efficiency);
    Ok(CruiseTerms {
        drag,
        drag_dv,
        root,
        f: fuelcell::stack_current(fc, power)? * n * fc.molar_mass_h2 * env.gravity / (2.0 * fc.faraday),
        f_v: k * power_v / root,
        f_vv: k * (power_vv / root + c * power_v * power_v / (2.0 * root.powi(3))),
        f_w: k * v * drag_dw / root,
    })
}

fn check_costate(j_w: f64) -> Result<()> {
    if j_w > -1.0 && j_w.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("j_w", format!("weight costate must exceed -1, got {j_w}")))
    }
}

/// Left-hand side of the optimality condition (N/s):
///
/// ```text
/// (1+J_W)·(M_H·g/2F)·[ n·(E_oc − X)/(2r) − (D_v·v² + D·v)/(η·X) ] + C_I
/// ```
///
/// with X = √(E_oc² − 4·D·r·v/(η·n)). The optimal speed is a positive root.
pub fn optimality_residual(model: &CruiseModel, cost: &CostModel, v: f64, w: f64, j_w: f64) -> Result<f64> {
    check_costate(j_w)?;
    let t = cruise_terms(model, v, w)?;
    let fc = &model.fuel_cell;
    let n = f64::from(fc.n_cells);
    let e = fc.open_circuit_voltage;
    let r = fc.internal_resistance;
    let power = t.drag * v;
    // E_oc − X without cancellation.
    let e_minus_x = 4.0 * r * power / (fc.efficiency * n * (e + t.root));
    let bracket = n * e_minus_x / (2.0 * r) - (t.drag_dv * v * v + power) / (fc.efficiency * t.root);
    let scale = (1.0 + j_w) * fc.molar_mass_h2 * model.env.gravity / (2.0 * fc.faraday);
    Ok(scale * bracket + cost.cost_index)
}

/// ∂(residual)/∂v = −(1+J_W)·v·∂²Ẇ/∂v².
fn residual_dv(t: &CruiseTerms, v: f64, j_w: f64) -> f64 {
    -(1.0 + j_w) * v * t.f_vv
}

/// Coefficients `c[0..=8]` (lowest degree first) of the polynomial whose
/// roots contain every root of [`optimality_residual`] at weight `w`.
///
/// With a = ½C_D0ρS, b = 2KW²/(ρS), κ = (1+J_W)M_H·g/(2F),
/// α = nE_oc/(2r) + C_I/κ and β = nE_oc²/(2r), the optimality condition
/// reads α·X = β + (a·v³ − 3b/v)/η. Squaring and multiplying by v² gives
///
/// ```text
/// (a·v⁴/η + β·v − 3b/η)² − α²·(E_oc²·v² − c·a·v⁵ − c·b·v) = 0,   c = 4r/(ηn)
/// ```
pub fn polynomial_coefficients(model: &CruiseModel, cost: &CostModel, w: f64, j_w: f64) -> Result<[f64; 9]> {
    check_costate(j_w)?;
    cost.validate()?;
    let CruiseModel {
        aircraft, fuel_cell: fc, env, ..
    } = model;
    let a = aircraft.parasite_factor(env);
    let b = aircraft.induced_factor(env, w);
    let n = f64::from(fc.n_cells);
    let e = fc.open_circuit_voltage;
    let r = fc.internal_resistance;
    let eta = fc.efficiency;
    let kappa = (1.0 + j_w) * fc.molar_mass_h2 * env.gravity / (2.0 * fc.faraday);
    let ci_term = cost.cost_index / kappa;
    let beta = n * e * e / (2.0 * r);
    let alpha = n * e / (2.0 * r) + ci_term;
    let c = 4.0 * r / (eta * n);
    let alpha2 = alpha * alpha;

    let mut coeffs = [0.0; 9];
    coeffs[8] = (a / eta).powi(2);
    coeffs[5] = 2.0 * a * beta / eta + alpha2 * c * a;
    coeffs[4] = -6.0 * a * b / (eta * eta);
    // β² − α²E², factored since α·E − β = E·C_I/κ.
    coeffs[2] = -(e * ci_term) * (alpha * e + beta);
    coeffs[1] = -6.0 * beta * b / eta + alpha2 * c * b;
    coeffs[0] = 9.0 * b * b / (eta * eta);
    Ok(coeffs)
}

/// H = (1+J_W)·Ẇ_fuel + J_x·v + C_I (N/s).
pub fn hamiltonian(model: &CruiseModel, cost: &CostModel, v: f64, w: f64, j_x: f64, j_w: f64) -> Result<f64> {
    check_costate(j_w)?;
    let t = cruise_terms(model, v, w)?;
    Ok((1.0 + j_w) * t.f + j_x * v + cost.cost_index)
}

/// ∂H/∂v = (1+J_W)·M_H·g·(D_v·v + D)/(2ηF·X) + J_x.
pub fn hamiltonian_dv(model: &CruiseModel, v: f64, w: f64, j_x: f64, j_w: f64) -> Result<f64> {
    check_costate(j_w)?;
    let t = cruise_terms(model, v, w)?;
    Ok((1.0 + j_w) * t.f_v + j_x)
}

/// ∂H/∂W = (1+J_W)·M_H·g·v·(∂D/∂W)/(2ηF·X).
pub fn hamiltonian_dw(model: &CruiseModel, v: f64, w: f64, j_w: f64) -> Result<f64> {
    check_costate(j_w)?;
    let t = cruise_terms(model, v, w)?;
    Ok((1.0 + j_w) * t.f_w)
}

/// J_x from stationarity ∂H/∂v = 0.
pub fn position_costate(model: &CruiseModel, v: f64, w: f64, j_w: f64) -> Result<f64> {
    check_costate(j_w)?;
    let t = cruise_terms(model, v, w)?;
    Ok(-(1.0 + j_w) * t.f_v)
}

/// dJ_W/dt = −∂H/∂W for the Hamiltonian above.
///
/// The shooting solver integrates W as decreasing, and uses the negation of
/// this rate (see [`solve_shooting`]).
pub fn costate_rate(model: &CruiseModel, v: f64, w: f64, j_w: f64) -> Result<f64> {
    Ok(-hamiltonian_dw(model, v, w, j_w)?)
}

/// Newton on the unsquared residual, kept only if it improves the residual
/// and stays near the polynomial root.
fn refine(model: &CruiseModel, cost: &CostModel, v0: f64, w: f64, j_w: f64) -> f64 {
    let eval = |v: f64| -> Option<(f64, f64)> {
        let t = cruise_terms(model, v, w).ok()?;
        let g = optimality_residual(model, cost, v, w, j_w).ok()?;
        Some((g, residual_dv(&t, v, j_w)))
    };
    let Some((mut g, mut dg)) = eval(v0) else {
        return v0;
    };
    let mut v = v0;
    for _ in 0..8 {
        if g == 0.0 || dg == 0.0 {
            break;
        }
        let next = v - g / dg;
        if (next - v0).abs() > 1e-6 * v0 {
            break;
        }
        match eval(next) {
            Some((gn, dgn)) if gn.abs() < g.abs() => {
                v = next;
                g = gn;
                dg = dgn;
            }
            _ => break,
        }
    }
    v
}

/// Second-order check: with J_x frozen at its stationarity value, H must rise
/// on both sides of `v`.
fn is_local_minimum(model: &CruiseModel, cost: &CostModel, v: f64, w: f64, j_w: f64, envelope: (f64, f64)) -> bool {
    let Ok(j_x) = position_costate(model, v, w, j_w) else {
        return false;
    };
    let delta = (1e-3 * v).min(0.5 * (v - envelope.0)).min(0.5 * (envelope.1 - v));
    if !(delta > 0.0) {
        return false;
    }
    let h = |s: f64| hamiltonian(model, cost, s, w, j_x, j_w);
    match (h(v - delta), h(v), h(v + delta)) {
        (Ok(lo), Ok(mid), Ok(hi)) => lo > mid && hi > mid,
        _ => false,
    }
}

/// Cost-index optimal speed at weight `w` and weight costate `j_w`
/// (`j_w = 0` is the constant-costate suboptimal law).
///
/// All real roots of the degree-8 polynomial are screened for sign, power
/// feasibility, the unsquared residual and the second-order condition; among
/// the survivors the one with the lowest cost per unit distance
/// (Ẇ_fuel + C_I)/v wins, ties going to the slower speed.
pub fn solve_speed(model: &CruiseModel, cost: &CostModel, w: f64, j_w: f64) -> Result<SpeedSolution> {
    cost.validate()?;
    check_costate(j_w)?;
    let CruiseModel {
        aircraft, fuel_cell: fc, env, ..
    } = model;
    let envelope = fuelcell::speed_envelope(fc, aircraft, env, w).ok_or_else(|| {
        let v_mp = aero::min_power_speed(aircraft, env, w);
        Error::Infeasible(fuelcell::feasibility(fc, aircraft, env, v_mp, w))
    })?;

    // Roots in u = v / v_max keep the companion matrix well scaled.
    let scale = envelope.1;
    let coeffs = polynomial_coefficients(model, cost, w, j_w)?;
    let mut scaled = [0.0; 9];
    for (k, (s, c)) in scaled.iter_mut().zip(coeffs).enumerate() {
        *s = c * scale.powi(k as i32);
    }
    let norm = scaled.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    scaled.iter_mut().for_each(|c| *c /= norm);

    let tol = SPURIOUS_RESIDUAL_TOL * cost.cost_index.max(1.0);
    let mut all_real_roots = Vec::new();
    let mut rejected_roots = Vec::new();
    let mut admissible = Vec::new();
    for u in real_roots(&scaled, 1e-7) {
        let v = scale * u;
        if !(v > 0.0) {
            all_real_roots.push(v);
            rejected_roots.push((v, RejectReason::Negative));
            continue;
        }
        let v = refine(model, cost, v, w, j_w);
        all_real_roots.push(v);
        let residual = match optimality_residual(model, cost, v, w, j_w) {
            Ok(g) => g,
            Err(_) => {
                rejected_roots.push((v, RejectReason::DiscriminantViolating));
                continue;
            }
        };
        if !(residual.abs() < tol) {
            rejected_roots.push((v, RejectReason::SpuriousFromSquaring));
        } else if !is_local_minimum(model, cost, v, w, j_w, envelope) {
            rejected_roots.push((v, RejectReason::NotAMinimum));
        } else {
            let rate = fuelcell::weight_rate(fc, aircraft, env, v, w)?;
            admissible.push((v, residual, (rate + cost.cost_index) / v));
        }
    }

    let best = admissible
        .iter()
        .copied()
        .reduce(|best, cand| {
            let tie = (cand.2 - best.2).abs() <= 1e-12 * best.2.abs();
            if (tie && cand.0 < best.0) || (!tie && cand.2 < best.2) {
                cand
            } else {
                best
            }
        })
        .ok_or_else(|| Error::NoSolution {
            rejected: rejected_roots.clone(),
        })?;

    let (v_opt, residual, _) = best;
    let j_x = position_costate(model, v_opt, w, j_w)?;
    Ok(SpeedSolution {
        v_opt,
        residual,
        all_real_roots,
        rejected_roots,
        j_w,
        j_x,
        hamiltonian_value: hamiltonian(model, cost, v_opt, w, j_x, j_w)?,
    })
}
