//! Single-shooting on the initial weight costate.
//!
//! For a trial J_W(0) the cruise is propagated with the speed re-solved from
//! the optimality condition at every stage and J_W integrated alongside W.
//! The terminal weight is free, so J_W(t_f) = 0; a secant iteration on J_W(0)
//! drives the miss to zero.

use serde::{Deserialize, Serialize};

use super::{hamiltonian, position_costate, solve_speed, CostModel};
use crate::error::{Error, Result};
use crate::model::CruiseModel;
use crate::trajectory::{CruiseState, CruiseTotals, Propagator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingOptions {
    /// RK4 steps per estimated flight time.
    pub steps: usize,
    pub max_iterations: usize,
    /// Fraction of burned hydrogen weight removed from the aircraft; 0 is the
    /// negligible-fuel-mass limit.
    pub weight_coupling: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            steps: 2000,
            max_iterations: 30,
            weight_coupling: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub j_w0: f64,
    pub trajectory: Vec<CruiseState>,
    pub terminal_jw: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Position costate at t = 0.
    pub j_x: f64,
    /// max |H(t) − H(0)| with J_x held at its initial value, relative to the
    /// largest of (1+J_W)·Ẇ_fuel + C_I along the path.
    pub hamiltonian_drift: f64,
    /// max |J_x(t) − J_x(0)| / |J_x(0)| with J_x(t) from stationarity.
    pub position_costate_drift: f64,
    pub totals: CruiseTotals,
}

/// Shooting with default options. `tol` bounds |J_W(t_f)|.
pub fn solve_shooting(model: &CruiseModel, cost: &CostModel, x_d: f64, w0: f64, tol: f64) -> Result<ShootingResult> {
    solve_shooting_with(model, cost, x_d, w0, tol, &ShootingOptions::default())
}

pub fn solve_shooting_with(
    model: &CruiseModel,
    cost: &CostModel,
    x_d: f64,
    w0: f64,
    tol: f64,
    opts: &ShootingOptions,
) -> Result<ShootingResult> {
    if !(0.0..=1.0).contains(&opts.weight_coupling) {
        return Err(Error::invalid("weight_coupling", "must lie in [0, 1]"));
    }
    if opts.steps == 0 {
        return Err(Error::invalid("steps", "must be positive"));
    }
    let v_guess = solve_speed(model, cost, w0, 0.0)?.v_opt;
    let propagator = Propagator {
        model,
        cost,
        x_d,
        step: x_d / v_guess / opts.steps as f64,
        weight_coupling: opts.weight_coupling,
        evolve_costate: true,
    };
    let shoot = |j0: f64| propagator.run(w0, j0);

    let mut history = Vec::new();
    let mut j_prev = 0.0;
    let (mut run, mut totals) = shoot(j_prev)?;
    let mut miss_prev = totals.final_j_w;
    history.push((j_prev, miss_prev));
    // J_W moves by roughly the same amount along every trial, so shifting the
    // start by the miss is a good second point.
    let mut j_curr = -miss_prev;
    let mut iterations = 1;
    while miss_prev.abs() >= tol {
        if iterations >= opts.max_iterations {
            return Err(Error::ShootingDiverged {
                history,
                last_miss: miss_prev.abs(),
            });
        }
        let (r, t) = shoot(j_curr)?;
        iterations += 1;
        let miss = t.final_j_w;
        history.push((j_curr, miss));
        run = r;
        totals = t;
        if miss.abs() < tol {
            miss_prev = miss;
            j_prev = j_curr;
            break;
        }
        let slope = (miss - miss_prev) / (j_curr - j_prev);
        if !(slope.is_finite() && slope != 0.0) {
            return Err(Error::ShootingDiverged {
                history,
                last_miss: miss.abs(),
            });
        }
        j_prev = j_curr;
        miss_prev = miss;
        j_curr -= miss / slope;
    }

    let first = run[0];
    let j_x = position_costate(model, first.v, first.w, first.j_w)?;
    let mut h_ref = None;
    let mut drift: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut jx_drift: f64 = 0.0;
    for s in &run {
        let h = hamiltonian(model, cost, s.v, s.w, j_x, s.j_w)?;
        let h0 = *h_ref.get_or_insert(h);
        drift = drift.max((h - h0).abs());
        scale = scale.max((h - j_x * s.v).abs());
        let jx_t = position_costate(model, s.v, s.w, s.j_w)?;
        jx_drift = jx_drift.max(((jx_t - j_x) / j_x).abs());
    }

    Ok(ShootingResult {
        j_w0: j_prev,
        terminal_jw: miss_prev,
        trajectory: run,
        iterations,
        converged: true,
        j_x,
        hamiltonian_drift: if scale > 0.0 { drift / scale } else { drift },
        position_costate_drift: jx_drift,
        totals,
    })
}
