//! Cruise propagation shared by the quasi-steady and shooting solvers.

use serde::{Deserialize, Serialize};

use crate::aero;
use crate::error::{Error, Result};
use crate::fuelcell;
use crate::model::CruiseModel;
use crate::ode::rk4_step;
use crate::optimizer::{self, CostModel};

/// Instantaneous cruise state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CruiseState {
    /// s
    pub t: f64,
    /// m
    pub x: f64,
    /// N
    pub w: f64,
    /// m/s
    pub v: f64,
    pub j_w: f64,
}

/// Integrals accumulated alongside the state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CruiseTotals {
    /// s
    pub t_f: f64,
    /// N
    pub final_weight: f64,
    pub final_j_w: f64,
    /// ∫I dt (C per cell).
    pub charge: f64,
    /// ∫η·n·U_c·I dt (J).
    pub electrical_energy: f64,
    /// ∫D·v dt (J).
    pub propulsive_energy: f64,
    /// ∫Ẇ_fuel dt (N).
    pub fuel_weight_burned: f64,
}

const X: usize = 0;
const W: usize = 1;
const JW: usize = 2;
const CHARGE: usize = 3;
const ELEC: usize = 4;
const PROP: usize = 5;
const FUEL: usize = 6;

type State = [f64; 7];

pub(crate) struct Propagator<'a> {
    pub model: &'a CruiseModel,
    pub cost: &'a CostModel,
    pub x_d: f64,
    /// RK4 time step (s).
    pub step: f64,
    /// Fraction of burned hydrogen weight removed from W (1 = physical).
    pub weight_coupling: f64,
    pub evolve_costate: bool,
}

impl Propagator<'_> {
    fn speed(&self, y: &State) -> Result<f64> {
        Ok(optimizer::solve_speed(self.model, self.cost, y[W], y[JW])?.v_opt)
    }

    fn rates(&self, y: &State) -> Result<State> {
        let CruiseModel {
            aircraft, fuel_cell: fc, env, ..
        } = self.model;
        let v = self.speed(y)?;
        let drag = aero::drag(aircraft, env, v, y[W])?;
        let current = fuelcell::stack_current(fc, drag * v)?;
        let fuel_rate = fc.hydrogen_flow(current) * env.gravity;
        // W decreases, so the adjoint of the integrated weight obeys
        // J_W' = +∂H/∂W, the negative of the textbook rate.
        let j_rate = if self.evolve_costate {
            -self.weight_coupling * optimizer::costate_rate(self.model, v, y[W], y[JW])?
        } else {
            0.0
        };
        Ok([
            v,
            -self.weight_coupling * fuel_rate,
            j_rate,
            current,
            fc.efficiency * f64::from(fc.n_cells) * fc.cell_voltage(current) * current,
            drag * v,
            fuel_rate,
        ])
    }

    /// Integrates from x = 0 until x = x_d, landing the last step exactly on
    /// the destination.
    pub fn run(&self, w0: f64, j_w0: f64) -> Result<(Vec<CruiseState>, CruiseTotals)> {
        if !(self.x_d > 0.0) {
            return Err(Error::invalid("x_d", "destination distance must be positive"));
        }
        if !(self.step > 0.0) {
            return Err(Error::invalid("step", "integration step must be positive"));
        }
        let fuel_capacity = self.model.aircraft.fuel_weight;
        let mut rhs = |_t: f64, y: &State| self.rates(y);

        let mut t = 0.0;
        let mut y: State = [0.0, w0, j_w0, 0.0, 0.0, 0.0, 0.0];
        let mut samples = vec![CruiseState {
            t,
            x: 0.0,
            w: w0,
            v: self.speed(&y)?,
            j_w: j_w0,
        }];
        let max_steps = 1_000_000usize;
        loop {
            if samples.len() > max_steps {
                return Err(Error::Domain("cruise integration exceeded the step budget".into()));
            }
            let v_now = samples.last().map(|s| s.v).unwrap_or_default();
            let mut h = self.step;
            let mut next = rk4_step(&mut rhs, t, &y, h)?;
            let landing = next[X] >= self.x_d;
            if landing {
                // Newton on the step length so that x(t + h) = x_d.
                h = (self.x_d - y[X]) / v_now;
                for _ in 0..30 {
                    next = rk4_step(&mut rhs, t, &y, h)?;
                    let miss = next[X] - self.x_d;
                    if miss.abs() <= 1e-12 * self.x_d {
                        break;
                    }
                    h -= miss * h / (next[X] - y[X]);
                }
                next[X] = self.x_d;
            }
            t += h;
            y = next;
            if y[FUEL] > fuel_capacity {
                return Err(Error::RangeExceeded { x: y[X], t });
            }
            samples.push(CruiseState {
                t,
                x: y[X],
                w: y[W],
                v: self.speed(&y)?,
                j_w: y[JW],
            });
            if landing {
                break;
            }
        }
        let totals = CruiseTotals {
            t_f: t,
            final_weight: y[W],
            final_j_w: y[JW],
            charge: y[CHARGE],
            electrical_energy: y[ELEC],
            propulsive_energy: y[PROP],
            fuel_weight_burned: y[FUEL],
        };
        Ok((samples, totals))
    }
}
