//! Cruise missions from x = 0 to x_d and cost-index sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CruiseModel;
use crate::optimizer::{self, CostModel, ShootingOptions};
use crate::trajectory::Propagator;

pub use crate::trajectory::{CruiseState, CruiseTotals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissionMode {
    /// Speed re-solved with J_W = 0 at the current weight every stage.
    Suboptimal,
    /// Speed from the converged shooting trajectory.
    Optimal,
}

impl fmt::Display for MissionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Suboptimal => "suboptimal",
            Self::Optimal => "optimal",
        })
    }
}

impl FromStr for MissionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "suboptimal" => Ok(Self::Suboptimal),
            "optimal" => Ok(Self::Optimal),
            other => Err(format!("unknown mission mode `{other}` (expected suboptimal or optimal)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissionOptions {
    /// RK4 steps over the estimated flight time.
    pub steps: usize,
    /// Fraction of burned hydrogen weight removed from W. 1 is physical; 0
    /// holds the weight constant (negligible fuel mass).
    pub weight_coupling: f64,
    /// Tolerance on |J_W(t_f)| in optimal mode.
    pub shooting_tol: f64,
    pub max_shooting_iterations: usize,
}

impl Default for MissionOptions {
    fn default() -> Self {
        Self {
            steps: 2000,
            weight_coupling: 1.0,
            shooting_tol: 1e-10,
            max_shooting_iterations: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingDiagnostics {
    pub j_w0: f64,
    pub terminal_jw: f64,
    pub iterations: usize,
    pub j_x: f64,
    pub hamiltonian_drift: f64,
    pub position_costate_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionResult {
    pub mode: MissionMode,
    pub cost: CostModel,
    /// m
    pub x_d: f64,
    /// s
    pub t_f: f64,
    /// N
    pub fuel_burned_n: f64,
    /// kg
    pub fuel_burned_kg: f64,
    /// ∫(C_t + C_H·Ẇ_fuel) dt
    pub doc: f64,
    /// Full-resolution trajectory.
    pub samples: Vec<CruiseState>,
    pub totals: CruiseTotals,
    pub shooting: Option<ShootingDiagnostics>,
}

impl MissionResult {
    /// Speed at departure (m/s).
    pub fn initial_speed(&self) -> f64 {
        self.samples[0].v
    }

    /// Time-averaged speed from the sampled trajectory (trapezoidal rule).
    pub fn average_speed(&self) -> f64 {
        let integral: f64 = self
            .samples
            .windows(2)
            .map(|p| 0.5 * (p[0].v + p[1].v) * (p[1].t - p[0].t))
            .sum();
        integral / self.t_f
    }

    /// At most `max_rows` samples, evenly strided, always keeping both ends.
    pub fn decimated(&self, max_rows: usize) -> Vec<CruiseState> {
        let n = self.samples.len();
        if n <= max_rows || max_rows < 2 {
            return self.samples.clone();
        }
        (0..max_rows)
            .map(|i| self.samples[i * (n - 1) / (max_rows - 1)])
            .collect()
    }

    pub fn pareto_point(&self) -> ParetoPoint {
        ParetoPoint {
            cost_index: self.cost.cost_index,
            v_avg: self.average_speed(),
            t_f: self.t_f,
            fuel_burned: self.fuel_burned_kg,
            doc: self.doc,
        }
    }
}

/// Flight time against fuel burned for one cost index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub cost_index: f64,
    /// m/s
    pub v_avg: f64,
    /// s
    pub t_f: f64,
    /// kg
    pub fuel_burned: f64,
    pub doc: f64,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub cost_index: f64,
    /// Optimal speed at departure weight (m/s), when it exists.
    pub v_initial: Option<f64>,
    pub outcome: std::result::Result<ParetoPoint, Error>,
}

pub fn simulate(model: &CruiseModel, cost: &CostModel, x_d: f64, mode: MissionMode) -> Result<MissionResult> {
    simulate_with(model, cost, x_d, mode, &MissionOptions::default())
}

pub fn simulate_with(
    model: &CruiseModel,
    cost: &CostModel,
    x_d: f64,
    mode: MissionMode,
    opts: &MissionOptions,
) -> Result<MissionResult> {
    model.validate()?;
    cost.validate()?;
    if !(x_d > 0.0 && x_d.is_finite()) {
        return Err(Error::invalid("x_d", format!("must be positive, got {x_d}")));
    }
    if !(0.0..=1.0).contains(&opts.weight_coupling) {
        return Err(Error::invalid("weight_coupling", "must lie in [0, 1]"));
    }
    if opts.steps == 0 {
        return Err(Error::invalid("steps", "must be positive"));
    }
    let w0 = model.aircraft.initial_weight;
    let (samples, totals, shooting) = match mode {
        MissionMode::Suboptimal => {
            let v0 = optimizer::solve_speed(model, cost, w0, 0.0)?.v_opt;
            let propagator = Propagator {
                model,
                cost,
                x_d,
                step: x_d / v0 / opts.steps as f64,
                weight_coupling: opts.weight_coupling,
                evolve_costate: false,
            };
            let (samples, totals) = propagator.run(w0, 0.0)?;
            (samples, totals, None)
        }
        MissionMode::Optimal => {
            let shoot_opts = ShootingOptions {
                steps: opts.steps,
                max_iterations: opts.max_shooting_iterations,
                weight_coupling: opts.weight_coupling,
            };
            let r = optimizer::solve_shooting_with(model, cost, x_d, w0, opts.shooting_tol, &shoot_opts)?;
            let diag = ShootingDiagnostics {
                j_w0: r.j_w0,
                terminal_jw: r.terminal_jw,
                iterations: r.iterations,
                j_x: r.j_x,
                hamiltonian_drift: r.hamiltonian_drift,
                position_costate_drift: r.position_costate_drift,
            };
            (r.trajectory, r.totals, Some(diag))
        }
    };
    let fuel_burned_n = totals.fuel_weight_burned;
    log::debug!(
        "{mode} mission C_I={}: t_f={:.1} s, fuel={:.4} kg, {} samples",
        cost.cost_index,
        totals.t_f,
        fuel_burned_n / model.env.gravity,
        samples.len()
    );
    Ok(MissionResult {
        mode,
        cost: *cost,
        x_d,
        t_f: totals.t_f,
        fuel_burned_n,
        fuel_burned_kg: model.mass_of(fuel_burned_n),
        doc: cost.time_rate() * totals.t_f + cost.fuel_price() * fuel_burned_n,
        samples,
        totals,
        shooting,
    })
}

/// Sweep grids must be non-empty, non-negative and strictly increasing.
pub fn check_grid(ci_grid: &[f64]) -> Result<()> {
    if ci_grid.is_empty() {
        return Err(Error::invalid("ci_grid", "must not be empty"));
    }
    if ci_grid.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
        return Err(Error::invalid("ci_grid", "values must be finite and non-negative"));
    }
    if ci_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::invalid("ci_grid", "must be strictly increasing"));
    }
    Ok(())
}

/// One solve and one mission per cost index. Failures are kept per point and
/// do not stop the sweep.
pub fn sweep_cost_index(
    model: &CruiseModel,
    ci_grid: &[f64],
    x_d: f64,
    mode: MissionMode,
) -> Result<Vec<SweepPoint>> {
    sweep_cost_index_with(model, ci_grid, x_d, mode, &MissionOptions::default())
}

pub fn sweep_cost_index_with(
    model: &CruiseModel,
    ci_grid: &[f64],
    x_d: f64,
    mode: MissionMode,
    opts: &MissionOptions,
) -> Result<Vec<SweepPoint>> {
    check_grid(ci_grid)?;
    model.validate()?;
    let w0 = model.aircraft.initial_weight;
    Ok(ci_grid
        .par_iter()
        .map(|&ci| {
            let cost = CostModel::index(ci);
            let v_initial = optimizer::solve_speed(model, &cost, w0, 0.0).ok().map(|s| s.v_opt);
            let outcome = simulate_with(model, &cost, x_d, mode, opts).map(|r| r.pareto_point());
            if let Err(e) = &outcome {
                log::warn!("sweep point C_I={ci} failed: {e}");
            }
            SweepPoint {
                cost_index: ci,
                v_initial,
                outcome,
            }
        })
        .collect())
}

/// Index pairs `(i, j)` where point `j` strictly dominates point `i`.
pub fn dominated_pairs(points: &[ParetoPoint]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if q.t_f < p.t_f && q.fuel_burned < p.fuel_burned {
                out.push((i, j));
            }
        }
    }
    out
}
