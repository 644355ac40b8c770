//! Text reports: speed-change cross-check, frontier validation, stack checks.

use std::fmt::Write;

use h2cruise::fuelcell::{self, PowerFeasibility};
use h2cruise::CruiseModel;

use crate::exit;
use crate::output::Row;

/// Published claim for going from 151 to 171 km/h: about 20 minutes saved.
pub const CLAIMED_TIME_SAVING_MIN: f64 = 20.0;
/// Published claim for the same change: under 5 kg of extra hydrogen.
pub const CLAIMED_EXTRA_FUEL_KG: f64 = 5.0;
pub const SLOW_KMH: f64 = 151.0;
pub const FAST_KMH: f64 = 171.0;

/// A sweep point with every mission output present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlownPoint {
    pub cost_index: f64,
    /// Mean speed over the mission (m/s).
    pub v_avg: f64,
    pub t_f: f64,
    pub fuel_kg: f64,
}

impl FlownPoint {
    pub fn from_rows(rows: &[Row]) -> Vec<Self> {
        rows.iter()
            .filter_map(|r| {
                Some(Self {
                    cost_index: r.cost_index,
                    v_avg: r.v_mps?,
                    t_f: r.t_f?,
                    fuel_kg: r.fuel_kg?,
                })
            })
            .collect()
    }
}

/// Mission time and fuel interpolated at one mean speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub v_kmh: f64,
    /// Cost indices of the two grid points around `v_kmh`.
    pub ci: (f64, f64),
    pub t_f: f64,
    pub fuel_kg: f64,
    /// max over the two points of |t_f − x_d/v̄| / t_f.
    pub kinematic_mismatch: f64,
}

fn bracket(points: &[FlownPoint], v_kmh: f64, x_d: f64) -> Option<Bracket> {
    let v = v_kmh / 3.6;
    let pair = points.windows(2).find(|p| p[0].v_avg <= v && v <= p[1].v_avg)?;
    let (a, b) = (pair[0], pair[1]);
    let s = if b.v_avg > a.v_avg { (v - a.v_avg) / (b.v_avg - a.v_avg) } else { 0.0 };
    let mismatch = |p: FlownPoint| (p.t_f - x_d / p.v_avg).abs() / p.t_f;
    Some(Bracket {
        v_kmh,
        ci: (a.cost_index, b.cost_index),
        t_f: a.t_f + s * (b.t_f - a.t_f),
        fuel_kg: a.fuel_kg + s * (b.fuel_kg - a.fuel_kg),
        kinematic_mismatch: mismatch(a).max(mismatch(b)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedChange {
    pub slow: Bracket,
    pub fast: Bracket,
    pub x_d: f64,
}

impl SpeedChange {
    pub fn time_saving_min(&self) -> f64 {
        (self.slow.t_f - self.fast.t_f) / 60.0
    }

    pub fn extra_fuel_kg(&self) -> f64 {
        self.fast.fuel_kg - self.slow.fuel_kg
    }

    /// Pure kinematic saving x_d/v_slow − x_d/v_fast (min).
    pub fn kinematic_saving_min(&self) -> f64 {
        (self.x_d / (self.slow.v_kmh / 3.6) - self.x_d / (self.fast.v_kmh / 3.6)) / 60.0
    }

    /// Flight times agree with x_d / mean speed within 1 %.
    pub fn consistent(&self) -> bool {
        self.slow.kinematic_mismatch < 0.01 && self.fast.kinematic_mismatch < 0.01
    }

    pub fn time_claim_holds(&self) -> bool {
        (self.time_saving_min() - CLAIMED_TIME_SAVING_MIN).abs() <= 0.25 * CLAIMED_TIME_SAVING_MIN
    }

    pub fn fuel_claim_holds(&self) -> bool {
        self.extra_fuel_kg() < CLAIMED_EXTRA_FUEL_KG
    }
}

/// Points must be in sweep order (increasing cost index, hence speed).
pub fn speed_change(points: &[FlownPoint], x_d: f64) -> Option<SpeedChange> {
    Some(SpeedChange {
        slow: bracket(points, SLOW_KMH, x_d)?,
        fast: bracket(points, FAST_KMH, x_d)?,
        x_d,
    })
}

pub fn render_speed_change(change: Option<&SpeedChange>) -> String {
    let mut s = String::from("speed change 151 -> 171 km/h\n");
    let Some(c) = change else {
        s.push_str("  not bracketed by the sweep grid; widen ci_grid\n");
        return s;
    };
    let flag = |ok: bool| if ok { "PASS" } else { "FLAG" };
    let _ = writeln!(
        s,
        "  C_I brackets: 151 km/h in [{:.6}, {:.6}], 171 km/h in [{:.6}, {:.6}]",
        c.slow.ci.0, c.slow.ci.1, c.fast.ci.0, c.fast.ci.1
    );
    let _ = writeln!(
        s,
        "  t_f: {:.2} min -> {:.2} min; fuel: {:.4} kg -> {:.4} kg",
        c.slow.t_f / 60.0,
        c.fast.t_f / 60.0,
        c.slow.fuel_kg,
        c.fast.fuel_kg
    );
    let _ = writeln!(
        s,
        "  time saved {:.2} min (kinematic {:.2} min over {:.0} km); claimed roughly {CLAIMED_TIME_SAVING_MIN} min: {}",
        c.time_saving_min(),
        c.kinematic_saving_min(),
        c.x_d / 1000.0,
        flag(c.time_claim_holds())
    );
    let _ = writeln!(
        s,
        "  extra fuel {:.3} kg; claimed less than {CLAIMED_EXTRA_FUEL_KG} kg: {}",
        c.extra_fuel_kg(),
        flag(c.fuel_claim_holds())
    );
    let _ = writeln!(
        s,
        "  consistency t_f vs x_d/v_avg: max deviation {:.3e}: {}",
        c.slow.kinematic_mismatch.max(c.fast.kinematic_mismatch),
        if c.consistent() { "PASS" } else { "FAIL" }
    );
    s
}

/// Shape of a time-vs-fuel curve in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierCheck {
    pub points: usize,
    pub t_f_decreasing: bool,
    pub fuel_increasing: bool,
    /// `(i, j)`: point `j` beats point `i` on both time and fuel.
    pub dominated: Vec<(usize, usize)>,
    /// |Δfuel/Δt_f| (kg/s) between consecutive points.
    pub slopes: Vec<f64>,
    pub steepening: bool,
}

impl FrontierCheck {
    pub fn passed(&self) -> bool {
        self.points >= 2 && self.t_f_decreasing && self.fuel_increasing && self.dominated.is_empty() && self.steepening
    }
}

pub fn check_frontier(points: &[FlownPoint]) -> FrontierCheck {
    let mut dominated = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if q.t_f < p.t_f && q.fuel_kg < p.fuel_kg {
                dominated.push((i, j));
            }
        }
    }
    let slopes: Vec<f64> = points
        .windows(2)
        .map(|p| ((p[1].fuel_kg - p[0].fuel_kg) / (p[1].t_f - p[0].t_f)).abs())
        .collect();
    FrontierCheck {
        points: points.len(),
        t_f_decreasing: points.windows(2).all(|p| p[1].t_f < p[0].t_f),
        fuel_increasing: points.windows(2).all(|p| p[1].fuel_kg > p[0].fuel_kg),
        dominated,
        steepening: slopes.windows(2).all(|s| s[1] > s[0]),
        slopes,
    }
}

pub fn render_frontier(check: &FrontierCheck, failed_points: usize) -> String {
    let row = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut s = String::from("frontier check\n");
    let _ = writeln!(s, "  points flown: {} ({} failed)", check.points, failed_points);
    let _ = writeln!(s, "  {}  t_f strictly decreasing in C_I", row(check.t_f_decreasing));
    let _ = writeln!(s, "  {}  fuel strictly increasing in C_I", row(check.fuel_increasing));
    let _ = writeln!(
        s,
        "  {}  no dominated points ({} pairs)",
        row(check.dominated.is_empty()),
        check.dominated.len()
    );
    let (first, last) = (check.slopes.first().copied(), check.slopes.last().copied());
    let _ = writeln!(
        s,
        "  {}  |dfuel/dt_f| increases with speed ({:.3e} -> {:.3e} kg/s)",
        row(check.steepening),
        first.unwrap_or(f64::NAN),
        last.unwrap_or(f64::NAN)
    );
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateReport {
    pub reference_speed: f64,
    pub weight: f64,
    pub envelope: PowerFeasibility,
    /// `(v, required power, inside envelope)` over a speed range.
    pub power_table: Vec<(f64, f64, bool)>,
    pub speed_envelope: Option<(f64, f64)>,
    pub checks: Vec<Check>,
}

pub const ENVELOPE_CHECK: &str = "power envelope";

impl ValidateReport {
    pub fn exit_code(&self) -> u8 {
        if self.checks.iter().any(|c| c.name == ENVELOPE_CHECK && !c.passed) {
            exit::INFEASIBLE
        } else if self.checks.iter().any(|c| !c.passed) {
            exit::PARTIAL
        } else {
            exit::OK
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Stack checks at take-off weight and speed `v_ref`.
pub fn validate_model(model: &CruiseModel, v_ref: f64) -> ValidateReport {
    let CruiseModel {
        aircraft, fuel_cell: fc, env, ..
    } = model;
    let w = aircraft.initial_weight;
    let envelope = fuelcell::feasibility(fc, aircraft, env, v_ref, w);
    let power_table = (0..=12)
        .map(|i| {
            let v = (100.0 + 10.0 * i as f64) / 3.6;
            let f = fuelcell::feasibility(fc, aircraft, env, v, w);
            (v, f.requested_power, f.feasible)
        })
        .collect();

    let mut checks = vec![Check {
        name: ENVELOPE_CHECK,
        passed: envelope.feasible,
        detail: format!(
            "max net power {:.1} W, cruise demand {:.1} W, margin {:.1} W",
            envelope.max_net_power,
            envelope.requested_power,
            envelope.margin()
        ),
    }];
    let disc_margin = 1.0 - envelope.requested_power / envelope.max_net_power;
    checks.push(Check {
        name: "discriminant margin",
        passed: disc_margin > 0.0,
        detail: format!("1 - P/P_max = {disc_margin:.4}"),
    });
    match fuelcell::cruise_current(fc, aircraft, env, v_ref, w) {
        Ok(current) => {
            let u_c = fc.cell_voltage(current);
            let ratio = current * fc.internal_resistance / u_c;
            checks.push(Check {
                name: "ohmic drop I*r/U_c < 0.5",
                passed: ratio < 0.5 && u_c > 0.0,
                detail: format!("I = {current:.2} A, I*r/U_c = {ratio:.4}"),
            });
            checks.push(Check {
                name: "cell voltage U_c > 0",
                passed: u_c > 0.0,
                detail: format!("U_c = {u_c:.4} V"),
            });
        }
        Err(e) => {
            for name in ["ohmic drop I*r/U_c < 0.5", "cell voltage U_c > 0"] {
                checks.push(Check {
                    name,
                    passed: false,
                    detail: format!("no operating point: {e}"),
                });
            }
        }
    }
    ValidateReport {
        reference_speed: v_ref,
        weight: w,
        envelope,
        power_table,
        speed_envelope: fuelcell::speed_envelope(fc, aircraft, env, w),
        checks,
    }
}

pub fn render_validate(r: &ValidateReport, estimates: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "stack check at W = {:.1} N, v = {:.2} m/s ({:.1} km/h)",
        r.weight,
        r.reference_speed,
        r.reference_speed * 3.6
    );
    let _ = writeln!(s, "max net power: {:.1} W", r.envelope.max_net_power);
    match r.speed_envelope {
        Some((lo, hi)) => {
            let _ = writeln!(s, "feasible speeds: {:.2} to {:.2} m/s ({:.1} to {:.1} km/h)", lo, hi, lo * 3.6, hi * 3.6);
        }
        None => s.push_str("feasible speeds: none\n"),
    }
    s.push_str("required power:\n");
    for &(v, p, ok) in &r.power_table {
        let _ = writeln!(s, "  {:6.1} km/h  {:10.1} W  {}", v * 3.6, p, if ok { "ok" } else { "over" });
    }
    for c in &r.checks {
        let _ = writeln!(s, "{}  {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if !estimates.is_empty() {
        let _ = writeln!(s, "estimated inputs: {}", estimates.join(", "));
    }
    s
}
