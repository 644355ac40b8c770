//! Direct-operating-cost optimal cruise for hydrogen fuel-cell aircraft.
//!
//! The aircraft cruises at constant altitude with speed as the control. A
//! fuel-cell stack in its ohmic region turns hydrogen into thrust power, so
//! the weight rate follows from drag power through the stack current. For a
//! given cost index `C_I` (time cost over fuel cost) the optimal speed solves
//! a scalar equation derived from Pontryagin's minimum principle:
//!
//! * [`optimizer::solve_speed`] finds it from the roots of an equivalent
//!   degree-8 polynomial (weight costate fixed, usually zero);
//! * [`optimizer::solve_shooting`] also integrates the weight costate and
//!   shoots on its initial value;
//! * [`mission::simulate`] and [`mission::sweep_cost_index`] fly the whole
//!   cruise and build the velocity-vs-cost-index and time-vs-fuel curves.
//!
//! All quantities are SI: m, s, N, kg, W, C.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aero;
pub mod atmosphere;
pub mod error;
pub mod fuelcell;
pub mod mission;
pub mod model;
pub mod ode;
pub mod optimizer;
mod trajectory;

pub use aero::AircraftParams;
pub use atmosphere::Environment;
pub use error::{Error, Result};
pub use fuelcell::{FuelCellParams, PowerFeasibility};
pub use mission::{CruiseState, MissionMode, MissionOptions, MissionResult, ParetoPoint, SweepPoint};
pub use model::CruiseModel;
pub use optimizer::{CostModel, RejectReason, ShootingResult, SpeedSolution};
