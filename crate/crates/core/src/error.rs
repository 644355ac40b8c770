use thiserror::Error;

use crate::fuelcell::PowerFeasibility;
use crate::optimizer::RejectReason;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside the valid range {range}")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error(
        "power demand {:.1} W exceeds the stack envelope {:.1} W",
        .0.requested_power,
        .0.max_net_power
    )]
    Infeasible(PowerFeasibility),

    #[error("no admissible cruise speed ({} candidate roots rejected)", rejected.len())]
    NoSolution { rejected: Vec<(f64, RejectReason)> },

    #[error("fuel exhausted at x = {x:.1} m, t = {t:.1} s before reaching the destination")]
    RangeExceeded { x: f64, t: f64 },

    #[error("shooting did not converge after {} iterations (last |J_W(t_f)| = {last_miss:e})", history.len())]
    ShootingDiverged {
        /// `(J_W(0), J_W(t_f))` for every trial.
        history: Vec<(f64, f64)>,
        last_miss: f64,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
