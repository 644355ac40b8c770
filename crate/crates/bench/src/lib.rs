//! Benchmark fixtures shared by the criterion targets.

use h2cruise::CruiseModel;

/// Reference mission length (m).
pub const X_D: f64 = 200_000.0;

pub fn reference_model() -> CruiseModel {
    CruiseModel::hy4(1760)
}

/// `n` evenly spaced cost indices from 0 to 0.1 N/s.
pub fn ci_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.1 * i as f64 / (n - 1).max(1) as f64).collect()
}
