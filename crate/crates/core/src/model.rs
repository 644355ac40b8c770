use serde::{Deserialize, Serialize};

use crate::aero::AircraftParams;
use crate::atmosphere::{Environment, STANDARD_GRAVITY};
use crate::error::Result;
use crate::fuelcell::FuelCellParams;

/// Airframe, stack and environment of one cruise problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CruiseModel {
    pub aircraft: AircraftParams,
    pub fuel_cell: FuelCellParams,
    pub env: Environment,
}

impl CruiseModel {
    pub fn new(aircraft: AircraftParams, fuel_cell: FuelCellParams, env: Environment) -> Result<Self> {
        let model = Self {
            aircraft,
            fuel_cell,
            env,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        self.aircraft.validate()?;
        self.fuel_cell.validate()?;
        self.env.validate()
    }

    /// HY4 four-seater at 1 km: 1500 kg take-off mass, 9 kg of hydrogen,
    /// C_D0 = 0.025, K = 0.039, r = 5 mΩ, E_oc = 1.1 V, η = 0.44.
    ///
    /// Wing area (17.5 m²) is an outside estimate; `n_cells` is either 440
    /// (one module) or 1760 (four modules).
    pub fn hy4(n_cells: u32) -> Self {
        Self {
            aircraft: AircraftParams {
                wing_area: 17.5,
                cd0: 0.025,
                k_induced: 0.039,
                initial_weight: 1500.0 * STANDARD_GRAVITY,
                fuel_weight: 9.0 * STANDARD_GRAVITY,
            },
            fuel_cell: FuelCellParams::new(n_cells, 0.005, 1.1, 0.44),
            env: Environment::at_altitude(1000.0).expect("1 km is inside the troposphere"),
        }
    }

    /// Mass (kg) corresponding to a weight (N) under this model's gravity.
    pub fn mass_of(&self, weight: f64) -> f64 {
        weight / self.env.gravity
    }
}
