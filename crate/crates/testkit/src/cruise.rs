//! Cruise fuel rate written out from first principles: parabolic drag
//! polar, ohmic stack quadratic, Faraday's law. Plain numbers in, so it
//! shares no code with the solver it checks.

use crate::{bisect, golden_section, scan_roots};

#[derive(Debug, Clone, Copy)]
pub struct CruiseOracle {
    /// ½·C_D0·ρ·S
    pub a: f64,
    /// 2K/(ρS); induced drag is this·W²/v².
    pub k_ind: f64,
    pub n: f64,
    pub r: f64,
    pub e: f64,
    pub eta: f64,
    /// n·M_H·g/(2F): weight rate per ampere.
    pub faraday_k: f64,
}

impl CruiseOracle {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rho: f64,
        wing_area: f64,
        cd0: f64,
        k_induced: f64,
        n_cells: f64,
        r: f64,
        e: f64,
        eta: f64,
        molar_mass: f64,
        faraday: f64,
        g: f64,
    ) -> Self {
        Self {
            a: 0.5 * cd0 * rho * wing_area,
            k_ind: 2.0 * k_induced / (rho * wing_area),
            n: n_cells,
            r,
            e,
            eta,
            faraday_k: n_cells * molar_mass * g / (2.0 * faraday),
        }
    }

    pub fn drag(&self, v: f64, w: f64) -> f64 {
        self.a * v * v + self.k_ind * w * w / (v * v)
    }

    pub fn power(&self, v: f64, w: f64) -> f64 {
        self.drag(v, w) * v
    }

    pub fn power_v(&self, v: f64, w: f64) -> f64 {
        3.0 * self.a * v * v - self.k_ind * w * w / (v * v)
    }

    /// E² − 4rP/(ηn); the stack can deliver P only while this is ≥ 0.
    pub fn disc(&self, v: f64, w: f64) -> f64 {
        self.e * self.e - 4.0 * self.r * self.power(v, w) / (self.eta * self.n)
    }

    pub fn max_power(&self) -> f64 {
        self.e * self.e * self.eta * self.n / (4.0 * self.r)
    }

    pub fn current(&self, v: f64, w: f64) -> f64 {
        (self.e - self.disc(v, w).sqrt()) / (2.0 * self.r)
    }

    pub fn fuel_rate(&self, v: f64, w: f64) -> f64 {
        self.faraday_k * self.current(v, w)
    }

    pub fn fuel_rate_v(&self, v: f64, w: f64) -> f64 {
        let i = self.current(v, w);
        // Implicit differentiation of r·I² − E·I + P/(ηn) = 0.
        let di_dp = 1.0 / (self.eta * self.n * (self.e - 2.0 * self.r * i));
        self.faraday_k * di_dp * self.power_v(v, w)
    }

    /// Stationarity of ((1+J_W)·f + C_I)/v in v.
    pub fn condition(&self, v: f64, w: f64, ci: f64, j_w: f64) -> f64 {
        (1.0 + j_w) * (self.fuel_rate(v, w) - v * self.fuel_rate_v(v, w)) + ci
    }

    /// Largest speed with non-negative discriminant, by bisection on it.
    pub fn v_max(&self, w: f64) -> f64 {
        let v_mp = (self.k_ind * w * w / (3.0 * self.a)).powf(0.25);
        bisect(|v| self.disc(v, w), v_mp, 1000.0, 1e-13).expect("stack covers the minimum-power speed")
    }

    /// Cheapest root of [`Self::condition`] on [5 m/s, v_max], by sign scan
    /// and bisection.
    pub fn bisection_speed(&self, w: f64, ci: f64, j_w: f64) -> f64 {
        let hi = self.v_max(w) * (1.0 - 1e-12);
        let per_distance = |v: f64| ((1.0 + j_w) * self.fuel_rate(v, w) + ci) / v;
        scan_roots(|v| self.condition(v, w, ci, j_w), 5.0, hi, 400, 1e-13)
            .into_iter()
            .min_by(|x, y| per_distance(*x).total_cmp(&per_distance(*y)))
            .expect("bracketed root")
    }

    /// Speed minimising fuel per distance, by golden-section search.
    pub fn min_fuel_speed(&self, w: f64) -> f64 {
        golden_section(|v| self.fuel_rate(v, w) / v, 5.0, self.v_max(w) * (1.0 - 1e-9), 1e-10)
    }
}
