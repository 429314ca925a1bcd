//! Energies, their gradients, and the discrete inequality checks.

mod inequality;
mod one_d;
mod two_d;

pub use inequality::{
    check_coercivity, check_fold_inequality, check_rearrangement_inequality, CoercivityReport, FoldReport,
    RearrangementReport,
};
pub use one_d::{el_residual_1d, energy_1d, SeminormMethod, WallEnergy};
pub use two_d::{effective_field_2d, energy_2d, FilmEnergy};

use serde::{Deserialize, Serialize};

/// The three energy contributions and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub exchange: f64,
    pub anisotropy: f64,
    pub magnetostatic: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    /// Rounding can leave a quadratic form at `-1e-17`; such values are clamped.
    pub fn new(exchange: f64, anisotropy: f64, magnetostatic: f64) -> Self {
        let (exchange, anisotropy, magnetostatic) = (exchange.max(0.0), anisotropy.max(0.0), magnetostatic.max(0.0));
        Self { exchange, anisotropy, magnetostatic, total: exchange + anisotropy + magnetostatic }
    }
}
