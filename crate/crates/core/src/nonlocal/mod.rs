//! Nonlocal operators: the 1D half-Laplacian (spectral and quadrature
//! realizations) and the 2D thin-film stray field.

mod quadrature;
mod spectral;
mod stray;

pub use quadrature::{half_laplacian_quadrature, h_half_seminorm_sq_quadrature, QuadratureKernel};
pub use spectral::{half_laplacian_spectral, h_half_seminorm_sq, SpectralPlan1D, SpectralScratch};
pub use stray::{charge_density_2d, stray_field_2d, unit_cell_average, ChargeDensity, StrayFieldPlan2D, StrayScratch};

use crate::error::{Error, Result};

/// Default admissible mismatch between the two end values of a periodic operand.
pub const DEFAULT_FAR_FIELD_TOLERANCE: f64 = 1e-6;

pub(crate) fn check_far_field(u: &[f64], tolerance: f64) -> Result<()> {
    let mismatch = (u[0] - u[u.len() - 1]).abs();
    if mismatch > tolerance || !mismatch.is_finite() {
        Err(Error::FarFieldMismatch { mismatch, tolerance })
    } else {
        Ok(())
    }
}
