//! Problem statements for the 1D wall and 2D film solvers.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Grid1D, Grid2D, BETA_NINETY};

/// Which admissible class a wall belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallKind {
    /// Limits `pi/2` at `-inf` and `0` at `+inf`.
    Ninety,
    /// Limits `pi` at `-inf` and `0` at `+inf`.
    OneEighty,
}

impl WallKind {
    pub fn alpha_limit(self) -> f64 {
        match self {
            WallKind::Ninety => FRAC_PI_2,
            WallKind::OneEighty => PI,
        }
    }

    /// The orientation for which the wall carries no net line charge.
    pub fn charge_free_beta(self) -> f64 {
        match self {
            WallKind::Ninety => BETA_NINETY,
            WallKind::OneEighty => 0.0,
        }
    }

    pub fn degrees(self) -> u32 {
        match self {
            WallKind::Ninety => 90,
            WallKind::OneEighty => 180,
        }
    }

    pub fn from_degrees(deg: u32) -> Result<Self> {
        match deg {
            90 => Ok(WallKind::Ninety),
            180 => Ok(WallKind::OneEighty),
            other => Err(Error::InvalidParameter(format!("wall type must be 90 or 180, got {other}"))),
        }
    }

    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if (alpha - FRAC_PI_2).abs() < 1e-12 {
            Ok(WallKind::Ninety)
        } else if (alpha - PI).abs() < 1e-12 {
            Ok(WallKind::OneEighty)
        } else {
            Err(Error::InvalidParameter(format!("alpha_limit must be pi/2 or pi, got {alpha}")))
        }
    }
}

/// One-dimensional wall problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallProblem {
    pub nu: f64,
    pub beta: f64,
    pub kind: WallKind,
    pub grid: Grid1D,
    pub boundary_tolerance: f64,
}

pub const DEFAULT_BOUNDARY_TOLERANCE: f64 = 1e-6;

impl WallProblem {
    /// Validates `nu >= 0` and that `beta` is the charge-free orientation for
    /// `alpha_limit`.
    pub fn new(nu: f64, beta: f64, alpha_limit: f64, grid: Grid1D, boundary_tolerance: f64) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be >= 0, got {nu}")));
        }
        if !(boundary_tolerance > 0.0) {
            return Err(Error::InvalidParameter("boundary tolerance must be positive".into()));
        }
        let kind = WallKind::from_alpha(alpha_limit)?;
        if (beta - kind.charge_free_beta()).abs() > 1e-12 {
            return Err(Error::ChargedOrientation { alpha: alpha_limit, beta });
        }
        Ok(Self { nu, beta, kind, grid, boundary_tolerance })
    }

    pub fn with_kind(kind: WallKind, nu: f64, grid: Grid1D) -> Result<Self> {
        Self::new(nu, kind.charge_free_beta(), kind.alpha_limit(), grid, DEFAULT_BOUNDARY_TOLERANCE)
    }

    pub fn ninety(nu: f64, grid: Grid1D) -> Result<Self> {
        Self::with_kind(WallKind::Ninety, nu, grid)
    }

    pub fn one_eighty(nu: f64, grid: Grid1D) -> Result<Self> {
        Self::with_kind(WallKind::OneEighty, nu, grid)
    }

    pub fn alpha_limit(&self) -> f64 {
        self.kind.alpha_limit()
    }

    /// Far-field value of the magnetostatic operand `sin(theta - beta)`.
    pub fn operand_far_field(&self) -> f64 {
        (-self.beta).sin()
    }
}

/// Two-dimensional rectangular film problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilmProblem {
    pub nu: f64,
    pub grid: Grid2D,
}

impl FilmProblem {
    pub fn new(nu: f64, grid: Grid2D) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be >= 0, got {nu}")));
        }
        Ok(Self { nu, grid })
    }

    pub fn sample(lx: f64, ly: f64, nu: f64, cells_per_unit: f64) -> Result<Self> {
        Self::new(nu, Grid2D::for_sample(lx, ly, cells_per_unit)?)
    }
}
