//! Discrete versions of the fold, coercivity and rearrangement inequalities.
//!
//! All checks evaluate the magnetostatic term with the double-sum seminorm,
//! whose weights are nonincreasing in (circular) distance, so the discrete
//! `|u|` and Riesz rearrangement inequalities hold for it exactly.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{fold_to_octant, fold_to_quadrant, symmetric_decreasing_rearrangement, AngleField1D};
use crate::nonlocal::{h_half_seminorm_sq_quadrature, QuadratureKernel};
use crate::problem::{WallKind, WallProblem};

use super::{EnergyBreakdown, SeminormMethod, WallEnergy};

/// Slack for inequalities that hold exactly in exact arithmetic.
pub const EXACT_SLACK: f64 = 1e-12;
/// Slack for the nonlocal rearrangement inequality.
pub const REARRANGEMENT_SLACK: f64 = 1e-8;

fn evaluator(problem: &WallProblem) -> WallEnergy {
    WallEnergy::new(*problem).without_admissibility_check().with_seminorm(SeminormMethod::Quadrature)
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldReport {
    pub original: EnergyBreakdown,
    pub folded: EnergyBreakdown,
    pub holds: bool,
}

/// `E(fold(theta)) <= E(theta)`, with the exchange and magnetostatic parts
/// also required to decrease individually and the anisotropy to agree.
pub fn check_fold_inequality(theta: &AngleField1D, problem: &WallProblem) -> Result<FoldReport> {
    let mut e = evaluator(problem);
    let original = e.energy(theta)?;
    let folded = e.energy(&fold_to_quadrant(theta))?;
    let slack = EXACT_SLACK * original.total.abs().max(1.0);
    let holds = folded.total <= original.total + slack
        && folded.exchange <= original.exchange + slack
        && folded.magnetostatic <= original.magnetostatic + slack
        && (folded.anisotropy - original.anisotropy).abs() <= slack;
    Ok(FoldReport { original, folded, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoercivityReport {
    /// `E(rho)`.
    pub energy: f64,
    /// `1/4 |rho|_{H^1}^2 + nu/4 |sin(rho + pi/4)|^2`.
    pub bound: f64,
    /// Same bound with `1/8` in place of `1/4`.
    pub weak_bound: f64,
    pub holds: bool,
}

/// Lower bound of the 90-degree energy in terms of the folded profile `rho`.
pub fn check_coercivity(theta: &AngleField1D, problem: &WallProblem) -> Result<CoercivityReport> {
    if problem.kind != WallKind::Ninety {
        return Err(Error::InvalidParameter("coercivity bound is stated for the 90-degree problem".into()));
    }
    let rho = fold_to_octant(theta, problem.alpha_limit())?;
    let energy = evaluator(problem).energy(&rho)?.total;
    let r = rho.values();
    let grid = problem.grid;
    let h = grid.spacing();
    let grad = r.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h;
    let l2 = h * r.iter().map(|v| v * v).sum::<f64>();
    let u: Vec<f64> = r.iter().map(|&v| (v + FRAC_PI_4).sin()).collect();
    let nonlocal = 0.25 * problem.nu * h_half_seminorm_sq_quadrature(&u, &grid, QuadratureKernel::Periodic)?;
    let bound = 0.25 * (grad + l2) + nonlocal;
    let weak_bound = 0.125 * (grad + l2) + nonlocal;
    let holds = energy >= bound - EXACT_SLACK * energy.abs().max(1.0);
    Ok(CoercivityReport { energy, bound, weak_bound, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct RearrangementReport {
    pub folded: EnergyBreakdown,
    pub rearranged: EnergyBreakdown,
    pub anisotropy_equal: bool,
    pub exchange_decreases: bool,
    pub nonlocal_decreases: bool,
    pub holds: bool,
}

/// `E(rho*) <= E(rho)` for `rho` the octant fold of `theta` and `rho*` its
/// symmetric decreasing rearrangement.
pub fn check_rearrangement_inequality(theta: &AngleField1D, problem: &WallProblem) -> Result<RearrangementReport> {
    let rho = fold_to_octant(theta, problem.alpha_limit())?;
    let star = symmetric_decreasing_rearrangement(&rho)?;
    let mut e = evaluator(problem);
    let folded = e.energy(&rho)?;
    let rearranged = e.energy(&star)?;
    let scale = folded.total.abs().max(1.0);
    let anisotropy_equal = (rearranged.anisotropy - folded.anisotropy).abs() <= EXACT_SLACK * scale;
    let exchange_decreases = rearranged.exchange <= folded.exchange + EXACT_SLACK * scale;
    let nonlocal_decreases = rearranged.magnetostatic <= folded.magnetostatic + REARRANGEMENT_SLACK * scale;
    Ok(RearrangementReport {
        folded,
        rearranged,
        anisotropy_equal,
        exchange_decreases,
        nonlocal_decreases,
        holds: anisotropy_equal && exchange_decreases && nonlocal_decreases,
    })
}
