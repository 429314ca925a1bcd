use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::AngleField1D;
use crate::problem::WallProblem;
use crate::relax::{recentre, relax_1d, RelaxConfig, RelaxReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub is_nonincreasing: bool,
    /// `max_i (theta_{i+1} - theta_i)`; positive values are violations.
    pub max_violation: f64,
    /// Position of the largest increase.
    pub violation_at: f64,
    /// Strict decrease by more than `1e-10` per cell where `theta` lies in
    /// `[0.05, 0.95] alpha`, with `alpha` the left end value.
    pub strict_in_core: bool,
}

pub fn monotonicity_report(theta: &AngleField1D) -> MonotonicityReport {
    let t = theta.values();
    let alpha = theta.first();
    let (lo, hi) = (0.05 * alpha, 0.95 * alpha);
    let mut max_violation = f64::NEG_INFINITY;
    let mut at = 0;
    let mut strict = true;
    for (i, w) in t.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d > max_violation {
            max_violation = d;
            at = i;
        }
        let in_core = (lo..=hi).contains(&w[0]) || (lo..=hi).contains(&w[1]);
        if in_core && d >= -1e-10 {
            strict = false;
        }
    }
    let g = theta.grid();
    MonotonicityReport {
        is_nonincreasing: max_violation <= 0.0,
        max_violation,
        violation_at: 0.5 * (g.x(at) + g.x(at + 1)),
        strict_in_core: strict,
    }
}

/// `sup |theta(x) + theta(-x) - alpha|` after recentring on the grid's mirror
/// points.
pub fn symmetry_residual(theta: &AngleField1D, alpha_limit: f64) -> Result<f64> {
    let c = recentre(theta, alpha_limit)?;
    let t = c.values();
    let n = t.len();
    let mirror = if theta.grid().is_symmetric() {
        (0..n).map(|i| (t[i] + t[n - 1 - i] - alpha_limit).abs()).fold(0.0, f64::max)
    } else {
        let g = c.grid();
        (0..n)
            .map(|i| {
                let s = (-g.x(i) - g.origin()) / g.spacing();
                (t[i] + crate::relax::cubic_at_index(t, s) - alpha_limit).abs()
            })
            .fold(0.0, f64::max)
    };
    Ok(mirror)
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub max_pairwise_distance: f64,
    pub reports: Vec<RelaxReport>,
    pub profiles: Vec<AngleField1D>,
}

/// Relaxes from each initial profile and compares the recentred results.
pub fn uniqueness_probe(problem: &WallProblem, inits: &[AngleField1D], config: &RelaxConfig) -> Result<UniquenessReport> {
    let mut profiles = Vec::with_capacity(inits.len());
    let mut reports = Vec::with_capacity(inits.len());
    for init in inits {
        let (t, r) = relax_1d(problem, init, config)?;
        profiles.push(t);
        reports.push(r);
    }
    let mut max = 0.0f64;
    for a in 0..profiles.len() {
        for b in a + 1..profiles.len() {
            let d = profiles[a].values().iter().zip(profiles[b].values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            max = max.max(d);
        }
    }
    Ok(UniquenessReport { max_pairwise_distance: max, reports, profiles })
}
