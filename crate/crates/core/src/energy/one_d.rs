//! 1D wall energy per unit width
//!
//! ```text
//! E = 1/2 int theta'^2 + 1/8 int sin^2 2 theta + nu/4 |sin(theta - beta)|^2_{H^1/2}
//! ```
//!
//! discretized so that [`WallEnergy::residual`] is the exact gradient of
//! [`WallEnergy::energy`] with respect to the samples, divided by `h`.

use crate::error::{Error, Result};
use crate::field::AngleField1D;
use crate::nonlocal::{h_half_seminorm_sq_quadrature, QuadratureKernel, SpectralPlan1D, SpectralScratch};
use crate::problem::WallProblem;

use super::EnergyBreakdown;

/// Realization of the magnetostatic seminorm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeminormMethod {
    #[default]
    Spectral,
    /// Double-sum form on the periodic window; `O(n^2)`.
    Quadrature,
}

/// Reusable evaluator bound to one [`WallProblem`].
pub struct WallEnergy {
    problem: WallProblem,
    plan: SpectralPlan1D,
    scratch: SpectralScratch,
    operand: Vec<f64>,
    lap: Vec<f64>,
    check_admissible: bool,
    seminorm: SeminormMethod,
}

impl WallEnergy {
    pub fn new(problem: WallProblem) -> Self {
        let plan = SpectralPlan1D::new(problem.grid).with_far_field_tolerance(problem.boundary_tolerance);
        let scratch = plan.make_scratch();
        let n = problem.grid.len();
        Self {
            problem,
            plan,
            scratch,
            operand: vec![0.0; n],
            lap: vec![0.0; n],
            check_admissible: true,
            seminorm: SeminormMethod::Spectral,
        }
    }

    /// Skip the far-field check against `(alpha_limit, 0)`. The operand must
    /// still have matching end values.
    pub fn without_admissibility_check(mut self) -> Self {
        self.check_admissible = false;
        self
    }

    pub fn with_seminorm(mut self, method: SeminormMethod) -> Self {
        self.seminorm = method;
        self
    }

    pub fn problem(&self) -> &WallProblem {
        &self.problem
    }

    fn validate(&self, theta: &AngleField1D) -> Result<()> {
        if theta.grid() != &self.problem.grid {
            return Err(Error::PlanMismatch("profile grid differs from problem grid".into()));
        }
        if self.check_admissible {
            theta.check_admissible(self.problem.alpha_limit(), self.problem.boundary_tolerance)?;
        }
        Ok(())
    }

    /// Fills `operand` with `sin(theta - beta) - sin(-beta)` and `lap` with its
    /// half-Laplacian.
    fn nonlocal(&mut self, theta: &[f64]) -> Result<()> {
        let beta = self.problem.beta;
        let c = self.problem.operand_far_field();
        for (o, &t) in self.operand.iter_mut().zip(theta) {
            *o = (t - beta).sin() - c;
        }
        self.plan.apply_into(&self.operand, &mut self.lap, &mut self.scratch)
    }

    pub fn energy(&mut self, theta: &AngleField1D) -> Result<EnergyBreakdown> {
        self.validate(theta)?;
        self.energy_raw(theta.values())
    }

    /// `-theta'' + 1/4 sin 4 theta + nu/2 cos(theta - beta) H[sin(theta - beta)]`
    /// at interior points; the two end entries are zero.
    pub fn residual(&mut self, theta: &AngleField1D) -> Result<Vec<f64>> {
        let mut r = vec![0.0; theta.values().len()];
        self.validate(theta)?;
        self.energy_and_residual_raw(theta.values(), &mut r)?;
        Ok(r)
    }

    /// Energy and residual from one nonlocal evaluation.
    pub fn energy_and_residual(&mut self, theta: &AngleField1D, r: &mut [f64]) -> Result<EnergyBreakdown> {
        self.validate(theta)?;
        self.energy_and_residual_raw(theta.values(), r)
    }

    fn local_terms(&self, t: &[f64]) -> (f64, f64) {
        let h = self.problem.grid.spacing();
        let exchange = 0.5 * t.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h;
        let anisotropy = 0.125 * h * t.iter().map(|&x| (2.0 * x).sin().powi(2)).sum::<f64>();
        (exchange, anisotropy)
    }

    fn spectral_magnetostatic(&self) -> f64 {
        let h = self.problem.grid.spacing();
        0.25 * self.problem.nu * h * self.operand.iter().zip(&self.lap).map(|(a, b)| a * b).sum::<f64>()
    }

    pub(crate) fn energy_raw(&mut self, t: &[f64]) -> Result<EnergyBreakdown> {
        let (exchange, anisotropy) = self.local_terms(t);
        let nu = self.problem.nu;
        let magnetostatic = if nu == 0.0 {
            0.0
        } else {
            match self.seminorm {
                SeminormMethod::Spectral => {
                    self.nonlocal(t)?;
                    self.spectral_magnetostatic()
                }
                SeminormMethod::Quadrature => {
                    let beta = self.problem.beta;
                    let u: Vec<f64> = t.iter().map(|&x| (x - beta).sin()).collect();
                    0.25 * nu * h_half_seminorm_sq_quadrature(&u, &self.problem.grid, QuadratureKernel::Periodic)?
                }
            }
        };
        Ok(EnergyBreakdown::new(exchange, anisotropy, magnetostatic))
    }

    /// Always uses the spectral seminorm, which is what the residual differentiates.
    pub(crate) fn energy_and_residual_raw(&mut self, t: &[f64], r: &mut [f64]) -> Result<EnergyBreakdown> {
        let n = t.len();
        let nu = self.problem.nu;
        if nu != 0.0 {
            self.nonlocal(t)?;
        }
        let inv_h2 = 1.0 / self.problem.grid.spacing().powi(2);
        let beta = self.problem.beta;
        r[0] = 0.0;
        r[n - 1] = 0.0;
        for i in 1..n - 1 {
            let lap = (t[i + 1] - 2.0 * t[i] + t[i - 1]) * inv_h2;
            let mut v = -lap + 0.25 * (4.0 * t[i]).sin();
            if nu != 0.0 {
                v += 0.5 * nu * (t[i] - beta).cos() * self.lap[i];
            }
            r[i] = v;
        }
        let (exchange, anisotropy) = self.local_terms(t);
        let magnetostatic = if nu == 0.0 { 0.0 } else { self.spectral_magnetostatic() };
        Ok(EnergyBreakdown::new(exchange, anisotropy, magnetostatic))
    }
}

pub fn energy_1d(theta: &AngleField1D, problem: &WallProblem) -> Result<EnergyBreakdown> {
    WallEnergy::new(*problem).energy(theta)
}

pub fn el_residual_1d(theta: &AngleField1D, problem: &WallProblem) -> Result<Vec<f64>> {
    WallEnergy::new(*problem).residual(theta)
}
