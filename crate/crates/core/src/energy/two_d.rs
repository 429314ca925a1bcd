//! Reduced thin-film energy on a rectangle with free (Neumann) boundaries.

use crate::error::{Error, Result};
use crate::field::{magnetization_of, AngleField2D, Grid2D};
use crate::nonlocal::{StrayFieldPlan2D, StrayScratch};

use super::EnergyBreakdown;

/// Reusable evaluator for one film grid and `nu`.
pub struct FilmEnergy {
    nu: f64,
    grid: Grid2D,
    plan: StrayFieldPlan2D,
    scratch: StrayScratch,
}

impl FilmEnergy {
    pub fn new(grid: Grid2D, nu: f64) -> Self {
        Self::with_plan(StrayFieldPlan2D::new(grid), nu)
    }

    pub fn with_plan(plan: StrayFieldPlan2D, nu: f64) -> Self {
        let scratch = plan.make_scratch();
        Self { nu, grid: *plan.grid(), plan, scratch }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    fn check(&self, theta: &AngleField2D) -> Result<()> {
        if theta.grid() != &self.grid {
            return Err(Error::PlanMismatch("field grid differs from plan grid".into()));
        }
        Ok(())
    }

    fn local_terms(&self, t: &[f64]) -> (f64, f64) {
        let g = &self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let mut faces = 0.0;
        for j in 0..ny {
            for i in 0..nx {
                let c = t[g.idx(i, j)];
                if i + 1 < nx {
                    faces += (t[g.idx(i + 1, j)] - c).powi(2);
                }
                if j + 1 < ny {
                    faces += (t[g.idx(i, j + 1)] - c).powi(2);
                }
            }
        }
        let h2 = g.spacing().powi(2);
        let aniso = 0.125 * h2 * t.iter().map(|&x| (2.0 * x).sin().powi(2)).sum::<f64>();
        (0.5 * faces, aniso)
    }

    pub fn energy(&mut self, theta: &AngleField2D) -> Result<EnergyBreakdown> {
        self.check(theta)?;
        let (ex, an) = self.local_terms(theta.values());
        let ms = if self.nu == 0.0 {
            0.0
        } else {
            self.plan.energy(&magnetization_of(theta), self.nu, &mut self.scratch)?
        };
        Ok(EnergyBreakdown::new(ex, an, ms))
    }

    /// Energy together with `-dE/dtheta / h^2`, i.e.
    /// `lap_N theta - 1/4 sin 4 theta + t . H` with `t = (-cos theta, -sin theta)`.
    pub fn energy_and_field(&mut self, theta: &AngleField2D) -> Result<(EnergyBreakdown, Vec<f64>)> {
        self.check(theta)?;
        let t = theta.values();
        let g = self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let inv_h2 = 1.0 / g.spacing().powi(2);
        let mut field = vec![0.0; t.len()];
        for j in 0..ny {
            for i in 0..nx {
                let k = g.idx(i, j);
                let c = t[k];
                let mut lap = 0.0;
                if i > 0 {
                    lap += t[k - 1] - c;
                }
                if i + 1 < nx {
                    lap += t[k + 1] - c;
                }
                if j > 0 {
                    lap += t[k - nx] - c;
                }
                if j + 1 < ny {
                    lap += t[k + nx] - c;
                }
                field[k] = lap * inv_h2 - 0.25 * (4.0 * c).sin();
            }
        }
        let ms = if self.nu == 0.0 {
            0.0
        } else {
            let (e, hs) = self.plan.evaluate(&magnetization_of(theta), self.nu, &mut self.scratch)?;
            for ((f, &c), hv) in field.iter_mut().zip(t).zip(&hs.data) {
                *f += -c.cos() * hv[0] - c.sin() * hv[1];
            }
            e
        };
        let (ex, an) = self.local_terms(t);
        Ok((EnergyBreakdown::new(ex, an, ms), field))
    }
}

pub fn energy_2d(theta: &AngleField2D, nu: f64, plan: &StrayFieldPlan2D) -> Result<EnergyBreakdown> {
    FilmEnergy::with_plan(plan.clone(), nu).energy(theta)
}

pub fn effective_field_2d(theta: &AngleField2D, nu: f64, plan: &StrayFieldPlan2D) -> Result<Vec<f64>> {
    Ok(FilmEnergy::with_plan(plan.clone(), nu).energy_and_field(theta)?.1)
}
