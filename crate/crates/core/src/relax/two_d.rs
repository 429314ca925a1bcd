use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rustdct::{DctPlanner, TransformType2And3};

use crate::energy::FilmEnergy;
use crate::error::{Error, Result};
use crate::field::{AngleField2D, Grid2D};
use crate::problem::FilmProblem;

use super::{Monitor, RelaxConfig, RelaxReport, Stepping, Termination, DT_GROWTH};

const DEFAULT_DT_MAX_2D: f64 = 1.0;
const MAX_CONSECUTIVE_REJECTIONS: usize = 60;

pub struct FilmSnapshot<'a> {
    pub step: usize,
    pub theta: &'a AngleField2D,
    pub energy: f64,
    pub residual: f64,
}

pub fn relax_2d(problem: &FilmProblem, init: &AngleField2D, config: &RelaxConfig) -> Result<(AngleField2D, RelaxReport)> {
    relax_2d_observed(problem, init, config, &mut |_| {})
}

/// Neumann Laplacian `lap_N` with missing neighbours dropped.
pub(crate) fn neumann_laplacian(g: &Grid2D, t: &[f64], out: &mut [f64]) {
    let (nx, ny) = (g.nx(), g.ny());
    let inv_h2 = 1.0 / g.spacing().powi(2);
    for j in 0..ny {
        for i in 0..nx {
            let k = g.idx(i, j);
            let c = t[k];
            let mut s = 0.0;
            if i > 0 {
                s += t[k - 1] - c;
            }
            if i + 1 < nx {
                s += t[k + 1] - c;
            }
            if j > 0 {
                s += t[k - nx] - c;
            }
            if j + 1 < ny {
                s += t[k + nx] - c;
            }
            out[k] = s * inv_h2;
        }
    }
}

/// Solves `(I - dt lap_N) x = b` in place with cosine transforms.
pub(crate) struct NeumannSolver {
    nx: usize,
    ny: usize,
    eig_x: Vec<f64>,
    eig_y: Vec<f64>,
    dct_x: Arc<dyn TransformType2And3<f64>>,
    dct_y: Arc<dyn TransformType2And3<f64>>,
    column: Vec<f64>,
    scratch: Vec<f64>,
}

impl NeumannSolver {
    pub(crate) fn new(g: &Grid2D) -> Self {
        let (nx, ny) = (g.nx(), g.ny());
        let h2 = g.spacing().powi(2);
        let eig = |n: usize| (0..n).map(|k| (2.0 - 2.0 * (PI * k as f64 / n as f64).cos()) / h2).collect::<Vec<_>>();
        let mut planner = DctPlanner::new();
        let dct_x = planner.plan_dct2(nx);
        let dct_y = planner.plan_dct2(ny);
        let len = dct_x.get_scratch_len().max(dct_y.get_scratch_len());
        Self {
            nx,
            ny,
            eig_x: eig(nx),
            eig_y: eig(ny),
            dct_x,
            dct_y,
            column: vec![0.0; ny],
            scratch: vec![0.0; len],
        }
    }

    fn columns(&mut self, b: &mut [f64], forward: bool) {
        let (nx, ny) = (self.nx, self.ny);
        for i in 0..nx {
            for j in 0..ny {
                self.column[j] = b[j * nx + i];
            }
            if forward {
                self.dct_y.process_dct2_with_scratch(&mut self.column, &mut self.scratch);
            } else {
                self.dct_y.process_dct3_with_scratch(&mut self.column, &mut self.scratch);
            }
            for j in 0..ny {
                b[j * nx + i] = self.column[j];
            }
        }
    }

    pub(crate) fn solve(&mut self, b: &mut [f64], dt: f64) {
        let (nx, ny) = (self.nx, self.ny);
        for row in b.chunks_exact_mut(nx) {
            self.dct_x.process_dct2_with_scratch(row, &mut self.scratch);
        }
        self.columns(b, true);
        // DCT-III inverts DCT-II up to n/2 per direction.
        let scale = 4.0 / (nx * ny) as f64;
        for j in 0..ny {
            for i in 0..nx {
                b[j * nx + i] *= scale / (1.0 + dt * (self.eig_x[i] + self.eig_y[j]));
            }
        }
        self.columns(b, false);
        for row in b.chunks_exact_mut(nx) {
            self.dct_x.process_dct3_with_scratch(row, &mut self.scratch);
        }
    }
}

pub fn relax_2d_observed(
    problem: &FilmProblem,
    init: &AngleField2D,
    config: &RelaxConfig,
    observer: &mut dyn FnMut(&FilmSnapshot),
) -> Result<(AngleField2D, RelaxReport)> {
    config.validate()?;
    let grid = problem.grid;
    if init.grid() != &grid {
        return Err(Error::PlanMismatch("initial field grid differs from problem grid".into()));
    }
    let started = Instant::now();
    let h = grid.spacing();
    let mut cap = config.dt_max.unwrap_or(DEFAULT_DT_MAX_2D);
    if config.stepping == Stepping::Explicit {
        cap = cap.min(0.2 * h * h);
    }
    let mut energy = FilmEnergy::new(grid, problem.nu);
    let mut solver = NeumannSolver::new(&grid);
    let mut lap = vec![0.0; grid.n_cells()];

    let sup = |f: &[f64]| f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut theta = init.clone();
    let (e0, mut field) = energy.energy_and_field(&theta)?;
    let mut dt = config.dt.min(cap);
    let mut mon = Monitor::new(e0.total, sup(&field), dt, config.trace_every);
    let mut rejections = 0;
    let termination = loop {
        if mon.stationary(config) {
            break Termination::Converged;
        }
        if mon.report.steps_taken >= config.max_steps {
            break Termination::MaxSteps;
        }
        let t = theta.values();
        let mut next: Vec<f64> = match config.stepping {
            Stepping::Explicit => t.iter().zip(&field).map(|(a, f)| a + dt * f).collect(),
            Stepping::SemiImplicit => {
                neumann_laplacian(&grid, t, &mut lap);
                let mut b: Vec<f64> = t.iter().zip(&field).zip(&lap).map(|((a, f), l)| a + dt * (f - l)).collect();
                solver.solve(&mut b, dt);
                b
            }
        };
        if next.iter().any(|v| !v.is_finite()) {
            next.clear();
        }
        let accepted = if next.is_empty() {
            None
        } else {
            let trial = AngleField2D::new(grid, next)?;
            let (e, f) = energy.energy_and_field(&trial)?;
            Monitor::acceptable(mon.report.final_energy, e.total).then_some((trial, e.total, f))
        };
        match accepted {
            Some((trial, e, f)) => {
                theta = trial;
                field = f;
                mon.accept(e, sup(&field));
                rejections = 0;
                dt = (dt * DT_GROWTH).min(cap);
                let every = config.checkpoint_every;
                if every > 0 && mon.report.steps_taken.is_multiple_of(every) {
                    observer(&FilmSnapshot {
                        step: mon.report.steps_taken,
                        theta: &theta,
                        energy: e,
                        residual: mon.report.final_residual,
                    });
                }
            }
            None => {
                mon.report.rejected_steps += 1;
                rejections += 1;
                dt *= 0.5;
                if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                    break Termination::Diverged;
                }
            }
        }
    };
    Ok((theta, mon.finish(termination, dt, started)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumann_solver_inverts_operator() {
        let g = Grid2D::new(12, 7, 0.25).unwrap();
        let x: Vec<f64> = (0..g.n_cells()).map(|k| ((k * 37) % 11) as f64 * 0.1 - 0.4).collect();
        let mut lap = vec![0.0; x.len()];
        neumann_laplacian(&g, &x, &mut lap);
        let dt = 0.3;
        let mut b: Vec<f64> = x.iter().zip(&lap).map(|(a, l)| a - dt * l).collect();
        NeumannSolver::new(&g).solve(&mut b, dt);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
