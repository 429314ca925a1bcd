use std::f64::consts::PI;
use std::time::Instant;

use crate::energy::WallEnergy;
use crate::error::Result;
use crate::field::AngleField1D;
use crate::problem::WallProblem;

use super::recentre::{recentre, refined_crossing};
use super::{Monitor, RelaxConfig, RelaxReport, Stepping, Termination, DT_GROWTH};

/// Cells pinned to the far-field limits at each end.
pub const PINNED_CELLS: usize = 2;
const MAX_CONSECUTIVE_REJECTIONS: usize = 60;

pub struct WallSnapshot<'a> {
    pub step: usize,
    pub theta: &'a AngleField1D,
    pub energy: f64,
    pub residual: f64,
}

/// Relaxes, recentres so the profile crosses `alpha_limit / 2` at the origin,
/// and relaxes again so the returned profile is stationary as reported.
pub fn relax_1d(problem: &WallProblem, init: &AngleField1D, config: &RelaxConfig) -> Result<(AngleField1D, RelaxReport)> {
    relax_1d_observed(problem, init, config, &mut |_| {})
}

pub fn relax_1d_observed(
    problem: &WallProblem,
    init: &AngleField1D,
    config: &RelaxConfig,
    observer: &mut dyn FnMut(&WallSnapshot),
) -> Result<(AngleField1D, RelaxReport)> {
    config.validate()?;
    init.check_admissible(problem.alpha_limit(), problem.boundary_tolerance)?;
    if init.grid() != &problem.grid {
        return Err(crate::Error::PlanMismatch("initial profile grid differs from problem grid".into()));
    }
    let mut flow = Flow::new(problem, config);
    let (theta, mut report) = flow.run(init.values().to_vec(), 0, observer)?;
    if !report.converged() {
        return Ok((theta, report));
    }
    let alpha = problem.alpha_limit();
    let offset = refined_crossing(&theta, 0.5 * alpha).unwrap_or(0.0);
    if offset.abs() <= 1e-12 {
        return Ok((theta, report));
    }
    let shifted = recentre(&theta, alpha)?;
    let (theta, second) = flow.run(shifted.into_values(), report.steps_taken, observer)?;
    report.absorb(second);
    Ok((theta, report))
}

struct Flow<'a> {
    problem: &'a WallProblem,
    config: &'a RelaxConfig,
    energy: WallEnergy,
    dt_cap: f64,
    residual: Vec<f64>,
    trial: Vec<f64>,
    trial_residual: Vec<f64>,
    c_prime: Vec<f64>,
}

impl<'a> Flow<'a> {
    fn new(problem: &'a WallProblem, config: &'a RelaxConfig) -> Self {
        let n = problem.grid.len();
        let h = problem.grid.spacing();
        // Lipschitz bound of the explicit part: anisotropy plus nonlocal.
        let mut cap = 1.9 / (1.0 + 0.5 * problem.nu * PI / h);
        if config.stepping == Stepping::Explicit {
            cap = cap.min(0.2 * h * h);
        }
        if let Some(d) = config.dt_max {
            cap = cap.min(d);
        }
        Self {
            problem,
            config,
            energy: WallEnergy::new(*problem).without_admissibility_check(),
            dt_cap: cap,
            residual: vec![0.0; n],
            trial: vec![0.0; n],
            trial_residual: vec![0.0; n],
            c_prime: vec![0.0; n],
        }
    }

    fn pin(&self, t: &mut [f64]) {
        let n = t.len();
        let alpha = self.problem.alpha_limit();
        for i in 0..PINNED_CELLS {
            t[i] = alpha;
            t[n - 1 - i] = 0.0;
        }
    }

    fn sup_free(r: &[f64]) -> f64 {
        r[PINNED_CELLS..r.len() - PINNED_CELLS].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn propose(&mut self, t: &[f64], dt: f64) {
        let n = t.len();
        let (lo, hi) = (PINNED_CELLS, n - PINNED_CELLS);
        self.trial.copy_from_slice(t);
        match self.config.stepping {
            Stepping::Explicit => {
                for i in lo..hi {
                    self.trial[i] = t[i] - dt * self.residual[i];
                }
            }
            Stepping::SemiImplicit => {
                // (1 + 2a) x_i - a (x_{i-1} + x_{i+1}) = t_i - dt N_i, with
                // N = r + theta'' the explicit part and pinned neighbours.
                let h = self.problem.grid.spacing();
                let a = dt / (h * h);
                let diag = 1.0 + 2.0 * a;
                let rhs = |i: usize| {
                    let lap = (t[i + 1] - 2.0 * t[i] + t[i - 1]) / (h * h);
                    let mut d = t[i] - dt * (self.residual[i] + lap);
                    if i == lo {
                        d += a * t[lo - 1];
                    }
                    if i == hi - 1 {
                        d += a * t[hi];
                    }
                    d
                };
                let mut denom = diag;
                self.c_prime[lo] = -a / denom;
                self.trial[lo] = rhs(lo) / denom;
                for i in lo + 1..hi {
                    denom = diag + a * self.c_prime[i - 1];
                    self.c_prime[i] = -a / denom;
                    self.trial[i] = (rhs(i) + a * self.trial[i - 1]) / denom;
                }
                for i in (lo..hi - 1).rev() {
                    self.trial[i] -= self.c_prime[i] * self.trial[i + 1];
                }
            }
        }
    }

    fn run(
        &mut self,
        mut t: Vec<f64>,
        step_offset: usize,
        observer: &mut dyn FnMut(&WallSnapshot),
    ) -> Result<(AngleField1D, RelaxReport)> {
        let started = Instant::now();
        let grid = self.problem.grid;
        self.pin(&mut t);
        let e0 = self.energy.energy_and_residual_raw(&t, &mut self.residual)?.total;
        let mut dt = self.config.dt.min(self.dt_cap);
        let mut mon = Monitor::new(e0, Self::sup_free(&self.residual), dt, self.config.trace_every);
        let mut rejections = 0;
        let termination = loop {
            if mon.stationary(self.config) {
                break Termination::Converged;
            }
            if mon.report.steps_taken >= self.config.max_steps {
                break Termination::MaxSteps;
            }
            self.propose(&t, dt);
            let trial = std::mem::take(&mut self.trial);
            let mut trial_res = std::mem::take(&mut self.trial_residual);
            let e_new = self.energy.energy_and_residual_raw(&trial, &mut trial_res)?.total;
            if Monitor::acceptable(mon.report.final_energy, e_new) {
                self.trial = std::mem::replace(&mut t, trial);
                self.trial_residual = std::mem::replace(&mut self.residual, trial_res);
                mon.accept(e_new, Self::sup_free(&self.residual));
                rejections = 0;
                dt = (dt * DT_GROWTH).min(self.dt_cap);
                let every = self.config.checkpoint_every;
                if every > 0 && mon.report.steps_taken.is_multiple_of(every) {
                    let field = AngleField1D::new(grid, t.clone())?;
                    observer(&WallSnapshot {
                        step: step_offset + mon.report.steps_taken,
                        theta: &field,
                        energy: e_new,
                        residual: mon.report.final_residual,
                    });
                }
            } else {
                self.trial = trial;
                self.trial_residual = trial_res;
                mon.report.rejected_steps += 1;
                rejections += 1;
                dt *= 0.5;
                if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                    break Termination::Diverged;
                }
            }
        };
        let report = mon.finish(termination, dt, started);
        Ok((AngleField1D::new(grid, t)?, report))
    }
}
