//! Gradient-flow relaxation to steady states.

mod init;
mod one_d;
mod recentre;
mod two_d;

pub use init::{initial_condition_1d, initial_condition_2d, InitRecipe};
pub use one_d::{relax_1d, relax_1d_observed, WallSnapshot, PINNED_CELLS};
pub use recentre::{level_crossing, recentre, refined_crossing};
pub(crate) use recentre::cubic_at as cubic_at_index;
pub use two_d::{relax_2d, relax_2d_observed, FilmSnapshot};

use serde::{Deserialize, Serialize};

/// Time discretization of the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stepping {
    /// Forward Euler; `dt` is capped at `0.2 h^2`.
    Explicit,
    /// Exchange implicit, everything else explicit.
    #[default]
    SemiImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelaxConfig {
    /// Initial time step.
    pub dt: f64,
    /// Upper bound for the adaptive step. `None` uses a stability estimate.
    pub dt_max: Option<f64>,
    pub max_steps: usize,
    /// Sup-norm of `theta_t` at which the flow counts as stationary.
    pub residual_tol: f64,
    /// Relative per-step energy decrease below which the flow counts as stalled.
    pub energy_tol: f64,
    pub stepping: Stepping,
    /// Observer interval in accepted steps; 0 disables.
    pub checkpoint_every: usize,
    /// Trace sampling interval in accepted steps.
    pub trace_every: usize,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            dt_max: None,
            max_steps: 1_000_000,
            residual_tol: 1e-8,
            energy_tol: 1e-12,
            stepping: Stepping::SemiImplicit,
            checkpoint_every: 0,
            trace_every: 100,
        }
    }
}

impl RelaxConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: &str| Err(crate::Error::InvalidParameter(m.into()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if matches!(self.dt_max, Some(d) if !(d > 0.0)) {
            return bad("dt_max must be positive");
        }
        if !(self.residual_tol > 0.0) || !(self.energy_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.trace_every == 0 {
            return bad("trace_every must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxSteps,
    Diverged,
}

/// Accepted steps may raise the energy by at most this fraction of `|E|`.
pub const LYAPUNOV_TOLERANCE: f64 = 1e-10;
/// Acceptance threshold used by the line search (tighter than the monitor).
const ACCEPT_TOLERANCE: f64 = 1e-11;
const DT_GROWTH: f64 = 1.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxReport {
    /// Accepted steps.
    pub steps_taken: usize,
    pub rejected_steps: usize,
    pub final_residual: f64,
    pub final_energy: f64,
    /// `(step, energy)` samples including the first and last state.
    pub energy_trace: Vec<(usize, f64)>,
    /// `(step, sup residual)` samples.
    pub residual_trace: Vec<(usize, f64)>,
    pub termination: Termination,
    pub wall_clock_s: f64,
    /// Largest `(E_new - E_old) / |E_old|` over accepted steps.
    pub max_relative_increase: f64,
    /// Accepted steps whose increase exceeded [`LYAPUNOV_TOLERANCE`].
    pub lyapunov_violations: usize,
    pub final_dt: f64,
}

impl RelaxReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// Concatenates a continuation run, shifting its step counters.
    pub(crate) fn absorb(&mut self, other: RelaxReport) {
        let base = self.steps_taken;
        self.energy_trace.extend(other.energy_trace.into_iter().map(|(s, e)| (s + base, e)));
        self.residual_trace.extend(other.residual_trace.into_iter().map(|(s, r)| (s + base, r)));
        self.steps_taken += other.steps_taken;
        self.rejected_steps += other.rejected_steps;
        self.final_residual = other.final_residual;
        self.final_energy = other.final_energy;
        self.termination = other.termination;
        self.wall_clock_s += other.wall_clock_s;
        self.max_relative_increase = self.max_relative_increase.max(other.max_relative_increase);
        self.lyapunov_violations += other.lyapunov_violations;
        self.final_dt = other.final_dt;
    }
}

/// Shared accept/reject bookkeeping for both solvers.
struct Monitor {
    report: RelaxReport,
    last_decrease: f64,
    trace_every: usize,
}

impl Monitor {
    fn new(energy: f64, residual: f64, dt: f64, trace_every: usize) -> Self {
        Self {
            report: RelaxReport {
                steps_taken: 0,
                rejected_steps: 0,
                final_residual: residual,
                final_energy: energy,
                energy_trace: vec![(0, energy)],
                residual_trace: vec![(0, residual)],
                termination: Termination::MaxSteps,
                wall_clock_s: 0.0,
                max_relative_increase: f64::NEG_INFINITY,
                lyapunov_violations: 0,
                final_dt: dt,
            },
            last_decrease: f64::INFINITY,
            trace_every,
        }
    }

    fn stationary(&self, cfg: &RelaxConfig) -> bool {
        let e = self.report.final_energy;
        self.report.final_residual <= cfg.residual_tol
            && (self.report.steps_taken == 0 || self.last_decrease <= cfg.energy_tol * e.abs().max(1.0))
    }

    fn acceptable(old: f64, new: f64) -> bool {
        new.is_finite() && new <= old + ACCEPT_TOLERANCE * old.abs()
    }

    fn accept(&mut self, energy: f64, residual: f64) {
        let old = self.report.final_energy;
        let rel = (energy - old) / old.abs().max(f64::MIN_POSITIVE);
        self.report.max_relative_increase = self.report.max_relative_increase.max(rel);
        if energy - old > LYAPUNOV_TOLERANCE * old.abs() {
            self.report.lyapunov_violations += 1;
        }
        self.last_decrease = (old - energy).abs();
        self.report.steps_taken += 1;
        self.report.final_energy = energy;
        self.report.final_residual = residual;
        if self.report.steps_taken.is_multiple_of(self.trace_every) {
            self.push_trace();
        }
    }

    fn push_trace(&mut self) {
        let s = self.report.steps_taken;
        if self.report.energy_trace.last().map(|p| p.0) != Some(s) {
            self.report.energy_trace.push((s, self.report.final_energy));
            self.report.residual_trace.push((s, self.report.final_residual));
        }
    }

    fn finish(mut self, termination: Termination, dt: f64, started: std::time::Instant) -> RelaxReport {
        self.push_trace();
        if self.report.max_relative_increase == f64::NEG_INFINITY {
            self.report.max_relative_increase = 0.0;
        }
        self.report.termination = termination;
        self.report.final_dt = dt;
        self.report.wall_clock_s = started.elapsed().as_secs_f64();
        self.report
    }
}
