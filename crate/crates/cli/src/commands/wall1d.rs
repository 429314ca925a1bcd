use std::path::Path;
use std::time::Instant;

use fourfold_core::diagnostics::{monotonicity_report, symmetry_residual, tail_fit};
use fourfold_core::energy::WallEnergy;
use fourfold_core::io::profile_csv;
use fourfold_core::relax::{initial_condition_1d, relax_1d};
use fourfold_core::{AngleField1D, RelaxReport, WallKind};
use serde_json::json;

use crate::config::{load, WallConfig, WallRun};
use crate::error::{CliError, CliResult};
use crate::manifest::{Outputs, RunManifest};

pub fn run_dir_name(run: &WallRun) -> String {
    format!("wall{}_nu{}", run.kind.degrees(), run.nu)
}

pub struct WallOutcome {
    pub theta: AngleField1D,
    pub report: RelaxReport,
}

pub fn solve(run: &WallRun) -> CliResult<WallOutcome> {
    let init = initial_condition_1d(run.init, run.problem.grid, run.problem.alpha_limit())?;
    let (theta, report) = relax_1d(&run.problem, &init, &run.relax).map_err(|e| match e {
        fourfold_core::Error::NotAdmissible(m) => {
            CliError::Config(format!("initial profile does not reach its limits inside the window: {m}"))
        }
        other => other.into(),
    })?;
    Ok(WallOutcome { theta, report })
}

fn tail_csv(theta: &AngleField1D) -> String {
    let g = theta.grid();
    let mut s = String::from("log10_x,log10_theta\n");
    for (i, &t) in theta.values().iter().enumerate() {
        let x = g.x(i);
        if x > 0.0 && t > 0.0 {
            s.push_str(&format!("{:.17e},{:.17e}\n", x.log10(), t.log10()));
        }
    }
    s
}

/// Writes the artifacts of one run under `prefix/`.
pub fn write_run(out: &mut Outputs, prefix: &str, run: &WallRun, o: &WallOutcome) -> CliResult<serde_json::Value> {
    let mut energy = WallEnergy::new(run.problem);
    let residual = energy.residual(&o.theta)?;
    let breakdown = energy.energy(&o.theta)?;
    out.write(&format!("{prefix}/profile.csv"), profile_csv(&o.theta, &[("el_residual", &residual)]).as_bytes())?;
    out.write_json(
        &format!("{prefix}/energy.json"),
        &json!({
            "nu": run.nu,
            "wall": run.kind.degrees(),
            "beta": run.problem.beta,
            "energy": breakdown,
            "termination": o.report.termination,
            "steps_taken": o.report.steps_taken,
            "final_residual": o.report.final_residual,
        }),
    )?;
    let fit = match tail_fit(&o.theta) {
        Ok(f) => serde_json::to_value(f).expect("tail fit serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    };
    out.write_json(&format!("{prefix}/tail_fit.json"), &fit)?;
    out.write(&format!("{prefix}/tail.csv"), tail_csv(&o.theta).as_bytes())?;
    let mut trace = String::from("step,energy,residual\n");
    for ((s, e), (_, r)) in o.report.energy_trace.iter().zip(&o.report.residual_trace) {
        trace.push_str(&format!("{s},{e:.17e},{r:.17e}\n"));
    }
    out.write(&format!("{prefix}/energy_trace.csv"), trace.as_bytes())?;
    let mono = monotonicity_report(&o.theta);
    let symmetry = symmetry_residual(&o.theta, run.problem.alpha_limit()).ok();
    Ok(json!({
        "run": prefix,
        "energy": breakdown.total,
        "converged": o.report.converged(),
        "nonincreasing": mono.is_nonincreasing,
        "symmetry_residual": symmetry,
        "tail_fit": fit,
    }))
}

/// Sup-norm distance of a local 90-degree wall from `arctan(exp(-x))`.
fn closed_form_check(run: &WallRun, o: &WallOutcome) -> Option<serde_json::Value> {
    if run.nu != 0.0 || run.kind != WallKind::Ninety {
        return None;
    }
    let g = o.theta.grid();
    let err = o.theta.values().iter().enumerate().map(|(i, t)| (t - (-g.x(i)).exp().atan()).abs()).fold(0.0, f64::max);
    let pass = err < 1e-3 && (o.report.final_energy - 0.5).abs() < 1e-3;
    Some(json!({
        "check": "closed-form local wall",
        "sup_error": err,
        "energy": o.report.final_energy,
        "tolerance": 1e-3,
        "pass": pass,
    }))
}

pub fn cmd_wall1d(config: &Path, out_dir: &Path, resolution: Option<f64>) -> CliResult<()> {
    let (mut cfg, text): (WallConfig, String) = load(config)?;
    if let Some(r) = resolution {
        cfg.resolution = r;
    }
    let runs = cfg.runs()?;
    let mut out = Outputs::new(out_dir)?;
    let mut manifest = RunManifest::new("wall1d", &text, &runs);
    manifest.grids.push(serde_json::to_value(cfg.grid()?).expect("grid serializes"));
    let mut summary = Vec::new();
    let mut checks = Vec::new();
    let mut failed = Vec::new();
    for run in &runs {
        let name = run_dir_name(run);
        let start = Instant::now();
        let o = solve(run)?;
        manifest.timings_s.insert(name.clone(), start.elapsed().as_secs_f64());
        summary.push(write_run(&mut out, &name, run, &o)?);
        checks.extend(closed_form_check(run, &o));
        if !o.report.converged() {
            failed.push(format!("{name}: {:?}", o.report.termination));
        }
        eprintln!("{name}: {:?} after {} steps, E = {:.8}", o.report.termination, o.report.steps_taken, o.report.final_energy);
    }
    out.write_json("summary.json", &summary)?;
    if !checks.is_empty() {
        manifest.validation = Some(json!(checks));
    }
    manifest.finish(&mut out)?;
    if !failed.is_empty() {
        return Err(CliError::NotConverged(failed.join(", ")));
    }
    if checks.iter().any(|c| c["pass"] == false) {
        return Err(CliError::Validation("closed-form local wall check failed".into()));
    }
    Ok(())
}
