use std::path::Path;
use std::time::Instant;

use fourfold_core::diagnostics::classify_state_2d;
use fourfold_core::energy::FilmEnergy;
use fourfold_core::io::{grid_binary, grid_csv};
use fourfold_core::relax::{initial_condition_2d, relax_2d};
use fourfold_core::{magnetization_of, AngleField2D, FilmProblem, RelaxReport};
use serde_json::json;

use crate::config::{load, FilmConfig, FilmRun, GridFormat};
use crate::error::{CliError, CliResult};
use crate::manifest::{Outputs, RunManifest};

pub fn run_dir_name(run: &FilmRun) -> String {
    format!("film_{}x{}_nu{}", run.lx, run.ly, run.nu)
}

pub fn problem(run: &FilmRun) -> CliResult<FilmProblem> {
    Ok(FilmProblem::sample(run.lx, run.ly, run.nu, run.resolution)?)
}

pub fn solve(run: &FilmRun) -> CliResult<(AngleField2D, RelaxReport)> {
    let p = problem(run)?;
    let init = initial_condition_2d(run.init, p.grid)?;
    Ok(relax_2d(&p, &init, &run.relax)?)
}

fn vector_csv(theta: &AngleField2D) -> String {
    let g = theta.grid();
    let m = magnetization_of(theta);
    let mut s = String::from("x,y,m1,m2\n");
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let (x, y) = g.center(i, j);
            let v = m.data[g.idx(i, j)];
            s.push_str(&format!("{x:.17e},{y:.17e},{:.17e},{:.17e}\n", v[0], v[1]));
        }
    }
    s
}

/// Writes the artifacts of one run under `prefix/` and returns its summary row.
pub fn write_run(
    out: &mut Outputs,
    prefix: &str,
    run: &FilmRun,
    theta: &AngleField2D,
    report: &RelaxReport,
) -> CliResult<serde_json::Value> {
    match run.format {
        GridFormat::Binary => out.write(&format!("{prefix}/theta.grid"), &grid_binary(theta, "theta"))?,
        GridFormat::Csv => out.write(&format!("{prefix}/theta.csv"), grid_csv(theta).as_bytes())?,
    }
    out.write(&format!("{prefix}/m.csv"), vector_csv(theta).as_bytes())?;
    let cls = classify_state_2d(theta);
    let energy = FilmEnergy::new(*theta.grid(), run.nu).energy(theta)?;
    out.write_json(&format!("{prefix}/state.json"), &json!({ "label": cls.label, "features": cls.features }))?;
    let mut trace = String::from("step,energy,residual\n");
    for ((s, e), (_, r)) in report.energy_trace.iter().zip(&report.residual_trace) {
        trace.push_str(&format!("{s},{e:.17e},{r:.17e}\n"));
    }
    out.write(&format!("{prefix}/energy_trace.csv"), trace.as_bytes())?;
    out.write_json(
        &format!("{prefix}/report.json"),
        &json!({
            "termination": report.termination,
            "steps_taken": report.steps_taken,
            "rejected_steps": report.rejected_steps,
            "final_residual": report.final_residual,
            "energy": energy,
            "max_relative_increase": report.max_relative_increase,
            "lyapunov_violations": report.lyapunov_violations,
        }),
    )?;
    let walls = cls.features.skeleton.len();
    Ok(json!({
        "run": prefix,
        "lx": run.lx,
        "ly": run.ly,
        "nu": run.nu,
        "label": cls.label,
        "degree": cls.features.degree,
        "boundary_vortices": cls.features.vortices.len(),
        "wall_segments": walls,
        "energy": energy.total,
        "converged": report.converged(),
        "steps": report.steps_taken,
    }))
}

pub fn cmd_film2d(config: &Path, out_dir: &Path, resolution: Option<f64>) -> CliResult<()> {
    let (mut cfg, text): (FilmConfig, String) = load(config)?;
    if let Some(r) = resolution {
        cfg.resolution = r;
    }
    let runs = cfg.runs()?;
    let mut out = Outputs::new(out_dir)?;
    let mut manifest = RunManifest::new("film2d", &text, &runs);
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for run in &runs {
        let name = run_dir_name(run);
        manifest.grids.push(serde_json::to_value(problem(run)?.grid).expect("grid serializes"));
        let start = Instant::now();
        let (theta, report) = solve(run)?;
        manifest.timings_s.insert(name.clone(), start.elapsed().as_secs_f64());
        let row = write_run(&mut out, &name, run, &theta, &report)?;
        eprintln!("{name}: {:?}, label {}", report.termination, row["label"]);
        if !report.converged() {
            failed.push(format!("{name}: {:?}", report.termination));
        }
        summary.push(row);
    }
    out.write_json("summary.json", &summary)?;
    manifest.finish(&mut out)?;
    if !failed.is_empty() {
        return Err(CliError::NotConverged(failed.join(", ")));
    }
    Ok(())
}
