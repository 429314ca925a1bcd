use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::commands::film2d;
use crate::config::{load, FilmRun, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::{config_hash, OutputFile, Outputs, RunManifest};

/// Runs in first-appearance order with repeated parameter sets removed.
pub fn dedupe(runs: Vec<FilmRun>) -> Vec<(String, FilmRun)> {
    let mut seen = HashSet::new();
    runs.into_iter()
        .map(|r| (config_hash("film2d-run", &r), r))
        .filter(|(h, _)| seen.insert(h.clone()))
        .collect()
}

struct Row {
    hash: String,
    run: FilmRun,
    summary: serde_json::Value,
    files: Vec<OutputFile>,
    seconds: f64,
}

fn execute(root: &Path, hash: &str, run: &FilmRun) -> CliResult<Row> {
    let start = Instant::now();
    let prefix = format!("runs/{}", &hash[..16]);
    let mut out = Outputs::new(root)?;
    let (theta, report) = film2d::solve(run)?;
    let summary = film2d::write_run(&mut out, &prefix, run, &theta, &report)?;
    Ok(Row { hash: hash.to_string(), run: *run, summary, files: out.files, seconds: start.elapsed().as_secs_f64() })
}

fn csv_row(r: &Row) -> String {
    let s = &r.summary;
    let init = serde_json::to_string(&r.run.init).expect("recipe serializes").replace('"', "'");
    format!(
        "{},{},{},{},\"{}\",{},{:.12e},{},{},{},{},{}\n",
        &r.hash[..16],
        r.run.lx,
        r.run.ly,
        r.run.nu,
        init,
        s["label"].as_str().unwrap_or("?"),
        s["energy"].as_f64().unwrap_or(f64::NAN),
        s["degree"],
        s["boundary_vortices"],
        s["wall_segments"],
        s["converged"],
        s["steps"],
    )
}

pub fn cmd_sweep(config: &Path, out_dir: &Path, resolution: Option<f64>) -> CliResult<()> {
    let (mut cfg, text): (SweepConfig, String) = load(config)?;
    if let Some(r) = resolution {
        cfg.resolution = r;
    }
    let all = cfg.runs()?;
    let requested = all.len();
    let runs = dedupe(all);
    eprintln!("sweep: {} runs ({} duplicates removed)", runs.len(), requested - runs.len());
    let rows: Vec<CliResult<Row>> = runs.par_iter().map(|(h, r)| execute(out_dir, h, r)).collect();
    let rows: Vec<Row> = rows.into_iter().collect::<CliResult<_>>()?;

    let mut out = Outputs::new(out_dir)?;
    let mut manifest = RunManifest::new("sweep", &text, &runs.iter().map(|(_, r)| r).collect::<Vec<_>>());
    let mut csv = String::from("hash,lx,ly,nu,init,label,energy,degree,boundary_vortices,wall_segments,converged,steps\n");
    let mut failed = Vec::new();
    for r in &rows {
        csv.push_str(&csv_row(r));
        out.files.extend(r.files.iter().cloned());
        manifest.timings_s.insert(r.hash[..16].to_string(), r.seconds);
        manifest.grids.push(serde_json::to_value(film2d::problem(&r.run)?.grid).expect("grid serializes"));
        if r.summary["converged"] != true {
            failed.push(r.hash[..16].to_string());
        }
    }
    out.write("summary.csv", csv.as_bytes())?;
    manifest.finish(&mut out)?;
    if !failed.is_empty() {
        return Err(CliError::NotConverged(format!("runs {}", failed.join(", "))));
    }
    Ok(())
}
