//! File formats shared by checkpoints and the command-line tools.
//!
//! Binary grids start with eight ASCII lines, each terminated by `\n`:
//!
//! ```text
//! FOURFOLD-GRID 1
//! nx <columns>
//! ny <rows>
//! h <spacing>
//! dtype f64-le
//! order row-major-x-fastest
//! field <name>
//! end
//! ```
//!
//! followed by `nx * ny` little-endian IEEE-754 doubles, row `j = 0` (the
//! bottom edge) first. Every write goes to a temporary file in the target
//! directory and is renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AngleField1D, AngleField2D, Grid1D, Grid2D};
use crate::problem::{FilmProblem, WallProblem};
use crate::relax::{FilmSnapshot, WallSnapshot};

const GRID_MAGIC: &str = "FOURFOLD-GRID 1";

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::from(e)
    })
}

pub fn grid_binary(theta: &AngleField2D, field: &str) -> Vec<u8> {
    let g = theta.grid();
    let header = format!(
        "{GRID_MAGIC}\nnx {}\nny {}\nh {:e}\ndtype f64-le\norder row-major-x-fastest\nfield {field}\nend\n",
        g.nx(),
        g.ny(),
        g.spacing()
    );
    let mut out = header.into_bytes();
    out.reserve(8 * g.n_cells());
    for v in theta.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_grid_binary(bytes: &[u8]) -> Result<(AngleField2D, String)> {
    let bad = |m: &str| Error::Io(format!("malformed grid file: {m}"));
    let mut lines = Vec::with_capacity(8);
    let mut pos = 0;
    while lines.len() < 8 {
        let end = bytes[pos..].iter().position(|&b| b == b'\n').ok_or_else(|| bad("truncated header"))?;
        lines.push(std::str::from_utf8(&bytes[pos..pos + end]).map_err(|_| bad("header is not ASCII"))?);
        pos += end + 1;
    }
    let value = |line: &str, key: &str| -> Result<String> {
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_owned)
            .ok_or_else(|| bad(&format!("expected `{key}`")))
    };
    if lines[0] != GRID_MAGIC {
        return Err(bad("bad magic"));
    }
    let nx: usize = value(lines[1], "nx")?.parse().map_err(|_| bad("nx"))?;
    let ny: usize = value(lines[2], "ny")?.parse().map_err(|_| bad("ny"))?;
    let h: f64 = value(lines[3], "h")?.parse().map_err(|_| bad("h"))?;
    if value(lines[4], "dtype")? != "f64-le" || value(lines[5], "order")? != "row-major-x-fastest" {
        return Err(bad("unsupported layout"));
    }
    let field = value(lines[6], "field")?;
    if lines[7] != "end" {
        return Err(bad("missing end line"));
    }
    let body = &bytes[pos..];
    if body.len() != 8 * nx * ny {
        return Err(bad(&format!("expected {} data bytes, found {}", 8 * nx * ny, body.len())));
    }
    let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    Ok((AngleField2D::new(Grid2D::new(nx, ny, h)?, data)?, field))
}

/// `x,theta` rows for a 1D profile, with optional extra columns.
pub fn profile_csv(theta: &AngleField1D, extra: &[(&str, &[f64])]) -> String {
    let g = theta.grid();
    let mut s = String::from("x,theta");
    for (name, _) in extra {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (i, t) in theta.values().iter().enumerate() {
        let _ = write!(s, "{:.17e},{:.17e}", g.x(i), t);
        for (_, col) in extra {
            let _ = write!(s, ",{:.17e}", col[i]);
        }
        s.push('\n');
    }
    s
}

/// One line per grid row, bottom row first.
pub fn grid_csv(theta: &AngleField2D) -> String {
    let g = theta.grid();
    let mut s = String::new();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{:.17e}", theta.at(i, j));
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckpointGrid {
    Wall(Grid1D),
    Film(Grid2D),
}

/// JSON sidecar written next to each checkpoint snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub grid: CheckpointGrid,
    pub nu: f64,
    pub beta: Option<f64>,
    pub step: usize,
    pub energy: f64,
    pub residual: f64,
    pub data_file: String,
}

fn write_sidecar(dir: &Path, stem: &str, meta: &CheckpointMeta) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.json"));
    let json = serde_json::to_vec_pretty(meta).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&path, &json)?;
    Ok(path)
}

/// CSV profile plus sidecar; returns the sidecar path.
pub fn write_wall_checkpoint(dir: &Path, problem: &WallProblem, snap: &WallSnapshot) -> Result<PathBuf> {
    let stem = format!("wall_step{:09}", snap.step);
    let data_file = format!("{stem}.csv");
    write_atomic(&dir.join(&data_file), profile_csv(snap.theta, &[]).as_bytes())?;
    let meta = CheckpointMeta {
        grid: CheckpointGrid::Wall(problem.grid),
        nu: problem.nu,
        beta: Some(problem.beta),
        step: snap.step,
        energy: snap.energy,
        residual: snap.residual,
        data_file,
    };
    write_sidecar(dir, &stem, &meta)
}

/// Binary grid plus sidecar; returns the sidecar path.
pub fn write_film_checkpoint(dir: &Path, problem: &FilmProblem, snap: &FilmSnapshot) -> Result<PathBuf> {
    let stem = format!("film_step{:09}", snap.step);
    let data_file = format!("{stem}.grid");
    write_atomic(&dir.join(&data_file), &grid_binary(snap.theta, "theta"))?;
    let meta = CheckpointMeta {
        grid: CheckpointGrid::Film(problem.grid),
        nu: problem.nu,
        beta: None,
        step: snap.step,
        energy: snap.energy,
        residual: snap.residual,
        data_file,
    };
    write_sidecar(dir, &stem, &meta)
}
