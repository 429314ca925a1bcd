//! TOML run configurations. Lengths are in units of the Bloch wall width;
//! an optional `[physical]` block derives `nu` from nm-scale inputs instead.

use std::path::Path;

use fourfold_core::relax::InitRecipe;
use fourfold_core::{Grid1D, PhysicalParams, RelaxConfig, WallKind, WallProblem, DEFAULT_BOUNDARY_TOLERANCE};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Physical inputs; `thickness_nm` may list several films.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalBlock {
    pub exchange_length_nm: f64,
    pub quality_factor: f64,
    pub thickness_nm: OneOrMany<f64>,
}

impl PhysicalBlock {
    fn nus(&self) -> CliResult<Vec<f64>> {
        self.thickness_nm
            .to_vec()
            .into_iter()
            .map(|d| {
                let p = PhysicalParams {
                    exchange_length_nm: self.exchange_length_nm,
                    quality_factor: self.quality_factor,
                    thickness_nm: d,
                };
                p.validate().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(p.nu())
            })
            .collect()
    }
}

fn resolve_nu(nu: &Option<OneOrMany<f64>>, physical: &Option<PhysicalBlock>) -> CliResult<Vec<f64>> {
    let nus = match (nu, physical) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either `nu` or a [physical] block, not both".into())),
        (None, None) => return Err(CliError::Config("missing `nu` (or a [physical] block)".into())),
        (Some(n), None) => n.to_vec(),
        (None, Some(p)) => p.nus()?,
    };
    if nus.is_empty() {
        return Err(CliError::Config("`nu` list is empty".into()));
    }
    if let Some(bad) = nus.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(CliError::Config(format!("nu must be finite and >= 0, got {bad}")));
    }
    Ok(nus)
}

fn default_window() -> f64 {
    400.0
}

fn default_wall_resolution() -> f64 {
    20.48
}

fn default_wall_init() -> InitRecipe {
    InitRecipe::TanhWall { width: 3.0 }
}

fn default_wall_relax() -> RelaxConfig {
    RelaxConfig { dt: 1.0, ..Default::default() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallConfig {
    /// 90 or 180.
    pub wall: OneOrMany<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<OneOrMany<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalBlock>,
    /// Wall orientation; must be the charge-free value when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default = "default_window")]
    pub window: f64,
    /// Grid points per unit length; the point count is rounded up to a power of two.
    #[serde(default = "default_wall_resolution")]
    pub resolution: f64,
    #[serde(default = "default_wall_init")]
    pub init: InitRecipe,
    #[serde(default = "default_wall_relax")]
    pub relax: RelaxConfig,
}

/// One resolved 1D run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WallRun {
    pub kind: WallKind,
    pub nu: f64,
    pub problem: WallProblem,
    pub init: InitRecipe,
    pub relax: RelaxConfig,
}

impl WallConfig {
    pub fn grid(&self) -> CliResult<Grid1D> {
        if !(self.window > 0.0 && self.resolution > 0.0) {
            return Err(CliError::Config("window and resolution must be positive".into()));
        }
        let n = ((self.window * self.resolution).ceil() as usize).next_power_of_two().max(8);
        Grid1D::centered(n, self.window).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn runs(&self) -> CliResult<Vec<WallRun>> {
        self.relax.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let grid = self.grid()?;
        let mut out = Vec::new();
        for deg in self.wall.to_vec() {
            let kind = WallKind::from_degrees(deg).map_err(|e| CliError::Config(e.to_string()))?;
            for nu in resolve_nu(&self.nu, &self.physical)? {
                let beta = self.beta.unwrap_or(kind.charge_free_beta());
                let problem = WallProblem::new(nu, beta, kind.alpha_limit(), grid, DEFAULT_BOUNDARY_TOLERANCE)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                out.push(WallRun { kind, nu, problem, init: self.init, relax: self.relax });
            }
        }
        Ok(out)
    }
}

fn default_film_resolution() -> f64 {
    4.0
}

fn default_film_relax() -> RelaxConfig {
    RelaxConfig { residual_tol: 1e-4, max_steps: 40_000, ..Default::default() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridFormat {
    #[default]
    Binary,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilmConfig {
    pub lx: f64,
    pub ly: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<OneOrMany<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalBlock>,
    pub init: InitRecipe,
    /// Cells per unit length.
    #[serde(default = "default_film_resolution")]
    pub resolution: f64,
    #[serde(default)]
    pub format: GridFormat,
    #[serde(default = "default_film_relax")]
    pub relax: RelaxConfig,
}

/// One resolved 2D run; also the unit of sweep deduplication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilmRun {
    pub lx: f64,
    pub ly: f64,
    pub nu: f64,
    pub resolution: f64,
    pub init: InitRecipe,
    pub format: GridFormat,
    pub relax: RelaxConfig,
}

impl FilmConfig {
    pub fn runs(&self) -> CliResult<Vec<FilmRun>> {
        self.relax.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.lx > 0.0 && self.ly > 0.0 && self.resolution > 0.0) {
            return Err(CliError::Config("lx, ly and resolution must be positive".into()));
        }
        Ok(resolve_nu(&self.nu, &self.physical)?
            .into_iter()
            .map(|nu| FilmRun {
                lx: self.lx,
                ly: self.ly,
                nu,
                resolution: self.resolution,
                init: self.init,
                format: self.format,
                relax: self.relax,
            })
            .collect())
    }
}

/// Cartesian product of `nu` and sample sizes for 2D runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<OneOrMany<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalBlock>,
    /// `[lx, ly]` pairs.
    pub sizes: Vec<[f64; 2]>,
    /// One recipe, or one per size.
    pub init: OneOrMany<InitRecipe>,
    #[serde(default = "default_film_resolution")]
    pub resolution: f64,
    #[serde(default = "default_film_relax")]
    pub relax: RelaxConfig,
}

impl SweepConfig {
    pub fn runs(&self) -> CliResult<Vec<FilmRun>> {
        self.relax.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let inits = self.init.to_vec();
        if inits.len() != 1 && inits.len() != self.sizes.len() {
            return Err(CliError::Config(format!(
                "`init` has {} entries for {} sizes",
                inits.len(),
                self.sizes.len()
            )));
        }
        let mut out = Vec::new();
        for nu in resolve_nu(&self.nu, &self.physical)? {
            for (k, &[lx, ly]) in self.sizes.iter().enumerate() {
                if !(lx > 0.0 && ly > 0.0) {
                    return Err(CliError::Config(format!("sample size must be positive, got {lx}x{ly}")));
                }
                out.push(FilmRun {
                    lx,
                    ly,
                    nu,
                    resolution: self.resolution,
                    init: inits[if inits.len() == 1 { 0 } else { k }],
                    format: GridFormat::Binary,
                    relax: self.relax,
                });
            }
        }
        Ok(out)
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<T> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn to_toml<T: Serialize>(value: &T) -> CliResult<String> {
    toml::to_string(value).map_err(|e| CliError::Config(e.to_string()))
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<(T, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok((parse(&text)?, text))
}
