//! Grids, angle fields and the pointwise transformations of admissible
//! profiles (folding and rearrangement).
//!
//! The magnetization is parametrized by its in-plane angle `theta` through
//! `m = (-sin theta, cos theta)`. Angles are stored unwrapped.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 1D grid `x_i = x0 + i h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    spacing: f64,
    origin: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, spacing: f64, origin: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { n_points, spacing, origin })
    }

    /// Grid of `n_points` cells covering `[-window/2, window/2]`, symmetric about 0.
    pub fn centered(n_points: usize, window: f64) -> Result<Self> {
        let h = window / n_points as f64;
        Self::new(n_points, h, -((n_points - 1) as f64) * h / 2.0)
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Total window width `n h`.
    pub fn window(&self) -> f64 {
        self.n_points as f64 * self.spacing
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// True when `x_i = -x_{n-1-i}` up to rounding.
    pub fn is_symmetric(&self) -> bool {
        let last = self.x(self.n_points - 1);
        (self.origin + last).abs() <= 1e-12 * self.window()
    }
}

/// In-plane angle sampled on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleField1D {
    grid: Grid1D,
    theta: Vec<f64>,
}

impl AngleField1D {
    pub fn new(grid: Grid1D, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                theta.len()
            )));
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Domain(format!("non-finite angle at index {i}")));
        }
        Ok(Self { grid, theta })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let theta = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        Self::new(grid, theta)
    }

    pub fn constant(grid: Grid1D, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_values(self) -> Vec<f64> {
        self.theta
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, theta: self.theta.iter().map(|&t| f(t)).collect() }
    }

    pub fn first(&self) -> f64 {
        self.theta[0]
    }

    pub fn last(&self) -> f64 {
        self.theta[self.theta.len() - 1]
    }

    /// Whether the far-field values match `(alpha_limit, 0)` within `tol`.
    pub fn is_admissible(&self, alpha_limit: f64, tol: f64) -> bool {
        (self.first() - alpha_limit).abs() <= tol && self.last().abs() <= tol
    }

    pub fn check_admissible(&self, alpha_limit: f64, tol: f64) -> Result<()> {
        if self.is_admissible(alpha_limit, tol) {
            Ok(())
        } else {
            Err(Error::NotAdmissible(format!(
                "far-field values ({:.3e}, {:.3e}) do not match ({alpha_limit:.6}, 0) within {tol:e}",
                self.first(),
                self.last()
            )))
        }
    }

    /// Shift by whole cells, filling the vacated cells with the end values.
    pub fn shift_cells(&self, cells: isize) -> Self {
        let n = self.theta.len() as isize;
        let theta = (0..n)
            .map(|i| {
                let j = (i - cells).clamp(0, n - 1);
                self.theta[j as usize]
            })
            .collect();
        Self { grid: self.grid, theta }
    }
}

/// Uniform cell-centered 2D grid on `[0, nx h] x [0, ny h]`; row `j = 0` is the
/// bottom edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    h: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, h: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid(format!("empty grid {nx}x{ny}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        Ok(Self { nx, ny, h })
    }

    /// Grid for an `lx` by `ly` sample with `cells_per_unit` cells per unit length.
    pub fn for_sample(lx: f64, ly: f64, cells_per_unit: f64) -> Result<Self> {
        if !(lx > 0.0 && ly > 0.0 && cells_per_unit > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "sample {lx}x{ly} at {cells_per_unit} cells/unit"
            )));
        }
        let nx = (lx * cells_per_unit).round() as usize;
        let ny = (ly * cells_per_unit).round() as usize;
        Self::new(nx, ny, 1.0 / cells_per_unit)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn lx(&self) -> f64 {
        self.nx as f64 * self.h
    }

    pub fn ly(&self) -> f64 {
        self.ny as f64 * self.h
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Cell-center coordinates.
    #[inline]
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }
}

/// In-plane angle on a [`Grid2D`], row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleField2D {
    grid: Grid2D,
    theta: Vec<f64>,
}

impl AngleField2D {
    pub fn new(grid: Grid2D, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != grid.n_cells() {
            return Err(Error::InvalidGrid(format!(
                "expected {} cells, got {}",
                grid.n_cells(),
                theta.len()
            )));
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Domain(format!("non-finite angle at cell {i}")));
        }
        Ok(Self { grid, theta })
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut theta = Vec::with_capacity(grid.n_cells());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.center(i, j);
                theta.push(f(x, y));
            }
        }
        Self::new(grid, theta)
    }

    pub fn constant(grid: Grid2D, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.n_cells()])
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_values(self) -> Vec<f64> {
        self.theta
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.theta[self.grid.idx(i, j)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, theta: self.theta.iter().map(|&t| f(t)).collect() }
    }
}

/// In-plane vector field `(m1, m2)` on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub grid: Grid2D,
    pub data: Vec<[f64; 2]>,
}

impl VectorField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, data: vec![[0.0, 0.0]; grid.n_cells()] }
    }

    pub fn uniform(grid: Grid2D, m: [f64; 2]) -> Self {
        Self { grid, data: vec![m; grid.n_cells()] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> [f64; 2] {
        self.data[self.grid.idx(i, j)]
    }
}

/// Unit in-plane magnetization for a single angle.
#[inline]
pub fn unit_vector(theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [-s, c]
}

pub fn magnetization_of(theta: &AngleField2D) -> VectorField2D {
    VectorField2D {
        grid: theta.grid,
        data: theta.theta.iter().map(|&t| unit_vector(t)).collect(),
    }
}

/// Film material parameters in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub exchange_length_nm: f64,
    pub quality_factor: f64,
    pub thickness_nm: f64,
}

impl PhysicalParams {
    /// Epitaxial cobalt values, `l ~ 3.37 nm` and `Q ~ 0.08`.
    pub fn cobalt(thickness_nm: f64) -> Self {
        Self { exchange_length_nm: 3.37, quality_factor: 0.08, thickness_nm }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if ok(self.exchange_length_nm) && ok(self.quality_factor) && ok(self.thickness_nm) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("physical parameters must be positive: {self:?}")))
        }
    }

    /// Bloch wall width `L = l / sqrt(Q)` in nm.
    pub fn bloch_width_nm(&self) -> f64 {
        self.exchange_length_nm / self.quality_factor.sqrt()
    }

    /// Thin-film parameter `nu = d / (l sqrt(Q))`.
    pub fn nu(&self) -> f64 {
        self.thickness_nm / (self.exchange_length_nm * self.quality_factor.sqrt())
    }

    /// Converts a length in nm to units of the Bloch wall width.
    pub fn to_wall_units(&self, length_nm: f64) -> f64 {
        length_nm / self.bloch_width_nm()
    }
}

/// Distance from `theta` to the nearest multiple of pi, with the half-open
/// convention of the restriction-of-rotations map. Range `[0, pi/2]`.
#[inline]
pub fn fold_angle_to_quadrant(theta: f64) -> f64 {
    let k = (theta / PI + 0.5).floor();
    (theta - k * PI).abs()
}

pub fn fold_to_quadrant(theta: &AngleField1D) -> AngleField1D {
    theta.map(fold_angle_to_quadrant)
}

/// Reflection of `[0, alpha]` onto `[0, alpha/2]`.
pub fn fold_to_octant(theta: &AngleField1D, alpha_limit: f64) -> Result<AngleField1D> {
    let half = alpha_limit / 2.0;
    let slack = 1e-12 * alpha_limit.abs().max(1.0);
    if let Some((i, &t)) =
        theta.values().iter().enumerate().find(|(_, &t)| t < -slack || t > alpha_limit + slack)
    {
        return Err(Error::Domain(format!(
            "value {t} at index {i} outside [0, {alpha_limit}]"
        )));
    }
    Ok(theta.map(|t| {
        let t = t.clamp(0.0, alpha_limit);
        if t < half {
            t
        } else {
            alpha_limit - t
        }
    }))
}

/// Rearranges nonnegative samples so the largest sits at index `n/2` and the
/// remaining values alternate left, right, left, ... in decreasing order.
pub fn symmetric_decreasing_rearrangement(rho: &AngleField1D) -> Result<AngleField1D> {
    let values = rho.values();
    if let Some((i, &v)) = values.iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Error::Domain(format!("negative value {v} at index {i}")));
    }
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Descending by value; equal values keep the later index first.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(b.cmp(&a)));

    let center = n / 2;
    let mut out = vec![0.0; n];
    for (rank, &src) in order.iter().enumerate() {
        let offset = rank.div_ceil(2);
        let pos = if rank == 0 {
            center
        } else if rank % 2 == 1 {
            center - offset
        } else {
            center + offset
        };
        out[pos] = values[src];
    }
    AngleField1D::new(*rho.grid(), out)
}

/// `pi/2` and `pi`, the two admissible far-field limits.
pub const ALPHA_NINETY: f64 = FRAC_PI_2;
pub const ALPHA_ONE_EIGHTY: f64 = PI;
/// Charge-free wall orientation of the 90-degree wall.
pub const BETA_NINETY: f64 = -FRAC_PI_4;
