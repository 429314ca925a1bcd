//! Thin-film stray field by free-space convolution of the charge density with
//! the cell-averaged Riesz kernel `1/|r|`, evaluated with zero-padded FFTs.
//!
//! Charges live on the sample grid extended by a one-cell rim, where the edge
//! charge of the zero-extended magnetization lands. The padded transform is at
//! least twice the extended size in each direction, so the circular
//! convolution equals the linear one on the extended grid.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{Grid2D, VectorField2D};

/// `-div m` of the zero-extended magnetization on the `(nx + 2) x (ny + 2)`
/// grid. Index `(a, b)` is cell `(a - 1, b - 1)`.
///
/// Fluxes live on cell faces: interior faces carry the average of the two
/// neighbours, boundary faces the value of the inside cell. Interior cells
/// thus see centered differences and the rim holds the full edge charge
/// `m.n / h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity {
    pub ex: usize,
    pub ey: usize,
    pub h: f64,
    pub data: Vec<f64>,
}

impl ChargeDensity {
    #[inline]
    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.data[b * self.ex + a]
    }

    /// Total charge `sum rho h^2`.
    pub fn total(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.h * self.h
    }
}

/// Face flux between `lo` and `lo + 1` along one lattice line of length `n`.
#[inline]
fn face_flux(lo: isize, n: usize, value: impl Fn(usize) -> f64) -> f64 {
    let inside = |k: isize| k >= 0 && k < n as isize;
    match (inside(lo), inside(lo + 1)) {
        (true, true) => 0.5 * (value(lo as usize) + value(lo as usize + 1)),
        (true, false) => value(lo as usize),
        (false, true) => value((lo + 1) as usize),
        (false, false) => 0.0,
    }
}

/// Weight of a face in the adjoint of [`face_flux`]: one for boundary faces.
#[inline]
fn face_weight(k: usize, n: usize, upper: bool) -> f64 {
    if (upper && k + 1 == n) || (!upper && k == 0) {
        1.0
    } else {
        0.5
    }
}

pub fn charge_density_2d(m: &VectorField2D) -> ChargeDensity {
    let g = m.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let (ex, ey) = (nx + 2, ny + 2);
    let inv_h = 1.0 / g.spacing();
    let inside_row = |j: isize| j >= 0 && j < ny as isize;
    let inside_col = |i: isize| i >= 0 && i < nx as isize;
    let mut data = vec![0.0; ex * ey];
    for b in 0..ey {
        let j = b as isize - 1;
        for a in 0..ex {
            let i = a as isize - 1;
            let mut div = 0.0;
            if inside_row(j) {
                let row = |k: usize| m.data[g.idx(k, j as usize)][0];
                div += face_flux(i, nx, row) - face_flux(i - 1, nx, row);
            }
            if inside_col(i) {
                let col = |k: usize| m.data[g.idx(i as usize, k)][1];
                div += face_flux(j, ny, col) - face_flux(j - 1, ny, col);
            }
            data[b * ex + a] = -div * inv_h;
        }
    }
    ChargeDensity { ex, ey, h: g.spacing(), data }
}

/// `int int 1/|r|` over the unit square centered at `(dx, dy)`.
pub fn unit_cell_average(dx: f64, dy: f64) -> f64 {
    // Signed primitive int_0^a int_0^b dx dy / r.
    fn q(a: f64, b: f64) -> f64 {
        let (x, y) = (a.abs(), b.abs());
        if x == 0.0 || y == 0.0 {
            return 0.0;
        }
        let p = x * (y / x).asinh() + y * (x / y).asinh();
        p * a.signum() * b.signum()
    }
    let (x1, x2, y1, y2) = (dx - 0.5, dx + 0.5, dy - 0.5, dy + 0.5);
    q(x2, y2) - q(x1, y2) - q(x2, y1) + q(x1, y1)
}

fn smooth_size(min: usize) -> usize {
    // Smallest 2^a 3^b 5^c >= min.
    let mut n = min.max(1);
    loop {
        let mut r = n;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 1;
    }
}

/// Precomputed kernel transform and FFT plans for one sample grid.
#[derive(Clone)]
pub struct StrayFieldPlan2D {
    grid: Grid2D,
    ex: usize,
    ey: usize,
    px: usize,
    py: usize,
    /// Kernel transform in transposed (`x`-major) layout, scaled by `1/(px py)`.
    kernel_hat: Vec<f64>,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for StrayFieldPlan2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StrayFieldPlan2D")
            .field("grid", &self.grid)
            .field("padded", &(self.px, self.py))
            .finish()
    }
}

/// Caller-owned workspace for [`StrayFieldPlan2D`].
pub struct StrayScratch {
    rows: Vec<Complex64>,
    cols: Vec<Complex64>,
    fft: Vec<Complex64>,
    potential: Vec<f64>,
}

impl StrayFieldPlan2D {
    pub fn new(grid: Grid2D) -> Self {
        let (ex, ey) = (grid.nx() + 2, grid.ny() + 2);
        let (px, py) = (smooth_size(2 * ex), smooth_size(2 * ey));
        let mut planner = FftPlanner::new();
        let mut plan = Self {
            grid,
            ex,
            ey,
            px,
            py,
            kernel_hat: Vec::new(),
            row_fwd: planner.plan_fft_forward(px),
            row_inv: planner.plan_fft_inverse(px),
            col_fwd: planner.plan_fft_forward(py),
            col_inv: planner.plan_fft_inverse(py),
        };

        let mut scratch = plan.make_scratch();
        for v in scratch.rows.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for b in 0..py {
            let dy = if b < py / 2 { b as f64 } else { b as f64 - py as f64 };
            if dy.abs() > (ey - 1) as f64 {
                continue;
            }
            for a in 0..px {
                let dx = if a < px / 2 { a as f64 } else { a as f64 - px as f64 };
                if dx.abs() > (ex - 1) as f64 {
                    continue;
                }
                scratch.rows[b * px + a] = Complex64::new(unit_cell_average(dx, dy), 0.0);
            }
        }
        plan.forward(&mut scratch, py);
        let scale = 1.0 / (px * py) as f64;
        plan.kernel_hat = scratch.cols.iter().map(|c| c.re * scale).collect();
        plan
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn padded_size(&self) -> (usize, usize) {
        (self.px, self.py)
    }

    pub fn make_scratch(&self) -> StrayScratch {
        let len = [&self.row_fwd, &self.row_inv, &self.col_fwd, &self.col_inv]
            .iter()
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let z = Complex64::new(0.0, 0.0);
        StrayScratch {
            rows: vec![z; self.px * self.py],
            cols: vec![z; self.px * self.py],
            fft: vec![z; len],
            potential: vec![0.0; self.ex * self.ey],
        }
    }

    /// Row transforms over the first `rows` rows, then column transforms into
    /// `scratch.cols` (layout `a * py + b`).
    fn forward(&self, s: &mut StrayScratch, rows: usize) {
        let (px, py) = (self.px, self.py);
        self.row_fwd.process_with_scratch(&mut s.rows[..rows * px], &mut s.fft);
        for a in 0..px {
            let col = &mut s.cols[a * py..(a + 1) * py];
            for (b, c) in col.iter_mut().enumerate() {
                *c = if b < rows { s.rows[b * px + a] } else { Complex64::new(0.0, 0.0) };
            }
        }
        self.col_fwd.process_with_scratch(&mut s.cols, &mut s.fft);
    }

    /// Inverse of [`Self::forward`], producing only the first `rows` rows.
    fn inverse(&self, s: &mut StrayScratch, rows: usize) {
        let (px, py) = (self.px, self.py);
        self.col_inv.process_with_scratch(&mut s.cols, &mut s.fft);
        for b in 0..rows {
            for a in 0..px {
                s.rows[b * px + a] = s.cols[a * py + b];
            }
        }
        self.row_inv.process_with_scratch(&mut s.rows[..rows * px], &mut s.fft);
    }

    fn check(&self, grid: &Grid2D) -> Result<()> {
        if grid != &self.grid {
            return Err(Error::PlanMismatch(format!("field grid {grid:?} differs from plan grid {:?}", self.grid)));
        }
        Ok(())
    }

    /// Convolution `phi = k * rho` on the extended grid, with `k` the unit-cell
    /// kernel (so the physical potential is `h phi`). Left in `scratch.potential`.
    fn potential(&self, rho: &ChargeDensity, s: &mut StrayScratch) {
        let (px, ex, ey) = (self.px, self.ex, self.ey);
        for v in s.rows[..ey * px].iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for b in 0..ey {
            for a in 0..ex {
                s.rows[b * px + a] = Complex64::new(rho.data[b * ex + a], 0.0);
            }
        }
        self.forward(s, ey);
        for (c, &k) in s.cols.iter_mut().zip(&self.kernel_hat) {
            *c *= k;
        }
        self.inverse(s, ey);
        for b in 0..ey {
            for a in 0..ex {
                s.potential[b * ex + a] = s.rows[b * px + a].re;
            }
        }
    }

    /// Magnetostatic energy `(nu / 8 pi) int int rho rho' / |r - r'|` and the
    /// stray field `-dE/dm` per unit area.
    pub fn evaluate(&self, m: &VectorField2D, nu: f64, s: &mut StrayScratch) -> Result<(f64, VectorField2D)> {
        self.check(&m.grid)?;
        let rho = charge_density_2d(m);
        self.potential(&rho, s);
        let h = self.grid.spacing();
        let energy = nu / (8.0 * PI) * h.powi(3) * rho.data.iter().zip(&s.potential).map(|(r, p)| r * p).sum::<f64>();

        let (nx, ny, ex) = (self.grid.nx(), self.grid.ny(), self.ex);
        let phi = &s.potential;
        let c = -nu / (4.0 * PI);
        let mut field = VectorField2D::zeros(self.grid);
        for j in 0..ny {
            let b = j + 1;
            let (wd, wu) = (face_weight(j, ny, false), face_weight(j, ny, true));
            for i in 0..nx {
                let a = i + 1;
                let (wl, wr) = (face_weight(i, nx, false), face_weight(i, nx, true));
                let p = phi[b * ex + a];
                let gx = wl * (p - phi[b * ex + a - 1]) + wr * (phi[b * ex + a + 1] - p);
                let gy = wd * (p - phi[(b - 1) * ex + a]) + wu * (phi[(b + 1) * ex + a] - p);
                field.data[self.grid.idx(i, j)] = [c * gx, c * gy];
            }
        }
        Ok((energy, field))
    }

    pub fn energy(&self, m: &VectorField2D, nu: f64, s: &mut StrayScratch) -> Result<f64> {
        self.check(&m.grid)?;
        let rho = charge_density_2d(m);
        self.potential(&rho, s);
        let h = self.grid.spacing();
        Ok(nu / (8.0 * PI) * h.powi(3) * rho.data.iter().zip(&s.potential).map(|(r, p)| r * p).sum::<f64>())
    }
}

pub fn stray_field_2d(m: &VectorField2D, plan: &StrayFieldPlan2D, nu: f64) -> Result<VectorField2D> {
    Ok(plan.evaluate(m, nu, &mut plan.make_scratch())?.1)
}
