//! Direct `O(n^2)` quadrature of the half-Laplacian integral representation
//!
//! ```text
//! (-d2/dx2)^{1/2} u (x) = (1/pi) PV int (u(x) - u(y)) / (x - y)^2 dy
//! ```
//!
//! used as an independent check of the spectral realization and by the
//! inequality checks, which need the pointwise double-integral form.

use std::f64::consts::PI;

use super::{check_far_field, DEFAULT_FAR_FIELD_TOLERANCE};
use crate::error::{Error, Result};
use crate::field::Grid1D;

/// Far-field model for the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKernel {
    /// Window is one period; the kernel is the image sum
    /// `sum_m (x - y + m W)^-2 = (pi/W)^2 / sin^2(pi (x - y) / W)`.
    /// Matches the boundary model of the spectral operator.
    Periodic,
    /// Free space, with `u` continued outside the window by the mean of its end
    /// values; the outside contribution is integrated analytically.
    FreeSpace,
}

fn kernel_table(grid: &Grid1D, kernel: QuadratureKernel) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing();
    let w = grid.window();
    let mut k = vec![0.0; n];
    for (d, kd) in k.iter_mut().enumerate().skip(1) {
        let s = d as f64 * h;
        *kd = match kernel {
            QuadratureKernel::Periodic => {
                let t = (PI / w) / (PI * s / w).sin();
                t * t
            }
            QuadratureKernel::FreeSpace => 1.0 / (s * s),
        };
    }
    k
}

fn validate(u: &[f64], grid: &Grid1D) -> Result<f64> {
    if u.len() != grid.len() {
        return Err(Error::PlanMismatch(format!("operand has {} samples, grid {}", u.len(), grid.len())));
    }
    check_far_field(u, DEFAULT_FAR_FIELD_TOLERANCE)?;
    Ok(0.5 * (u[0] + u[u.len() - 1]))
}

const SIXTH_ORDER_D2: [f64; 4] = [-49.0 / 18.0, 1.5, -0.15, 1.0 / 90.0];

/// Distances from sample `i` to the two window edges.
fn edge_distances(grid: &Grid1D, i: usize) -> (f64, f64) {
    let h = grid.spacing();
    let x = grid.x(i);
    let left = grid.x(0) - 0.5 * h;
    let right = grid.x(grid.len() - 1) + 0.5 * h;
    (x - left, right - x)
}

/// Principal-value quadrature of the half-Laplacian.
///
/// With the cell containing `x` filled in by the limit `-u''(x) / 2` of the
/// integrand, the sum is the trapezoid rule, which is spectrally accurate for
/// the periodic kernel. `u''` uses a sixth-order centered stencil so that the
/// filled-in cell does not limit the accuracy.
pub fn half_laplacian_quadrature(u: &[f64], grid: &Grid1D, kernel: QuadratureKernel) -> Result<Vec<f64>> {
    let c = validate(u, grid)?;
    let n = u.len();
    let h = grid.spacing();
    let k = kernel_table(grid, kernel);
    let periodic = kernel == QuadratureKernel::Periodic;
    let neighbor = |j: isize| -> f64 {
        if (0..n as isize).contains(&j) {
            u[j as usize]
        } else if periodic {
            u[j.rem_euclid(n as isize) as usize]
        } else {
            c
        }
    };

    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let ui = u[i];
        let mut acc = 0.0;
        for (j, &uj) in u.iter().enumerate() {
            if j != i {
                acc += (ui - uj) * k[i.abs_diff(j)];
            }
        }
        acc *= h;
        let ii = i as isize;
        let second = (SIXTH_ORDER_D2[0] * ui
            + (1..4)
                .map(|d| SIXTH_ORDER_D2[d] * (neighbor(ii + d as isize) + neighbor(ii - d as isize)))
                .sum::<f64>())
            / (h * h);
        acc -= 0.5 * second * h;
        if !periodic {
            let (a, b) = edge_distances(grid, i);
            acc += (ui - c) * (1.0 / a + 1.0 / b);
        }
        *o = acc / PI;
    }
    Ok(out)
}

/// Double-sum form `(1/2pi) sum_{i != j} (u_i - u_j)^2 w_ij h^2` of the
/// seminorm.
///
/// The diagonal cell, where the integrand tends to `u'(x)^2`, is folded into
/// the nearest-neighbour weight, so `w` stays a nonincreasing function of the
/// (circular) distance.
pub fn h_half_seminorm_sq_quadrature(u: &[f64], grid: &Grid1D, kernel: QuadratureKernel) -> Result<f64> {
    let c = validate(u, grid)?;
    let n = u.len();
    let h = grid.spacing();
    let mut k = kernel_table(grid, kernel);
    let nn = 0.5 / (h * h);
    k[1] += nn;
    if kernel == QuadratureKernel::Periodic {
        // The wrap-around pair is also at circular distance h.
        k[n - 1] += nn;
    }

    let mut pairs = 0.0;
    for i in 0..n {
        let ui = u[i];
        let mut row = 0.0;
        for j in (i + 1)..n {
            let d = ui - u[j];
            row += d * d * k[j - i];
        }
        pairs += row;
    }
    // Ordered sum counts each pair twice.
    let mut total = 2.0 * pairs * h * h / (2.0 * PI);

    if kernel == QuadratureKernel::FreeSpace {
        let mut tail = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            let (a, b) = edge_distances(grid, i);
            tail += (ui - c).powi(2) * (1.0 / a + 1.0 / b);
        }
        // Diagonal correction for the two end cells against the constant outside.
        let ends = (u[0] - c).powi(2) + (u[n - 1] - c).powi(2);
        total += (2.0 * h * tail + ends * nn * h * h) / (2.0 * PI);
    }
    Ok(total)
}
