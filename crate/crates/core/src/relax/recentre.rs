use crate::error::{Error, Result};
use crate::field::AngleField1D;

/// Position where `theta` crosses `level`, by linear interpolation. When there
/// are several crossings the one nearest the window centre is returned.
pub fn level_crossing(theta: &AngleField1D, level: f64) -> Option<f64> {
    let g = theta.grid();
    let t = theta.values();
    let mut best: Option<f64> = None;
    for i in 0..t.len() - 1 {
        let (a, b) = (t[i] - level, t[i + 1] - level);
        if a == 0.0 {
            best = nearer(best, g.x(i));
        } else if a * b < 0.0 {
            let x = g.x(i) + g.spacing() * a / (a - b);
            best = nearer(best, x);
        }
    }
    if t[t.len() - 1] == level {
        best = nearer(best, g.x(t.len() - 1));
    }
    best
}

fn nearer(best: Option<f64>, x: f64) -> Option<f64> {
    match best {
        Some(b) if b.abs() <= x.abs() => Some(b),
        _ => Some(x),
    }
}

/// Four-point Lagrange interpolation at fractional index `s`, holding the end
/// values outside the window.
pub(crate) fn cubic_at(t: &[f64], s: f64) -> f64 {
    let n = t.len() as isize;
    let i = s.floor();
    let f = s - i;
    let i = i as isize;
    let p = |k: isize| t[(i + k).clamp(0, n - 1) as usize];
    let w = [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ];
    w[0] * p(-1) + w[1] * p(0) + w[2] * p(1) + w[3] * p(2)
}

/// The linear crossing estimate refined on the cubic interpolant, which removes
/// its `O(h^2)` bias.
pub fn refined_crossing(theta: &AngleField1D, level: f64) -> Option<f64> {
    let g = theta.grid();
    let x_lin = level_crossing(theta, level)?;
    let t = theta.values();
    let s_lin = (x_lin - g.origin()) / g.spacing();
    let cell = s_lin.floor().clamp(0.0, (t.len() - 2) as f64);
    let f = |s: f64| cubic_at(t, s) - level;
    let (mut lo, mut hi) = (cell, cell + 1.0);
    if f(lo) * f(hi) > 0.0 {
        return Some(x_lin);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(g.origin() + 0.5 * (lo + hi) * g.spacing())
}

/// Translates the profile so it crosses `alpha_limit / 2` at `x = 0`.
///
/// The whole-cell part of the shift is exact; only the fractional part is
/// interpolated.
pub fn recentre(theta: &AngleField1D, alpha_limit: f64) -> Result<AngleField1D> {
    let xc = refined_crossing(theta, 0.5 * alpha_limit)
        .ok_or_else(|| Error::Domain(format!("profile never crosses {}", 0.5 * alpha_limit)))?;
    Ok(shift_by(theta, xc))
}

/// `theta(x + d)` resampled on the same grid.
pub(crate) fn shift_by(theta: &AngleField1D, d: f64) -> AngleField1D {
    let h = theta.grid().spacing();
    let cells = d / h;
    let mut whole = cells.floor();
    let mut frac = cells - whole;
    // Sub-rounding offsets are treated as exact whole-cell shifts.
    if frac < 1e-12 {
        frac = 0.0;
    } else if frac > 1.0 - 1e-12 {
        whole += 1.0;
        frac = 0.0;
    }
    let t = theta.values();
    let out: Vec<f64> = (0..t.len())
        .map(|i| {
            let s = i as f64 + whole;
            if frac == 0.0 {
                t[(s as isize).clamp(0, t.len() as isize - 1) as usize]
            } else {
                cubic_at(t, s + frac)
            }
        })
        .collect();
    AngleField1D::new(*theta.grid(), out).expect("finite resample")
}
