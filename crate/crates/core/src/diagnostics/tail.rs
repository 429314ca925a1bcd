//! Power-law fit of the right tail with automatic window selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::AngleField1D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFitResult {
    /// Least-squares slope of `log theta` against `log x`.
    pub slope: f64,
    pub intercept: f64,
    pub fit_window: [f64; 2],
    pub r_squared: f64,
    /// A stretch of at least `crossover_decades` with `|slope| < crossover_slope`
    /// between the core and the fit window.
    pub crossover_detected: bool,
    /// Extent of that stretch when detected.
    pub crossover_window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TailFitOptions {
    pub points_per_decade: usize,
    /// Half-width of the band the local slope must stay in.
    pub stability: f64,
    pub min_decades: f64,
    pub crossover_slope: f64,
    pub crossover_decades: f64,
    /// Samples beyond this fraction of the window are excluded, since the
    /// pinned ends distort the outermost tail.
    pub edge_fraction: f64,
}

impl Default for TailFitOptions {
    fn default() -> Self {
        Self {
            points_per_decade: 20,
            stability: 0.1,
            min_decades: 0.5,
            crossover_slope: 1.5,
            crossover_decades: 0.5,
            edge_fraction: 0.125,
        }
    }
}

pub fn tail_fit(theta: &AngleField1D) -> Result<TailFitResult> {
    tail_fit_with(theta, &TailFitOptions::default())
}

pub fn tail_fit_with(theta: &AngleField1D, opts: &TailFitOptions) -> Result<TailFitResult> {
    let g = theta.grid();
    let t = theta.values();
    let x_end = opts.edge_fraction * g.window();
    let pts: Vec<(f64, f64)> = (0..t.len()).map(|i| (g.x(i), t[i])).filter(|&(x, v)| x > 0.0 && x <= x_end && v > 0.0).collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientTail("fewer than four positive samples on x > 0".into()));
    }
    // The core ends where theta first drops below a quarter of its peak, the
    // right end of the nonincreasing approach to zero.
    let peak = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let core_end = pts.iter().rposition(|p| p.1 >= 0.25 * peak).map_or(0, |i| i + 1);
    let tail = &pts[core_end.min(pts.len() - 1)..];
    if tail.len() < 4 || tail.iter().any(|p| p.1 <= 0.0) {
        return Err(Error::InsufficientTail("no positive tail beyond the core".into()));
    }
    let (x0, x1) = (tail[0].0, tail[tail.len() - 1].0);
    let decades = (x1 / x0).log10();
    let m = (decades * opts.points_per_decade as f64).floor() as usize + 1;
    if m < 5 {
        return Err(Error::InsufficientTail(format!("tail spans only {decades:.2} decades")));
    }
    let lx: Vec<f64> = (0..m).map(|k| x0.ln() + (x1 / x0).ln() * k as f64 / (m - 1) as f64).collect();
    let ly: Vec<f64> = lx.iter().map(|&l| interp_log(tail, l.exp()).ln()).collect();
    // Centered local slopes at interior resample points.
    let slope: Vec<f64> = (1..m - 1).map(|k| (ly[k + 1] - ly[k - 1]) / (lx[k + 1] - lx[k - 1])).collect();

    // Outermost maximal run of local slopes inside a band of width 2*stability.
    let need = opts.min_decades * std::f64::consts::LN_10;
    let mut best: Option<(usize, usize)> = None;
    for end in (0..slope.len()).rev() {
        let (mut lo, mut hi) = (slope[end], slope[end]);
        let mut start = end;
        while start > 0 {
            let s = slope[start - 1];
            if s.max(hi) - s.min(lo) > 2.0 * opts.stability {
                break;
            }
            lo = lo.min(s);
            hi = hi.max(s);
            start -= 1;
        }
        if lx[end + 1] - lx[start + 1] >= need {
            best = Some((start, end));
            break;
        }
    }
    let (start, end) = best.ok_or_else(|| {
        Error::InsufficientTail(format!("no stable power-law window of {} decades", opts.min_decades))
    })?;
    let (a, b) = (start + 1, end + 1);
    let (slope_fit, intercept, r2) = least_squares(&lx[a..=b], &ly[a..=b]);

    let mut crossover_window = None;
    let mut run: Option<usize> = None;
    for k in 0..=start {
        let small = k < start && slope[k].abs() < opts.crossover_slope;
        match (small, run) {
            (true, None) => run = Some(k),
            (false, Some(s)) => {
                if lx[k] - lx[s + 1] >= opts.crossover_decades * std::f64::consts::LN_10 {
                    crossover_window = Some([lx[s + 1].exp(), lx[k].exp()]);
                }
                run = None;
            }
            _ => {}
        }
    }
    Ok(TailFitResult {
        slope: slope_fit,
        intercept,
        fit_window: [lx[a].exp(), lx[b].exp()],
        r_squared: r2,
        crossover_detected: crossover_window.is_some(),
        crossover_window,
    })
}

/// Linear interpolation of `log theta` in `log x` between bracketing samples.
fn interp_log(pts: &[(f64, f64)], x: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 < x);
    if i == 0 {
        return pts[0].1;
    }
    if i >= pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (xa, ya) = pts[i - 1];
    let (xb, yb) = pts[i];
    let w = (x.ln() - xa.ln()) / (xb.ln() - xa.ln());
    (ya.ln() * (1.0 - w) + yb.ln() * w).exp()
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, my - slope * mx, r2)
}
