//! Fixtures shared by the benchmarks.

use std::f64::consts::PI;

use fourfold_core::{AngleField1D, AngleField2D, Grid1D, Grid2D};

pub fn wall_profile(n: usize, window: f64) -> AngleField1D {
    let g = Grid1D::centered(n, window).expect("power-of-two grid");
    AngleField1D::from_fn(g, |x| 0.25 * PI * (1.0 - (x / 3.0).tanh())).expect("finite profile")
}

/// Half-split film with a smooth vertical wall.
pub fn film(nx: usize, ny: usize, h: f64) -> AngleField2D {
    let g = Grid2D::new(nx, ny, h).expect("valid grid");
    let cx = 0.5 * g.lx();
    AngleField2D::from_fn(g, |x, y| 0.5 * PI * (1.0 - ((x - cx) / 1.5).tanh()) + 0.1 * (y / g.ly() * PI).sin())
        .expect("finite field")
}
