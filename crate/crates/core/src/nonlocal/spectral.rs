use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{check_far_field, DEFAULT_FAR_FIELD_TOLERANCE};
use crate::error::{Error, Result};
use crate::field::Grid1D;

/// FFT plan and `|k|` symbol for the periodic half-Laplacian on a [`Grid1D`].
#[derive(Clone)]
pub struct SpectralPlan1D {
    grid: Grid1D,
    symbol: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    far_field_tolerance: f64,
}

impl std::fmt::Debug for SpectralPlan1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan1D")
            .field("grid", &self.grid)
            .field("far_field_tolerance", &self.far_field_tolerance)
            .finish()
    }
}

/// Caller-owned workspace for [`SpectralPlan1D`] evaluations.
pub struct SpectralScratch {
    buf: Vec<Complex64>,
    fft: Vec<Complex64>,
}

impl SpectralPlan1D {
    pub fn new(grid: Grid1D) -> Self {
        let n = grid.len();
        let w = grid.window();
        // FFT ordering: j in [0, n/2) -> j, j in [n/2, n) -> j - n.
        let symbol = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                2.0 * PI * m.abs() / w
            })
            .collect();
        let mut planner = FftPlanner::new();
        Self {
            grid,
            symbol,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            far_field_tolerance: DEFAULT_FAR_FIELD_TOLERANCE,
        }
    }

    pub fn with_far_field_tolerance(mut self, tolerance: f64) -> Self {
        self.far_field_tolerance = tolerance;
        self
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// `|k_j|` in FFT order.
    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    pub fn far_field_tolerance(&self) -> f64 {
        self.far_field_tolerance
    }

    pub fn make_scratch(&self) -> SpectralScratch {
        let n = self.grid.len();
        let len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        SpectralScratch { buf: vec![Complex64::new(0.0, 0.0); n], fft: vec![Complex64::new(0.0, 0.0); len] }
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.grid.len() {
            return Err(Error::PlanMismatch(format!(
                "operand has {} samples, plan expects {}",
                u.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }

    fn forward_into(&self, u: &[f64], scratch: &mut SpectralScratch) {
        for (b, &v) in scratch.buf.iter_mut().zip(u) {
            *b = Complex64::new(v, 0.0);
        }
        self.forward.process_with_scratch(&mut scratch.buf, &mut scratch.fft);
    }

    /// `out = IFFT(|k| FFT(u))` after checking the far-field precondition.
    pub fn apply_into(&self, u: &[f64], out: &mut [f64], scratch: &mut SpectralScratch) -> Result<()> {
        self.check_len(u)?;
        check_far_field(u, self.far_field_tolerance)?;
        self.apply_unchecked_into(u, out, scratch);
        Ok(())
    }

    pub(crate) fn apply_unchecked_into(&self, u: &[f64], out: &mut [f64], scratch: &mut SpectralScratch) {
        self.forward_into(u, scratch);
        let inv_n = 1.0 / self.grid.len() as f64;
        for (b, &k) in scratch.buf.iter_mut().zip(&self.symbol) {
            *b *= k * inv_n;
        }
        self.inverse.process_with_scratch(&mut scratch.buf, &mut scratch.fft);
        for (o, b) in out.iter_mut().zip(&scratch.buf) {
            *o = b.re;
        }
    }

    /// `sum_j |k_j| |u_j|^2 h / n`, the discrete `int u (-d2/dx2)^{1/2} u dx`.
    pub fn seminorm_sq(&self, u: &[f64], scratch: &mut SpectralScratch) -> Result<f64> {
        self.check_len(u)?;
        check_far_field(u, self.far_field_tolerance)?;
        self.forward_into(u, scratch);
        let h = self.grid.spacing();
        let n = self.grid.len() as f64;
        let s: f64 = scratch.buf.iter().zip(&self.symbol).map(|(b, &k)| k * b.norm_sqr()).sum();
        Ok(s * h / n)
    }
}

pub fn half_laplacian_spectral(u: &[f64], plan: &SpectralPlan1D) -> Result<Vec<f64>> {
    let mut out = vec![0.0; u.len()];
    plan.apply_into(u, &mut out, &mut plan.make_scratch())?;
    Ok(out)
}

pub fn h_half_seminorm_sq(u: &[f64], plan: &SpectralPlan1D) -> Result<f64> {
    plan.seminorm_sq(u, &mut plan.make_scratch())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> SpectralPlan1D {
        SpectralPlan1D::new(Grid1D::centered(256, 40.0).unwrap())
    }

    #[test]
    fn symbol_is_abs_wavenumber() {
        let p = plan();
        assert_eq!(p.symbol()[0], 0.0);
        let w = p.grid().window();
        assert!((p.symbol()[3] - 6.0 * PI / w).abs() < 1e-15);
        assert!((p.symbol()[253] - 6.0 * PI / w).abs() < 1e-15);
        assert!((p.symbol()[128] - 256.0 * PI / w).abs() < 1e-12);
    }

    #[test]
    fn constants_are_annihilated() {
        let p = plan();
        let out = half_laplacian_spectral(&vec![2.5; 256], &p).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-13));
        assert!(h_half_seminorm_sq(&vec![2.5; 256], &p).unwrap().abs() < 1e-20);
    }

    #[test]
    fn cosine_is_an_eigenfunction() {
        let p = plan();
        let g = *p.grid();
        let w = g.window();
        for m in [1usize, 3, 7] {
            let k = 2.0 * PI * m as f64 / w;
            let u: Vec<f64> = g.points().iter().map(|&x| (k * x).cos()).collect();
            let out = half_laplacian_spectral(&u, &p).unwrap();
            for (o, v) in out.iter().zip(&u) {
                assert!((o - k * v).abs() < 1e-12);
            }
            let s = h_half_seminorm_sq(&u, &p).unwrap();
            assert!((s - k * w / 2.0).abs() < 1e-11 * k * w);
        }
    }

    #[test]
    fn mismatched_ends_are_rejected() {
        let p = plan();
        let g = *p.grid();
        let u: Vec<f64> = g.points().iter().map(|&x| x.tanh()).collect();
        assert!(matches!(half_laplacian_spectral(&u, &p), Err(Error::FarFieldMismatch { .. })));
        assert!(h_half_seminorm_sq(&u, &p).is_err());
        assert!(matches!(half_laplacian_spectral(&[0.0; 8], &p), Err(Error::PlanMismatch(_))));
    }
}
