use fourfold_core::nonlocal::{
    half_laplacian_quadrature, half_laplacian_spectral, h_half_seminorm_sq, h_half_seminorm_sq_quadrature,
    QuadratureKernel, SpectralPlan1D,
};
use fourfold_core::{Error, Grid1D};
use proptest::prelude::*;

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn lorentzian_grid() -> Grid1D {
    Grid1D::centered(8192, 400.0).unwrap()
}

#[test]
fn lorentzian_matches_closed_form() {
    let g = lorentzian_grid();
    let x = g.points();
    let u: Vec<f64> = x.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
    let exact: Vec<f64> = x.iter().map(|x| (1.0 - x * x) / (1.0 + x * x).powi(2)).collect();
    let plan = SpectralPlan1D::new(g);
    let spec = half_laplacian_spectral(&u, &plan).unwrap();
    let quad = half_laplacian_quadrature(&u, &g, QuadratureKernel::Periodic).unwrap();
    let inner = |v: &[f64]| -> f64 {
        x.iter()
            .zip(v.iter().zip(&exact))
            .filter(|(x, _)| x.abs() <= g.window() / 4.0)
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max)
    };
    assert!(inner(&spec) < 1e-4, "spectral {}", inner(&spec));
    assert!(inner(&quad) < 1e-4, "quadrature {}", inner(&quad));
    assert!(rel_l2(&spec, &quad) < 1e-6, "{}", rel_l2(&spec, &quad));
}

#[test]
fn free_space_quadrature_matches_closed_form() {
    let g = Grid1D::centered(4096, 200.0).unwrap();
    let x = g.points();
    let u: Vec<f64> = x.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
    let quad = half_laplacian_quadrature(&u, &g, QuadratureKernel::FreeSpace).unwrap();
    for (xi, qi) in x.iter().zip(&quad) {
        if xi.abs() <= 50.0 {
            let exact = (1.0 - xi * xi) / (1.0 + xi * xi).powi(2);
            assert!((qi - exact).abs() < 1e-4, "x={xi}: {qi} vs {exact}");
        }
    }
}

#[test]
fn gaussian_spectral_and_quadrature_agree() {
    let g = Grid1D::centered(4096, 200.0).unwrap();
    let u: Vec<f64> = g.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
    let spec = half_laplacian_spectral(&u, &SpectralPlan1D::new(g)).unwrap();
    let quad = half_laplacian_quadrature(&u, &g, QuadratureKernel::Periodic).unwrap();
    assert!(rel_l2(&spec, &quad) < 1e-6, "{}", rel_l2(&spec, &quad));
}

#[test]
fn constants_are_annihilated_by_quadrature() {
    let g = Grid1D::centered(256, 40.0).unwrap();
    for kernel in [QuadratureKernel::Periodic, QuadratureKernel::FreeSpace] {
        let out = half_laplacian_quadrature(&[0.7; 256], &g, kernel).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-12));
        assert!(h_half_seminorm_sq_quadrature(&[0.7; 256], &g, kernel).unwrap().abs() < 1e-12);
    }
}

#[test]
fn quadrature_rejects_far_field_mismatch() {
    let g = Grid1D::centered(64, 20.0).unwrap();
    let u: Vec<f64> = (0..64).map(|i| i as f64).collect();
    assert!(matches!(
        half_laplacian_quadrature(&u, &g, QuadratureKernel::Periodic),
        Err(Error::FarFieldMismatch { .. })
    ));
}

#[test]
fn seminorm_forms_agree_on_smooth_bump() {
    let g = Grid1D::centered(2048, 100.0).unwrap();
    let u: Vec<f64> = g.points().iter().map(|x| (1.0 + (x - 0.3).tanh()) * (1.0 - (x + 0.2).tanh()) / (1.0 + 0.1 * x * x)).collect();
    let s = h_half_seminorm_sq(&u, &SpectralPlan1D::new(g)).unwrap();
    let q = h_half_seminorm_sq_quadrature(&u, &g, QuadratureKernel::Periodic).unwrap();
    assert!(s > 0.0);
    assert!(((s - q) / s).abs() < 1e-5, "{s} vs {q}");
}

#[test]
fn seminorm_is_consistent_with_operator() {
    let g = Grid1D::centered(1024, 60.0).unwrap();
    let u: Vec<f64> = g.points().iter().map(|x| (-(x - 1.0).powi(2) / 3.0).exp() - 0.5 * (-(x + 2.0).powi(2)).exp()).collect();
    let plan = SpectralPlan1D::new(g);
    let lu = half_laplacian_spectral(&u, &plan).unwrap();
    let form: f64 = u.iter().zip(&lu).map(|(a, b)| a * b).sum::<f64>() * g.spacing();
    let s = h_half_seminorm_sq(&u, &plan).unwrap();
    assert!(((form - s) / s).abs() < 1e-12);
}

fn bump(g: &Grid1D, c: &[f64]) -> Vec<f64> {
    g.points()
        .iter()
        .map(|x| c.iter().enumerate().map(|(k, a)| a * (-(x - 2.0 * k as f64 + 3.0).powi(2) / (1.0 + k as f64)).exp()).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operators_are_linear_and_self_adjoint(
        a in prop::collection::vec(-1.0f64..1.0, 4),
        b in prop::collection::vec(-1.0f64..1.0, 4),
        s in -2.0f64..2.0,
    ) {
        let g = Grid1D::centered(256, 40.0).unwrap();
        let (u, v) = (bump(&g, &a), bump(&g, &b));
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| s * x + y).collect();
        let plan = SpectralPlan1D::new(g);
        let ops: [Box<dyn Fn(&[f64]) -> Vec<f64>>; 2] = [
            Box::new(|f| half_laplacian_spectral(f, &plan).unwrap()),
            Box::new(|f| half_laplacian_quadrature(f, &g, QuadratureKernel::Periodic).unwrap()),
        ];
        for op in &ops {
            let (lu, lv, lw) = (op(&u), op(&v), op(&w));
            let scale = lw.iter().map(|x| x.abs()).fold(1e-300, f64::max);
            for i in 0..lw.len() {
                prop_assert!((lw[i] - (s * lu[i] + lv[i])).abs() < 1e-12 * scale.max(1.0));
            }
            let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
            let (l, r) = (dot(&u, &lv), dot(&lu, &v));
            prop_assert!((l - r).abs() <= 1e-10 * l.abs().max(r.abs()).max(1e-12));
        }
    }

    #[test]
    fn seminorm_is_nonnegative(a in prop::collection::vec(-1.0f64..1.0, 4)) {
        let g = Grid1D::centered(256, 40.0).unwrap();
        let u = bump(&g, &a);
        prop_assert!(h_half_seminorm_sq(&u, &SpectralPlan1D::new(g)).unwrap() >= 0.0);
        prop_assert!(h_half_seminorm_sq_quadrature(&u, &g, QuadratureKernel::Periodic).unwrap() >= 0.0);
    }
}
