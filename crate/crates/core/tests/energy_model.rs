use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use fourfold_core::energy::{
    check_coercivity, check_fold_inequality, check_rearrangement_inequality, energy_1d, FilmEnergy, SeminormMethod,
    WallEnergy,
};
use fourfold_core::{AngleField1D, AngleField2D, Grid1D, Grid2D, WallProblem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn bloch_profile_without_nonlocal_term_has_energy_one_half() {
    let g = Grid1D::centered(4096, 40.0).unwrap();
    let p = WallProblem::ninety(0.0, g).unwrap();
    let t = AngleField1D::from_fn(g, |x| (-x).exp().atan()).unwrap();
    let e = energy_1d(&t, &p).unwrap();
    assert!((e.total - 0.5).abs() < 1e-3, "{e:?}");
    assert!((e.exchange - 0.25).abs() < 1e-3);
    assert!((e.anisotropy - 0.25).abs() < 1e-3);
    assert_eq!(e.magnetostatic, 0.0);
}

/// Brute-force double sum of the periodic nonlocal energy, using the exact
/// derivative on the diagonal where the integrand tends to `u'(x)^2`.
fn brute_force_energy(grid: &Grid1D, nu: f64, beta: f64, theta: impl Fn(f64) -> f64, dtheta: impl Fn(f64) -> f64) -> f64 {
    let x = grid.points();
    let h = grid.spacing();
    let w = grid.window();
    let exchange: f64 = 0.5 * h * x.iter().map(|&x| dtheta(x).powi(2)).sum::<f64>();
    let anisotropy: f64 = 0.125 * h * x.iter().map(|&x| (2.0 * theta(x)).sin().powi(2)).sum::<f64>();
    let u: Vec<f64> = x.iter().map(|&x| (theta(x) - beta).sin()).collect();
    let du: Vec<f64> = x.iter().map(|&x| (theta(x) - beta).cos() * dtheta(x)).collect();
    let mut double = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            double += if i == j {
                du[i] * du[i]
            } else {
                let s = x[i] - x[j];
                (u[i] - u[j]).powi(2) * (PI / w).powi(2) / (PI * s / w).sin().powi(2)
            };
        }
    }
    exchange + anisotropy + nu / (8.0 * PI) * h * h * double
}

#[test]
fn tanh_profile_matches_brute_force_oracle() {
    let g = Grid1D::centered(4096, 40.0).unwrap();
    let p = WallProblem::ninety(1.0, g).unwrap();
    let f = |x: f64| FRAC_PI_4 * (1.0 - x.tanh());
    let df = |x: f64| -FRAC_PI_4 / x.cosh().powi(2);
    let t = AngleField1D::from_fn(g, f).unwrap();
    let oracle = brute_force_energy(&g, 1.0, p.beta, f, df);
    let spectral = energy_1d(&t, &p).unwrap().total;
    let quadrature = WallEnergy::new(p).with_seminorm(SeminormMethod::Quadrature).energy(&t).unwrap().total;
    assert!(rel(spectral, oracle) < 1e-5, "spectral {spectral} oracle {oracle}");
    assert!(rel(quadrature, oracle) < 1e-5, "quadrature {quadrature} oracle {oracle}");
}

/// Admissible smooth profile: a tanh wall of random width and centre plus
/// localized bumps.
fn random_wall(rng: &mut ChaCha8Rng, g: Grid1D, alpha: f64) -> AngleField1D {
    let w = rng.random_range(0.5..2.0);
    let c = rng.random_range(-3.0..3.0);
    let bumps: Vec<(f64, f64, f64)> =
        (0..3).map(|_| (rng.random_range(-0.3..0.3), rng.random_range(-4.0..4.0), rng.random_range(0.5..1.5))).collect();
    AngleField1D::from_fn(g, |x| {
        let base = 0.5 * alpha * (1.0 - ((x - c) / w).tanh());
        base + bumps.iter().map(|(a, m, s)| a * (-((x - m) / s).powi(2)).exp()).sum::<f64>()
    })
    .unwrap()
}

fn smooth_direction(rng: &mut ChaCha8Rng, g: Grid1D) -> Vec<f64> {
    let terms: Vec<(f64, f64, f64)> =
        (0..4).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-6.0..6.0), rng.random_range(0.3..2.0))).collect();
    let n = g.len();
    let mut d: Vec<f64> = (0..n)
        .map(|i| terms.iter().map(|(a, m, s)| a * (-((g.x(i) - m) / s).powi(2)).exp()).sum())
        .collect();
    for i in [0, 1, n - 2, n - 1] {
        d[i] = 0.0;
    }
    d
}

#[test]
fn euler_lagrange_residual_is_the_energy_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = Grid1D::centered(512, 40.0).unwrap();
    let h = g.spacing();
    let eps = 1e-6;
    for k in 0..20 {
        let nu = [0.5, 1.0, 5.0, 20.0][k % 4];
        let p = if k % 2 == 0 { WallProblem::ninety(nu, g) } else { WallProblem::one_eighty(nu, g) }.unwrap();
        let t = random_wall(&mut rng, g, p.alpha_limit());
        let mut e = WallEnergy::new(p);
        let r = e.residual(&t).unwrap();
        for _ in 0..20 {
            let d = smooth_direction(&mut rng, g);
            let shifted = |s: f64| {
                let v = t.values().iter().zip(&d).map(|(a, b)| a + s * b).collect();
                AngleField1D::new(g, v).unwrap()
            };
            let fd = (e.energy(&shifted(eps)).unwrap().total - e.energy(&shifted(-eps)).unwrap().total) / (2.0 * eps);
            let an: f64 = h * r.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
            assert!((fd - an).abs() <= 1e-5 * an.abs(), "profile {k}: fd {fd} analytic {an}");
        }
    }
}

fn random_film(rng: &mut ChaCha8Rng, g: Grid2D) -> AngleField2D {
    let modes: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.0..3.0), rng.random_range(0.0..3.0), rng.random_range(0.0..PI)))
        .collect();
    let (lx, ly) = (g.lx(), g.ly());
    let base = rng.random_range(0.0..PI);
    AngleField2D::from_fn(g, |x, y| {
        base + modes.iter().map(|(a, kx, ky, ph)| a * (PI * (kx * x / lx + ky * y / ly) + ph).cos()).sum::<f64>()
    })
    .unwrap()
}

#[test]
fn effective_field_is_the_negative_energy_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = Grid2D::new(12, 20, 0.25).unwrap();
    let h2 = g.spacing().powi(2);
    let eps = 1e-6;
    let mut e = FilmEnergy::new(g, 5.0);
    for k in 0..20 {
        let t = random_film(&mut rng, g);
        let (_, field) = e.energy_and_field(&t).unwrap();
        for _ in 0..3 {
            let d = random_film(&mut rng, g).into_values();
            let shifted = |s: f64| {
                let v = t.values().iter().zip(&d).map(|(a, b)| a + s * b).collect();
                AngleField2D::new(g, v).unwrap()
            };
            let fd = (e.energy(&shifted(eps)).unwrap().total - e.energy(&shifted(-eps)).unwrap().total) / (2.0 * eps);
            let an: f64 = -h2 * field.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
            assert!((fd - an).abs() <= 1e-5 * an.abs(), "field {k}: fd {fd} analytic {an}");
        }
    }
}

#[test]
fn whole_cell_translation_preserves_energy() {
    let g = Grid1D::centered(1024, 60.0).unwrap();
    let p = WallProblem::ninety(3.0, g).unwrap();
    let t = AngleField1D::from_fn(g, |x| FRAC_PI_4 * (1.0 - (x / 1.5).tanh())).unwrap();
    let e0 = energy_1d(&t, &p).unwrap().total;
    for cells in [-40, -7, 1, 13, 50] {
        let e = energy_1d(&t.shift_cells(cells), &p).unwrap().total;
        assert!(rel(e, e0) < 1e-10, "shift {cells}: {e} vs {e0}");
    }
}

#[test]
fn reflection_symmetry_of_the_ninety_degree_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Grid1D::centered(512, 40.0).unwrap();
    let p = WallProblem::ninety(4.0, g).unwrap();
    for _ in 0..10 {
        let t = random_wall(&mut rng, g, FRAC_PI_2);
        let mut v: Vec<f64> = t.values().iter().map(|x| FRAC_PI_2 - x).collect();
        v.reverse();
        let r = AngleField1D::new(g, v).unwrap();
        let (a, b) = (energy_1d(&t, &p).unwrap(), energy_1d(&r, &p).unwrap());
        assert!(rel(b.total, a.total) < 1e-12, "{a:?} {b:?}");
    }
}

/// A 180-degree wall whose normal lies along `x` in a tall strip: the energy
/// gained per unit of extra height is the line energy of the 1D profile.
#[test]
fn tall_strip_reduces_to_the_wall_energy() {
    let (nx, h, nu) = (128, 0.25, 1.0);
    let lx = nx as f64 * h;
    let profile = |x: f64| 2.0 * (-x).exp().atan();
    let g1 = Grid1D::centered(nx, lx).unwrap();
    let wall = energy_1d(&AngleField1D::from_fn(g1, profile).unwrap(), &WallProblem::one_eighty(nu, g1).unwrap())
        .unwrap()
        .total;
    let strip = |ny: usize| {
        let g = Grid2D::new(nx, ny, h).unwrap();
        let t = AngleField2D::from_fn(g, |x, _| profile(x - lx / 2.0)).unwrap();
        FilmEnergy::new(g, nu).energy(&t).unwrap().total
    };
    let per_height = (strip(128) - strip(64)) / (64.0 * h);
    assert!(rel(per_height, wall) < 0.02, "per height {per_height} wall {wall}");
}

fn lemma_profile(rng: &mut ChaCha8Rng, g: Grid1D, alpha: f64, winding: bool) -> AngleField1D {
    let t = random_wall(rng, g, alpha);
    if !winding {
        return t.map(|v| v.clamp(0.0, alpha));
    }
    let a = rng.random_range(0.5..2.5) * PI;
    let (m, s) = (rng.random_range(-5.0..5.0), rng.random_range(0.3..3.0));
    let x = g.points();
    let v = t.values().iter().zip(&x).map(|(v, x)| v + a * (-((x - m) / s).powi(2)).exp()).collect();
    AngleField1D::new(g, v).unwrap()
}

#[test]
fn fold_inequality_on_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let g = Grid1D::centered(256, 40.0).unwrap();
    for k in 0..100 {
        let p = if k % 2 == 0 { WallProblem::ninety(2.0, g) } else { WallProblem::one_eighty(2.0, g) }.unwrap();
        let t = lemma_profile(&mut rng, g, p.alpha_limit(), true);
        let r = check_fold_inequality(&t, &p).unwrap();
        assert!(r.holds, "profile {k}: {r:?}");
    }
}

#[test]
fn weak_coercivity_bound_on_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let g = Grid1D::centered(256, 40.0).unwrap();
    let p = WallProblem::ninety(2.0, g).unwrap();
    for k in 0..100 {
        let t = lemma_profile(&mut rng, g, FRAC_PI_2, false);
        let r = check_coercivity(&t, &p).unwrap();
        assert!(r.energy >= r.weak_bound - 1e-12 * r.energy.max(1.0), "profile {k}: {r:?}");
    }
}

#[test]
fn rearrangement_inequality_on_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let g = Grid1D::centered(256, 40.0).unwrap();
    for k in 0..100 {
        let p = if k % 2 == 0 { WallProblem::ninety(3.0, g) } else { WallProblem::one_eighty(3.0, g) }.unwrap();
        let t = lemma_profile(&mut rng, g, p.alpha_limit(), false);
        let r = check_rearrangement_inequality(&t, &p).unwrap();
        assert!(r.holds, "profile {k}: {r:?}");
    }
}

proptest! {
    #[test]
    fn energy_terms_are_nonnegative(seed in any::<u64>(), nu in 0.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid1D::centered(128, 60.0).unwrap();
        let p = WallProblem::ninety(nu, g).unwrap();
        let e = energy_1d(&random_wall(&mut rng, g, FRAC_PI_2), &p).unwrap();
        prop_assert!(e.exchange >= 0.0 && e.anisotropy >= 0.0 && e.magnetostatic >= 0.0);
        let g2 = Grid2D::new(8, 12, 0.5).unwrap();
        let e2 = FilmEnergy::new(g2, nu).energy(&random_film(&mut rng, g2)).unwrap();
        prop_assert!(e2.exchange >= 0.0 && e2.anisotropy >= 0.0 && e2.magnetostatic >= 0.0);
    }

    #[test]
    fn film_energy_is_invariant_under_the_mirror_maps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid2D::new(8, 12, 0.5).unwrap();
        let t = random_film(&mut rng, g);
        let (nx, ny) = (g.nx(), g.ny());
        let mut e = FilmEnergy::new(g, 4.0);
        let e0 = e.energy(&t).unwrap().total;
        let x_mirror = AngleField2D::from_fn(g, |x, y| {
            let (i, j) = ((x / g.spacing()) as usize, (y / g.spacing()) as usize);
            -t.at(nx - 1 - i, j)
        }).unwrap();
        let y_mirror = AngleField2D::from_fn(g, |x, y| {
            let (i, j) = ((x / g.spacing()) as usize, (y / g.spacing()) as usize);
            PI - t.at(i, ny - 1 - j)
        }).unwrap();
        prop_assert!(rel(e.energy(&x_mirror).unwrap().total, e0) < 1e-10);
        prop_assert!(rel(e.energy(&y_mirror).unwrap().total, e0) < 1e-10);
    }
}
