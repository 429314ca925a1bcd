//! Property suite at reduced resolution, with a fault-injection mode.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;

use clap::ValueEnum;
use fourfold_core::diagnostics::{classify_state_2d, monotonicity_report, symmetry_residual, uniqueness_probe, StateLabel};
use fourfold_core::energy::{check_coercivity, check_fold_inequality, check_rearrangement_inequality, FilmEnergy, WallEnergy};
use fourfold_core::nonlocal::{half_laplacian_quadrature, half_laplacian_spectral, QuadratureKernel, SpectralPlan1D};
use fourfold_core::relax::{initial_condition_1d, initial_condition_2d, level_crossing, relax_1d, relax_2d, InitRecipe};
use fourfold_core::{AngleField1D, AngleField2D, FilmProblem, Grid1D, Grid2D, RelaxConfig, WallKind, WallProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::manifest::{Outputs, RunManifest};

pub const SEED: u64 = 20_240_917;
const WINDOW: f64 = 200.0;
const POINTS: usize = 2048;

/// Deliberate faults for checking that the suite detects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flips the sign of the anisotropy term in the gradients.
    AnisotropySign,
}

#[derive(Debug, Clone, Serialize)]
pub struct Property {
    pub name: &'static str,
    pub tolerance: String,
    pub observed: String,
    pub pass: bool,
}

fn property(name: &'static str, tolerance: impl Into<String>, observed: impl Into<String>, pass: bool) -> Property {
    Property { name, tolerance: tolerance.into(), observed: observed.into(), pass }
}

fn grid() -> Grid1D {
    Grid1D::centered(POINTS, WINDOW).expect("valid validation grid")
}

fn wall_config() -> RelaxConfig {
    RelaxConfig { dt: 1.0, ..Default::default() }
}

fn closed_form() -> CliResult<Property> {
    let g = grid();
    let p = WallProblem::ninety(0.0, g)?;
    let init = initial_condition_1d(InitRecipe::TanhWall { width: 3.0 }, g, FRAC_PI_2)?;
    let (t, r) = relax_1d(&p, &init, &wall_config())?;
    let err = t.values().iter().enumerate().map(|(i, v)| (v - (-g.x(i)).exp().atan()).abs()).fold(0.0, f64::max);
    let de = (r.final_energy - 0.5).abs();
    Ok(property(
        "local wall closed form",
        "sup error, |E - 1/2| < 1e-3",
        format!("{err:.2e}, {de:.2e}"),
        r.converged() && err < 1e-3 && de < 1e-3,
    ))
}

fn random_wall(rng: &mut ChaCha8Rng, g: Grid1D, alpha: f64) -> CliResult<AngleField1D> {
    let w = rng.random_range(0.5..2.0);
    let c = rng.random_range(-3.0..3.0);
    let bumps: Vec<(f64, f64, f64)> =
        (0..3).map(|_| (rng.random_range(-0.3..0.3), rng.random_range(-4.0..4.0), rng.random_range(0.5..1.5))).collect();
    Ok(AngleField1D::from_fn(g, |x| {
        0.5 * alpha * (1.0 - ((x - c) / w).tanh())
            + bumps.iter().map(|(a, m, s)| a * (-((x - m) / s).powi(2)).exp()).sum::<f64>()
    })?)
}

fn random_film(rng: &mut ChaCha8Rng, g: Grid2D) -> CliResult<AngleField2D> {
    let modes: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (rng.random_range(-1.0..1.0), rng.random_range(0.0..3.0), rng.random_range(0.0..3.0), rng.random_range(0.0..PI))
        })
        .collect();
    let base = rng.random_range(0.0..PI);
    let (lx, ly) = (g.lx(), g.ly());
    Ok(AngleField2D::from_fn(g, |x, y| {
        base + modes.iter().map(|(a, kx, ky, ph)| a * (PI * (kx * x / lx + ky * y / ly) + ph).cos()).sum::<f64>()
    })?)
}

fn gradient_consistency(rng: &mut ChaCha8Rng, mutation: Option<Mutation>) -> CliResult<Property> {
    let flip = mutation == Some(Mutation::AnisotropySign);
    let eps = 1e-6;
    let mut worst = 0.0f64;
    let g = grid();
    for k in 0..10 {
        let kind = if k % 2 == 0 { WallKind::Ninety } else { WallKind::OneEighty };
        let p = WallProblem::with_kind(kind, [1.0, 5.0][k % 2], g)?;
        let t = random_wall(rng, g, p.alpha_limit())?;
        let mut e = WallEnergy::new(p);
        let mut r = e.residual(&t)?;
        if flip {
            for (ri, ti) in r.iter_mut().zip(t.values()).skip(1).take(POINTS - 2) {
                *ri -= 0.5 * (4.0 * ti).sin();
            }
        }
        for _ in 0..5 {
            let (a, m, s) = (rng.random_range(-1.0..1.0), rng.random_range(-4.0..4.0), rng.random_range(0.5..2.0));
            let d: Vec<f64> = (0..POINTS).map(|i| a * (-((g.x(i) - m) / s).powi(2)).exp()).collect();
            let at = |s: f64| AngleField1D::new(g, t.values().iter().zip(&d).map(|(a, b)| a + s * b).collect());
            let fd = (e.energy(&at(eps)?)?.total - e.energy(&at(-eps)?)?.total) / (2.0 * eps);
            let an: f64 = g.spacing() * r.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
            worst = worst.max((fd - an).abs() / an.abs());
        }
    }
    let g2 = Grid2D::new(64, 128, 0.25)?;
    let mut e = FilmEnergy::new(g2, 5.0);
    for _ in 0..3 {
        let t = random_film(rng, g2)?;
        let (_, mut field) = e.energy_and_field(&t)?;
        if flip {
            for (f, ti) in field.iter_mut().zip(t.values()) {
                *f += 0.5 * (4.0 * ti).sin();
            }
        }
        let d = random_film(rng, g2)?.into_values();
        let at = |s: f64| AngleField2D::new(g2, t.values().iter().zip(&d).map(|(a, b)| a + s * b).collect());
        let fd = (e.energy(&at(eps)?)?.total - e.energy(&at(-eps)?)?.total) / (2.0 * eps);
        let an: f64 = -g2.spacing().powi(2) * field.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        worst = worst.max((fd - an).abs() / an.abs());
    }
    Ok(property("gradient consistency", "relative error < 1e-5", format!("{worst:.2e}"), worst < 1e-5))
}

fn operator_agreement() -> CliResult<Property> {
    let g = grid();
    let u: Vec<f64> = g.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
    let a = half_laplacian_spectral(&u, &SpectralPlan1D::new(g))?;
    let b = half_laplacian_quadrature(&u, &g, QuadratureKernel::Periodic)?;
    let num: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    let rel = (num / den).sqrt();
    Ok(property("spectral vs quadrature half-Laplacian", "relative L2 < 1e-6", format!("{rel:.2e}"), rel < 1e-6))
}

fn wall_shape(kind: WallKind) -> CliResult<Property> {
    let g = grid();
    let p = WallProblem::with_kind(kind, 5.0, g)?;
    let init = initial_condition_1d(InitRecipe::TanhWall { width: 3.0 }, g, p.alpha_limit())?;
    let (t, r) = relax_1d(&p, &init, &wall_config())?;
    let m = monotonicity_report(&t);
    let sym = symmetry_residual(&t, p.alpha_limit())?;
    let name = if kind == WallKind::Ninety { "90-degree wall shape (nu = 5)" } else { "180-degree wall shape (nu = 5)" };
    Ok(property(
        name,
        "increase < 1e-9, symmetry < 1e-4",
        format!("{:.1e}, {sym:.1e}", m.max_violation.max(0.0)),
        r.converged() && m.max_violation < 1e-9 && m.strict_in_core && sym < 1e-4,
    ))
}

fn splitting() -> CliResult<Property> {
    let g = grid();
    let mut s = Vec::new();
    for nu in [1.0, 5.0, 50.0] {
        let p = WallProblem::one_eighty(nu, g)?;
        let init = initial_condition_1d(InitRecipe::TanhWall { width: 3.0 }, g, PI)?;
        let (t, _) = relax_1d(&p, &init, &wall_config())?;
        let d = match (level_crossing(&t, FRAC_PI_4), level_crossing(&t, 3.0 * FRAC_PI_4)) {
            (Some(a), Some(b)) => a - b,
            _ => f64::NAN,
        };
        s.push(d);
    }
    Ok(property(
        "180-degree splitting trend",
        "s(1) > s(5) > s(50)",
        format!("{:.3} > {:.3} > {:.3}", s[0], s[1], s[2]),
        s[0] > s[1] && s[1] > s[2],
    ))
}

fn uniqueness() -> CliResult<Property> {
    let g = grid();
    let p = WallProblem::ninety(5.0, g)?;
    let inits = [InitRecipe::TanhWall { width: 3.0 }, InitRecipe::TanhWall { width: 0.7 }, InitRecipe::Step]
        .into_iter()
        .map(|r| initial_condition_1d(r, g, FRAC_PI_2))
        .collect::<Result<Vec<_>, _>>()?;
    let u = uniqueness_probe(&p, &inits, &wall_config())?;
    let d = u.max_pairwise_distance;
    Ok(property("uniqueness from three inits (nu = 5)", "sup distance < 1e-4", format!("{d:.1e}"), d < 1e-4))
}

fn inequalities(rng: &mut ChaCha8Rng) -> CliResult<Vec<Property>> {
    let g = Grid1D::centered(256, 40.0)?;
    let (mut fold, mut coercive, mut rearranged) = (0, 0, 0);
    for k in 0..100 {
        let kind = if k % 2 == 0 { WallKind::Ninety } else { WallKind::OneEighty };
        let p = WallProblem::with_kind(kind, 2.0, g)?;
        let alpha = p.alpha_limit();
        let t = random_wall(rng, g, alpha)?;
        let a = rng.random_range(0.5..2.5) * PI;
        let (m, s) = (rng.random_range(-5.0..5.0), rng.random_range(0.3..3.0));
        let wound = AngleField1D::new(
            g,
            t.values().iter().zip(g.points()).map(|(v, x)| v + a * (-((x - m) / s).powi(2)).exp()).collect(),
        )?;
        fold += check_fold_inequality(&wound, &p)?.holds as usize;
        rearranged += check_rearrangement_inequality(&t.map(|v| v.clamp(0.0, alpha)), &p)?.holds as usize;
        let t90 = random_wall(rng, g, FRAC_PI_2)?.map(|v| v.clamp(0.0, FRAC_PI_2));
        let c = check_coercivity(&t90, &WallProblem::ninety(2.0, g)?)?;
        coercive += c.holds as usize;
    }
    Ok(vec![
        property("fold inequality", "100/100 profiles", format!("{fold}/100"), fold == 100),
        property("coercivity", "100/100 profiles", format!("{coercive}/100"), coercive == 100),
        property("rearrangement inequality", "100/100 profiles", format!("{rearranged}/100"), rearranged == 100),
    ])
}

fn film_mirror(rng: &mut ChaCha8Rng) -> CliResult<Property> {
    let g = Grid2D::new(64, 128, 0.25)?;
    let t = random_film(rng, g)?;
    let nx = g.nx();
    let mirrored = AngleField2D::new(g, (0..g.n_cells()).map(|k| -t.at(nx - 1 - k % nx, k / nx)).collect())?;
    let mut e = FilmEnergy::new(g, 5.0);
    let (a, b) = (e.energy(&t)?.total, e.energy(&mirrored)?.total);
    let rel = (a - b).abs() / a.abs();
    Ok(property("film energy mirror symmetry", "relative difference < 1e-10", format!("{rel:.1e}"), rel < 1e-10))
}

fn film_relaxation() -> CliResult<Property> {
    let p = FilmProblem::new(5.0, Grid2D::new(64, 128, 0.125)?)?;
    let init = initial_condition_2d(InitRecipe::Monodomain { theta: PI / 3.0 }, p.grid)?;
    let cfg = RelaxConfig { residual_tol: 1e-4, max_steps: 40_000, ..Default::default() };
    let (t, r) = relax_2d(&p, &init, &cfg)?;
    let cls = classify_state_2d(&t);
    Ok(property(
        "S state from monodomain pi/3 (8 x 16, nu = 5)",
        "converged, no energy increase, label S, degree 0",
        format!("{:?}, {} violations, {:?}, degree {}", r.termination, r.lyapunov_violations, cls.label, cls.features.degree),
        r.converged() && r.lyapunov_violations == 0 && cls.label == StateLabel::S && cls.features.degree == 0,
    ))
}

pub fn suite(mutation: Option<Mutation>) -> CliResult<Vec<Property>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![
        closed_form()?,
        gradient_consistency(&mut rng, mutation)?,
        operator_agreement()?,
        wall_shape(WallKind::Ninety)?,
        wall_shape(WallKind::OneEighty)?,
        splitting()?,
        uniqueness()?,
    ];
    out.extend(inequalities(&mut rng)?);
    out.push(film_mirror(&mut rng)?);
    out.push(film_relaxation()?);
    Ok(out)
}

pub fn table(props: &[Property]) -> String {
    let w = [
        props.iter().map(|p| p.name.len()).max().unwrap_or(8).max(8),
        props.iter().map(|p| p.tolerance.len()).max().unwrap_or(9).max(9),
        props.iter().map(|p| p.observed.len()).max().unwrap_or(8).max(8),
    ];
    let mut s = format!("{:<a$}  {:<b$}  {:<c$}  verdict\n", "property", "tolerance", "observed", a = w[0], b = w[1], c = w[2]);
    for p in props {
        s.push_str(&format!(
            "{:<a$}  {:<b$}  {:<c$}  {}\n",
            p.name,
            p.tolerance,
            p.observed,
            if p.pass { "pass" } else { "FAIL" },
            a = w[0],
            b = w[1],
            c = w[2]
        ));
    }
    s
}

pub fn cmd_validate(out_dir: &Path, mutation: Option<Mutation>) -> CliResult<()> {
    let start = std::time::Instant::now();
    let props = suite(mutation)?;
    let text = table(&props);
    print!("{text}");
    let mut out = Outputs::new(out_dir)?;
    out.write("validate.txt", text.as_bytes())?;
    out.write_json("validate.json", &props)?;
    let resolved = serde_json::json!({ "points": POINTS, "window": WINDOW, "film_grid": [64, 128], "mutation": mutation });
    let mut manifest = RunManifest::new("validate", "", &resolved);
    manifest.seeds.push(SEED);
    manifest.grids.push(serde_json::to_value(grid()).expect("grid serializes"));
    manifest.timings_s.insert("suite".into(), start.elapsed().as_secs_f64());
    let failed: Vec<&str> = props.iter().filter(|p| !p.pass).map(|p| p.name).collect();
    manifest.validation = Some(serde_json::json!({ "passed": props.len() - failed.len(), "failed": failed }));
    manifest.finish(&mut out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}
