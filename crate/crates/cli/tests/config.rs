use fourfold_cli::config::{parse, to_toml, FilmConfig, OneOrMany, SweepConfig, WallConfig};
use fourfold_cli::manifest::config_hash;
use fourfold_cli::commands::sweep::dedupe;
use fourfold_core::relax::InitRecipe;
use fourfold_core::{RelaxConfig, Stepping};
use proptest::prelude::*;

#[test]
fn wall_config_defaults_and_lists() {
    let cfg: WallConfig = parse("wall = [90, 180]\nnu = [1.0, 5.0, 50.0]\n").unwrap();
    let runs = cfg.runs().unwrap();
    assert_eq!(runs.len(), 6);
    assert_eq!(runs[0].problem.grid.len(), 8192);
    assert_eq!(runs[3].problem.beta, 0.0);
}

#[test]
fn charged_orientation_is_a_config_error() {
    let cfg: WallConfig = parse("wall = 90\nnu = 1.0\nbeta = 0.0\n").unwrap();
    let msg = cfg.runs().unwrap_err().to_string();
    assert!(msg.contains("charge-free"), "{msg}");
}

#[test]
fn physical_block_sets_nu() {
    let text = "lx = 8.0\nly = 16.0\ninit = { kind = \"monodomain\", theta = 0.0 }\n\
                [physical]\nexchange_length_nm = 3.37\nquality_factor = 0.08\nthickness_nm = [5.0, 10.0]\n";
    let runs = parse::<FilmConfig>(text).unwrap().runs().unwrap();
    let expected = 5.0 / (3.37 * 0.08f64.sqrt());
    assert!((runs[0].nu - expected).abs() < 1e-12);
    assert!((runs[1].nu - 2.0 * expected).abs() < 1e-12);
    let both = format!("nu = 1.0\n{text}");
    assert!(parse::<FilmConfig>(&both).unwrap().runs().is_err());
}

#[test]
fn unknown_keys_are_rejected() {
    assert!(parse::<WallConfig>("wall = 90\nnu = 1.0\nwindw = 3.0\n").is_err());
}

#[test]
fn sweep_expands_and_dedupes() {
    let cfg: SweepConfig =
        parse("nu = [1.0, 2.0, 1.0]\nsizes = [[8.0, 16.0], [4.0, 8.0]]\ninit = { kind = \"monodomain\", theta = 1.0 }\n")
            .unwrap();
    let runs = cfg.runs().unwrap();
    assert_eq!(runs.len(), 6);
    let unique = dedupe(runs);
    assert_eq!(unique.len(), 4);
    assert_eq!(unique[0].1.nu, 1.0);
    assert_eq!(unique[0].0, config_hash("film2d-run", &unique[0].1));
}

fn recipe() -> impl Strategy<Value = InitRecipe> {
    prop_oneof![
        (-3.0f64..3.0).prop_map(|theta| InitRecipe::Monodomain { theta }),
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(left, right)| InitRecipe::HalfSplit { left, right }),
        (0.1f64..5.0).prop_map(|width| InitRecipe::TanhWall { width }),
        Just(InitRecipe::Step),
    ]
}

proptest! {
    #[test]
    fn film_config_round_trips(
        lx in 1.0f64..64.0,
        ly in 1.0f64..64.0,
        nus in prop::collection::vec(0.0f64..100.0, 1..4),
        init in recipe(),
        resolution in 1.0f64..16.0,
        dt in 1e-3f64..1.0,
        dt_max in prop::option::of(0.01f64..2.0),
        explicit in any::<bool>(),
    ) {
        let cfg = FilmConfig {
            lx,
            ly,
            nu: Some(OneOrMany::Many(nus)),
            physical: None,
            init,
            resolution,
            format: Default::default(),
            relax: RelaxConfig {
                dt,
                dt_max,
                stepping: if explicit { Stepping::Explicit } else { Stepping::SemiImplicit },
                ..Default::default()
            },
        };
        let text = to_toml(&cfg).unwrap();
        let back: FilmConfig = parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(to_toml(&back).unwrap(), text);
    }

    #[test]
    fn wall_config_round_trips(nu in 0.0f64..100.0, window in 10.0f64..1000.0, deg in prop::sample::select(vec![90u32, 180])) {
        let text = format!("wall = {deg}\nnu = {nu:?}\nwindow = {window:?}\n");
        let cfg: WallConfig = parse(&text).unwrap();
        let again: WallConfig = parse(&to_toml(&cfg).unwrap()).unwrap();
        prop_assert_eq!(again, cfg);
    }
}
