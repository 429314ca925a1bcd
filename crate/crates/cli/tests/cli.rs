use std::path::Path;
use std::process::{Command, Output};

fn fourfold(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fourfold"));
    cmd.args(args).env_remove("FOURFOLD_OUT");
    if let Some(o) = out {
        cmd.env("FOURFOLD_OUT", o);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn uniform_film_without_stray_field_is_a_monodomain() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "lx = 8.0\nly = 16.0\nnu = 0.0\ninit = { kind = \"monodomain\", theta = 0.0 }\n");
    let out = dir.path().join("out");
    let o = fourfold(&["film2d", "--config", &cfg], Some(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary[0]["label"], "Monodomain");
    assert_eq!(summary[0]["steps"], 0);
    let run = out.join("film_8x16_nu0");
    for f in ["theta.grid", "m.csv", "state.json", "energy_trace.csv", "report.json"] {
        assert!(run.join(f).exists(), "{f}");
    }
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 6);
    assert_eq!(manifest["grids"][0]["nx"], 32);
}

#[test]
fn charged_wall_orientation_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.toml", "wall = 180\nnu = 1.0\nbeta = 0.5\n");
    let o = fourfold(&["wall1d", "--config", &cfg, "--out", &dir.path().join("o").to_string_lossy()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("charge-free"));
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = fourfold(&["wall1d", "--config", "/nonexistent/x.toml"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn step_budget_exhaustion_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.toml", "wall = 90\nnu = 5.0\nwindow = 100.0\nresolution = 10.24\n[relax]\nmax_steps = 3\n");
    let o = fourfold(&["wall1d", "--config", &cfg], Some(&dir.path().join("o")));
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("o/manifest.json").exists());
}

#[test]
fn wall_artifacts_and_closed_form_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.toml", "wall = 90\nnu = 0.0\nwindow = 60.0\nresolution = 34.0\n");
    let out = dir.path().join("o");
    let o = fourfold(&["wall1d", "--config", &cfg], Some(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let header = std::fs::read_to_string(out.join("wall90_nu0/profile.csv")).unwrap();
    assert!(header.starts_with("x,theta,el_residual\n"));
    for f in ["energy.json", "tail_fit.json", "tail.csv"] {
        assert!(out.join("wall90_nu0").join(f).exists());
    }
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["validation"][0]["pass"], true);
}

#[test]
fn explicit_runs_with_equal_hashes_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "w.toml",
        "wall = 180\nnu = 2.0\nwindow = 64.0\nresolution = 4.0\n[relax]\ndt = 0.01\nstepping = \"explicit\"\n",
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(fourfold(&["wall1d", "--config", &cfg], Some(&a)).status.success());
    assert!(fourfold(&["wall1d", "--config", &cfg, "--out", &b.to_string_lossy()], None).status.success());
    let (ma, mb) = (json(&a.join("manifest.json")), json(&b.join("manifest.json")));
    assert_eq!(ma["config_hash"], mb["config_hash"]);
    for f in ["profile.csv", "tail.csv", "energy_trace.csv"] {
        let p = Path::new("wall180_nu2").join(f);
        assert_eq!(std::fs::read(a.join(&p)).unwrap(), std::fs::read(b.join(&p)).unwrap(), "{f}");
    }
}

#[test]
fn sweep_writes_one_row_per_unique_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "nu = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 5.0]\nsizes = [[4.0, 8.0]]\n\
         init = { kind = \"monodomain\", theta = 1.0471975511965976 }\nresolution = 2.0\n",
    );
    let out = dir.path().join("o");
    let o = fourfold(&["sweep", "--config", &cfg, "--threads", "2"], Some(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.starts_with("hash,lx,ly,nu,init,label,energy"));
}

#[test]
fn validation_detects_an_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let o = fourfold(&["validate", "--out", &dir.path().join("v").to_string_lossy()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let o = fourfold(&["validate", "--mutate", "anisotropy-sign", "--out", &dir.path().join("m").to_string_lossy()], None);
    assert_eq!(o.status.code(), Some(4));
    let table = String::from_utf8_lossy(&o.stdout).into_owned();
    let line = table.lines().find(|l| l.starts_with("gradient consistency")).unwrap();
    assert!(line.ends_with("FAIL"), "{line}");
}
