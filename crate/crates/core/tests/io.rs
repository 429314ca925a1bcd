use std::f64::consts::PI;

use fourfold_core::io::{
    grid_binary, grid_csv, profile_csv, read_grid_binary, write_atomic, write_film_checkpoint, write_wall_checkpoint,
    CheckpointGrid, CheckpointMeta,
};
use fourfold_core::relax::{FilmSnapshot, WallSnapshot};
use fourfold_core::{AngleField1D, AngleField2D, FilmProblem, Grid1D, Grid2D, WallProblem};

fn film() -> AngleField2D {
    AngleField2D::from_fn(Grid2D::new(5, 3, 0.25).unwrap(), |x, y| x - 2.0 * y + PI).unwrap()
}

#[test]
fn binary_grid_round_trips_bit_exactly() {
    let t = film();
    let bytes = grid_binary(&t, "theta");
    let header = std::str::from_utf8(&bytes[..bytes.len() - 8 * 15]).unwrap();
    assert_eq!(header.lines().count(), 8);
    assert!(header.starts_with("FOURFOLD-GRID 1\nnx 5\nny 3\n"));
    let (back, name) = read_grid_binary(&bytes).unwrap();
    assert_eq!(name, "theta");
    assert_eq!(back, t);
}

#[test]
fn corrupted_grid_files_are_rejected() {
    let bytes = grid_binary(&film(), "theta");
    assert!(read_grid_binary(&bytes[..bytes.len() - 1]).is_err());
    assert!(read_grid_binary(&bytes[..20]).is_err());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(read_grid_binary(&bad).is_err());
}

#[test]
fn csv_layouts() {
    let g = Grid1D::centered(8, 8.0).unwrap();
    let t = AngleField1D::from_fn(g, |x| -x).unwrap();
    let col: Vec<f64> = (0..8).map(f64::from).collect();
    let csv = profile_csv(&t, &[("residual", &col)]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,theta,residual");
    assert_eq!(lines.len(), 9);
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![g.x(0), -g.x(0), 0.0]);
    let f = film();
    let grid = grid_csv(&f);
    let rows: Vec<Vec<f64>> = grid.lines().map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][4], f.at(4, 2));
}

#[test]
fn atomic_write_replaces_whole_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("out.txt");
    write_atomic(&path, b"first").unwrap();
    write_atomic(&path, b"second").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), b"second");
    let leftovers: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn checkpoints_carry_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = Grid1D::centered(16, 20.0).unwrap();
    let wall = WallProblem::ninety(2.0, g1).unwrap();
    let theta = AngleField1D::from_fn(g1, |x| (-x).exp().atan()).unwrap();
    let side = write_wall_checkpoint(dir.path(), &wall, &WallSnapshot { step: 40, theta: &theta, energy: 1.5, residual: 1e-3 })
        .unwrap();
    let meta: CheckpointMeta = serde_json::from_slice(&std::fs::read(&side).unwrap()).unwrap();
    assert_eq!(meta.grid, CheckpointGrid::Wall(g1));
    assert_eq!((meta.step, meta.nu, meta.beta), (40, 2.0, Some(wall.beta)));
    assert!(dir.path().join(&meta.data_file).exists());

    let t = film();
    let problem = FilmProblem::new(5.0, *t.grid()).unwrap();
    let side = write_film_checkpoint(dir.path(), &problem, &FilmSnapshot { step: 7, theta: &t, energy: 3.0, residual: 0.1 })
        .unwrap();
    let meta: CheckpointMeta = serde_json::from_slice(&std::fs::read(&side).unwrap()).unwrap();
    assert_eq!(meta.beta, None);
    let (back, _) = read_grid_binary(&std::fs::read(dir.path().join(&meta.data_file)).unwrap()).unwrap();
    assert_eq!(back, t);
}
