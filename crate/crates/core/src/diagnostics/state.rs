//! Classification of 2D remanent states and boundary-vortex detection.
//!
//! | constant                  | value      | role                                              |
//! |---------------------------|------------|---------------------------------------------------|
//! | `CONCENTRATION`           | 0.8        | bulk fraction near easy axes / in one direction   |
//! | `EASY_BAND`               | pi/8       | distance to an easy axis counted as aligned       |
//! | `BULK_INSET`              | 0.1        | boundary layer excluded from the bulk histogram, as a fraction of the short side |
//! | `VORTEX_ARC_WINDOW`       | 4 cells    | half-width of the arc over which a vortex rotation is measured |
//! | `VORTEX_MIN_ROTATION`     | 0.6 pi     | rotation relative to the tangent that counts as a vortex |
//! | `EDGE_DOMAIN`             | 0.5        | mean tangential `m` on a charged edge that counts as an edge domain |
//! | `CLOSURE_TANGENCY`        | 0.8        | mean tangential `m` on a closure edge           |
//! | `MIN_DOMAIN`              | 0.2        | bulk fraction of each of the two antiparallel domains |
//! | `CORNER_REACH`            | 4 cells    | distance at which a wall segment reaches a corner |

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::field::{unit_vector, AngleField2D, Grid2D};

pub const CONCENTRATION: f64 = 0.8;
pub const EASY_BAND: f64 = FRAC_PI_8;
pub const BULK_INSET: f64 = 0.1;
pub const VORTEX_ARC_WINDOW: usize = 4;
pub const VORTEX_MIN_ROTATION: f64 = 0.6 * PI;
pub const EDGE_DOMAIN: f64 = 0.5;
pub const CLOSURE_TANGENCY: f64 = 0.8;
pub const MIN_DOMAIN: f64 = 0.2;
pub const CORNER_REACH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateLabel {
    C,
    S,
    HalfLandau,
    Monodomain,
    SplitWalls,
    Unclassified,
}

/// Sample edges in counter-clockwise order starting at the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];

    fn index(self) -> usize {
        self as usize
    }

    /// Counter-clockwise unit tangent.
    pub fn tangent(self) -> [f64; 2] {
        match self {
            Edge::Bottom => [1.0, 0.0],
            Edge::Right => [0.0, 1.0],
            Edge::Top => [-1.0, 0.0],
            Edge::Left => [0.0, -1.0],
        }
    }

    pub fn outward_normal(self) -> [f64; 2] {
        let t = self.tangent();
        [t[1], -t[0]]
    }

    /// Corners at the start and end of the edge in traversal order.
    pub fn corners(self) -> [Corner; 2] {
        match self {
            Edge::Bottom => [Corner::BottomLeft, Corner::BottomRight],
            Edge::Right => [Corner::BottomRight, Corner::TopRight],
            Edge::Top => [Corner::TopRight, Corner::TopLeft],
            Edge::Left => [Corner::TopLeft, Corner::BottomLeft],
        }
    }

    pub fn opposite(self) -> Edge {
        Edge::ALL[(self.index() + 2) % 4]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopRight,
    TopLeft,
}

impl Corner {
    fn cell(self, g: &Grid2D) -> (usize, usize) {
        let (r, t) = (g.nx() - 1, g.ny() - 1);
        match self {
            Corner::BottomLeft => (0, 0),
            Corner::BottomRight => (r, 0),
            Corner::TopRight => (r, t),
            Corner::TopLeft => (0, t),
        }
    }
}

/// A point on the boundary where the magnetization turns through the normal
/// relative to the local tangent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVortex {
    pub position: (f64, f64),
    pub edge: Edge,
    /// Set when the vortex lies within the arc window of a corner.
    pub corner: Option<Corner>,
    /// Signed half turn of `m` relative to the tangent, `+-0.5`, along the
    /// counter-clockwise boundary walk.
    pub winding: f64,
    /// Rotation relative to the tangent measured over the arc window.
    pub arc_rotation: f64,
    /// Sign of `m.n` at the vortex centre.
    pub charge: f64,
}

/// Connected piece of a level set of `theta` at an odd multiple of `pi/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallSegment {
    pub level: f64,
    pub cells: usize,
    pub centroid: (f64, f64),
    /// Principal-axis orientation in degrees, in `[0, 180)`.
    pub orientation_deg: f64,
    pub touches: Vec<Edge>,
    pub corners: Vec<Corner>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFeatures {
    /// Mean magnetization on each edge, bottom, right, top, left.
    pub edge_mean: [[f64; 2]; 4],
    /// Angle `theta` of each edge mean.
    pub edge_angle: [f64; 4],
    /// Mean `m.t` on each edge with the counter-clockwise tangent.
    pub edge_tangency: [f64; 4],
    /// Bulk fraction within `EASY_BAND` of any easy axis.
    pub easy_fraction: f64,
    /// Bulk fractions near `theta = 0, pi/2, pi, 3pi/2`.
    pub direction_fraction: [f64; 4],
    pub vortices: Vec<BoundaryVortex>,
    pub degree: i64,
    pub skeleton: Vec<WallSegment>,
    /// Edge carrying the closure domain of a half-Landau state.
    pub closure_edge: Option<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateClassification {
    pub label: StateLabel,
    pub features: StateFeatures,
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

struct BoundaryTrace {
    cells: Vec<(usize, usize)>,
    edges: Vec<Edge>,
    /// Unwrapped angle of `m` relative to the tangent.
    psi: Vec<f64>,
    /// Total rotation of `m` around the closed walk.
    total_rotation: f64,
}

/// Counter-clockwise walk over boundary cells; each corner cell opens the edge
/// that starts there.
fn boundary_trace(theta: &AngleField2D) -> BoundaryTrace {
    let g = *theta.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut cells = Vec::new();
    let mut edges = Vec::new();
    cells.extend((0..nx).map(|i| (i, 0)));
    edges.extend(std::iter::repeat_n(Edge::Bottom, nx));
    if ny > 1 {
        cells.extend((1..ny).map(|j| (nx - 1, j)));
        edges.extend(std::iter::repeat_n(Edge::Right, ny - 1));
        if nx > 1 {
            cells.extend((0..nx - 1).rev().map(|i| (i, ny - 1)));
            edges.extend(std::iter::repeat_n(Edge::Top, nx - 1));
            cells.extend((1..ny - 1).rev().map(|j| (0, j)));
            edges.extend(std::iter::repeat_n(Edge::Left, ny - 2));
        }
    }

    let phi: Vec<f64> = cells.iter().map(|&(i, j)| theta.at(i, j) + FRAC_PI_2).collect();
    let mut psi = Vec::with_capacity(cells.len());
    let (mut phi_acc, mut tau_acc) = (phi[0], 0.0);
    psi.push(phi_acc);
    for k in 1..cells.len() {
        phi_acc += wrap(phi[k] - phi[k - 1]);
        if edges[k] != edges[k - 1] {
            tau_acc += FRAC_PI_2;
        }
        psi.push(phi_acc - tau_acc);
    }
    let closing = wrap(phi[0] - phi[cells.len() - 1]);
    BoundaryTrace { cells, edges, psi, total_rotation: phi_acc - phi[0] + closing }
}

/// Boundary vortices of `theta`, in counter-clockwise order from the bottom-left
/// corner.
pub fn boundary_vortex_scan(theta: &AngleField2D) -> Vec<BoundaryVortex> {
    scan(theta, &boundary_trace(theta))
}

/// Winding number of `m` along the sample boundary.
pub fn boundary_degree(theta: &AngleField2D) -> i64 {
    (boundary_trace(theta).total_rotation / TAU).round() as i64
}

fn scan(theta: &AngleField2D, tr: &BoundaryTrace) -> Vec<BoundaryVortex> {
    let n = tr.psi.len();
    if n < 2 {
        return Vec::new();
    }
    // Extend the walk once around so crossings near the start see both sides.
    let lap = tr.psi[n - 1] - tr.psi[0] + {
        let last = tr.cells[n - 1];
        let first = tr.cells[0];
        wrap(theta.at(first.0, first.1) - theta.at(last.0, last.1)) - FRAC_PI_2
    };
    let psi_at = |k: isize| -> f64 {
        let m = k.rem_euclid(n as isize) as usize;
        let laps = k.div_euclid(n as isize) as f64;
        tr.psi[m] + laps * lap
    };

    // Crossings of the half levels (k + 1/2) pi.
    struct Crossing {
        s: f64,
        level: i64,
        dir: i64,
    }
    let mut crossings: Vec<Crossing> = Vec::new();
    for k in 0..n as isize {
        let (a, b) = (psi_at(k), psi_at(k + 1));
        let (la, lb) = ((a / PI - 0.5).floor() as i64, (b / PI - 0.5).floor() as i64);
        if la == lb {
            continue;
        }
        let dir = (lb - la).signum();
        let mut l = la;
        while l != lb {
            let level = if dir > 0 { l + 1 } else { l };
            let target = (level as f64 + 0.5) * PI;
            let frac = ((target - a) / (b - a)).clamp(0.0, 1.0);
            let c = Crossing { s: k as f64 + frac, level, dir };
            // Jitter: a crossing undone within the window cancels.
            match crossings.last() {
                Some(p) if p.level == c.level && p.dir == -c.dir && c.s - p.s <= VORTEX_ARC_WINDOW as f64 => {
                    crossings.pop();
                }
                _ => crossings.push(c),
            }
            l += dir;
        }
    }

    let g = theta.grid();
    let w = VORTEX_ARC_WINDOW as isize;
    let corner_starts: Vec<usize> = (0..n).filter(|&k| k == 0 || tr.edges[k] != tr.edges[k - 1]).collect();
    let mut out = Vec::new();
    for c in crossings {
        let k = c.s.floor() as isize;
        let rotation = psi_at(k + 1 + w) - psi_at(k - w);
        if rotation.abs() < VORTEX_MIN_ROTATION {
            continue;
        }
        let frac = c.s - k as f64;
        let (i0, j0) = tr.cells[k.rem_euclid(n as isize) as usize];
        let (i1, j1) = tr.cells[(k + 1).rem_euclid(n as isize) as usize];
        let (x0, y0) = g.center(i0, j0);
        let (x1, y1) = g.center(i1, j1);
        let idx = if frac < 0.5 { k } else { k + 1 }.rem_euclid(n as isize) as usize;
        let edge = tr.edges[idx];
        let corner = corner_starts.iter().find_map(|&start| {
            let d = (idx as isize - start as isize).rem_euclid(n as isize).min((start as isize - idx as isize).rem_euclid(n as isize));
            (d <= w).then(|| tr.edges[start].corners()[0])
        });
        // psi = pi/2 mod 2pi points inward, psi = -pi/2 outward.
        let charge = if (c.level).rem_euclid(2) == 0 { -1.0 } else { 1.0 };
        out.push(BoundaryVortex {
            position: (x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)),
            edge,
            corner,
            winding: 0.5 * c.dir as f64,
            arc_rotation: rotation,
            charge,
        });
    }
    out.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap_or(std::cmp::Ordering::Equal));
    out.sort_by_key(|v| v.edge.index());
    out
}

/// Level-set skeleton of `theta` at odd multiples of `pi/4`.
pub fn wall_skeleton(theta: &AngleField2D) -> Vec<WallSegment> {
    let g = *theta.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let t = theta.values();
    let (lo, hi) = t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let first = ((lo / FRAC_PI_4 - 1.0) / 2.0).ceil() as i64;
    let last = ((hi / FRAC_PI_4 - 1.0) / 2.0).floor() as i64;
    let mut out = Vec::new();
    for k in first..=last {
        let level = (2 * k + 1) as f64 * FRAC_PI_4;
        let above = |i: usize, j: usize| theta.at(i, j) >= level;
        let mut on = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                if !above(i, j) {
                    continue;
                }
                let nb = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                on[g.idx(i, j)] = nb.iter().any(|&(a, b)| a < nx && b < ny && !above(a, b));
            }
        }
        let mut seen = vec![false; nx * ny];
        for start in 0..nx * ny {
            if !on[start] || seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(c) = queue.pop_front() {
                let (i, j) = (c % nx, c / nx);
                members.push((i, j));
                for dj in -1isize..=1 {
                    for di in -1isize..=1 {
                        let (a, b) = (i as isize + di, j as isize + dj);
                        if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                            continue;
                        }
                        let q = g.idx(a as usize, b as usize);
                        if on[q] && !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
            out.push(segment(&g, level, &members));
        }
    }
    out
}

fn segment(g: &Grid2D, level: f64, members: &[(usize, usize)]) -> WallSegment {
    let n = members.len() as f64;
    let pts: Vec<(f64, f64)> = members.iter().map(|&(i, j)| g.center(i, j)).collect();
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (dx, dy) = (p.0 - cx, p.1 - cy);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let orientation = (0.5 * (2.0 * sxy).atan2(sxx - syy)).to_degrees().rem_euclid(180.0);
    let (r, t) = (g.nx() - 1, g.ny() - 1);
    let mut touches = Vec::new();
    for (edge, hit) in [
        (Edge::Bottom, members.iter().any(|m| m.1 == 0)),
        (Edge::Right, members.iter().any(|m| m.0 == r)),
        (Edge::Top, members.iter().any(|m| m.1 == t)),
        (Edge::Left, members.iter().any(|m| m.0 == 0)),
    ] {
        if hit {
            touches.push(edge);
        }
    }
    let reach = CORNER_REACH as isize;
    let corners = [Corner::BottomLeft, Corner::BottomRight, Corner::TopRight, Corner::TopLeft]
        .into_iter()
        .filter(|c| {
            let (ci, cj) = c.cell(g);
            members.iter().any(|&(i, j)| {
                (i as isize - ci as isize).abs() <= reach && (j as isize - cj as isize).abs() <= reach
            })
        })
        .collect();
    WallSegment { level, cells: members.len(), centroid: (cx, cy), orientation_deg: orientation, touches, corners }
}

fn edge_cells(g: &Grid2D, edge: Edge) -> Vec<(usize, usize)> {
    let (nx, ny) = (g.nx(), g.ny());
    match edge {
        Edge::Bottom => (0..nx).map(|i| (i, 0)).collect(),
        Edge::Top => (0..nx).map(|i| (i, ny - 1)).collect(),
        Edge::Left => (0..ny).map(|j| (0, j)).collect(),
        Edge::Right => (0..ny).map(|j| (nx - 1, j)).collect(),
    }
}

fn edge_mean(theta: &AngleField2D, edge: Edge) -> [f64; 2] {
    let cells = edge_cells(theta.grid(), edge);
    let mut s = [0.0, 0.0];
    for &(i, j) in &cells {
        let m = unit_vector(theta.at(i, j));
        s[0] += m[0];
        s[1] += m[1];
    }
    let n = cells.len() as f64;
    [s[0] / n, s[1] / n]
}

fn bulk_histogram(theta: &AngleField2D) -> (f64, [f64; 4]) {
    let g = theta.grid();
    let inset = (BULK_INSET * g.nx().min(g.ny()) as f64).floor() as usize;
    let (i0, i1) = (inset, g.nx() - inset);
    let (j0, j1) = (inset, g.ny() - inset);
    let mut counts = [0usize; 4];
    let mut total = 0usize;
    for j in j0..j1 {
        for i in i0..i1 {
            total += 1;
            let t = theta.at(i, j);
            let q = (t / FRAC_PI_2).round();
            if (t - q * FRAC_PI_2).abs() < EASY_BAND {
                counts[(q as i64).rem_euclid(4) as usize] += 1;
            }
        }
    }
    let total = total.max(1) as f64;
    let fr = counts.map(|c| c as f64 / total);
    (fr.iter().sum(), fr)
}

pub fn state_features(theta: &AngleField2D) -> StateFeatures {
    let trace = boundary_trace(theta);
    let vortices = scan(theta, &trace);
    let means = Edge::ALL.map(|e| edge_mean(theta, e));
    let edge_angle = means.map(|m| (-m[0]).atan2(m[1]));
    let edge_tangency = [0, 1, 2, 3].map(|k| dot(means[k], Edge::ALL[k].tangent()));
    let (easy_fraction, direction_fraction) = bulk_histogram(theta);
    StateFeatures {
        edge_mean: means,
        edge_angle,
        edge_tangency,
        easy_fraction,
        direction_fraction,
        vortices,
        degree: (trace.total_rotation / TAU).round() as i64,
        skeleton: wall_skeleton(theta),
        closure_edge: None,
    }
}

pub fn classify_state_2d(theta: &AngleField2D) -> StateClassification {
    let g = theta.grid();
    let mut features = state_features(theta);
    if g.nx() < 2 || g.ny() < 2 {
        return StateClassification { label: StateLabel::Unclassified, features };
    }
    let label = decide(&mut features);
    StateClassification { label, features }
}

fn decide(f: &mut StateFeatures) -> StateLabel {
    if f.easy_fraction < CONCENTRATION || f.degree != 0 {
        return StateLabel::Unclassified;
    }
    let (dom, &dom_fraction) = f
        .direction_fraction
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four directions");
    // Edges whose normal is parallel to the direction `d`.
    let charged_by = |d: usize| -> [Edge; 2] {
        if d.is_multiple_of(2) {
            [Edge::Bottom, Edge::Top]
        } else {
            [Edge::Left, Edge::Right]
        }
    };

    if dom_fraction >= CONCENTRATION {
        let e = unit_vector(dom as f64 * FRAC_PI_2);
        let perp = [-e[1], e[0]];
        let ends = charged_by(dom);
        let means: Vec<f64> = ends.iter().map(|e| dot(f.edge_mean[e.index()], perp)).collect();
        let domains = means.iter().filter(|p| p.abs() >= EDGE_DOMAIN).count();
        return match domains {
            0 => StateLabel::Monodomain,
            2 => {
                let shape = if means[0].signum() == means[1].signum() { StateLabel::S } else { StateLabel::C };
                if corner_pattern_matches(f, shape, ends) {
                    shape
                } else {
                    StateLabel::Unclassified
                }
            }
            _ => StateLabel::Unclassified,
        };
    }

    // Two antiparallel bulk domains separated by walls.
    let axis = if f.direction_fraction[0] + f.direction_fraction[2] >= f.direction_fraction[1] + f.direction_fraction[3] {
        0
    } else {
        1
    };
    if f.direction_fraction[axis] < MIN_DOMAIN || f.direction_fraction[axis + 2] < MIN_DOMAIN {
        return StateLabel::SplitWalls;
    }
    // A closure domain lies along a charged end, runs tangent to it, carries
    // no boundary vortex, and meets two walls at its corners.
    let reaching = |c: Corner| -> Vec<usize> {
        f.skeleton.iter().enumerate().filter(|(_, s)| s.corners.contains(&c)).map(|(k, _)| k).collect()
    };
    let is_closure = |e: Edge| -> bool {
        let [c1, c2] = e.corners();
        let quiet = f.vortices.iter().all(|v| v.edge != e && v.corner != Some(c1) && v.corner != Some(c2));
        let (r1, r2) = (reaching(c1), reaching(c2));
        let walled = r1.iter().any(|a| r2.iter().any(|b| a != b));
        f.edge_tangency[e.index()].abs() >= CLOSURE_TANGENCY && quiet && walled
    };
    let closures: Vec<Edge> = charged_by(axis).into_iter().filter(|&e| is_closure(e)).collect();
    if closures.len() != 1 {
        return StateLabel::SplitWalls;
    }
    let closure = closures[0];
    f.closure_edge = Some(closure);
    StateLabel::HalfLandau
}

/// C states carry their corner vortices on one side, S states on opposite
/// corners.
fn corner_pattern_matches(f: &StateFeatures, shape: StateLabel, ends: [Edge; 2]) -> bool {
    let corners: Vec<Corner> = f.vortices.iter().filter_map(|v| v.corner).collect();
    if corners.len() != 2 || f.vortices.len() != 2 {
        return false;
    }
    let side = |c: Corner, e: Edge| e.corners().contains(&c);
    let (a, b) = (corners[0], corners[1]);
    // One vortex at each charged end.
    let split_ends = (side(a, ends[0]) && side(b, ends[1])) || (side(a, ends[1]) && side(b, ends[0]));
    if !split_ends {
        return false;
    }
    let same_side = Edge::ALL.into_iter().filter(|e| !ends.contains(e)).any(|e| side(a, e) && side(b, e));
    match shape {
        StateLabel::C => same_side,
        StateLabel::S => !same_side,
        _ => false,
    }
}
