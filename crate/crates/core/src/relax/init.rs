use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AngleField1D, AngleField2D, Grid1D, Grid2D};

/// Deterministic initial profiles.
///
/// In 1D the walls connect `alpha` at the left to `0` at the right. In 2D the
/// wall recipes produce a vertical 180-degree wall (`pi` left, `0` right)
/// through the sample centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitRecipe {
    Monodomain { theta: f64 },
    HalfSplit { left: f64, right: f64 },
    HalfSplitVertical { bottom: f64, top: f64 },
    TanhWall { width: f64 },
    /// Two half-height tanh walls of unit width `separation` apart.
    TwoWall { separation: f64 },
    /// Sharp jump at the origin.
    Step,
}

impl InitRecipe {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            InitRecipe::Monodomain { theta } => theta.is_finite(),
            InitRecipe::HalfSplit { left, right } => left.is_finite() && right.is_finite(),
            InitRecipe::HalfSplitVertical { bottom, top } => bottom.is_finite() && top.is_finite(),
            InitRecipe::TanhWall { width } => width > 0.0 && width.is_finite(),
            InitRecipe::TwoWall { separation } => separation.is_finite(),
            InitRecipe::Step => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid recipe parameters: {self:?}")))
        }
    }

    /// Profile of the wall recipes as a function of the signed distance `s`.
    fn wall(&self, s: f64, alpha: f64) -> Option<f64> {
        match *self {
            InitRecipe::TanhWall { width } => Some(0.5 * alpha * (1.0 - (s / width).tanh())),
            InitRecipe::TwoWall { separation } => {
                let d = 0.5 * separation;
                Some(0.25 * alpha * ((1.0 - (s + d).tanh()) + (1.0 - (s - d).tanh())))
            }
            InitRecipe::Step => Some(if s < 0.0 {
                alpha
            } else if s > 0.0 {
                0.0
            } else {
                0.5 * alpha
            }),
            _ => None,
        }
    }
}

pub fn initial_condition_1d(recipe: InitRecipe, grid: Grid1D, alpha_limit: f64) -> Result<AngleField1D> {
    recipe.validate()?;
    AngleField1D::from_fn(grid, |x| match recipe {
        InitRecipe::Monodomain { theta } => theta,
        InitRecipe::HalfSplit { left, right } | InitRecipe::HalfSplitVertical { bottom: left, top: right } => {
            if x < 0.0 {
                left
            } else {
                right
            }
        }
        _ => recipe.wall(x, alpha_limit).expect("wall recipe"),
    })
}

pub fn initial_condition_2d(recipe: InitRecipe, grid: Grid2D) -> Result<AngleField2D> {
    recipe.validate()?;
    let (cx, cy) = (0.5 * grid.lx(), 0.5 * grid.ly());
    AngleField2D::from_fn(grid, |x, y| match recipe {
        InitRecipe::Monodomain { theta } => theta,
        InitRecipe::HalfSplit { left, right } => {
            if x < cx {
                left
            } else {
                right
            }
        }
        InitRecipe::HalfSplitVertical { bottom, top } => {
            if y < cy {
                bottom
            } else {
                top
            }
        }
        _ => recipe.wall(x - cx, std::f64::consts::PI).expect("wall recipe"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn recipes() {
        let g = Grid1D::centered(64, 20.0).unwrap();
        let t = initial_condition_1d(InitRecipe::TanhWall { width: 3.0 }, g, FRAC_PI_2).unwrap();
        for (i, &v) in t.values().iter().enumerate() {
            let x = g.x(i);
            assert_eq!(v, 0.5 * FRAC_PI_2 * (1.0 - (x / 3.0).tanh()));
        }
        let m = initial_condition_2d(InitRecipe::Monodomain { theta: FRAC_PI_3 }, Grid2D::new(4, 4, 0.25).unwrap()).unwrap();
        assert!(m.values().iter().all(|&v| v == FRAC_PI_3));

        let g2 = Grid2D::for_sample(32.0, 64.0, 4.0).unwrap();
        let h = initial_condition_2d(InitRecipe::HalfSplit { left: PI, right: 0.0 }, g2).unwrap();
        assert_eq!((g2.nx(), g2.ny()), (128, 256));
        for j in [0, 100, 255] {
            assert_eq!(h.at(63, j), PI);
            assert_eq!(h.at(64, j), 0.0);
        }
        let v = initial_condition_2d(InitRecipe::HalfSplitVertical { bottom: FRAC_PI_2, top: -FRAC_PI_2 }, g2).unwrap();
        assert_eq!(v.at(5, 127), FRAC_PI_2);
        assert_eq!(v.at(5, 128), -FRAC_PI_2);
    }

    #[test]
    fn invalid_width_is_rejected() {
        let g = Grid1D::centered(64, 20.0).unwrap();
        assert!(initial_condition_1d(InitRecipe::TanhWall { width: 0.0 }, g, PI).is_err());
    }
}
