//! Measurements on converged fields: tails, monotonicity, symmetry,
//! uniqueness, and 2D state classification.

mod profile;
mod state;
mod tail;

pub use profile::{monotonicity_report, symmetry_residual, uniqueness_probe, MonotonicityReport, UniquenessReport};
pub use state::{
    boundary_degree, boundary_vortex_scan, classify_state_2d, state_features, wall_skeleton, BoundaryVortex, Corner, Edge,
    StateClassification, StateFeatures, StateLabel, WallSegment, BULK_INSET, CLOSURE_TANGENCY, CONCENTRATION, CORNER_REACH,
    EASY_BAND, EDGE_DOMAIN, MIN_DOMAIN, VORTEX_ARC_WINDOW, VORTEX_MIN_ROTATION,
};
pub use tail::{tail_fit, tail_fit_with, TailFitOptions, TailFitResult};
