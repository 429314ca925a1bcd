pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod field;
pub mod io;
pub mod nonlocal;
pub mod problem;
pub mod relax;

pub use energy::EnergyBreakdown;
pub use error::{Error, Result};
pub use field::*;
pub use problem::*;
pub use relax::{RelaxConfig, RelaxReport, Stepping, Termination};
