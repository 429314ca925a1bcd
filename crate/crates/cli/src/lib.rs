//! Command implementations behind the `fourfold` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use error::{CliError, CliResult};
