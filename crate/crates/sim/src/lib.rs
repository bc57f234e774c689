//! Experiment runner and command-line front end for `dtc-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod presets;
pub mod runner;
pub mod validation;

pub use error::{SimError, SimResult};
