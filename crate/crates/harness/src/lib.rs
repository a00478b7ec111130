//! Experiment runner for the actuator model: TOML configs and scenarios in,
//! CSV tables and SVG frames out.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;

pub use config::{load_config, load_scenario, parse_config, parse_scenario, LockSelection, Ramp, RunConfig, Scenario};
pub use error::{HarnessError, Result};
pub use table::SweepTable;
