//! Configuration, scenario runners and output writers for the `ccm` binary.

pub mod check;
pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;

pub use config::{Scenario, ScenarioConfig};
pub use error::{CliError, Result};
pub use report::{write_csv, write_json, Report, Table};
pub use scenarios::{convergence_sweep, run_scenario, sd_equivalence_report};
