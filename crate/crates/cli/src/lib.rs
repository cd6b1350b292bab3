//! Scenario files, trajectory export and the self-check suite behind the
//! `entroflux` binary.

pub mod check;
pub mod config;
pub mod csv;
pub mod scenario;

pub use check::{CheckSuite, GroupResult};
pub use config::{parse_config, ConfigError, ModelKind, ModelParams, ScenarioConfig};
pub use csv::{write_csv, write_csv_to, HEADER};
pub use scenario::{gap_tolerance, run_scenario, RunReport};
