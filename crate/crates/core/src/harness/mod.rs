//! Experiment harness: config files, reference solves, single-run
//! experiments with persisted artifacts, and parallel suite sweeps.

pub mod config_file;
pub mod experiment;
pub mod reference;
pub mod suite;

pub use config_file::{parse_config, parse_config_str, BRefMode, ExperimentConfig};
pub use experiment::{run_experiment, trace_csv, ExperimentOutcome, ExperimentReport};
pub use reference::compute_reference;
pub use suite::{run_suite, SuiteRow, SuiteSummary};
