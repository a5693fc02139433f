//! Experiment harness: configuration, seeded corpora, experiment
//! drivers and report emission for the `vlmult` binary.

pub mod config;
pub mod corpus;
pub mod experiments;
pub mod report;

pub use config::HarnessConfig;
pub use experiments::{estimate_bilinear_norm, run, run_all, EXPERIMENT_IDS};
pub use report::{ExperimentReport, ReportRow, RunReport};
