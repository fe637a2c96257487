//! Campaign configuration, execution and reporting.

pub mod campaign;
pub mod config;
pub mod report;
pub mod reproduce;

pub use campaign::{
    run_campaign, run_conditions, CellSummary, NoiseCondition, ReproductionCheck, RunSummary,
    TrialResult,
};
pub use config::{BaselineSpec, CollectiveSpec, ExperimentConfig, NoiseSpec, RawConfig};
pub use report::{emit_csv, emit_json, CSV_HEADER};
pub use reproduce::reproduce_paper;
