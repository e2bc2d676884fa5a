//! Set generators and the experiment runner.
//!
//! An experiment file lists runs, each naming a set family and a pipeline.
//! Rows are computed in parallel and written in file order as CSV, with any
//! certificates written as JSON beside them. See `docs/FORMATS.md`.

mod experiment;
mod generators;
mod runner;

pub use experiment::{ExperimentFile, ExperimentSpec, Family, Pipeline, RunCaps};
pub use generators::{gen_gp, gen_multiplicative_cube, gen_random_integers};
pub use runner::{run_experiment, run_spec, ExperimentOutcome, GrowthRow, RowStatus, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("run {label}: {message}")]
    InvalidSpec { label: String, message: String },
    #[error(transparent)]
    Set(#[from] crate::setcore::SetError),
    #[error("experiment file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
