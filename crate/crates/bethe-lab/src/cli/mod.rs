//! Batch front end: JSON run configurations, experiment dispatch, the identity
//! suite runner and CSV/JSON emission.

mod config;
mod run;
mod verify;

pub use config::{AutoTag, Experiment, Grids, Outputs, RMaxJson, RunConfig, Sampling, Validated, VerifyLevel, VerifyOptions};
pub use run::{run, with_pool, worker_count, Outcome, EXIT_CHECK_FAILED, WORKERS_ENV};
pub use verify::{random_gaussian_parameter, verify_at, verify_suite, verify_suite_with, VerifyReport};
