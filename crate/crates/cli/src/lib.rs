//! Configuration, file formats and run orchestration for `cvwave-core`.
//!
//! The `cvwave` binary is a thin wrapper around [`run::run`]:
//!
//! ```text
//! cvwave simulate    --config run.toml [--out dir]
//! cvwave steady      --config run.toml [--out dir]
//! cvwave reconstruct --config run.toml [--out dir]
//! cvwave validate    [--config run.toml] [--quick] [--seed 7]
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod initial;
pub mod output;
pub mod run;
pub mod snapshot;
pub mod spectrum;
pub mod validate;

pub use config::{load_config, parse_config, Mode, RunConfig};
pub use error::{CliError, Result};
pub use snapshot::Snapshot;
