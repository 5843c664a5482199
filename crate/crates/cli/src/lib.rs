//! Command-line front end: configuration, subcommands, the verification
//! suite and report emission.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

pub use commands::{run, AppError};
pub use config::{RunConfig, UsageError};
pub use report::{emit, Report};
