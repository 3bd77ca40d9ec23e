//! Batch front end: input parsing, job configuration, command dispatch,
//! canonical JSON reports and an on-disk cache of built algebras.

pub mod args;
pub mod cache;
pub mod config;
pub mod error;
pub mod input;
pub mod report;
pub mod run;

pub use args::{parse_args, ArgsError};
pub use config::{Backend, Command, Example, JobConfig};
pub use error::{CliError, CliResult};
pub use report::{Outcome, Report};
pub use run::{run, RunOutput};
