//! File formats and Monte-Carlo campaigns on top of `clawsched-core`.

pub mod error;
pub mod experiments;
pub mod formats;

pub use error::{CliError, CliResult};
