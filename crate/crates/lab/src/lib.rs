//! Batch experiments over `crofton-core`: configuration documents, the six
//! experiment runners and their reports.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{Config, ConfigError, ExperimentKind};
pub use experiments::{run, Outcome};
pub use report::{Report, Verdict};
