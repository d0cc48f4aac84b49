//! Command-line front end for the heterogeneous Ramsey algebra workbench:
//! experiment configuration, dispatch, and report emission.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_coloring, ExperimentConfig, SchemaError, SequenceSpec, MAGNITUDE_CAP_ENV};
pub use report::{ExhibitRow, Report, ReportStatus};
pub use run::{run, CommandKind, RunError};
