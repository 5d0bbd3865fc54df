//! Command-line front end: spec files, output tables and subcommands.

mod commands;
pub mod report;
pub mod spec_file;

pub use commands::{load_manifold, parse_class, run_command, CommandOutput, EXIT_INPUT, JMAX_VAR, EXIT_OK, EXIT_VERIFY};
pub use report::{Format, ReportRow, ReportTable};
pub use spec_file::{parse_spec, render_spec, ManifoldSpec, ParseError};
