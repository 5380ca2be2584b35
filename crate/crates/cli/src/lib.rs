//! Command-line front end: circuit files, scheme runs and JSON/text reports.

pub mod circuit_file;
pub mod report;
pub mod run;

pub use circuit_file::{parse_circuit_file, CircuitFile, ParseError, SourceKind};
pub use report::Report;
pub use run::{execute, run_report, CliError, OutputFormat, RunArgs, SchemeArg, Units};
