//! Batch front end for the `ruelle` library: problem documents in, reports out.

pub mod commands;
pub mod document;
pub mod error;

pub use commands::{render_json, render_text, run, Command, Options, ReportDocument};
pub use document::{parse_document, validate, Problem, ProblemDocument};
pub use error::CliError;
