//! Command-line front end for `k3lat`.
//!
//! Every subcommand emits a document
//! `{schema_version, command, inputs, result, checks}`. The checks are
//! always derived from the serialized `result`, so `check` can recompute
//! them from a stored file with the same code path and compare.

pub mod cert;
pub mod check;
pub mod cli;
pub mod commands;
pub mod document;
pub mod error;
pub mod json;
pub mod pretty;

pub use check::{check_file, check_text};
pub use cli::{run, Outcome};
pub use commands::Invocation;
pub use document::{CheckEntry, Document, SCHEMA_VERSION};
pub use error::CliError;
