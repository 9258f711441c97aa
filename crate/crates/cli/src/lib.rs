//! File formats, report export and the `biochar` command-line front end for
//! [`biochar_core`].

pub mod app;
pub mod commands;
pub mod config;
pub mod export;

pub use commands::{CliError, Global, OutputFormat, Preset};
