//! File formats, run configuration and command implementations behind the
//! `zetascope` binary.

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;

pub use error::{CliError, Result};
