//! Library side of the command-line front end: configuration loading,
//! file formats, and the subcommand implementations. The `asv` binary is
//! a thin argument-parsing shell over this crate.

pub mod commands;
pub mod config;
pub mod csvio;

/// Exit codes are a stable contract: 0 success, 1 input/config error,
/// 2 mission timeout, 3 analysis verdict failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}
