//! Library side of the `qes` command: configuration, table generation, verification
//! reports and catalog listings. `main.rs` only parses flags and maps results to exit codes.

pub mod config;
pub mod inspect;
pub mod run;
pub mod verify;

use thiserror::Error;

use qes_core::expr::ExprError;
use qes_core::seeds::SeedError;
use qes_core::susy::SusyError;

/// Input and setup failures. All of them map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("invalid expression: {0}")]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error("invalid seed: {0}")]
    Susy(#[from] SusyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn fmt_float(v: f64) -> String {
    format!("{v}")
}
