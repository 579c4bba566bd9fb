//! Experiment runner for graph Stein discrepancies.
//!
//! Each experiment in [`experiments`] returns its rows and summary in memory
//! so the command-line front end and the acceptance suite share one code
//! path; [`output`] turns them into CSV and JSON artifacts.

pub mod experiments;
pub mod output;

use stein_core::{Error, ErrorClass};

/// Process exit status for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    match err.class() {
        ErrorClass::Input => 2,
        ErrorClass::Domain => 3,
        ErrorClass::Solver => 4,
    }
}
