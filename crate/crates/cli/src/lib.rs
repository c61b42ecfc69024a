//! Library half of the `trl` binary: report formatting, subcommands and
//! reproduction suites.

pub mod commands;
pub mod report;
pub mod suites;

use trl_core::Error;

/// Process exit code for an error: 2 for bad input, 3 for exceeded caps,
/// 4 for solver non-convergence, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::SizeCapExceeded { .. } | Error::DimensionCapExceeded { .. } | Error::FacetCapExceeded { .. } => 3,
                Error::NoConvergence { .. } => 4,
                Error::InvalidInput(_) | Error::DimensionMismatch { .. } => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}
