//! Configuration, orchestration and output for the `daqc` command-line tool.

pub mod config;
pub mod runner;

use daqc_core::Error;

/// Process exit code for a failure: 2 for configuration problems, 3 for
/// numerical failures, 1 for anything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::InvalidParameter { .. }
        | Error::TooFewLevels(_)
        | Error::NotNeighbours(..)
        | Error::SubsystemOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::SpanTooLarge(_)
        | Error::UnsortedTimes
        | Error::InvalidTimeGrid { .. } => 2,
        Error::Numerical(_) | Error::NotHermitian(_) | Error::NoSpectralPeak => 3,
        Error::Io(_) => 1,
    }
}
