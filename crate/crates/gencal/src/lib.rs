//! Command-line layer over `gencal-core`: scenario files, calibration
//! reports, T-duality of whole scenarios and the seeded identity suites.

pub mod check;
pub mod dualize;
pub mod error;
pub mod numeric;
pub mod scenario;
pub mod suite;

pub use error::{CliError, CliResult};
