//! Library backing the `synclab` binary: scenario and group file schemas,
//! command implementations, and report serialization.

pub mod commands;
pub mod error;
pub mod groupfile;
pub mod report;
pub mod scenario;

pub use commands::{cmd_commutant, cmd_decompose, cmd_suite, cmd_verify_drift, Overrides};
pub use error::{CliError, CliResult};
