//! File formats, configuration, parallel drivers and the verification
//! battery behind the `splab` command-line tool.

pub mod config;
pub mod error;
pub mod io;
pub mod par;
pub mod verify;

pub use error::{LabError, Result};

/// Version string recorded in provenance lines.
pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
