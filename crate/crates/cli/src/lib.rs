//! Building, sampling and verifying extension instances from the command
//! line. `main.rs` only parses arguments; everything observable lives here.

pub mod commands;
pub mod figures;
pub mod format;
pub mod spec;
pub mod suite;

use pdmqes::catalog::CatalogError;
use thiserror::Error;

/// Version tag carried by every JSON document the tool emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Catalog(#[from] CatalogError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid spec file: {0}")]
    SpecFile(String),
}

impl CliError {
    /// Every error here is a usage or parameter problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
