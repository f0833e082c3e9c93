//! Case files, run configuration and archive persistence.
//!
//! Case files are TOML documents with explicit units in every numeric field
//! name. See `docs/file-formats.md` for the complete field list.

mod archive;
mod case_file;
mod config;

use std::fmt;
use std::path::PathBuf;

pub use archive::{read_archive, save_archive, write_archive, ArchiveRow, ARCHIVE_HEADER_PREFIX};
pub use case_file::{
    load_case, parse_case, parse_case_file, shipped_case, validate_case_file, CaseFile, Profile,
    DemandBlock, SCHEMA_VERSION, SHIPPED_CASES,
};
pub use config::{Algorithm, FcmConfig, GrpConfig, RunConfig, VariationConfig};

/// One validation finding, tied to the field path it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl Issue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn join_issues(issues: &[Issue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum CaseError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported schema_version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("invalid case: {}", join_issues(.0))]
    Validation(Vec<Issue>),
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid run configuration: {}", join_issues(.0))]
    Invalid(Vec<Issue>),
}

#[derive(Debug, thiserror::Error)]
pub enum ArchiveError {
    #[error("refusing to write an empty archive")]
    Empty,
    #[error("archive I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("archive CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed archive: {0}")]
    Malformed(String),
}

/// Deserialize a TOML document, reporting the field path of any failure.
fn from_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, (String, String)> {
    let de = toml::Deserializer::parse(text).map_err(|e| (String::from("."), e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        (path, e.into_inner().to_string().trim().to_string())
    })
}
