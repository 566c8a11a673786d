use std::path::Path;

use coconvex::approx::ApproxError;
use coconvex::domainsep::DomainError;
use coconvex::funcexpr::{FnError, ParseError};
use coconvex::polynomial::PolyError;
use coconvex::replication::ReplicationError;
use coconvex::shape::ShapeError;
use coconvex::smoothness::SmoothnessError;
use thiserror::Error;

/// Every failure maps to exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error(transparent)]
    Fn(#[from] FnError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Smoothness(#[from] SmoothnessError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Replication(#[from] ReplicationError),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn missing(what: &str) -> Self {
        CliError::Usage(format!("missing required input `{what}`"))
    }
}
