//! Front-end failures, their exit codes and the JSON error record.

use std::fmt;

use serde_json::json;
use sphere_casimir::analysis::CurveError;
use sphere_casimir::{Error, ErrorKind};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed config, unwritable output.
    Config(String),
    /// A single evaluation failed.
    Model(Error),
    /// Some points of a curve failed.
    Curve(CurveError),
}

impl CliError {
    fn kind(&self) -> Option<ErrorKind> {
        match self {
            CliError::Config(_) => None,
            CliError::Model(e) => Some(e.kind()),
            CliError::Curve(e) => Some(e.first().kind()),
        }
    }

    /// 2 for configuration errors, 3 for non-convergence, 4 for domain
    /// errors.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            None | Some(ErrorKind::InvalidInput) => 2,
            Some(ErrorKind::NonConvergence) => 3,
            Some(ErrorKind::Domain) => 4,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind() {
            None | Some(ErrorKind::InvalidInput) => "config",
            Some(ErrorKind::NonConvergence) => "non_convergence",
            Some(ErrorKind::Domain) => "domain",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        let mut record = json!({
            "error": self.kind_name(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Curve(e) = self {
            record["failures"] = e
                .failures
                .iter()
                .map(|f| json!({ "index": f.index, "z": f.z, "message": f.error.to_string() }))
                .collect();
        }
        record.to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => f.write_str(msg),
            CliError::Model(e) => e.fmt(f),
            CliError::Curve(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::Curve(e)
    }
}
