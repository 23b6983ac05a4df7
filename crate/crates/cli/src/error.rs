use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), reason: reason.into() }
    }

    /// 2 for config errors, 3 for domain errors, 4 for numerical failures, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<nontwist::Error> for CliError {
    fn from(e: nontwist::Error) -> Self {
        use nontwist::Error as E;
        match e {
            E::Domain(m) => CliError::Domain(m),
            E::DegenerateSaddle(m) => CliError::Domain(format!("degenerate saddle: {m}")),
            E::InvalidArgument { name, reason } => CliError::config(name, reason),
            E::InvalidInterval { .. } => CliError::config("b-range", e.to_string()),
            E::EnergyDrift { .. } | E::NoRoot { .. } | E::CrossCheck(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
