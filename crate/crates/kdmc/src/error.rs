use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    ConfigSyntax(String),
    #[error("config is missing a required field: {0}")]
    ConfigMissing(String),
    #[error("config has an unknown key: {0}")]
    ConfigUnknown(String),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] kdmc_core::Error),
    #[error("{0}")]
    Runtime(String),
    #[error("self-check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Process exit code. 2 is left to the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigRead { .. } | Error::ConfigSyntax(_) => 3,
            Error::ConfigMissing(_) => 4,
            Error::ConfigUnknown(_) => 5,
            Error::ConfigInvalid(_) => 6,
            Error::Output { .. } => 7,
            Error::Core(_) | Error::Runtime(_) => 8,
            Error::CheckFailed(_) => 9,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let msg = e.to_string();
        match e.classify() {
            Category::Data if msg.starts_with("missing field") => Error::ConfigMissing(msg),
            Category::Data if msg.starts_with("unknown field") => Error::ConfigUnknown(msg),
            Category::Data => Error::ConfigInvalid(msg),
            Category::Syntax | Category::Eof | Category::Io => Error::ConfigSyntax(msg),
        }
    }
}
