use thiserror::Error;

/// Errors produced by loading, decomposing and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("processing time of job `{job}` on machine `{machine}` must be a positive integer")]
    NonPositive { job: String, machine: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
