use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("region is not star-shaped about the ray origin: {0}")]
    NotStarShaped(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("bound vacuous: {0}")]
    BoundVacuous(String),
    #[error("word crosses the node on curve {0}")]
    NodeCrossing(usize),
    #[error("orientation violation at chart point ({0}, {1})")]
    Orientation(f64, f64),
    #[error("containment failure: {0}")]
    Containment(String),
    #[error("structural mismatch: {0}")]
    Structure(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::BoundVacuous(_)
            | Error::NodeCrossing(_)
            | Error::Structure(_) => 1,
            Error::Schema { .. } => 2,
            Error::Degenerate(_)
            | Error::NotStarShaped(_)
            | Error::Topology(_)
            | Error::Orientation(..)
            | Error::Containment(_)
            | Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
