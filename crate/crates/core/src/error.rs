use thiserror::Error;

use crate::lineale::Degree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree {input:?}: {reason}")]
    InvalidDegree { input: String, reason: String },

    #[error("resource limit: {what} needs {requested} elements, cap is {cap}")]
    ResourceLimit {
        what: String,
        requested: String,
        cap: u64,
    },

    #[error("duplicate element {0}")]
    DuplicateElement(String),

    #[error("maps are not composable: {0}")]
    DomainMismatch(String),

    #[error("{element} is not in the domain")]
    NotInDomain { element: String },

    #[error("map table is not total: {0}")]
    NotTotal(String),

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("orientation mismatch: {0}")]
    OrientationMismatch(String),

    #[error("pair of maps is not a morphism: violated at {0}")]
    InvalidMorphism(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid topological system: {0}")]
    InvalidSystem(String),

    #[error("unknown open {0}")]
    UnknownOpen(String),

    #[error("unknown event {0}")]
    UnknownEvent(String),

    #[error("entry ({row}, {col}) = {value} is not 0 or 1")]
    NonBinaryEntry {
        row: usize,
        col: usize,
        value: Degree,
    },

    #[error("event {event} not enabled{}: enabledness {enabledness} does not exceed threshold {threshold}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    NotEnabled {
        event: String,
        enabledness: Degree,
        threshold: Degree,
        step: Option<usize>,
    },

    #[error("malformed input at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input rather than by a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidDegree { .. }
                | Error::Schema { .. }
                | Error::Json { .. }
                | Error::DuplicateElement(_)
                | Error::NotTotal(_)
                | Error::NotInDomain { .. }
                | Error::CarrierMismatch(_)
                | Error::EndpointMismatch(_)
                | Error::OrientationMismatch(_)
                | Error::InvalidFrame(_)
                | Error::UnknownOpen(_)
                | Error::UnknownEvent(_)
                | Error::NonBinaryEntry { .. }
                | Error::DomainMismatch(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
