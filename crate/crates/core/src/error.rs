use std::io;

use crate::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("element {id} is not part of a ground set of size {ground}")]
    GroundSetMismatch { id: ElementId, ground: usize },

    #[error("element {0} is already in the set")]
    DuplicateElement(ElementId),

    #[error("invalid weight {value} for element {id}: weights must be finite and non-negative")]
    InvalidWeight { id: ElementId, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid system specification: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ground set of size {size} exceeds the enumeration limit of {max}")]
    SizeLimit { size: usize, max: usize },

    #[error("unsupported constraint: {0}")]
    UnsupportedConstraint(String),

    #[error("streaming contract violated: {0}")]
    ContractViolation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
