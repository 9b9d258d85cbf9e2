use thiserror::Error;

/// Errors produced while building tables, trees and reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("attribute index {index} out of range (table has {attributes} attributes)")]
    AttributeIndex { index: usize, attributes: usize },

    #[error("conflicting equations for f{}: {first} vs {second}", .attr + 1)]
    ConflictingEquation { attr: usize, first: u32, second: u32 },

    #[error("row {row} has {found} values, expected {expected}")]
    RowLength { row: usize, found: usize, expected: usize },

    #[error("rows {first} and {second} have identical attribute values")]
    DuplicateRow { first: usize, second: usize },

    #[error("decision table must have at least one attribute")]
    NoAttributes,

    #[error("decision table is empty")]
    EmptyTable,

    #[error("invalid tree type {0} (expected 1..=5)")]
    TreeType(u8),

    #[error("unknown uncertainty measure {0:?}")]
    UnknownMeasure(String),

    #[error("hypothesis has {found} values, expected {expected}")]
    HypothesisLength { found: usize, expected: usize },

    #[error("node budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: usize },

    #[error("strategy answer violates the contract at node {node}: {reason}")]
    ContractViolation { node: usize, reason: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
