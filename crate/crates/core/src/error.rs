use alloc::string::String;

use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown element identifier `{0}`")]
    UnknownElement(String),
    #[error("unknown index `{0}`")]
    UnknownIndex(String),
    #[error("element index {index} out of range for carrier of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("not an ortholattice ({} violation(s))", .0.violations.len())]
    NotOrtholattice(Report),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("index universes differ")]
    UniverseMismatch,
    #[error("function tables have different domains")]
    DomainMismatch,
    #[error("quantifiers at indices {i} and {k} do not commute (witness `{witness}`)")]
    NonCommuting { i: String, k: String, witness: String },
    #[error("explicit nabla table is not generated by its singletons at J = {set}, element `{element}`")]
    NotGenerated { set: String, element: String },
    #[error("internal verification failure: {0}")]
    Internal(String),
}
