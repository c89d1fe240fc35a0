//! Configuration tables, their validation and canonical forms.

pub mod canon;
pub mod table;

use thiserror::Error;

pub use canon::{automorphisms, canonical_form, canonical_table, canonize, Automorphism, CanonicalForm};
pub use table::{census_solutions, hirzebruch_feasible, line_census, validate, ConfigTable, LineCensus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("label {label} listed twice on L{line}")]
    DuplicateIncidence { line: usize, label: String },
    #[error("point {0} is not on exactly three lines")]
    NotTriplePoint(String),
    #[error("lines L{0} and L{1} share more than one point")]
    RepeatedPair(usize, usize),
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
}
