//! Exact workbench for line arrangements with double and triple points:
//! configuration tables, isomorph-free enumeration, symbolic realization and
//! moduli classification.

pub mod algebra;
pub mod incidence;
pub mod enumerate;
pub mod realize;
pub mod registry;
pub mod moduli;
pub mod pipeline;
