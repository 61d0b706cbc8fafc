//! Query evaluation and definability deciders for data graphs.
//!
//! A data graph is a finite directed graph with labelled edges in which
//! every node carries one data value. Queries select node pairs (or
//! tuples) connected by data paths in the language of an expression:
//!
//! * regular expressions with memory (REM), which store values in
//!   registers and compare later values against them,
//! * regular expressions with equality (REE), which compare the first and
//!   last value of a matched subpath,
//! * plain regular path queries (RPQ), and
//! * conjunctions and unions of the above.
//!
//! The deciders answer the reverse question: given a graph and a relation,
//! is there a query in a language whose answer is exactly that relation?
//! When there is, a defining query is synthesized; when there is not, a
//! counterexample is returned.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command line live in the companion `graphdef` crate.
#![no_std]

extern crate alloc;

pub mod assign;
pub mod def_ree;
pub mod def_rem;
pub mod def_ucq;
mod error;
pub mod eval;
pub mod expr;
pub mod graph;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod path;
pub mod relation;

pub use error::{Error, ParseError, Result};
pub use graph::{DataGraph, GraphBuilder, Letter, Value};
pub use path::{canonical_path, data_path_of, CanonicalPath, DataPath};
pub use relation::{BinRel, NodeRelation};

/// Outcome of a definability decision.
///
/// Running out of budget is not a decision and is reported separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Definable,
    NotDefinable,
    ResourceExhausted,
}

impl Decision {
    pub fn is_definable(self) -> bool {
        self == Decision::Definable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Definable => "definable",
            Decision::NotDefinable => "not-definable",
            Decision::ResourceExhausted => "resource-exhausted",
        }
    }
}

impl core::fmt::Display for Decision {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}
