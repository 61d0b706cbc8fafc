//! Query evaluation on data graphs.

mod automaton;
mod conjunctive;
mod ree;
mod rem;

pub use automaton::{compile_rem, PosOp, RegisterAutomaton};
pub use conjunctive::{
    eval_crdpq, eval_ucrdpq, parse_crdpq, parse_ucrdpq, Atom, Crdpq, PathExpr, Ucrdpq,
};
pub use ree::eval_ree_query;
pub use rem::{eval_automaton, eval_rem_bounded, eval_rem_query, eval_rpq};
