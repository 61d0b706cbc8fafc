//! File formats and the command-line front end for `graphdef-core`.

pub mod cli;
pub mod format;
