//! Library surface of the command-line front end: the expression grammar,
//! the run configuration, and the machine-readable output forms. The binary
//! in `main.rs` is a thin dispatcher over these.

pub mod config;
pub mod expr;
pub mod output;
