//! File formats, reports and the command line for `workbench-core`.

// Reports travel by value through `Result`; they are built once per command.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod files;
pub mod report;

pub use cli::{run, Outcome};
