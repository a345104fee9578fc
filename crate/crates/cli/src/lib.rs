//! Command implementations and report schema for the `nosig` binary.

pub mod commands;
pub mod report;

pub use report::Report;
