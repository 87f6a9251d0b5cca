//! File format, commands and reporting behind the `olkit` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod output;
