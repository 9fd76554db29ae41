//! Command-line front end for `aggdiff-core`: configuration, profile I/O,
//! subcommands and the `verify` suites.

pub mod cli;
pub mod config;
pub mod io;
pub mod verify;
