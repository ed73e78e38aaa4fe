//! Command-line front end for the accelerated-detector laboratory: loads a
//! TOML run configuration, applies command-line overrides, executes one of
//! the laboratory commands, and writes the CSV table, plot data, and run
//! manifest into the run directory.

pub mod config;
pub mod runner;
