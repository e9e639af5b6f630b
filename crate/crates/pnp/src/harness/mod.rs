//! Scenario definitions, convergence studies, current-voltage sweeps, config
//! ingestion, CSV emission, and the command-line interface.

pub mod cli;
pub mod config;
pub mod convergence;
pub mod csv;
pub mod iv;
pub mod manufactured;
pub mod scenarios;
