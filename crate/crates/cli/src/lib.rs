//! Command-line front end: eigenstate and density dumps, measure and
//! complexity tables, deformation sweeps, figure data and `verify`.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use table::{Cell, Format, Table};
