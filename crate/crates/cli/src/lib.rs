//! Front end for `morphodyn`: configuration files, CSV and manifest output,
//! SVG plots and the two-model replication.

pub mod config;
pub mod csv_io;
pub mod error;
pub mod manifest;
pub mod plot;
pub mod replicate;

pub use config::{parse_config, render_config};
pub use error::{CliError, Result};
