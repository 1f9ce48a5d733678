//! Scenario presets, run configuration, data export and the method
//! comparison harness for the `movwell` command.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::{
    load_config_file, parse_method_spec, parse_motion, resolve, ConfigSource, Initial, InitialKind, Method,
    Observable, RunConfig, RunOverrides, OUTPUT_DIR_ENV,
};
pub use error::{CliError, Result};
pub use output::{coefficients, run, write_compare, write_outcome, Manifest, MANIFEST_FILE};
pub use presets::Preset;
pub use runner::{compare, simulate, CompareRow, RunOutcome, Trajectory};
