//! Config-driven front end for `helmwave`: beam synthesis, propagation runs
//! with field dumps and diagnostics tables, verification suites and plot
//! series.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod verify;

pub use config::{load_config, parse_config, Config, Overrides, Propagator};
pub use error::{CliError, CliResult};
pub use report::cmd_report;
pub use run::{cmd_dirac, cmd_modes, cmd_propagate, Artifacts};
pub use verify::{cmd_verify, Check, VerifyReport, SUITES};
