//! Scenario runner for equivariant spectral triples over noncommutative tori:
//! config parsing, the build/verify/project/twist/diagonalize pipeline,
//! report and spectrum output, and the base KR sweep.

pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use config::{Overrides, ScenarioConfig};
pub use error::CliError;
pub use run::{run_scenario, write_outputs, RunOutcome, RunReport, Stage};
pub use sweep::{kr_sweep, SweepReport};
