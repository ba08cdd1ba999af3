//! Monte Carlo evaluation: scenario files, seeded sweeps and CSV reports.

mod calibrate;
mod config;
mod report;
mod sweep;

pub use calibrate::DftOnlyProfile;
pub use config::{parse_config, parse_config_str, SweepAxis, SweepConfig};
pub use report::{aggregate, emit_report, write_aggregate_csv, write_results_csv, AggregateRow};
pub use sweep::{derive_seed, run_sweep, single_scene, ResultRow, RunOptions};
