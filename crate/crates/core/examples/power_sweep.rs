//! Seeded Monte Carlo power sweep through the harness, written as CSV.

use satbeam::harness::{aggregate, run_sweep, write_aggregate_csv, RunOptions, SweepAxis, SweepConfig};
use satbeam::{ArrayConfig, SceneConfig};

fn main() -> satbeam::Result<()> {
    let config = SweepConfig {
        scenario: SceneConfig {
            users: 3,
            array: ArrayConfig { nx: 4, ny: 2, ..ArrayConfig::default() },
            fft_size: 16,
            ..SceneConfig::default()
        },
        sweep_axis: SweepAxis::Power,
        sweep_values: vec![300.0, 1000.0, 3000.0, 10000.0],
        trials: 10,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&config, RunOptions::default())?;
    write_aggregate_csv(&aggregate(&rows), std::io::stdout().lock())
}
