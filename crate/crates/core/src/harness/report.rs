use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::baselines::SchemeId;
use crate::error::Result;
use crate::harness::ResultRow;

const RESULTS_HEADER: [&str; 10] = [
    "sweep_value",
    "trial",
    "scheme",
    "sum_rate_bps",
    "rate_min_bps",
    "rate_max_bps",
    "iterations",
    "wall_ms",
    "seed",
    "flag",
];

/// Mean and standard error of the sum rate for one sweep value and scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub sweep_value: f64,
    pub scheme: SchemeId,
    /// Trials with a usable rate.
    pub trials: usize,
    pub mean_sum_rate_bps: f64,
    pub stderr_sum_rate_bps: f64,
}

/// Groups rows by `(sweep_value, scheme)` in first-appearance order of the
/// sweep values. Failed rows are left out.
pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut order: Vec<u64> = Vec::new();
    let mut groups: BTreeMap<(usize, SchemeId), Vec<f64>> = BTreeMap::new();
    for row in rows {
        let bits = row.sweep_value.to_bits();
        let pos = order.iter().position(|&b| b == bits).unwrap_or_else(|| {
            order.push(bits);
            order.len() - 1
        });
        let entry = groups.entry((pos, row.scheme)).or_default();
        if row.has_rate() {
            entry.push(row.sum_rate_bps);
        }
    }
    groups
        .into_iter()
        .map(|((pos, scheme), values)| {
            let n = values.len();
            let mean = if n == 0 {
                f64::NAN
            } else {
                values.iter().sum::<f64>() / n as f64
            };
            let stderr = if n < 2 {
                0.0
            } else {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            };
            AggregateRow {
                sweep_value: f64::from_bits(order[pos]),
                scheme,
                trials: n,
                mean_sum_rate_bps: mean,
                stderr_sum_rate_bps: stderr,
            }
        })
        .collect()
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_value.to_string(),
            r.trial.to_string(),
            r.scheme.to_string(),
            r.sum_rate_bps.to_string(),
            r.rate_min_bps.to_string(),
            r.rate_max_bps.to_string(),
            r.iterations.to_string(),
            r.wall_ms.to_string(),
            r.seed.to_string(),
            r.flag.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(rows: &[AggregateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "sweep_value",
        "scheme",
        "trials",
        "mean_sum_rate_bps",
        "stderr_sum_rate_bps",
    ])?;
    for r in rows {
        w.write_record([
            r.sweep_value.to_string(),
            r.scheme.to_string(),
            r.trials.to_string(),
            r.mean_sum_rate_bps.to_string(),
            r.stderr_sum_rate_bps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `results.csv` and `aggregate.csv` into `dir`, creating it if needed.
pub fn emit_report(rows: &[ResultRow], dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    write_results_csv(rows, fs::File::create(dir.join("results.csv"))?)?;
    write_aggregate_csv(&aggregate(rows), fs::File::create(dir.join("aggregate.csv"))?)?;
    Ok(())
}
