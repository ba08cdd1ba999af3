use rayon::prelude::*;

use crate::baselines::{run_scheme, SchemeId};
use crate::codebook::{DftCodebook, Window};
use crate::error::Result;
use crate::geometry::{build_scene, Scene};
use crate::harness::SweepConfig;
use crate::metrics::Beamspace;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Measure wall-clock time per scheme. Off by default so that output
    /// bytes depend only on the config and seed.
    pub record_timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub trial: usize,
    pub scheme: SchemeId,
    pub sum_rate_bps: f64,
    pub rate_min_bps: f64,
    pub rate_max_bps: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    pub seed: u64,
    pub flag: Option<String>,
}

impl ResultRow {
    /// False for rows whose scheme failed outright (no usable precoder).
    pub fn has_rate(&self) -> bool {
        matches!(self.flag.as_deref(), None | Some("not_converged"))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: SplitMix64 chained over the base seed, the IEEE-754 bits of
/// the sweep value and the trial index.
pub fn derive_seed(base_seed: u64, sweep_value: f64, trial: usize) -> u64 {
    let h = splitmix64(base_seed);
    let h = splitmix64(h ^ sweep_value.to_bits());
    splitmix64(h ^ trial as u64)
}

/// Scene, codebook and window of trial 0 at the first sweep value.
pub fn single_scene(config: &SweepConfig) -> Result<(Scene, DftCodebook, Window)> {
    let value = config.sweep_values[0];
    let scenario = config.scenario_at(value)?;
    let scene = build_scene(&scenario, derive_seed(config.seed, value, 0))?;
    Ok((scene, scenario.codebook()?, scenario.window()?))
}

/// Runs every requested scheme on `trials` scenes per sweep value.
///
/// Trials run in parallel; rows come back sorted by sweep position, trial and
/// scheme. All schemes of a trial share one scene.
pub fn run_sweep(config: &SweepConfig, options: RunOptions) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut schemes = config.schemes.clone();
    schemes.sort();
    schemes.dedup();

    let mut rows = Vec::new();
    for &value in &config.sweep_values {
        let scenario = config.scenario_at(value)?;
        let codebook = scenario.codebook()?;
        let window = scenario.window()?;
        let bandwidth = scenario.bandwidth_hz;
        let per_trial: Vec<Vec<ResultRow>> = (0..config.trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<ResultRow>> {
                let seed = derive_seed(config.seed, value, trial);
                let scene = build_scene(&scenario, seed)?;
                let bs = Beamspace::new(&scene, &codebook, &window)?;
                let mut solver = config.solver.clone();
                solver.seed = seed;
                Ok(schemes
                    .iter()
                    .map(|&scheme| {
                        let r = run_scheme(scheme, &scene, &bs, &solver);
                        let rates = r.per_user_sinr.iter().map(|g| bandwidth * (1.0 + g).log2());
                        let (lo, hi) = rates.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
                            (lo.min(x), hi.max(x))
                        });
                        ResultRow {
                            sweep_value: value,
                            trial,
                            scheme,
                            sum_rate_bps: bandwidth * r.sum_rate,
                            rate_min_bps: lo,
                            rate_max_bps: hi,
                            iterations: r.iterations,
                            wall_ms: if options.record_timing {
                                r.wall_time.as_secs_f64() * 1e3
                            } else {
                                0.0
                            },
                            seed,
                            flag: r.flag,
                        }
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        rows.extend(per_trial.into_iter().flatten());
    }
    Ok(rows)
}
