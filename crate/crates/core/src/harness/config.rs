//! Line-oriented scenario files.
//!
//! ```text
//! # comments run to the end of the line
//! power_w = 3000
//! users = 45
//! ura = [10, 10]
//! schemes = joint_wmmse, greedy_zf
//! sweep_axis = power
//! sweep_values = [1000, 2000, 3000]
//! solver.beta_mode = bisection
//! ```
//!
//! Omitted keys keep their defaults; unknown or repeated keys are errors.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::SchemeId;
use crate::error::{Error, Result};
use crate::geometry::SceneConfig;
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Power,
    Users,
    /// Square URA side length.
    UraSize,
    Spacing,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Power => "power",
            SweepAxis::Users => "users",
            SweepAxis::UraSize => "ura_size",
            SweepAxis::Spacing => "spacing",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Self::Power),
            "users" => Ok(Self::Users),
            "ura_size" => Ok(Self::UraSize),
            "spacing" => Ok(Self::Spacing),
            other => Err(Error::InvalidArgument(format!("unknown sweep axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub scenario: SceneConfig,
    pub solver: SolverConfig,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    pub trials: usize,
    pub schemes: Vec<SchemeId>,
    pub seed: u64,
    pub output_path: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let scenario = SceneConfig::default();
        Self {
            sweep_values: vec![scenario.power_w],
            scenario,
            solver: SolverConfig::default(),
            sweep_axis: SweepAxis::Power,
            trials: 50,
            schemes: SchemeId::ALL.to_vec(),
            seed: 1,
            output_path: PathBuf::from("results"),
        }
    }
}

impl SweepConfig {
    /// Base value of the swept parameter.
    pub fn base_value(&self) -> f64 {
        let s = &self.scenario;
        match self.sweep_axis {
            SweepAxis::Power => s.power_w,
            SweepAxis::Users => s.users as f64,
            SweepAxis::UraSize => s.array.nx as f64,
            SweepAxis::Spacing => s.array.spacing_over_lambda,
        }
    }

    /// Scenario with the swept parameter set to `value`.
    pub fn scenario_at(&self, value: f64) -> Result<SceneConfig> {
        let mut s = self.scenario.clone();
        let integral = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v.is_finite() {
                Ok(v as usize)
            } else {
                Err(Error::Validation(format!(
                    "sweep value {v} must be a non-negative integer for axis {}",
                    self.sweep_axis
                )))
            }
        };
        match self.sweep_axis {
            SweepAxis::Power => s.power_w = value,
            SweepAxis::Users => s.users = integral(value)?,
            SweepAxis::UraSize => {
                let side = integral(value)?;
                s.array.nx = side;
                s.array.ny = side;
            }
            SweepAxis::Spacing => s.array.spacing_over_lambda = value,
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.trials == 0 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Validation("no schemes requested".into()));
        }
        if self.sweep_values.is_empty() {
            return Err(Error::Validation("sweep_values is empty".into()));
        }
        let increasing = self.sweep_values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.sweep_values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::Validation("sweep_values must be strictly monotone".into()));
        }
        self.scenario.validate()?;
        for &v in &self.sweep_values {
            self.scenario_at(v)?.validate()?;
        }
        Ok(())
    }
}

const KEYS: &[&str] = &[
    "power_w",
    "users",
    "ura",
    "spacing",
    "fft_size",
    "window_start",
    "carrier_hz",
    "bandwidth_hz",
    "altitude_m",
    "min_elevation_deg",
    "user_gain_dbi",
    "noise_temp_k",
    "element_pattern_exponent",
    "trials",
    "seed",
    "schemes",
    "sweep_axis",
    "sweep_values",
    "solver.max_iter",
    "solver.tol",
    "solver.beta_mode",
    "solver.step0",
    "solver.theta_init",
    "solver.init",
    "solver.align_phases",
];

/// Reads and validates a scenario file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<SweepConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text, path)
}

/// Parses scenario text; `origin` is only used in error messages.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let mut seen = HashSet::new();
    let mut sweep_values = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Config {
            path: origin.to_path_buf(),
            line: line_no,
            msg,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key {key:?}")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key {key:?}")));
        }
        let num = || -> Result<f64> {
            unquote(value)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("{key}: expected a number, got {value:?}")))
        };
        let int = || -> Result<u64> {
            unquote(value)
                .parse::<u64>()
                .map_err(|_| err(format!("{key}: expected a non-negative integer, got {value:?}")))
        };
        let s = &mut cfg.scenario;
        match key {
            "power_w" => s.power_w = num()?,
            "users" => s.users = int()? as usize,
            "ura" => {
                let dims = parse_ura(value).ok_or_else(|| {
                    err(format!("ura: expected [nx, ny] or NXxNY, got {value:?}"))
                })?;
                s.array.nx = dims.0;
                s.array.ny = dims.1;
            }
            "spacing" => s.array.spacing_over_lambda = num()?,
            "fft_size" => s.fft_size = int()? as usize,
            "window_start" => s.window_start = Some(int()? as usize),
            "carrier_hz" => s.carrier_hz = num()?,
            "bandwidth_hz" => s.bandwidth_hz = num()?,
            "altitude_m" => s.altitude_m = num()?,
            "min_elevation_deg" => s.min_elevation_deg = num()?,
            "user_gain_dbi" => s.user_gain_dbi = num()?,
            "noise_temp_k" => s.noise_temp_k = num()?,
            "element_pattern_exponent" => s.array.element_pattern_exponent = num()?,
            "trials" => cfg.trials = int()? as usize,
            "seed" => cfg.seed = int()?,
            "schemes" => {
                cfg.schemes = split_list(value)
                    .into_iter()
                    .map(|name| name.parse::<SchemeId>())
                    .collect::<Result<_>>()
                    .map_err(|e| err(e.to_string()))?;
            }
            "sweep_axis" => {
                cfg.sweep_axis = unquote(value).parse().map_err(|e: Error| err(e.to_string()))?
            }
            "sweep_values" => {
                let values = split_list(value)
                    .into_iter()
                    .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| err(format!("sweep_values: bad number list {value:?}")))?;
                sweep_values = Some(values);
            }
            "solver.max_iter" => cfg.solver.max_outer_iters = int()? as usize,
            "solver.tol" => cfg.solver.tolerance = num()?,
            "solver.beta_mode" => {
                cfg.solver.beta_mode =
                    unquote(value).parse().map_err(|e: Error| err(e.to_string()))?
            }
            "solver.step0" => cfg.solver.step0 = num()?,
            "solver.theta_init" => cfg.solver.theta_init = Some(num()?),
            "solver.init" => {
                cfg.solver.init = unquote(value).parse().map_err(|e: Error| err(e.to_string()))?
            }
            "solver.align_phases" => {
                cfg.solver.align_phases = unquote(value)
                    .parse()
                    .map_err(|_| err(format!("{key}: expected true or false, got {value:?}")))?
            }
            _ => unreachable!("key list checked above"),
        }
    }
    cfg.sweep_values = sweep_values.unwrap_or_else(|| vec![cfg.base_value()]);
    cfg.validate()?;
    Ok(cfg)
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .unwrap_or(s)
}

fn split_list(value: &str) -> Vec<&str> {
    let inner = value.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(inner);
    inner
        .split(',')
        .map(unquote)
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_ura(value: &str) -> Option<(usize, usize)> {
    let parts: Vec<&str> = if value.contains(['x', 'X']) {
        unquote(value).split(['x', 'X']).map(str::trim).collect()
    } else {
        split_list(value)
    };
    match parts.as_slice() {
        [nx, ny] => Some((nx.parse().ok()?, ny.parse().ok()?)),
        _ => None,
    }
}
