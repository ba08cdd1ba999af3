//! Reference schemes: greedy beam selection with zero forcing, DFT-only
//! beamforming, and fully digital matched-filter / MMSE precoders.
//!
//! The fully digital schemes drive every element with its own RF chain, so
//! they bypass the DFT chain: `y = H^H U_fd x + n` with `U_fd` of size `K x M`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::linalg;
use crate::metrics::{sinr_from_gains, sum_rate_from_sinr, Assignment, Beamspace, Precoder};
use crate::solver::{SolverConfig, WmmseSolver};
use crate::{CMatrix, C64};

/// Largest condition number of the effective channel accepted for zero forcing.
pub const ZF_MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    JointWmmse,
    GreedyZf,
    DftOnly,
    MfFdp,
    MmseFdp,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::JointWmmse,
        SchemeId::GreedyZf,
        SchemeId::DftOnly,
        SchemeId::MfFdp,
        SchemeId::MmseFdp,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::JointWmmse => "joint_wmmse",
            SchemeId::GreedyZf => "greedy_zf",
            SchemeId::DftOnly => "dft_only",
            SchemeId::MfFdp => "mf_fdp",
            SchemeId::MmseFdp => "mmse_fdp",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    pub scheme: SchemeId,
    /// Spectral efficiency, bit/s/Hz.
    pub sum_rate: f64,
    pub per_user_sinr: Vec<f64>,
    pub wall_time: Duration,
    /// Outer iterations; 0 for one-shot schemes.
    pub iterations: usize,
    /// Set when the scheme could not produce a precoder or did not converge.
    pub flag: Option<String>,
}

/// Sequential strongest-beam selection: each user in index order takes the
/// remaining DFT row maximizing `|h~_m^H w_n|^2` (smallest `n` on ties).
pub fn greedy_assignment(bs: &Beamspace) -> Assignment {
    let t = bs.beam_gains();
    let n = bs.num_beams();
    let mut free = vec![true; n];
    let mut row_of = Vec::with_capacity(bs.num_users());
    for m in 0..bs.num_users() {
        let mut best: Option<(usize, f64)> = None;
        for (row, _) in free.iter().enumerate().filter(|(_, &f)| f) {
            let gain = t[(row, m)].norm_sqr();
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((row, gain));
            }
        }
        let (row, _) = best.expect("M <= N leaves a free row");
        free[row] = false;
        row_of.push(row);
    }
    Assignment::new(row_of, n).expect("rows are distinct by construction")
}

/// Unscaled zero-forcing precoder `E^{-1}` for the effective channel
/// `E = H^H Phi W A`.
pub fn zf_inverse(bs: &Beamspace, a: &Assignment) -> Result<CMatrix> {
    let e = bs.effective_matrix(a);
    let cond = linalg::condition_number(&e);
    if !(cond <= ZF_MAX_CONDITION) {
        return Err(Error::IllConditioned { cond });
    }
    e.try_inverse().ok_or(Error::IllConditioned { cond })
}

/// Zero forcing scaled so that `Trace(U^H U) = P`.
pub fn zf_precoder(bs: &Beamspace, a: &Assignment, power_budget: f64) -> Result<Precoder> {
    let u = zf_inverse(bs, a)?;
    Ok(Precoder::new(scale_to_power(u, power_budget)))
}

/// Greedy assignment with an equal-power diagonal precoder.
pub fn dft_only(bs: &Beamspace, power_budget: f64) -> (Assignment, Precoder) {
    let a = greedy_assignment(bs);
    let m = bs.num_users();
    let amp = (power_budget / m as f64).sqrt();
    let u = CMatrix::from_diagonal_element(m, m, C64::new(amp, 0.0));
    (a, Precoder::new(u))
}

fn scale_to_power(u: CMatrix, power_budget: f64) -> CMatrix {
    let p = linalg::power(&u);
    if p == 0.0 {
        return u;
    }
    u * C64::new((power_budget / p).sqrt(), 0.0)
}

/// Matched filter: `U_fd = c H` with `c` setting the total power to `P`.
pub fn mf_fdp(scene: &Scene, power_budget: f64) -> CMatrix {
    scale_to_power(scene.h.clone(), power_budget)
}

/// Regularized inverse `U_fd ~ H (H^H H + (M sigma^2 / P) I)^{-1}`, power
/// normalized to `P`.
pub fn mmse_fdp(scene: &Scene, power_budget: f64) -> Result<CMatrix> {
    let m = scene.num_users();
    let reg = m as f64 * scene.noise_power / power_budget;
    let gram = linalg::shift_diagonal(&(scene.h.adjoint() * &scene.h), reg);
    let inv = linalg::hpd_solve(&gram, &CMatrix::identity(m, m))
        .ok_or(Error::SingularSystem { beta: reg })?;
    Ok(scale_to_power(&scene.h * inv, power_budget))
}

/// `G = H^H U_fd` for a fully digital precoder.
pub fn fdp_gains(scene: &Scene, u_fd: &CMatrix) -> CMatrix {
    scene.h.adjoint() * u_fd
}

/// Runs one scheme on a scene. Failures (for example an ill-conditioned
/// zero-forcing channel) come back as a flagged zero-rate result.
pub fn run_scheme(
    scheme: SchemeId,
    scene: &Scene,
    bs: &Beamspace,
    solver: &SolverConfig,
) -> SchemeResult {
    let start = Instant::now();
    let p = scene.power_budget;
    let outcome: Result<(Vec<f64>, usize, Option<String>)> = match scheme {
        SchemeId::JointWmmse => WmmseSolver::new(bs, p, solver.clone())
            .and_then(WmmseSolver::run)
            .map(|st| {
                let flag = (!st.converged).then(|| "not_converged".to_string());
                (bs.sinrs(&st.assignment, &st.precoder), st.iter, flag)
            }),
        SchemeId::GreedyZf => {
            let a = greedy_assignment(bs);
            zf_precoder(bs, &a, p).map(|u| (bs.sinrs(&a, &u), 0, None))
        }
        SchemeId::DftOnly => {
            let (a, u) = dft_only(bs, p);
            Ok((bs.sinrs(&a, &u), 0, None))
        }
        SchemeId::MfFdp => {
            let u = mf_fdp(scene, p);
            Ok((sinr_from_gains(&fdp_gains(scene, &u), scene.noise_power), 0, None))
        }
        SchemeId::MmseFdp => mmse_fdp(scene, p)
            .map(|u| (sinr_from_gains(&fdp_gains(scene, &u), scene.noise_power), 0, None)),
    };
    let wall_time = start.elapsed();
    match outcome {
        Ok((sinr, iterations, flag)) => SchemeResult {
            scheme,
            sum_rate: sum_rate_from_sinr(&sinr),
            per_user_sinr: sinr,
            wall_time,
            iterations,
            flag,
        },
        Err(e) => SchemeResult {
            scheme,
            sum_rate: 0.0,
            per_user_sinr: vec![0.0; scene.num_users()],
            wall_time,
            iterations: 0,
            flag: Some(failure_flag(&e)),
        },
    }
}

fn failure_flag(e: &Error) -> String {
    match e {
        Error::IllConditioned { .. } => "ill_conditioned".into(),
        Error::SingularSystem { .. } => "singular".into(),
        _ => "failed".into(),
    }
}
