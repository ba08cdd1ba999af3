//! Alternating WMMSE optimization of the precoder and the beam assignment.
//!
//! One outer iteration refreshes the receive coefficients `delta` and MSE
//! weights `omega` in closed form, solves the power-constrained precoder
//! subproblem through its dual variable `beta`, then proposes a new beam
//! assignment with the Hungarian method on the separable assignment weights.
//! The proposal is kept only if the full weighted-MMSE objective does not go
//! up, so the recorded objective never increases.
//!
//! Conjugation conventions: with `E = H^H Phi W A` (see
//! [`Beamspace::effective_matrix`]) and `v_m` the `m`-th row of `E` as a column,
//! `Theta = sum_j omega_j |delta_j|^2 v_j v_j^H` and `k_m = conj(delta_m) v_m`.
//! `Theta` is then Hermitian PSD, `delta*` minimizes the per-user MSE, and
//! `u_m = (Theta + beta I)^{-1} omega_m k_m` is the stationary point of the
//! Lagrangian.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assignment::{assignment_weights, hungarian, phase_free_weights};
use crate::baselines::greedy_assignment;
use crate::codebook::{DftCodebook, Window};
use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::linalg;
use crate::metrics::{sinr_from_gains, wmmse_objective_from_gains, Assignment, Beamspace, Precoder};
use crate::{CMatrix, C64};

/// How the dual variable of the power constraint is found for each precoder
/// update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaMode {
    /// Bisection on the monotone power curve `Trace(U(beta)^H U(beta))`.
    #[default]
    Bisection,
    /// Projected subgradient ascent on the dual with step `r_l ~ 1/sqrt(l)`,
    /// run to convergence inside every precoder update.
    Subgradient,
}

impl std::str::FromStr for BetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bisection" => Ok(Self::Bisection),
            "subgradient" => Ok(Self::Subgradient),
            other => Err(Error::InvalidArgument(format!("unknown beta mode {other:?}"))),
        }
    }
}

/// Starting beam assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitAssignment {
    /// Uniformly random feasible assignment drawn from `SolverConfig::seed`.
    #[default]
    Random,
    /// Greedy strongest-beam selection.
    Greedy,
}

impl std::str::FromStr for InitAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::InvalidArgument(format!("unknown initial assignment {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_outer_iters: usize,
    /// Relative change of the objective that ends the iteration.
    pub tolerance: f64,
    /// Entry of the all-equal initial precoder; `None` uses
    /// `1e-2 * sqrt(P / M^2)`.
    pub theta_init: Option<f64>,
    pub beta_mode: BetaMode,
    /// Scale of the subgradient step `r_l = step0 / (|dTrace/dbeta| sqrt(l))`,
    /// with the slope of the power curve taken at the current iterate.
    pub step0: f64,
    /// Upper end of the dual bracket; `None` derives a bracket that is always
    /// feasible.
    pub beta_max: Option<f64>,
    pub max_dual_iters: usize,
    pub init: InitAssignment,
    /// Also propose the assignment that minimizes the weights over a unit
    /// phase per DFT input, together with the matching rotation of `U`. The
    /// better of the two proposals (by the true objective) is offered to the
    /// guard.
    pub align_phases: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_outer_iters: 200,
            tolerance: 1e-5,
            theta_init: None,
            beta_mode: BetaMode::Bisection,
            step0: 1.0,
            beta_max: None,
            max_dual_iters: 100_000,
            init: InitAssignment::Random,
            align_phases: false,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Validation("solver tolerance must be positive".into()));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::Validation("solver needs at least one iteration".into()));
        }
        if !(self.step0 > 0.0) {
            return Err(Error::Validation("subgradient step scale must be positive".into()));
        }
        if let Some(theta) = self.theta_init {
            if !(theta > 0.0) {
                return Err(Error::Validation("theta_init must be positive".into()));
            }
        }
        if let Some(b) = self.beta_max {
            if !(b > 0.0) {
                return Err(Error::Validation("beta_max must be positive".into()));
            }
        }
        Ok(())
    }
}

/// MMSE receive coefficients `delta_m = conj(g_mm) / (sum_j |g_mj|^2 + sigma^2)`.
pub fn update_receive_coeffs(bs: &Beamspace, a: &Assignment, u: &Precoder) -> Vec<C64> {
    receive_coeffs_from_gains(&bs.gains(a, u), bs.noise_power())
}

/// MSE weights `omega_m = 1 + SINR_m`.
pub fn update_mse_weights(bs: &Beamspace, a: &Assignment, u: &Precoder) -> Vec<f64> {
    sinr_from_gains(&bs.gains(a, u), bs.noise_power())
        .into_iter()
        .map(|s| 1.0 + s)
        .collect()
}

fn receive_coeffs_from_gains(gains: &CMatrix, noise_power: f64) -> Vec<C64> {
    (0..gains.nrows())
        .map(|m| {
            let total: f64 = gains.row(m).iter().map(C64::norm_sqr).sum();
            gains[(m, m)].conj() / (total + noise_power)
        })
        .collect()
}

/// Quadratic and linear terms of the precoder subproblem
/// `min sum_m u_m^H Theta u_m - 2 omega_m Re(k_m^H u_m)`.
#[derive(Debug, Clone)]
pub struct NormalSystem {
    pub theta: CMatrix,
    /// Column `m` is `k_m`.
    pub k: CMatrix,
    pub omegas: Vec<f64>,
}

impl NormalSystem {
    /// Right-hand side `[omega_1 k_1, ..., omega_M k_M]`.
    fn rhs(&self) -> CMatrix {
        let mut rhs = self.k.clone();
        for (m, &w) in self.omegas.iter().enumerate() {
            rhs.column_mut(m).scale_mut(w);
        }
        rhs
    }

    /// Value of the subproblem objective at `u`.
    pub fn objective(&self, u: &Precoder) -> f64 {
        (0..u.u.ncols())
            .map(|m| {
                let col = u.u.column(m);
                let quad = (col.adjoint() * &self.theta * col)[(0, 0)].re;
                let lin = (self.k.column(m).adjoint() * col)[(0, 0)].re;
                quad - 2.0 * self.omegas[m] * lin
            })
            .sum()
    }

    /// Per-user `||(Theta + beta I) u_m - omega_m k_m|| / max(1, ||k_m||)`.
    pub fn stationarity(&self, u: &Precoder, beta: f64) -> Vec<f64> {
        let resid = linalg::shift_diagonal(&self.theta, beta) * &u.u - self.rhs();
        (0..resid.ncols())
            .map(|m| resid.column(m).norm() / self.k.column(m).norm().max(1.0))
            .collect()
    }

    /// `beta` at which even `Theta = 0` meets the budget; the optimal dual
    /// variable never exceeds it.
    pub fn beta_upper_bound(&self, power_budget: f64) -> f64 {
        let total: f64 = self
            .omegas
            .iter()
            .enumerate()
            .map(|(m, w)| w * w * self.k.column(m).norm_squared())
            .sum();
        (total / power_budget).sqrt()
    }
}

pub fn precoder_normal_matrix(
    bs: &Beamspace,
    a: &Assignment,
    deltas: &[C64],
    omegas: &[f64],
) -> Result<NormalSystem> {
    let m = bs.num_users();
    if deltas.len() != m || omegas.len() != m {
        return Err(Error::DimensionMismatch {
            what: "auxiliary variables vs users",
            expected: m,
            got: deltas.len().min(omegas.len()),
        });
    }
    if omegas.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidArgument("MSE weights must be positive".into()));
    }
    // columns of E^H are the v_m
    let v = bs.effective_matrix(a).adjoint();
    let mut weighted = v.clone();
    let mut k = v.clone();
    for j in 0..m {
        weighted
            .column_mut(j)
            .scale_mut(omegas[j] * deltas[j].norm_sqr());
        let dc = deltas[j].conj();
        k.column_mut(j).iter_mut().for_each(|x| *x *= dc);
    }
    let mut theta = weighted * v.adjoint();
    // symmetrize rounding
    theta = (&theta + theta.adjoint()) * C64::new(0.5, 0.0);
    Ok(NormalSystem {
        theta,
        k,
        omegas: omegas.to_vec(),
    })
}

/// `u_m = (Theta + beta I)^{-1} omega_m k_m` with one step of iterative
/// refinement.
pub fn precoder_closed_form(system: &NormalSystem, beta: f64) -> Result<Precoder> {
    let lhs = linalg::shift_diagonal(&system.theta, beta);
    let rhs = system.rhs();
    let singular = || Error::SingularSystem { beta };
    let mut u = linalg::hpd_solve(&lhs, &rhs).ok_or_else(singular)?;
    let resid = &rhs - &lhs * &u;
    u += linalg::hpd_solve(&lhs, &resid).ok_or_else(singular)?;
    if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(singular());
    }
    Ok(Precoder::new(u))
}

#[derive(Debug, Clone)]
pub struct DualSolution {
    pub beta: f64,
    pub precoder: Precoder,
    pub power: f64,
    pub iterations: usize,
}

/// Finds the dual variable of the power constraint and the matching precoder.
///
/// The result satisfies `Trace(U^H U) <= P (1 + 1e-6)` and complementary
/// slackness. `beta_start` warm-starts the subgradient mode.
pub fn solve_beta(
    system: &NormalSystem,
    power_budget: f64,
    config: &SolverConfig,
    beta_start: f64,
) -> Result<DualSolution> {
    if !(power_budget > 0.0) {
        return Err(Error::InvalidArgument("power budget must be positive".into()));
    }
    let bound = system.beta_upper_bound(power_budget);
    if bound == 0.0 {
        // k = 0: the zero precoder is optimal
        let m = system.k.ncols();
        return Ok(DualSolution {
            beta: 0.0,
            precoder: Precoder::zeros(m),
            power: 0.0,
            iterations: 0,
        });
    }
    let hi = config.beta_max.unwrap_or(bound * (1.0 + 1e-9));
    let at_hi = precoder_closed_form(system, hi)?;
    if at_hi.power() > power_budget * (1.0 + 1e-12) {
        return Err(Error::BracketFailure {
            beta_max: hi,
            power: at_hi.power(),
            budget: power_budget,
        });
    }
    match config.beta_mode {
        BetaMode::Bisection => bisect_beta(system, power_budget, hi, at_hi),
        BetaMode::Subgradient => subgradient_beta(system, power_budget, hi, config, beta_start),
    }
}

fn bisect_beta(
    system: &NormalSystem,
    power_budget: f64,
    hi: f64,
    at_hi: Precoder,
) -> Result<DualSolution> {
    if let Ok(u) = precoder_closed_form(system, 0.0) {
        let power = u.power();
        if power <= power_budget {
            return Ok(DualSolution {
                beta: 0.0,
                precoder: u,
                power,
                iterations: 1,
            });
        }
    }
    let (mut lo, mut hi, mut best) = (0.0, hi, at_hi);
    let mut iterations = 0;
    while hi - lo > 1e-15 * hi && iterations < 200 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        match precoder_closed_form(system, mid) {
            Ok(u) if u.power() <= power_budget => {
                hi = mid;
                best = u;
            }
            _ => lo = mid,
        }
    }
    let power = best.power();
    Ok(DualSolution {
        beta: hi,
        precoder: best,
        power,
        iterations,
    })
}

const SUBGRADIENT_POWER_TOL: f64 = 1e-10;

fn subgradient_beta(
    system: &NormalSystem,
    power_budget: f64,
    hi: f64,
    config: &SolverConfig,
    beta_start: f64,
) -> Result<DualSolution> {
    let mut beta = beta_start.clamp(0.0, hi);
    let mut best: Option<DualSolution> = None;
    for l in 1..=config.max_dual_iters {
        let (power, u) = match precoder_closed_form(system, beta) {
            Ok(u) => (u.power(), Some(u)),
            Err(_) => (f64::INFINITY, None),
        };
        if let Some(u) = u {
            let converged = if beta == 0.0 {
                power <= power_budget
            } else {
                (power - power_budget).abs() <= SUBGRADIENT_POWER_TOL * power_budget
            };
            if converged {
                return Ok(DualSolution {
                    beta,
                    precoder: u,
                    power,
                    iterations: l,
                });
            }
            if power <= power_budget * (1.0 + 1e-6)
                && best.as_ref().is_none_or(|b| (power - power_budget).abs() < (b.power - power_budget).abs())
            {
                best = Some(DualSolution {
                    beta,
                    precoder: u,
                    power,
                    iterations: l,
                });
            }
        }
        // step in units of the local slope of the power curve (step0 = 1 is a
        // full Newton step before the 1/sqrt(l) decay), projected onto
        // [0, hi], which contains the dual optimum
        let next = match power_slope(system, beta).filter(|s| power.is_finite() && *s > 0.0) {
            Some(slope) => beta + config.step0 / (slope * (l as f64).sqrt()) * (power - power_budget),
            None => 0.5 * (beta + hi),
        };
        beta = next.clamp(0.0, hi);
    }
    // iteration budget spent: fall back to the best feasible iterate
    best.ok_or(Error::BracketFailure {
        beta_max: hi,
        power: f64::NAN,
        budget: power_budget,
    })
}

/// `-d Trace(U(beta)^H U(beta)) / d beta = 2 Re Tr(U^H (Theta + beta I)^{-1} U)`.
fn power_slope(system: &NormalSystem, beta: f64) -> Option<f64> {
    let u = precoder_closed_form(system, beta).ok()?;
    let lhs = linalg::shift_diagonal(&system.theta, beta);
    let x = linalg::hpd_solve(&lhs, &u.u)?;
    let slope = 2.0 * u.u.iter().zip(x.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    slope.is_finite().then_some(slope)
}

/// Objective after each block update of one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageObjectives {
    pub after_receive: f64,
    pub after_weights: f64,
    pub after_precoder: f64,
    pub after_assignment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    pub sum_rate: f64,
    pub beta: f64,
    pub power: f64,
    /// Worst per-user stationarity residual of the accepted precoder.
    pub stationarity: f64,
    pub dual_iterations: usize,
    pub assignment_accepted: bool,
    pub stages: StageObjectives,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub deltas: Vec<C64>,
    pub omegas: Vec<f64>,
    pub beta: f64,
    pub precoder: Precoder,
    pub assignment: Assignment,
    pub iter: usize,
    /// Objective at initialization followed by one entry per outer iteration.
    pub objective_trace: Vec<f64>,
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

impl SolverState {
    pub fn objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace starts with the initial objective")
    }
}

/// Stepwise driver for the alternating optimization.
#[derive(Debug)]
pub struct WmmseSolver<'a> {
    bs: &'a Beamspace,
    power_budget: f64,
    config: SolverConfig,
    state: SolverState,
}

impl<'a> WmmseSolver<'a> {
    pub fn new(bs: &'a Beamspace, power_budget: f64, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let m = bs.num_users();
        let n = bs.num_beams();
        if m > n {
            return Err(Error::InvalidArgument(format!("{m} users exceed {n} DFT beams")));
        }
        if !(power_budget > 0.0) {
            return Err(Error::InvalidArgument("power budget must be positive".into()));
        }
        let theta = config
            .theta_init
            .unwrap_or(1e-2 * (power_budget / (m * m) as f64).sqrt());
        if (m * m) as f64 * theta * theta > power_budget {
            return Err(Error::Validation(format!(
                "theta_init {theta} violates the power budget"
            )));
        }
        let precoder = Precoder::new(CMatrix::from_element(m, m, C64::new(theta, 0.0)));
        let assignment = match config.init {
            InitAssignment::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                Assignment::random(n, m, &mut rng)?
            }
            InitAssignment::Greedy => greedy_assignment(bs),
        };
        let gains = bs.gains(&assignment, &precoder);
        let deltas = receive_coeffs_from_gains(&gains, bs.noise_power());
        let omegas: Vec<f64> = sinr_from_gains(&gains, bs.noise_power())
            .into_iter()
            .map(|s| 1.0 + s)
            .collect();
        let g0 = wmmse_objective_from_gains(&gains, &deltas, &omegas, bs.noise_power())?;
        Ok(Self {
            bs,
            power_budget,
            config,
            state: SolverState {
                deltas,
                omegas,
                beta: 0.0,
                precoder,
                assignment,
                iter: 0,
                objective_trace: vec![g0],
                records: Vec::new(),
                converged: false,
            },
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn into_state(self) -> SolverState {
        self.state
    }

    fn objective_at(&self, a: &Assignment, u: &Precoder, deltas: &[C64], omegas: &[f64]) -> f64 {
        wmmse_objective_from_gains(&self.bs.gains(a, u), deltas, omegas, self.bs.noise_power())
            .expect("weights stay positive")
    }

    /// Closed-form `delta` then `omega` refresh. Returns the objective after
    /// each of the two updates.
    pub fn update_auxiliaries(&mut self) -> (f64, f64) {
        let st = &self.state;
        let gains = self.bs.gains(&st.assignment, &st.precoder);
        let deltas = receive_coeffs_from_gains(&gains, self.bs.noise_power());
        let after_receive =
            wmmse_objective_from_gains(&gains, &deltas, &st.omegas, self.bs.noise_power())
                .expect("weights stay positive");
        let omegas: Vec<f64> = sinr_from_gains(&gains, self.bs.noise_power())
            .into_iter()
            .map(|s| 1.0 + s)
            .collect();
        let after_weights =
            wmmse_objective_from_gains(&gains, &deltas, &omegas, self.bs.noise_power())
                .expect("weights stay positive");
        self.state.deltas = deltas;
        self.state.omegas = omegas;
        (after_receive, after_weights)
    }

    /// Precoder update with the dual variable solved. Returns the dual
    /// solution and the worst stationarity residual.
    pub fn update_precoder(&mut self) -> Result<(DualSolution, f64)> {
        let st = &self.state;
        let system = precoder_normal_matrix(self.bs, &st.assignment, &st.deltas, &st.omegas)?;
        let dual = solve_beta(&system, self.power_budget, &self.config, st.beta)?;
        let stationarity = system
            .stationarity(&dual.precoder, dual.beta)
            .into_iter()
            .fold(0.0, f64::max);
        self.state.beta = dual.beta;
        self.state.precoder = dual.precoder.clone();
        Ok((dual, stationarity))
    }

    /// Hungarian proposal on the current assignment weights.
    pub fn propose_assignment(&self) -> Result<Assignment> {
        let st = &self.state;
        let rho = assignment_weights(self.bs, &st.precoder, &st.deltas, &st.omegas)?;
        hungarian(&rho)
    }

    /// Hungarian proposal on the phase-free weights, with `U` rotated row by
    /// row to the minimizing phases.
    pub fn propose_aligned(&self) -> Result<(Assignment, Precoder)> {
        let st = &self.state;
        let (rho, phasors) = phase_free_weights(self.bs, &st.precoder, &st.deltas, &st.omegas)?;
        let a = hungarian(&rho)?;
        let mut u = st.precoder.u.clone();
        for (i, &row) in a.rows().iter().enumerate() {
            let p = phasors[(row, i)];
            u.row_mut(i).iter_mut().for_each(|z| *z *= p);
        }
        Ok((a, Precoder::new(u)))
    }

    /// True objective `g` for a candidate assignment at the current
    /// `(U, delta, omega)`.
    pub fn objective_with(&self, a: &Assignment) -> f64 {
        let st = &self.state;
        self.objective_at(a, &st.precoder, &st.deltas, &st.omegas)
    }

    /// Adopts `candidate` if it does not increase the objective. Returns
    /// whether it was adopted and the resulting objective.
    pub fn try_assignment(&mut self, candidate: Assignment) -> (bool, f64) {
        self.try_candidate(candidate, None)
    }

    /// Like [`Self::try_assignment`], optionally replacing the precoder too.
    fn try_candidate(&mut self, a: Assignment, u: Option<Precoder>) -> (bool, f64) {
        let st = &self.state;
        let current = self.objective_with(&st.assignment);
        let proposed = self.objective_at(&a, u.as_ref().unwrap_or(&st.precoder), &st.deltas, &st.omegas);
        if proposed <= current {
            self.state.assignment = a;
            if let Some(u) = u {
                self.state.precoder = u;
            }
            (true, proposed)
        } else {
            (false, current)
        }
    }

    /// One full outer iteration.
    pub fn step(&mut self) -> Result<&IterationRecord> {
        let (after_receive, after_weights) = self.update_auxiliaries();
        let (dual, stationarity) = self.update_precoder()?;
        let st = &self.state;
        let after_precoder = self.objective_at(&st.assignment, &st.precoder, &st.deltas, &st.omegas);
        let mut candidate = (self.propose_assignment()?, None);
        if self.config.align_phases {
            let (a, u) = self.propose_aligned()?;
            let g = self.objective_at(&a, &u, &st.deltas, &st.omegas);
            if g < self.objective_with(&candidate.0) {
                candidate = (a, Some(u));
            }
        }
        let (accepted, objective) = self.try_candidate(candidate.0, candidate.1);

        self.state.iter += 1;
        self.state.objective_trace.push(objective);
        let sum_rate = self.bs.sum_rate(&self.state.assignment, &self.state.precoder);
        self.state.records.push(IterationRecord {
            iteration: self.state.iter,
            objective,
            sum_rate,
            beta: dual.beta,
            power: dual.power,
            stationarity,
            dual_iterations: dual.iterations,
            assignment_accepted: accepted,
            stages: StageObjectives {
                after_receive,
                after_weights,
                after_precoder,
                after_assignment: objective,
            },
        });
        Ok(self.state.records.last().expect("just pushed"))
    }

    fn relative_change(&self) -> f64 {
        let trace = &self.state.objective_trace;
        let (prev, cur) = (trace[trace.len() - 2], trace[trace.len() - 1]);
        (prev - cur).abs() / prev.abs().max(f64::MIN_POSITIVE)
    }

    /// Iterates until the relative objective change drops below the tolerance
    /// or the iteration budget runs out.
    pub fn run(mut self) -> Result<SolverState> {
        while self.state.iter < self.config.max_outer_iters {
            self.step()?;
            if self.relative_change() < self.config.tolerance {
                self.state.converged = true;
                break;
            }
        }
        Ok(self.state)
    }
}

/// Runs the alternating optimization on one scene.
pub fn solve(
    scene: &Scene,
    codebook: &DftCodebook,
    window: &Window,
    config: &SolverConfig,
) -> Result<SolverState> {
    let m = scene.num_users();
    if m > scene.num_elements() || scene.num_elements() > codebook.size() {
        return Err(Error::InvalidArgument(format!(
            "need M <= K <= N, got M={m}, K={}, N={}",
            scene.num_elements(),
            codebook.size()
        )));
    }
    let bs = Beamspace::new(scene, codebook, window)?;
    WmmseSolver::new(&bs, scene.power_budget, config.clone())?.run()
}

/// Per-iteration trace as CSV: `iteration,objective,sum_rate,beta,power`.
pub fn write_trace_csv<W: Write>(records: &[IterationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "objective", "sum_rate", "beta", "power"])?;
    for r in records {
        w.write_record([
            r.iteration.to_string(),
            r.objective.to_string(),
            r.sum_rate.to_string(),
            r.beta.to_string(),
            r.power.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
