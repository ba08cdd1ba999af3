//! Joint linear precoding and DFT-codebook beam selection for multi-beam
//! satellite payloads.
//!
//! The payload chain modelled here is
//!
//! ```text
//! x --U--> s --A--> s~ --W--> DFT outputs --Phi--> K antenna elements --H^H--> users
//! ```
//!
//! where `U` is an `M x M` linear precoder, `A` assigns each precoded stream to
//! one input of an `N`-point DFT beamformer `W`, and `Phi` routes `K`
//! consecutive DFT outputs to the radiating elements. The crate provides:
//!
//! * [`codebook`]: the unitary DFT codebook, its FFT application path and the
//!   spatial window.
//! * [`geometry`]: reproducible MEO scenes (user drops, URA steering vectors,
//!   free-space link budget, thermal noise).
//! * [`metrics`]: SINR, sum rate, per-user MSE and the weighted-MMSE objective.
//! * [`assignment`]: beam-assignment weights, a Hungarian solver and an
//!   exhaustive oracle.
//! * [`solver`]: the alternating WMMSE / dual / Hungarian optimizer.
//! * [`baselines`]: greedy selection with zero forcing, DFT-only beamforming
//!   and fully digital MF / MMSE precoders.
//! * [`harness`]: scenario configs, seeded Monte Carlo sweeps and CSV reports.

// `!(x <= y)` style comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod baselines;
pub mod codebook;
pub mod error;
pub mod geometry;
pub mod harness;
mod linalg;
pub mod metrics;
pub mod solver;

pub use nalgebra::Complex;

/// Complex double used throughout the crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

pub use assignment::{assignment_weights, brute_force_assignment, hungarian, CostMatrix};
pub use baselines::{SchemeId, SchemeResult};
pub use codebook::{DftCodebook, Window};
pub use error::{Error, Result};
pub use geometry::{ArrayConfig, Scene, SceneConfig};
pub use metrics::{Assignment, Beamspace, Precoder};
pub use solver::{BetaMode, SolverConfig, SolverState};
