//! Signal-model evaluation: SINR, sum rate, per-user MSE and the weighted-MMSE
//! objective.
//!
//! Everything reduces to the beam-space gains `t[n][m] = (W^H h~_m)_n`, so that
//! the effective gain from stream `j` to user `m` is
//! `g_mj = h~_m^H W A u_j = sum_i conj(t[row_of(i)][m]) * u_j[i]`.
//! Symbols are unit power and independent.

use std::collections::HashSet;

use rand::Rng;

use crate::codebook::{effective_channel, DftCodebook, Window};
use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::linalg;
use crate::{CMatrix, C64};

/// Binary beam assignment `A` stored as the DFT row used by each user stream.
///
/// Distinct rows guarantee that every stream uses exactly one DFT input and
/// every input carries at most one stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    row_of: Vec<usize>,
    n: usize,
}

impl Assignment {
    pub fn new(row_of: Vec<usize>, n: usize) -> Result<Self> {
        if row_of.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} users cannot be assigned to {} DFT rows",
                row_of.len(),
                n
            )));
        }
        let mut seen = HashSet::with_capacity(row_of.len());
        for &r in &row_of {
            if r >= n {
                return Err(Error::InvalidArgument(format!("row {r} out of range 0..{n}")));
            }
            if !seen.insert(r) {
                return Err(Error::InvalidArgument(format!("row {r} assigned twice")));
            }
        }
        Ok(Self { row_of, n })
    }

    /// Uniformly random feasible assignment.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidArgument(format!(
                "{m} users cannot be assigned to {n} DFT rows"
            )));
        }
        Self::new(rand::seq::index::sample(rng, n, m).into_vec(), n)
    }

    pub fn rows(&self) -> &[usize] {
        &self.row_of
    }

    pub fn row_of(&self, user: usize) -> usize {
        self.row_of[user]
    }

    pub fn num_users(&self) -> usize {
        self.row_of.len()
    }

    pub fn num_rows(&self) -> usize {
        self.n
    }

    /// Dense `N x M` 0/1 matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.row_of.len());
        for (m, &r) in self.row_of.iter().enumerate() {
            a[(r, m)] = C64::new(1.0, 0.0);
        }
        a
    }
}

/// Linear precoder `U` (`M x M`, column `m` precodes user `m`'s symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    pub u: CMatrix,
}

impl Precoder {
    pub fn new(u: CMatrix) -> Self {
        Self { u }
    }

    pub fn zeros(m: usize) -> Self {
        Self::new(CMatrix::zeros(m, m))
    }

    /// `Trace(U^H U)`.
    pub fn power(&self) -> f64 {
        linalg::power(&self.u)
    }

    pub fn num_users(&self) -> usize {
        self.u.ncols()
    }
}

/// A scene seen through a codebook and window: the `N x M` beam-space gains.
#[derive(Debug, Clone)]
pub struct Beamspace {
    t: CMatrix,
    h_eff: CMatrix,
    noise_power: f64,
}

impl Beamspace {
    pub fn new(scene: &Scene, codebook: &DftCodebook, window: &Window) -> Result<Self> {
        let h_eff = effective_channel(&scene.h, window, codebook)?;
        let n = codebook.size();
        let mut t = CMatrix::zeros(n, h_eff.ncols());
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for m in 0..h_eff.ncols() {
            buf.copy_from_slice(h_eff.column(m).as_slice());
            codebook.adjoint_in_place(&mut buf)?;
            t.column_mut(m).copy_from_slice(&buf);
        }
        Ok(Self {
            t,
            h_eff,
            noise_power: scene.noise_power,
        })
    }

    pub fn num_beams(&self) -> usize {
        self.t.nrows()
    }

    pub fn num_users(&self) -> usize {
        self.t.ncols()
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    /// `t[(n, m)] = (W^H h~_m)_n`, so that `|t[(n, m)]|^2 = |h~_m^H w_n|^2`.
    pub fn beam_gains(&self) -> &CMatrix {
        &self.t
    }

    /// Windowed channel `H~` (`N x M`).
    pub fn windowed_channel(&self) -> &CMatrix {
        &self.h_eff
    }

    /// Effective `M x M` channel `H^H Phi W A`.
    pub fn effective_matrix(&self, a: &Assignment) -> CMatrix {
        self.check_assignment(a);
        let m = self.num_users();
        CMatrix::from_fn(m, a.num_users(), |user, stream| {
            self.t[(a.row_of(stream), user)].conj()
        })
    }

    /// `G[(m, j)] = g_mj`.
    pub fn gains(&self, a: &Assignment, u: &Precoder) -> CMatrix {
        assert_eq!(u.u.nrows(), a.num_users(), "precoder rows vs assigned streams");
        self.effective_matrix(a) * &u.u
    }

    pub fn sinr(&self, a: &Assignment, u: &Precoder, m: usize) -> f64 {
        sinr_from_gains(&self.gains(a, u), self.noise_power)[m]
    }

    pub fn sinrs(&self, a: &Assignment, u: &Precoder) -> Vec<f64> {
        sinr_from_gains(&self.gains(a, u), self.noise_power)
    }

    /// `sum_m log2(1 + Gamma_m)` in bit/s/Hz.
    pub fn sum_rate(&self, a: &Assignment, u: &Precoder) -> f64 {
        sum_rate_from_sinr(&self.sinrs(a, u))
    }

    /// `e_m = E|x_m - delta_m y_m|^2`.
    pub fn mse(&self, a: &Assignment, u: &Precoder, delta: C64, m: usize) -> f64 {
        mse_from_gains(&self.gains(a, u), m, delta, self.noise_power)
    }

    /// `sum_m (omega_m e_m - ln omega_m - 1)`.
    pub fn wmmse_objective(
        &self,
        a: &Assignment,
        u: &Precoder,
        deltas: &[C64],
        omegas: &[f64],
    ) -> Result<f64> {
        wmmse_objective_from_gains(&self.gains(a, u), deltas, omegas, self.noise_power)
    }

    fn check_assignment(&self, a: &Assignment) {
        assert_eq!(a.num_rows(), self.num_beams(), "assignment rows vs codebook size");
        assert_eq!(a.num_users(), self.num_users(), "assigned streams vs users");
    }
}

/// Per-user SINR from an `M x M` gain matrix (rows = receivers).
pub fn sinr_from_gains(gains: &CMatrix, noise_power: f64) -> Vec<f64> {
    (0..gains.nrows())
        .map(|m| {
            let row = gains.row(m);
            let total: f64 = row.iter().map(C64::norm_sqr).sum();
            let signal = gains[(m, m)].norm_sqr();
            signal / (total - signal + noise_power)
        })
        .collect()
}

pub fn sum_rate_from_sinr(sinr: &[f64]) -> f64 {
    sinr.iter().map(|g| (1.0 + g).log2()).sum()
}

pub fn mse_from_gains(gains: &CMatrix, m: usize, delta: C64, noise_power: f64) -> f64 {
    let interference: f64 = (0..gains.ncols())
        .filter(|&j| j != m)
        .map(|j| gains[(m, j)].norm_sqr())
        .sum();
    (C64::new(1.0, 0.0) - delta * gains[(m, m)]).norm_sqr()
        + delta.norm_sqr() * (interference + noise_power)
}

pub fn wmmse_objective_from_gains(
    gains: &CMatrix,
    deltas: &[C64],
    omegas: &[f64],
    noise_power: f64,
) -> Result<f64> {
    if deltas.len() != gains.nrows() || omegas.len() != gains.nrows() {
        return Err(Error::DimensionMismatch {
            what: "auxiliary variables vs users",
            expected: gains.nrows(),
            got: deltas.len().min(omegas.len()),
        });
    }
    let mut g = 0.0;
    for (m, (&delta, &omega)) in deltas.iter().zip(omegas).enumerate() {
        if !(omega > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "MSE weight of user {m} must be positive, got {omega}"
            )));
        }
        g += omega * mse_from_gains(gains, m, delta, noise_power) - omega.ln() - 1.0;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::Window;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn setup(seed: u64) -> (Scene, DftCodebook, Window, Assignment, Precoder) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scene = Scene::from_channel(random_matrix(&mut rng, 4, 2), 0.3, 1.0).unwrap();
        let cb = DftCodebook::new(8).unwrap();
        let window = Window::new(2, 4, 8).unwrap();
        let a = Assignment::random(8, 2, &mut rng).unwrap();
        let u = Precoder::new(random_matrix(&mut rng, 2, 2));
        (scene, cb, window, a, u)
    }

    /// `h_m^H Phi W A u_j` built from dense matrices.
    fn dense_gain(
        scene: &Scene,
        cb: &DftCodebook,
        window: &Window,
        a: &Assignment,
        u: &Precoder,
    ) -> CMatrix {
        let phi = window.selection_matrix(cb.size());
        scene.h.adjoint() * phi * cb.matrix() * a.matrix() * &u.u
    }

    #[test]
    fn assignment_rejects_duplicates_and_out_of_range() {
        assert!(Assignment::new(vec![1, 1], 4).is_err());
        assert!(Assignment::new(vec![4], 4).is_err());
        assert!(Assignment::new(vec![0, 1, 2], 2).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let a = Assignment::random(10, 7, &mut rng).unwrap();
            let dense = a.matrix();
            for m in 0..7 {
                assert_eq!(dense.column(m).iter().filter(|v| v.re == 1.0).count(), 1);
            }
            for n in 0..10 {
                assert!(dense.row(n).iter().filter(|v| v.re == 1.0).count() <= 1);
            }
        }
    }

    #[test]
    fn sinr_matches_dense_chain() {
        for seed in 0..20 {
            let (scene, cb, window, a, u) = setup(seed);
            let bs = Beamspace::new(&scene, &cb, &window).unwrap();
            let g = dense_gain(&scene, &cb, &window, &a, &u);
            for m in 0..2 {
                let j = 1 - m;
                let oracle =
                    g[(m, m)].norm_sqr() / (g[(m, j)].norm_sqr() + scene.noise_power);
                let got = bs.sinr(&a, &u, m);
                assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
            }
        }
    }

    #[test]
    fn single_user_has_no_interference() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let scene = Scene::from_channel(random_matrix(&mut rng, 4, 1), 0.5, 1.0).unwrap();
        let cb = DftCodebook::new(4).unwrap();
        let window = Window::new(0, 4, 4).unwrap();
        let bs = Beamspace::new(&scene, &cb, &window).unwrap();
        let a = Assignment::new(vec![2], 4).unwrap();
        let u = Precoder::new(CMatrix::from_element(1, 1, C64::new(0.7, 0.2)));
        let g = dense_gain(&scene, &cb, &window, &a, &u)[(0, 0)];
        let expected = g.norm_sqr() / 0.5;
        assert!((bs.sinr(&a, &u, 0) - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn zero_precoder_gives_zero_rate() {
        let (scene, cb, window, a, _) = setup(3);
        let bs = Beamspace::new(&scene, &cb, &window).unwrap();
        let u = Precoder::zeros(2);
        assert!(bs.sinrs(&a, &u).iter().all(|&s| s == 0.0));
        assert_eq!(bs.sum_rate(&a, &u), 0.0);
        assert_eq!(sum_rate_from_sinr(&[1.0]), 1.0);
    }

    #[test]
    fn mse_edge_cases() {
        let (scene, cb, window, a, u) = setup(4);
        let bs = Beamspace::new(&scene, &cb, &window).unwrap();
        assert!((bs.mse(&a, &u, C64::new(0.0, 0.0), 0) - 1.0).abs() < 1e-15);
        let z = CMatrix::zeros(2, 2);
        let e = mse_from_gains(&z, 0, C64::new(1.0, 0.0), 0.25);
        assert!((e - 1.25).abs() < 1e-15);
    }

    #[test]
    fn objective_at_unit_weights() {
        let z = CMatrix::zeros(3, 3);
        let deltas = vec![C64::new(0.0, 0.0); 3];
        let g = wmmse_objective_from_gains(&z, &deltas, &[1.0; 3], 0.1).unwrap();
        assert_eq!(g, 0.0);
        assert!(wmmse_objective_from_gains(&z, &deltas, &[1.0, 0.0, 1.0], 0.1).is_err());
    }

    #[test]
    fn removing_interference_raises_sinr() {
        let (scene, cb, window, a, u) = setup(8);
        let bs = Beamspace::new(&scene, &cb, &window).unwrap();
        let mut quiet = u.clone();
        quiet.u.column_mut(1).fill(C64::new(0.0, 0.0));
        assert!(bs.sinr(&a, &quiet, 0) > bs.sinr(&a, &u, 0));
    }
}
