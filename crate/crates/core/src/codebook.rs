//! DFT beamforming codebook and spatial window.
//!
//! `W[k][n] = exp(-j 2 pi k n / N) / sqrt(N)`, so `W` is unitary and symmetric.
//! Column `n` is the beam `w_n`. Applying `W` to a vector is a forward FFT
//! followed by a `1/sqrt(N)` scale; applying `W^H` is the inverse FFT with the
//! same scale.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::metrics::Assignment;
use crate::{CMatrix, C64};

#[derive(Clone)]
pub struct DftCodebook {
    n: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    dense: OnceLock<CMatrix>,
}

impl fmt::Debug for DftCodebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DftCodebook").field("n", &self.n).finish()
    }
}

impl DftCodebook {
    /// Plans both FFT directions for an `n`-point codebook.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("codebook size must be positive".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            scale: 1.0 / (n as f64).sqrt(),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            dense: OnceLock::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `W[k][n]`.
    pub fn entry(&self, k: usize, n: usize) -> C64 {
        let phase = -2.0 * PI * ((k * n) % self.n) as f64 / self.n as f64;
        C64::from_polar(self.scale, phase)
    }

    /// Dense `N x N` matrix, built on first use and cached.
    pub fn matrix(&self) -> &CMatrix {
        self.dense
            .get_or_init(|| CMatrix::from_fn(self.n, self.n, |k, n| self.entry(k, n)))
    }

    /// Beam `w_n` (column `n` of `W`).
    pub fn beam(&self, n: usize) -> Vec<C64> {
        (0..self.n).map(|k| self.entry(k, n)).collect()
    }

    /// In-place `x <- W x`.
    pub fn forward_in_place(&self, x: &mut [C64]) -> Result<()> {
        self.check_len(x.len())?;
        self.forward.process(x);
        x.iter_mut().for_each(|v| *v *= self.scale);
        Ok(())
    }

    /// In-place `x <- W^H x`.
    pub fn adjoint_in_place(&self, x: &mut [C64]) -> Result<()> {
        self.check_len(x.len())?;
        self.inverse.process(x);
        x.iter_mut().for_each(|v| *v *= self.scale);
        Ok(())
    }

    /// `W A s` through the FFT: scatter `s` into the assigned DFT inputs, then
    /// transform.
    pub fn apply(&self, assignment: &Assignment, s: &[C64]) -> Result<Vec<C64>> {
        let mut buf = self.scatter(assignment, s)?;
        self.forward.process(&mut buf);
        buf.iter_mut().for_each(|v| *v *= self.scale);
        Ok(buf)
    }

    /// `W A s` as a dense matrix-vector product. Reference path for [`apply`](Self::apply).
    pub fn apply_dense(&self, assignment: &Assignment, s: &[C64]) -> Result<Vec<C64>> {
        let scattered = self.scatter(assignment, s)?;
        let w = self.matrix();
        Ok((0..self.n)
            .map(|k| {
                scattered
                    .iter()
                    .enumerate()
                    .map(|(n, v)| w[(k, n)] * v)
                    .sum()
            })
            .collect())
    }

    fn scatter(&self, assignment: &Assignment, s: &[C64]) -> Result<Vec<C64>> {
        if assignment.num_rows() != self.n {
            return Err(Error::DimensionMismatch {
                what: "assignment rows vs codebook size",
                expected: self.n,
                got: assignment.num_rows(),
            });
        }
        if s.len() != assignment.num_users() {
            return Err(Error::DimensionMismatch {
                what: "stream vector length vs assigned users",
                expected: assignment.num_users(),
                got: s.len(),
            });
        }
        let mut buf = vec![C64::new(0.0, 0.0); self.n];
        for (&row, &v) in assignment.rows().iter().zip(s) {
            buf[row] = v;
        }
        Ok(buf)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                what: "vector length vs codebook size",
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

/// Rectangular spatial window `Phi`: routes DFT outputs `start..start + k` to
/// the `k` antenna elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    start: usize,
    k: usize,
}

impl Window {
    pub fn new(start: usize, k: usize, n: usize) -> Result<Self> {
        if k == 0 || start + k > n {
            return Err(Error::WindowOutOfRange { start, k, n });
        }
        Ok(Self { start, k })
    }

    /// Window centred in the DFT outputs, `start = floor((n - k) / 2)`.
    pub fn centered(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::WindowOutOfRange { start: 0, k, n });
        }
        Self::new((n - k) / 2, k, n)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// Dense `K x N` selection matrix.
    pub fn selection_matrix(&self, n: usize) -> CMatrix {
        CMatrix::from_fn(self.k, n, |row, col| {
            if col == self.start + row {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// `H~ = Phi^T H`: rows of the `K x M` channel placed at the window positions
/// of an `N x M` matrix, zeros elsewhere.
pub fn effective_channel(h: &CMatrix, window: &Window, codebook: &DftCodebook) -> Result<CMatrix> {
    let n = codebook.size();
    if window.len() != h.nrows() {
        return Err(Error::DimensionMismatch {
            what: "window length vs channel rows",
            expected: window.len(),
            got: h.nrows(),
        });
    }
    if window.start() + window.len() > n {
        return Err(Error::WindowOutOfRange {
            start: window.start(),
            k: window.len(),
            n,
        });
    }
    let mut out = CMatrix::zeros(n, h.ncols());
    out.rows_mut(window.start(), window.len()).copy_from(h);
    Ok(out)
}
