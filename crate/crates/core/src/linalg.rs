//! Small dense helpers on top of nalgebra.

use nalgebra::Cholesky;

use crate::{CMatrix, C64};

/// Solves `a x = b` for Hermitian positive-definite `a`. `None` when the
/// factorization breaks down.
pub(crate) fn hpd_solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    Cholesky::new(a.clone()).map(|c| c.solve(b))
}

/// 2-norm condition number from the singular values.
pub(crate) fn condition_number(a: &CMatrix) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `Trace(U^H U)`.
pub(crate) fn power(u: &CMatrix) -> f64 {
    u.iter().map(C64::norm_sqr).sum()
}

pub(crate) fn shift_diagonal(a: &CMatrix, beta: f64) -> CMatrix {
    let mut out = a.clone();
    for i in 0..out.nrows().min(out.ncols()) {
        out[(i, i)] += beta;
    }
    out
}
