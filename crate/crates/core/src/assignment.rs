//! Beam assignment: weights from the current WMMSE state, an O(N^3) Hungarian
//! solver for the rectangular min-cost problem, and an exhaustive oracle.

use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::metrics::{Assignment, Beamspace, Precoder};
use crate::C64;

/// Largest number of injections [`brute_force_assignment`] will enumerate.
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

/// Assignment weights `rho` (`N x M`: rows are DFT inputs, columns are users).
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rho: DMatrix<f64>,
}

impl CostMatrix {
    pub fn new(rho: DMatrix<f64>) -> Result<Self> {
        if rho.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("cost matrix has non-finite entries".into()));
        }
        if rho.nrows() < rho.ncols() {
            return Err(Error::InvalidArgument(format!(
                "{} users cannot be assigned to {} rows",
                rho.ncols(),
                rho.nrows()
            )));
        }
        Ok(Self { rho })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                what: "cost matrix row length",
                expected: m,
                got: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, m, |r, c| rows[r][c]))
    }

    pub fn num_rows(&self) -> usize {
        self.rho.nrows()
    }

    pub fn num_users(&self) -> usize {
        self.rho.ncols()
    }

    pub fn get(&self, row: usize, user: usize) -> f64 {
        self.rho[(row, user)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rho
    }

    /// `sum_m rho[row_of(m)][m]`, accumulated in user order.
    pub fn total(&self, a: &Assignment) -> f64 {
        a.rows()
            .iter()
            .enumerate()
            .fold(0.0, |acc, (m, &r)| acc + self.rho[(r, m)])
    }
}

/// Reads a headerless numeric CSV (rows = DFT indices, columns = users).
pub fn read_cost_csv(path: impl AsRef<Path>) -> Result<CostMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path.as_ref())?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| Error::Config {
                    path: path.as_ref().to_path_buf(),
                    line: line + 1,
                    msg: format!("bad cost {field:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    CostMatrix::from_rows(&rows)
}

/// Assignment weights for the current precoder and auxiliary variables.
///
/// With `t[n][m] = (W^H h~_m)_n`:
/// `c_n = sum_m omega_m |delta_m|^2 |t[n][m]|^2`, `Psi_n = c_n sum_j u_j u_j^H`,
/// `f_n = Re(sum_m omega_m delta_m conj(t[n][m]) u_m)` and
/// `rho[n][i] = diag(Psi_n)_i - 2 f_n[i]`.
pub fn assignment_weights(
    beamspace: &Beamspace,
    u: &Precoder,
    deltas: &[C64],
    omegas: &[f64],
) -> Result<CostMatrix> {
    let (quad, lin) = weight_terms(beamspace, u, deltas, omegas)?;
    CostMatrix::new(quad.zip_map(&lin, |q, f| q - 2.0 * f.re))
}

/// Assignment weights minimized over a unit phase per DFT input.
///
/// Rotating row `i` of `U` by `e^{j phi}` leaves the quadratic part of
/// `rho[n][i]` unchanged and turns the linear part into `Re(e^{j phi} F)`, so
/// the minimum over `phi` is `diag(Psi_n)_i - 2 |F_n[i]|`. The second matrix
/// holds the minimizing phasors `conj(F) / |F|` (1 where `F = 0`).
pub fn phase_free_weights(
    beamspace: &Beamspace,
    u: &Precoder,
    deltas: &[C64],
    omegas: &[f64],
) -> Result<(CostMatrix, DMatrix<C64>)> {
    let (quad, lin) = weight_terms(beamspace, u, deltas, omegas)?;
    let phasors = lin.map(|f| {
        let r = f.norm();
        if r > 0.0 {
            f.conj() / r
        } else {
            C64::new(1.0, 0.0)
        }
    });
    Ok((CostMatrix::new(quad.zip_map(&lin, |q, f| q - 2.0 * f.norm()))?, phasors))
}

/// `(c_n ||row_i(U)||^2, F_n[i])` with the complex linear term
/// `F_n[i] = sum_m omega_m delta_m conj(t[n][m]) U[i, m]`.
fn weight_terms(
    beamspace: &Beamspace,
    u: &Precoder,
    deltas: &[C64],
    omegas: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<C64>)> {
    let m = beamspace.num_users();
    if u.u.nrows() != m || u.u.ncols() != m {
        return Err(Error::DimensionMismatch {
            what: "precoder size vs users",
            expected: m,
            got: u.u.nrows(),
        });
    }
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
    let t = beamspace.beam_gains();
    let stream_power: Vec<f64> = (0..m)
        .map(|i| u.u.row(i).iter().map(C64::norm_sqr).sum())
        .collect();
    let n = beamspace.num_beams();
    let mut quad = DMatrix::zeros(n, m);
    let mut lin = DMatrix::from_element(n, m, C64::new(0.0, 0.0));
    let mut coeff = vec![C64::new(0.0, 0.0); m];
    for row in 0..n {
        let mut c = 0.0;
        for user in 0..m {
            let tt = t[(row, user)];
            c += omegas[user] * deltas[user].norm_sqr() * tt.norm_sqr();
            coeff[user] = omegas[user] * deltas[user] * tt.conj();
        }
        for stream in 0..m {
            quad[(row, stream)] = c * stream_power[stream];
            lin[(row, stream)] = (0..m).map(|user| coeff[user] * u.u[(stream, user)]).sum();
        }
    }
    Ok((quad, lin))
}

/// Minimum-cost assignment of every user to a distinct row.
///
/// The `N x M` problem is padded to `N x N` with dummy users whose cost is a
/// constant no smaller than the largest entry, then solved by the shortest
/// augmenting path form of the Hungarian method with dual potentials.
pub fn hungarian(cost: &CostMatrix) -> Result<Assignment> {
    let n = cost.num_rows();
    let m = cost.num_users();
    if m > n {
        return Err(Error::InvalidArgument(format!("{m} users exceed {n} rows")));
    }
    if m == 0 {
        return Assignment::new(Vec::new(), n);
    }
    let pad = cost.rho.max().max(0.0);
    // workers are users (plus dummies), jobs are DFT rows; both 1-based
    let at = |worker: usize, job: usize| -> f64 {
        if worker <= m {
            cost.rho[(job - 1, worker - 1)]
        } else {
            pad
        }
    };

    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for worker in 1..=n {
        owner[0] = worker;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = at(i0, j) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_of = vec![usize::MAX; m];
    for (job, &worker) in owner.iter().enumerate().take(n + 1).skip(1) {
        if (1..=m).contains(&worker) {
            row_of[worker - 1] = job - 1;
        }
    }
    debug_assert!(row_of.iter().all(|&r| r != usize::MAX));
    Assignment::new(row_of, n)
}

/// Number of injections of `m` users into `n` rows, `n! / (n - m)!`.
pub fn injection_count(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    ((n - m + 1)..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Exhaustive minimizer. Among equal totals the lexicographically smallest
/// `row_of` wins.
pub fn brute_force_assignment(cost: &CostMatrix) -> Result<Assignment> {
    let n = cost.num_rows();
    let m = cost.num_users();
    let count = injection_count(n, m);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    struct Search<'a> {
        cost: &'a CostMatrix,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn visit(&mut self, partial: f64) {
            let user = self.current.len();
            if user == self.cost.num_users() {
                // rows are tried in ascending order, so only a strict
                // improvement may replace the incumbent
                if self.best.as_ref().is_none_or(|(b, _)| partial < *b) {
                    self.best = Some((partial, self.current.clone()));
                }
                return;
            }
            for row in 0..self.cost.num_rows() {
                if self.used[row] {
                    continue;
                }
                self.used[row] = true;
                self.current.push(row);
                self.visit(partial + self.cost.get(row, user));
                self.current.pop();
                self.used[row] = false;
            }
        }
    }

    let mut search = Search {
        cost,
        used: vec![false; n],
        current: Vec::with_capacity(m),
        best: None,
    };
    search.visit(0.0);
    let (_, rows) = search.best.unwrap_or((0.0, Vec::new()));
    Assignment::new(rows, n)
}
