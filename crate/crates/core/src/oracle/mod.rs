//! Independent finite-difference check of the closed forms. With `chi =
//! sqrt(f) psi` and `du = dx / f` the deformed operator becomes `-d^2/du^2 +
//! V(x(u))`; the lowest levels of its second-difference discretization are
//! found by Sturm bisection at two mesh sizes and Richardson-extrapolated.

mod transform;
mod tridiag;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::parallel::{self, Execution};

pub use transform::{transform, CoordinateMap, EndKind, TransformedProblem, TruncationRule};
pub use tridiag::{count_nodes, Tridiagonal};
pub use verify::{verify_instance, verify_states, LevelCheck, OracleReport, StateClaim, Tolerance, OVERLAP_MIN};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unsupported deformation: {0}")]
    UnsupportedDeformation(String),
    #[error("level {level} moved by {shift:e} when the truncation box was enlarged")]
    TruncationInsufficient { level: usize, shift: f64 },
    #[error("the number of levels below {threshold} changes with the mesh or box")]
    UnstableCount { threshold: f64 },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OracleConfig {
    /// Mesh intervals of the coarse grid; the fine grid uses twice as many.
    pub n: usize,
    /// Largest eigenvalue shift tolerated when the truncated box grows by half.
    pub truncation_tol: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n: 4000, truncation_tol: 1e-7, exec: Execution::default() }
    }
}

impl OracleConfig {
    pub fn with_n(n: usize) -> Self {
        Self { n, ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    /// Lowest levels on the fine grid, ascending.
    pub eigenvalues: Vec<f64>,
    /// The same levels on the coarse grid.
    pub coarse_eigenvalues: Vec<f64>,
    pub richardson_estimate: Vec<f64>,
    pub error_bound: Vec<f64>,
    pub node_counts: Vec<usize>,
    /// Fine-grid eigenvectors normalized to `sum chi^2 h = 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Interior `u` points of the fine grid.
    pub u_grid: Vec<f64>,
    pub n: usize,
    pub problem: TransformedProblem,
    /// Largest level shift seen when enlarging the box; `None` if nothing was cut.
    pub truncation_shift: Option<f64>,
}

impl SpectrumResult {
    pub fn h(&self) -> f64 {
        self.problem.width() / (2 * self.n) as f64
    }

    /// Eigenvector `level` as `(x, psi)` pairs with `psi = chi / sqrt(f)`.
    pub fn wavefunction_on_x(&self, level: usize) -> Vec<(f64, f64)> {
        let map = self.problem.map;
        self.u_grid
            .iter()
            .zip(&self.eigenvectors[level])
            .map(|(&u, &chi)| (map.x_of_u(u), chi / map.f_at_u(u).sqrt()))
            .collect()
    }
}

fn matrix(tp: &TransformedProblem, n: usize, exec: Execution) -> Tridiagonal {
    let h = tp.width() / n as f64;
    let grid = tp.grid(n);
    let inv_h2 = 1.0 / (h * h);
    let diag = parallel::map(&grid, exec, |&u| 2.0 * inv_h2 + tp.potential(u));
    Tridiagonal { diag, off: -inv_h2 }
}

fn lowest(t: &Tridiagonal, k: usize, exec: Execution) -> Vec<f64> {
    let levels: Vec<usize> = (0..k).collect();
    parallel::map(&levels, exec, |&j| t.eigenvalue(j))
}

/// Lowest `k` eigenvalues on an `n`-interval mesh of the current box.
pub fn eigenvalues_at(tp: &TransformedProblem, n: usize, k: usize, exec: Execution) -> Vec<f64> {
    lowest(&matrix(tp, n, exec), k, exec)
}

fn check_request(n: usize, k: usize) -> Result<(), OracleError> {
    if n < 200 {
        return Err(OracleError::InvalidRequest(format!("N must be ≥ 200, got {n}")));
    }
    if k == 0 || k > 10 {
        return Err(OracleError::InvalidRequest(format!("k must be in 1..=10, got {k}")));
    }
    Ok(())
}

/// Resizes the box until it covers the `k`-th level with margin, using a
/// coarse mesh to estimate that level.
fn fit_box(tp: &TransformedProblem, k: usize, exec: Execution) -> TransformedProblem {
    let (_, vmin) = tp.well();
    let mut tp = tp.clone();
    for _ in 0..6 {
        let top = eigenvalues_at(&tp, 1000, k, exec)[k - 1];
        let mut e_ref = top + (0.25 * (top - vmin)).max(1.0);
        // stay below a continuum threshold so the tail still gets cut
        if let Some(ceiling) = tp.far_potential().filter(|&c| c > top) {
            e_ref = e_ref.min(0.5 * (top + ceiling));
        }
        let settled = (e_ref - tp.e_ref).abs() <= 0.05 * e_ref.abs().max(1.0);
        if settled && e_ref <= tp.e_ref {
            break;
        }
        tp = tp.sized_for(e_ref.max(tp.e_ref));
        if settled {
            break;
        }
    }
    tp
}

/// Lowest `k` eigenpairs of the transformed problem.
pub fn solve(tp: &TransformedProblem, k: usize, cfg: &OracleConfig) -> Result<SpectrumResult, OracleError> {
    let n = cfg.n;
    check_request(n, k)?;
    let exec = cfg.exec;
    let tp = fit_box(tp, k, exec);

    let ((coarse, (fine, vectors)), shift) = parallel::join(
        exec,
        || {
            parallel::join(
                exec,
                || eigenvalues_at(&tp, n, k, exec),
                || {
                    let t = matrix(&tp, 2 * n, exec);
                    let values = lowest(&t, k, exec);
                    let vectors = parallel::map(&values, exec, |&e| t.eigenvector(e));
                    (values, vectors)
                },
            )
        },
        || truncation_shift(&tp, n, k, exec),
    );

    let shift = match shift {
        Some((level, s)) if s > cfg.truncation_tol * coarse[level].abs().max(1.0) => {
            return Err(OracleError::TruncationInsufficient { level, shift: s })
        }
        Some((_, s)) => Some(s),
        None => None,
    };

    let h = tp.width() / (2 * n) as f64;
    let eigenvectors: Vec<Vec<f64>> = vectors.into_iter().map(|v| gauge(v, h)).collect();
    let node_counts = eigenvectors.iter().map(|v| count_nodes(v)).collect();
    let richardson_estimate = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    let error_bound = coarse.iter().zip(&fine).map(|(c, f)| (c - f).abs()).collect();
    Ok(SpectrumResult {
        eigenvalues: fine,
        coarse_eigenvalues: coarse,
        richardson_estimate,
        error_bound,
        node_counts,
        eigenvectors,
        u_grid: tp.grid(2 * n),
        n,
        problem: tp,
        truncation_shift: shift,
    })
}

/// Largest coarse-grid level shift (and its index) when the box grows by
/// half its width at the same mesh spacing.
fn truncation_shift(tp: &TransformedProblem, n: usize, k: usize, exec: Execution) -> Option<(usize, f64)> {
    if !tp.is_truncated() {
        return None;
    }
    let h = tp.width() / n as f64;
    let big = tp.enlarged(h * (n / 2) as f64);
    let n_big = (big.width() / h).round() as usize;
    let base = eigenvalues_at(tp, n, k, exec);
    let grown = eigenvalues_at(&big, n_big, k, exec);
    base.iter()
        .zip(&grown)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

/// Normalizes to `sum v^2 h = 1` and makes the first sizeable entry positive.
fn gauge(mut v: Vec<f64>, h: f64) -> Vec<f64> {
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let first = v.iter().find(|x| x.abs() > 1e-3 * max).copied().unwrap_or(1.0);
    let s = first.signum() / norm;
    v.iter_mut().for_each(|x| *x *= s);
    v
}

/// Number of levels strictly below `threshold`, counted on a box sized for
/// that energy. The count must agree between two meshes and after enlarging
/// the box.
pub fn count_below(tp: &TransformedProblem, threshold: f64, cfg: &OracleConfig) -> Result<usize, OracleError> {
    let tp = tp.sized_for(threshold);
    let n = cfg.n.max((tp.width() / 0.01) as usize).min(2_000_000);
    let t = matrix(&tp, n, cfg.exec);
    let count = t.count_below(threshold);
    let fine = matrix(&tp, 2 * n, cfg.exec).count_below(threshold);
    let h = tp.width() / n as f64;
    let big = tp.enlarged(h * (n / 2) as f64);
    let grown = matrix(&big, (big.width() / h).round() as usize, cfg.exec).count_below(threshold);
    if fine != count || grown != count {
        return Err(OracleError::UnstableCount { threshold });
    }
    Ok(count)
}
