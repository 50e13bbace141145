use serde::Serialize;

use super::{solve, transform, OracleConfig, OracleError, SpectrumResult};
use crate::catalog::FamilyInstance;
use crate::susy::WavefunctionForm;
use crate::symbolic::{DeformingFunction, LaurentPoly};

pub const OVERLAP_MIN: f64 = 0.999999;

/// Energy agreement required of a level: `max(abs, rel |E|)`. A bare `f64`
/// is an absolute tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn at(&self, energy: f64) -> f64 {
        self.abs.max(self.rel * energy.abs())
    }
}

impl From<f64> for Tolerance {
    fn from(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }
}

/// A claimed eigenpair: the level index, its energy and closed-form state.
#[derive(Clone, Debug)]
pub struct StateClaim<'a> {
    pub level: usize,
    pub energy: f64,
    pub psi: &'a WavefunctionForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub error: f64,
    pub error_bound: f64,
    pub tolerance: f64,
    pub overlap: f64,
    pub numeric_nodes: usize,
    pub analytic_nodes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    /// Coarse mesh the levels were computed on.
    pub n: usize,
    pub energy_tol: Tolerance,
    pub overlap_min: f64,
    pub levels: Vec<LevelCheck>,
    pub truncation_shift: Option<f64>,
    pub passed: bool,
}

impl OracleReport {
    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.levels {
            if !(l.error < l.tolerance) {
                out.push(format!(
                    "E{}: analytic {} vs numeric {} (error {:.3e})",
                    l.level, l.analytic, l.numeric, l.error
                ));
            }
            if !(l.overlap > self.overlap_min) {
                out.push(format!("psi{}: overlap {:.9}", l.level, l.overlap));
            }
            if l.numeric_nodes != l.level || l.analytic_nodes != l.level {
                out.push(format!(
                    "psi{}: {} analytic / {} numeric nodes",
                    l.level, l.analytic_nodes, l.numeric_nodes
                ));
            }
        }
        out
    }
}

/// Solves the instance numerically and compares the two lowest levels with
/// the closed-form `E0, E1, psi0, psi1`.
pub fn verify_instance(
    inst: &FamilyInstance,
    energy_tol: impl Into<Tolerance>,
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    let claims = [
        StateClaim { level: 0, energy: inst.e0.to_f64(), psi: &inst.psi0 },
        StateClaim { level: 1, energy: inst.e1.to_f64(), psi: &inst.psi1 },
    ];
    verify_states(&inst.v, &inst.f, &claims, energy_tol, cfg)
}

pub fn verify_states(
    v: &LaurentPoly,
    f: &DeformingFunction,
    claims: &[StateClaim<'_>],
    energy_tol: impl Into<Tolerance>,
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    let energy_tol = energy_tol.into();
    let k = claims.iter().map(|c| c.level + 1).max().unwrap_or(1);
    let spec = solve(&transform(v, f)?, k, cfg)?;
    let xs = node_probe_grid(&spec);
    let levels: Vec<LevelCheck> = claims
        .iter()
        .map(|c| {
            let numeric = spec.richardson_estimate[c.level];
            LevelCheck {
                level: c.level,
                analytic: c.energy,
                numeric,
                error: (numeric - c.energy).abs(),
                error_bound: spec.error_bound[c.level],
                tolerance: energy_tol.at(c.energy),
                overlap: overlap(&spec, c.level, c.psi),
                numeric_nodes: spec.node_counts[c.level],
                analytic_nodes: c.psi.sign_changes(&xs),
            }
        })
        .collect();
    let mut report = OracleReport {
        n: cfg.n,
        energy_tol,
        overlap_min: OVERLAP_MIN,
        levels,
        truncation_shift: spec.truncation_shift,
        passed: false,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

/// 2001 points spread evenly in `u` over the solved box, mapped back to `x`.
fn node_probe_grid(spec: &SpectrumResult) -> Vec<f64> {
    let tp = &spec.problem;
    let h = tp.width() / 2002.0;
    (1..=2001).map(|i| tp.x_of_u(tp.lower + i as f64 * h)).collect()
}

/// `|<chi_a, chi_n>| / (|chi_a| |chi_n|)` on the fine grid, with the
/// analytic `chi_a = sqrt(f) psi` built in log space to avoid overflow.
fn overlap(spec: &SpectrumResult, level: usize, psi: &WavefunctionForm) -> f64 {
    let map = spec.problem.map;
    let logs: Vec<(f64, i8)> = spec
        .u_grid
        .iter()
        .map(|&u| {
            let lv = psi.log_eval(map.x_of_u(u));
            (lv.ln_abs + 0.5 * map.f_at_u(u).ln(), lv.sign)
        })
        .collect();
    let top = logs.iter().map(|l| l.0).filter(|l| l.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let a: Vec<f64> = logs
        .iter()
        .map(|&(l, s)| if l.is_finite() { s as f64 * (l - top).exp() } else { 0.0 })
        .collect();
    let v = &spec.eigenvectors[level];
    let dot: f64 = a.iter().zip(v).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nv)).abs()
}
