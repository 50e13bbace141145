//! The verification suite run by `pdmqes verify`: exact identities, wavefunction
//! structure, Hamiltonian residuals and the numerical oracle.

use pdmqes::catalog::FamilyInstance;
use pdmqes::oracle::{transform, verify_instance, OracleConfig, OracleReport, Tolerance};
use pdmqes::parallel::Execution;
use pdmqes::scalar::Scalar;
use pdmqes::susy::{
    boundary_decay, generating_pair_from_wplus, hamiltonian_residual, partner_v2, riccati_v1,
    WavefunctionForm,
};
use pdmqes::symbolic::LaurentPoly;
use serde::Serialize;

use crate::figures;
use crate::format::{round12, sig12};
use crate::spec::InstanceSpec;
use crate::SCHEMA_VERSION;

/// Oracle energies must agree with the closed forms to `1e-5 max(1, |E|)`.
/// Levels in the thousands carry discretization errors far above 1e-5.
pub const ENERGY_TOL: Tolerance = Tolerance { abs: 1e-5, rel: 1e-5 };
/// Absolute agreement needed for an E0 candidate to count as matched.
pub const E0_MATCH_TOL: f64 = 1e-5;
/// Residual allowed per unit of `|V| + |E| + 1`.
pub const RESIDUAL_TOL: f64 = 1e-5;
const RESIDUAL_PROBES: usize = 41;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name, passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub source: String,
    pub value: Scalar,
    pub difference: f64,
    pub matches: bool,
}

/// The oracle's ground energy set against every value it could be claimed to be.
#[derive(Clone, Debug, Serialize)]
pub struct E0Arbitration {
    pub oracle_e0: f64,
    pub candidates: Vec<Candidate>,
    /// Sources of the candidates within [`E0_MATCH_TOL`] of the oracle.
    pub matched: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub instance: InstanceSpec,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e0_arbitration: Option<E0Arbitration>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub oracle_n: usize,
    pub instances: Vec<InstanceReport>,
    pub passed: bool,
}

/// Exact zero for rational coefficients; `1e-12` relative to `scale` when
/// an irrational `Delta` forced floating point.
fn vanishes(p: &LaurentPoly, scale: f64) -> bool {
    if p.is_exact() {
        p.is_zero()
    } else {
        p.is_zero_within(1e-12 * scale.max(1.0))
    }
}

fn residual_poly_detail(p: &LaurentPoly) -> String {
    if p.is_zero() {
        "zero".into()
    } else {
        format!("largest leftover coefficient {}", sig12(p.max_abs_coeff()))
    }
}

pub fn ring_identity(inst: &FamilyInstance) -> Check {
    let base = inst.f.base();
    let r = riccati_v1(&inst.w, &inst.f) + LaurentPoly::constant(inst.e0.clone(), base) - &inst.v;
    Check::new("ring_identity", vanishes(&r, inst.v.max_abs_coeff()), residual_poly_detail(&r))
}

pub fn dsi_identity(inst: &FamilyInstance) -> Check {
    let base = inst.f.base();
    let r = partner_v2(&inst.w, &inst.f)
        - riccati_v1(&inst.wprime, &inst.f)
        - LaurentPoly::constant(inst.gap(), base);
    Check::new("dsi_identity", vanishes(&r, inst.v.max_abs_coeff()), residual_poly_detail(&r))
}

pub fn generating_round_trip(inst: &FamilyInstance) -> Check {
    let gp = match generating_pair_from_wplus(&inst.wplus, &inst.f) {
        Ok(gp) => gp,
        Err(e) => return Check::new("generating_round_trip", false, e.to_string()),
    };
    let gap = inst.gap();
    let d = &gp.wminus - &inst.wminus;
    let gap_ok = if gap.is_exact() && gp.gap.is_exact() { gp.gap == gap } else { gp.gap.approx_eq(&gap, 1e-12) };
    let ok = vanishes(&d, inst.wminus.max_abs_coeff()) && gap_ok;
    Check::new("generating_round_trip", ok, format!("gap {} (E1 - E0 = {})", gp.gap, gap))
}

/// Points spread evenly in `u = int dx/f` over the region where the two
/// states live, mapped back to `x`.
fn well_grid(inst: &FamilyInstance, count: usize) -> Result<Vec<f64>, String> {
    let tp = transform(&inst.v, &inst.f).map_err(|e| e.to_string())?.sized_for(inst.e1.to_f64() + 1.0);
    let h = tp.width() / (count + 1) as f64;
    Ok((1..=count).map(|i| tp.x_of_u(tp.lower + i as f64 * h)).collect())
}

pub fn nodes(inst: &FamilyInstance) -> Check {
    match well_grid(inst, 2001) {
        Ok(xs) => {
            let (n0, n1) = (inst.psi0.sign_changes(&xs), inst.psi1.sign_changes(&xs));
            Check::new("nodes", n0 == 0 && n1 == 1, format!("psi0 {n0}, psi1 {n1}"))
        }
        Err(e) => Check::new("nodes", false, e),
    }
}

pub fn boundary_decay_check(inst: &FamilyInstance) -> Check {
    let mut bad = Vec::new();
    for (name, psi) in [("psi0", &inst.psi0), ("psi1", &inst.psi1)] {
        let (lo, hi) = boundary_decay(psi);
        for (end, d) in [("lower", lo), ("upper", hi)] {
            if !d.decays {
                bad.push(format!("{name} at {end} end"));
            }
        }
    }
    let detail = if bad.is_empty() { "|psi|^2 f decays at both ends".to_string() } else { bad.join(", ") };
    Check::new("boundary_decay", bad.is_empty(), detail)
}

/// `|H psi - E psi| / |psi|` at probes across the well, scaled by
/// `|V| + |E| + 1`. The probes next to the node of `psi1` are skipped, since
/// the relative residual is meaningless there.
pub fn residual(inst: &FamilyInstance, exec: Execution) -> Check {
    let xs = match well_grid(inst, RESIDUAL_PROBES) {
        Ok(xs) => xs,
        Err(e) => return Check::new("hamiltonian_residual", false, e),
    };
    let mut worst = 0.0f64;
    for (psi, e, skip_node) in [(&inst.psi0, &inst.e0, false), (&inst.psi1, &inst.e1, true)] {
        let probes = if skip_node { away_from_node(psi, &xs) } else { xs.clone() };
        let e = e.to_f64();
        match hamiltonian_residual(psi, &inst.v, e, &probes, exec) {
            Ok(r) => {
                for (x, r) in probes.iter().zip(r) {
                    let scaled = r / (inst.v.eval(*x).abs() + e.abs() + 1.0);
                    worst = if scaled.is_nan() { f64::NAN } else { worst.max(scaled) };
                }
            }
            Err(err) => return Check::new("hamiltonian_residual", false, err.to_string()),
        }
    }
    Check::new("hamiltonian_residual", worst <= RESIDUAL_TOL, format!("worst scaled residual {}", sig12(worst)))
}

/// Drops the probes on either side of each sign change.
fn away_from_node(psi: &WavefunctionForm, xs: &[f64]) -> Vec<f64> {
    let signs: Vec<i8> = xs.iter().map(|&x| psi.log_eval(x).sign).collect();
    (0..xs.len())
        .filter(|&i| {
            let differs = |j: usize| signs.get(j).is_some_and(|&s| s != signs[i]);
            signs[i] != 0 && !differs(i + 1) && !(i > 0 && differs(i - 1))
        })
        .map(|i| xs[i])
        .collect()
}

pub fn arbitrate_e0(inst: &FamilyInstance, oracle_e0: f64) -> E0Arbitration {
    let mut candidates = vec![("closed form".to_string(), inst.e0.clone())];
    if let Some(fig) = figures::matching(&inst.params) {
        candidates.push((format!("Fig. {} caption", fig.figures.0), fig.caption_e0));
    }
    let candidates: Vec<Candidate> = candidates
        .into_iter()
        .map(|(source, value)| {
            let difference = (oracle_e0 - value.to_f64()).abs();
            Candidate { source, value, difference, matches: difference < E0_MATCH_TOL }
        })
        .collect();
    let matched = candidates.iter().filter(|c| c.matches).map(|c| c.source.clone()).collect();
    E0Arbitration { oracle_e0, candidates, matched }
}

pub struct SuiteOptions {
    pub oracle: OracleConfig,
    pub report_e0: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { oracle: OracleConfig::default(), report_e0: false }
    }
}

pub fn verify_one(spec: &InstanceSpec, inst: &FamilyInstance, opts: &SuiteOptions) -> InstanceReport {
    let mut checks = vec![
        ring_identity(inst),
        dsi_identity(inst),
        generating_round_trip(inst),
        nodes(inst),
        boundary_decay_check(inst),
        residual(inst, opts.oracle.exec),
    ];
    let mut oracle = None;
    let mut e0_arbitration = None;
    match verify_instance(inst, ENERGY_TOL, &opts.oracle) {
        Ok(r) => {
            let failures = r.failures();
            let detail = if failures.is_empty() {
                r.levels
                    .iter()
                    .map(|l| format!("E{} {} (error {})", l.level, sig12(l.numeric), sig12(l.error)))
                    .collect::<Vec<_>>()
                    .join(", ")
            } else {
                failures.join("; ")
            };
            let detail = format!("N={}: {detail}", r.n);
            checks.push(Check::new("oracle", r.passed, detail));
            if opts.report_e0 {
                e0_arbitration = Some(arbitrate_e0(inst, r.levels[0].numeric));
            }
            oracle = Some(r);
        }
        Err(e) => checks.push(Check::new("oracle", false, e.to_string())),
    }
    let passed = checks.iter().all(|c| c.passed);
    InstanceReport { instance: spec.clone(), checks, oracle, e0_arbitration, passed }
}

pub fn verify_all(items: &[(InstanceSpec, FamilyInstance)], opts: &SuiteOptions) -> VerifyReport {
    let instances: Vec<InstanceReport> = items.iter().map(|(s, i)| verify_one(s, i, opts)).collect();
    let passed = instances.iter().all(|r| r.passed);
    VerifyReport { schema_version: SCHEMA_VERSION, oracle_n: opts.oracle.n, instances, passed }
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.instances {
            out.push_str(&r.instance.label());
            out.push('\n');
            for c in &r.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("  {tag} {:<22} {}\n", c.name, c.detail));
            }
            if let Some(a) = &r.e0_arbitration {
                out.push_str(&format!("  oracle E0 = {}\n", sig12(a.oracle_e0)));
                for c in &a.candidates {
                    let m = if c.matches { "match" } else { "no match" };
                    out.push_str(&format!(
                        "    {:<18} {:>8} = {:<16} |diff| {:<16} {m}\n",
                        c.source,
                        c.value.to_string(),
                        sig12(c.value.to_f64()),
                        sig12(c.difference)
                    ));
                }
                if a.matched.is_empty() {
                    out.push_str("  E0 agrees with no candidate\n");
                } else {
                    out.push_str(&format!("  E0 agrees with the {}\n", a.matched.join(" and the ")));
                }
            }
        }
        let failed = self.instances.iter().flat_map(|r| &r.checks).filter(|c| !c.passed).count();
        if failed == 0 {
            out.push_str(&format!("all checks passed ({} instances)\n", self.instances.len()));
        } else {
            out.push_str(&format!("{failed} checks failed\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut v);
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round12(x)) {
                    *n = r;
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_floats),
        serde_json::Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}
