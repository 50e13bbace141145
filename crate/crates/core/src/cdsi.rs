//! Conditional shape invariance by coefficient matching: fit a polynomial
//! superpotential to a potential, carry the fit through one partner step, and
//! pin the potential parameters on which both steps are consistent.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::catalog::{Family, FamilyInstance};
use crate::scalar::{Scalar, APPROX_REL_TOL};
use crate::susy::{partner_v2, riccati_v1, SusyError};
use crate::symbolic::{BaseKind, DeformingFunction, LaurentPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CdsiError {
    #[error("leading coefficient of degree {0} admits no real superpotential coefficient")]
    NegativeLeadingCoefficient(i32),
    #[error("equation of degree {0} has no real root")]
    NoRealRoot(i32),
    #[error("ansatz underdetermined: {0}")]
    Underdetermined(String),
    #[error("compatibility conditions have no real solution")]
    NoRealSolution,
    #[error(transparent)]
    Susy(#[from] SusyError),
}

/// An equation `V_j = (W^2 - f W_x)_j + E0 delta_{j0}` left unsatisfied by
/// the fit; `residual` is `V_j` minus the right-hand side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub degree: i32,
    pub residual: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnsatzFit {
    pub degrees: Vec<i32>,
    #[serde(rename = "W")]
    pub w: LaurentPoly,
    #[serde(rename = "E0")]
    pub e0: Scalar,
    pub constraints: Vec<Constraint>,
    /// Degrees of `W` fixed by an extremal equation (the top coupling and
    /// the singular end), as opposed to the ones carried by interior
    /// equations.
    pub anchors: Vec<i32>,
    #[serde(rename = "V")]
    pub v: LaurentPoly,
    #[serde(skip)]
    pub f: DeformingFunction,
}

impl AnsatzFit {
    /// Whether every constraint vanishes (exactly, or to `tol` relative to
    /// the potential's coefficients).
    pub fn constraints_satisfied(&self, tol: f64) -> bool {
        let scale = self.v.max_abs_coeff().max(1.0);
        self.constraints.iter().all(|c| {
            if c.residual.is_exact() {
                c.residual.is_zero()
            } else {
                c.residual.to_f64().abs() <= tol * scale
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilitySolution {
    pub pinned_params: BTreeMap<String, Scalar>,
    pub lambda_pair: (Scalar, Scalar),
    pub energies: (Scalar, Scalar),
    #[serde(rename = "W")]
    pub w: LaurentPoly,
    #[serde(rename = "Wprime")]
    pub wprime: LaurentPoly,
    #[serde(rename = "V")]
    pub v: LaurentPoly,
    /// Further real solutions reached from other starting points, as
    /// parameter maps. Empty when the solution appears unique.
    pub extra_branches: Vec<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub name: String,
    pub catalog: f64,
    pub cdsi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub compared: Vec<String>,
    pub mismatches: Vec<Mismatch>,
}

impl CrosscheckReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Superpotential exponents of each family's ansatz at extension index `m`.
pub fn ansatz_degrees(family: Family, m: u32) -> Vec<i32> {
    let m = m as i32;
    match family {
        Family::Ho => (0..=m).map(|k| 2 * k + 1).collect(),
        Family::Rho => std::iter::once(-1).chain((0..=m).map(|k| 2 * k + 1)).collect(),
        Family::Kc => (-1..=m).collect(),
        Family::Morse => (-m..=1).collect(),
    }
}

/// Name of the potential coefficient multiplying `t^j`: `B{j}` in the
/// identity base and `B{-j}` (the power of `e^x`) in the exponential base.
pub fn param_name(j: i32, kind: BaseKind) -> String {
    match kind {
        BaseKind::Identity => format!("B{j}"),
        BaseKind::ExpNeg => format!("B{}", -j),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Unknown {
    Coeff(i32),
    Energy,
}

struct System<'a> {
    v: &'a LaurentPoly,
    f: &'a DeformingFunction,
    degrees: Vec<i32>,
    equations: BTreeMap<i32, BTreeSet<Unknown>>,
}

impl<'a> System<'a> {
    fn new(v: &'a LaurentPoly, f: &'a DeformingFunction, degrees: &[i32]) -> Self {
        let kind = v.base().kind();
        let mut equations: BTreeMap<i32, BTreeSet<Unknown>> = BTreeMap::new();
        for &d in degrees {
            for &e in degrees {
                equations.entry(d + e).or_default().insert(Unknown::Coeff(d));
            }
            if d != 0 {
                let dd = match kind {
                    BaseKind::Identity => d - 1,
                    BaseKind::ExpNeg => d,
                };
                for i in f.poly().exponents() {
                    equations.entry(i + dd).or_default().insert(Unknown::Coeff(d));
                }
            }
        }
        equations.entry(0).or_default().insert(Unknown::Energy);
        for j in v.exponents() {
            equations.entry(j).or_default();
        }
        let mut degrees = degrees.to_vec();
        degrees.sort_unstable();
        degrees.dedup();
        Self { v, f, degrees, equations }
    }

    fn w_of(&self, vals: &BTreeMap<Unknown, Scalar>) -> LaurentPoly {
        let mut w = LaurentPoly::zero(self.v.base());
        for &d in &self.degrees {
            if let Some(c) = vals.get(&Unknown::Coeff(d)) {
                w.add_term(d, c.clone());
            }
        }
        w
    }

    /// `(W^2 - f W_x)_j + E0 delta_{j0} - V_j`.
    fn residual(&self, j: i32, vals: &BTreeMap<Unknown, Scalar>) -> Scalar {
        let mut r = riccati_v1(&self.w_of(vals), self.f).coeff(j) - self.v.coeff(j);
        if j == 0 {
            if let Some(e) = vals.get(&Unknown::Energy) {
                r = r + e;
            }
        }
        r
    }

    fn pending(&self, j: i32, vals: &BTreeMap<Unknown, Scalar>) -> Vec<Unknown> {
        self.equations[&j].iter().filter(|u| !vals.contains_key(u)).copied().collect()
    }

    /// Solves equation `j` for `u`, which must be its only undetermined
    /// unknown. `None` when `u` drops out numerically.
    fn solve_one(
        &self,
        j: i32,
        u: Unknown,
        vals: &BTreeMap<Unknown, Scalar>,
        anchor: bool,
    ) -> Result<Option<Scalar>, CdsiError> {
        let at = |w: i64| {
            let mut trial = vals.clone();
            trial.insert(u, Scalar::int(w));
            self.residual(j, &trial)
        };
        let (rm, r0, rp) = (at(-1), at(0), at(1));
        let half = Scalar::ratio(1, 2);
        let a = (&rp + &rm) * &half - &r0;
        let b = (&rp - &rm) * &half;
        let c = r0;
        let negligible = |x: &Scalar, scale: f64| {
            if x.is_exact() {
                x.is_zero()
            } else {
                x.to_f64().abs() <= APPROX_REL_TOL * scale
            }
        };
        let scale = a.to_f64().abs().max(b.to_f64().abs()).max(c.to_f64().abs()).max(1.0);
        if negligible(&a, scale) {
            if negligible(&b, scale) {
                return Ok(None);
            }
            return Ok(Some(-(c / b)));
        }
        let disc = &b * &b - Scalar::int(4) * &a * &c;
        let disc = if !disc.is_exact() && disc.is_negative() && disc.to_f64().abs() <= 1e-12 * scale * scale {
            Scalar::zero()
        } else {
            disc
        };
        let Some(root) = disc.sqrt() else {
            return Err(if anchor {
                CdsiError::NegativeLeadingCoefficient(j)
            } else {
                CdsiError::NoRealRoot(j)
            });
        };
        let two_a = Scalar::int(2) * &a;
        let r1 = (-&b + &root) / &two_a;
        let r2 = (-&b - &root) / &two_a;
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        // the root that makes psi_0 = exp(-int W/f) decay fastest where t^d dominates
        let prefer = match u {
            Unknown::Coeff(d) => {
                let s = match self.v.base().kind() {
                    BaseKind::Identity => 1,
                    BaseKind::ExpNeg => -1,
                };
                s * d.signum()
            }
            Unknown::Energy => 1,
        };
        Ok(Some(if prefer >= 0 { hi } else { lo }))
    }
}

/// Fits `W = sum_{d in degrees} c_d t^d` and `E0` to `V = W^2 - f W_x + E0`.
///
/// Coefficients on the side opposite the top coupling (negative powers for
/// the identity base, positive powers of `t = e^{-x}`) are fixed first from
/// the extremal equation at that end; the rest follow from the top downward.
/// Quadratic equations take the root for which the ground state decays.
/// Equations left over once every unknown is known are returned as
/// constraints.
pub fn fit_ansatz(v: &LaurentPoly, f: &DeformingFunction, degrees: &[i32]) -> Result<AnsatzFit, CdsiError> {
    let sys = System::new(v, f, degrees);
    let s = match v.base().kind() {
        BaseKind::Identity => 1,
        BaseKind::ExpNeg => -1,
    };
    let eq_order: Vec<i32> = {
        let mut js: Vec<i32> = sys.equations.keys().copied().collect();
        js.sort_by_key(|&j| s * j);
        js
    };
    let mut vals: BTreeMap<Unknown, Scalar> = BTreeMap::new();
    let mut used: BTreeSet<i32> = BTreeSet::new();
    let mut anchors = Vec::new();

    // singular end, moving inward
    'outer: loop {
        for &j in &eq_order {
            if used.contains(&j) {
                continue;
            }
            let pending = sys.pending(j, &vals);
            if let [u @ Unknown::Coeff(d)] = pending[..] {
                if s * d < 0 {
                    if let Some(x) = sys.solve_one(j, u, &vals, true)? {
                        vals.insert(u, x);
                        used.insert(j);
                        anchors.push(d);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    // top coupling, moving downward
    let mut first = true;
    'outer2: loop {
        for &j in eq_order.iter().rev() {
            if used.contains(&j) {
                continue;
            }
            if let [u] = sys.pending(j, &vals)[..] {
                if let Some(x) = sys.solve_one(j, u, &vals, first)? {
                    if first {
                        if let Unknown::Coeff(d) = u {
                            anchors.push(d);
                        }
                        first = false;
                    }
                    vals.insert(u, x);
                    used.insert(j);
                    continue 'outer2;
                }
            }
        }
        break;
    }

    let missing: Vec<String> = sys
        .degrees
        .iter()
        .map(|&d| Unknown::Coeff(d))
        .chain(std::iter::once(Unknown::Energy))
        .filter(|u| !vals.contains_key(u))
        .map(|u| format!("{u:?}"))
        .collect();
    if !missing.is_empty() {
        return Err(CdsiError::Underdetermined(missing.join(", ")));
    }

    let constraints = eq_order
        .iter()
        .rev()
        .filter(|j| !used.contains(j))
        .map(|&j| Constraint { degree: j, residual: -sys.residual(j, &vals) })
        .collect();
    anchors.sort_unstable();

    Ok(AnsatzFit {
        degrees: sys.degrees.clone(),
        w: sys.w_of(&vals),
        e0: vals.remove(&Unknown::Energy).expect("energy solved"),
        constraints,
        anchors,
        v: v.clone(),
        f: f.clone(),
    })
}

/// Second step of the hierarchy: refits the same ansatz to the partner
/// `V2 + E0 = W^2 + f W_x + E0`, whose fitted energy is `E1`.
pub fn partner_shift(fit: &AnsatzFit, f: &DeformingFunction) -> Result<AnsatzFit, CdsiError> {
    let v2 = partner_v2(&fit.w, f) + LaurentPoly::constant(fit.e0.clone(), fit.w.base());
    fit_ansatz(&v2, f, &fit.degrees)
}

/// Central-difference weights exact for polynomials up to degree 8.
const STENCIL: [(i64, i64, i64); 8] = [
    (-4, 1, 280),
    (-3, -4, 105),
    (-2, 1, 5),
    (-1, -4, 5),
    (1, 4, 5),
    (2, -1, 5),
    (3, 4, 105),
    (4, -1, 280),
];

struct Compat<'a> {
    first: &'a AnsatzFit,
    free: Vec<i32>,
}

impl Compat<'_> {
    fn w_of(&self, x: &[Scalar]) -> LaurentPoly {
        let mut w = LaurentPoly::zero(self.first.w.base());
        for &d in &self.first.anchors {
            w.add_term(d, self.first.w.coeff(d));
        }
        for (&d, c) in self.free.iter().zip(x) {
            w.add_term(d, c.clone());
        }
        w
    }

    /// The potential generated by `W`, with `E0` chosen to keep the input's
    /// constant term.
    fn potential(&self, w: &LaurentPoly) -> (LaurentPoly, Scalar) {
        let v1 = riccati_v1(w, &self.first.f);
        let e0 = self.first.v.coeff(0) - v1.coeff(0);
        (&v1 + &LaurentPoly::constant(e0.clone(), w.base()), e0)
    }

    fn residuals(&self, x: &[Scalar]) -> Result<Vec<Scalar>, CdsiError> {
        let w = self.w_of(x);
        let (v, _) = self.potential(&w);
        let fit = fit_ansatz(&v, &self.first.f, &self.first.degrees)?;
        let second = partner_shift(&fit, &self.first.f)?;
        Ok(second.constraints.into_iter().map(|c| c.residual).collect())
    }

    fn jacobian(&self, x: &[Scalar], exact: bool) -> Result<Vec<Vec<Scalar>>, CdsiError> {
        let n = x.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let h = if exact {
                Scalar::one()
            } else {
                Scalar::approx(1e-3 * x[j].to_f64().abs().max(1.0))
            };
            let mut col: Option<Vec<Scalar>> = None;
            for &(k, num, den) in &STENCIL {
                let mut xs = x.to_vec();
                xs[j] = &xs[j] + &(Scalar::int(k) * &h);
                let r = self.residuals(&xs)?;
                let wgt = Scalar::ratio(num, den) / &h;
                let acc = col.get_or_insert_with(|| vec![Scalar::zero(); r.len()]);
                for (a, ri) in acc.iter_mut().zip(&r) {
                    *a = &*a + &(&wgt * ri);
                }
            }
            cols.push(col.unwrap_or_default());
        }
        let rows = cols.first().map_or(0, Vec::len);
        Ok((0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
    }

    fn newton(&self, x0: Vec<Scalar>) -> Option<Vec<Scalar>> {
        let scale = self.first.v.max_abs_coeff().max(1.0);
        let mut x = x0;
        let mut exact_steps = 0;
        for _ in 0..60 {
            let exact = x.iter().all(Scalar::is_exact) && exact_steps < 6;
            let r = self.residuals(&x).ok()?;
            let done = r.iter().all(|ri| {
                if ri.is_exact() {
                    ri.is_zero()
                } else {
                    ri.to_f64().abs() <= 1e-14 * scale
                }
            });
            if done {
                return Some(x);
            }
            let jac = self.jacobian(&x, exact).ok()?;
            let step = solve_linear(jac, r)?;
            x = x.iter().zip(&step).map(|(xi, si)| xi - si).collect();
            if exact {
                exact_steps += 1;
            } else {
                x = x.into_iter().map(|v| Scalar::approx(v.to_f64())).collect();
            }
            if x.iter().any(|v| !v.to_f64().is_finite()) {
                return None;
            }
        }
        let r = self.residuals(&x).ok()?;
        r.iter().all(|ri| ri.to_f64().abs() <= 1e-10 * scale).then_some(x)
    }
}

/// Gaussian elimination with partial pivoting; `None` for a singular or
/// non-square system.
fn solve_linear(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&p, &q| a[p][col].to_f64().abs().partial_cmp(&a[q][col].to_f64().abs()).unwrap())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = &a[r][col] / &a[col][col];
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                a[r][c] = &a[r][c] - &(&factor * &a[col][c]);
            }
            b[r] = &b[r] - &(&factor * &b[col]);
        }
    }
    let mut x = vec![Scalar::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

/// Pins the potential parameters on which the constraints of both hierarchy
/// steps vanish.
///
/// The unknowns are the superpotential coefficients not fixed by extremal
/// equations; each trial `W` generates a potential that satisfies the first
/// step's constraints by construction, and Newton's method drives the second
/// step's constraints to zero. The constraint residuals are polynomials in
/// the unknowns, so the Jacobian is differentiated exactly and rational
/// inputs give rational output. A few further starting points are tried;
/// distinct real solutions they reach are reported as extra branches.
pub fn solve_compatibility(first: &AnsatzFit, second: &AnsatzFit) -> Result<CompatibilitySolution, CdsiError> {
    let free: Vec<i32> = first.degrees.iter().copied().filter(|d| !first.anchors.contains(d)).collect();
    if free.len() != second.constraints.len() || first.constraints.is_empty() {
        return Err(CdsiError::Underdetermined(format!(
            "{} free coefficients against {} constraints",
            free.len(),
            second.constraints.len()
        )));
    }
    let compat = Compat { first, free };
    let x0: Vec<Scalar> = compat.free.iter().map(|&d| first.w.coeff(d)).collect();
    let mut starts = vec![x0.clone()];
    for (k, shift) in [(1, 1.0), (2, -1.0), (3, 2.5), (4, -4.0)] {
        starts.push(
            x0.iter()
                .enumerate()
                .map(|(i, v)| Scalar::approx(v.to_f64() * (1.0 + 0.3 * k as f64) + shift * (i + 1) as f64))
                .collect(),
        );
    }
    let mut solutions: Vec<Vec<Scalar>> = Vec::new();
    for s in starts {
        if let Some(x) = compat.newton(s) {
            let dup = solutions.iter().any(|y| {
                y.iter().zip(&x).all(|(a, b)| (a.to_f64() - b.to_f64()).abs() <= 1e-8 * a.to_f64().abs().max(1.0))
            });
            if !dup {
                solutions.push(x);
            }
        }
    }
    let mut solutions = solutions.into_iter();
    let x = solutions.next().ok_or(CdsiError::NoRealSolution)?;

    let kind = first.w.base().kind();
    let named = |v: &LaurentPoly| -> BTreeMap<String, Scalar> {
        let anchors_eq: BTreeSet<i32> = first.anchors.iter().map(|&d| 2 * d).collect();
        v.terms()
            .filter(|(j, _)| *j != 0 && !anchors_eq.contains(j))
            .map(|(j, c)| (param_name(j, kind), c.clone()))
            .collect()
    };

    let w = compat.w_of(&x);
    let (v, e0) = compat.potential(&w);
    let fit = fit_ansatz(&v, &first.f, &first.degrees)?;
    let second = partner_shift(&fit, &first.f)?;
    if !fit.constraints_satisfied(1e-10) || !second.constraints_satisfied(1e-10) {
        return Err(CdsiError::NoRealSolution);
    }
    if !(second.e0 > e0) {
        return Err(CdsiError::NoRealSolution);
    }
    let lambda_degree = match kind {
        BaseKind::Identity => *first.degrees.iter().min().expect("nonempty ansatz"),
        BaseKind::ExpNeg => *first.degrees.iter().max().expect("nonempty ansatz"),
    };
    let extra_branches = solutions
        .map(|y| {
            let (vy, _) = compat.potential(&compat.w_of(&y));
            named(&vy).into_iter().map(|(k, c)| (k, c.to_f64())).collect()
        })
        .collect();

    Ok(CompatibilitySolution {
        pinned_params: named(&v),
        lambda_pair: (w.coeff(lambda_degree), second.w.coeff(lambda_degree)),
        energies: (e0, second.e0.clone()),
        wprime: second.w.clone(),
        w,
        v,
        extra_branches,
    })
}

/// Runs fit, partner step and compatibility from scratch on a catalog
/// potential and compares every pinned parameter and both energies with the
/// closed forms.
pub fn crosscheck_general_m(inst: &FamilyInstance) -> Result<CrosscheckReport, CdsiError> {
    let degrees = ansatz_degrees(inst.family(), inst.params.m);
    let first = fit_ansatz(&inst.v, &inst.f, &degrees)?;
    let second = partner_shift(&first, &inst.f)?;
    let sol = solve_compatibility(&first, &second)?;
    let kind = inst.base.kind();

    let close = |a: &Scalar, b: &Scalar| {
        if a.is_exact() && b.is_exact() {
            a == b
        } else {
            a.approx_eq(b, 1e-12)
        }
    };
    let mut compared = Vec::new();
    let mut mismatches = Vec::new();
    let mut check = |name: String, catalog: Scalar, cdsi: Scalar| {
        if !close(&catalog, &cdsi) {
            mismatches.push(Mismatch { name: name.clone(), catalog: catalog.to_f64(), cdsi: cdsi.to_f64() });
        }
        compared.push(name);
    };
    let anchor_eqs: BTreeSet<i32> = first.anchors.iter().map(|&d| 2 * d).collect();
    let degrees: BTreeSet<i32> = inst.v.exponents().chain(sol.v.exponents()).collect();
    for j in degrees.into_iter().filter(|j| *j != 0 && !anchor_eqs.contains(j)) {
        check(param_name(j, kind), inst.v.coeff(j), sol.v.coeff(j));
    }
    check("E0".into(), inst.e0.clone(), sol.energies.0.clone());
    check("E1".into(), inst.e1.clone(), sol.energies.1.clone());
    Ok(CrosscheckReport { compared, mismatches })
}
