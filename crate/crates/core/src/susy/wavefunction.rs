use serde::Serialize;

use super::generating::GeneratingPair;
use super::SusyError;
use crate::parallel::{self, Execution};
use crate::scalar::{Scalar, APPROX_REL_TOL};
use crate::symbolic::{integrate_over_f, BaseCoordinate, BaseKind, DeformingFunction, LaurentPoly};

/// `psi(x) = t^a f^p P(t) exp(Q(t))` with `P`, `Q` Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WavefunctionForm {
    pub t_power: Scalar,
    pub f_power: Scalar,
    pub prefactor: LaurentPoly,
    pub exponent: LaurentPoly,
    #[serde(skip)]
    pub f: DeformingFunction,
}

/// `ln|psi|` and the sign of `psi` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub sign: i8,
}

impl WavefunctionForm {
    pub fn base(&self) -> BaseCoordinate {
        self.prefactor.base()
    }

    pub fn log_eval(&self, x: f64) -> LogValue {
        let base = self.base();
        let mut ln = self.exponent.eval(x);
        if !self.f_power.is_zero() {
            ln += self.f_power.to_f64() * self.f.eval(x).ln();
        }
        let mut sign = 1i8;
        if !self.t_power.is_zero() {
            let ln_t = match base.kind() {
                BaseKind::Identity => x.abs().ln(),
                BaseKind::ExpNeg => -x,
            };
            if base.kind() == BaseKind::Identity && x < 0.0 {
                // only integer powers make sense for negative t
                let a = self.t_power.to_f64();
                if a.fract() != 0.0 {
                    return LogValue { ln_abs: f64::NAN, sign: 0 };
                }
                if (a as i64) % 2 != 0 {
                    sign = -sign;
                }
            }
            ln += self.t_power.to_f64() * ln_t;
        }
        let p = self.prefactor.eval(x);
        if p == 0.0 {
            return LogValue { ln_abs: f64::NEG_INFINITY, sign: 0 };
        }
        if p < 0.0 {
            sign = -sign;
        }
        LogValue { ln_abs: ln + p.abs().ln(), sign }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = self.log_eval(x);
        v.sign as f64 * v.ln_abs.exp()
    }

    /// True when the polynomial prefactor is a constant, i.e. the form has no
    /// zeros in the interior of the domain.
    pub fn is_nodeless_form(&self) -> bool {
        self.prefactor.is_constant()
    }

    /// Canonical representative of the ray `{c psi}`: the lowest power of `P`
    /// moved into `t^a`, `P` scaled so that its constant term is 1, and the
    /// constant term of `Q` dropped.
    pub fn normalized(&self) -> WavefunctionForm {
        let mut out = self.clone();
        if let Some(k) = self.prefactor.min_exponent() {
            let lead = self.prefactor.coeff(k);
            out.prefactor = self.prefactor.shift(-k).scale(&lead.recip());
            out.t_power = &self.t_power + &Scalar::int(k as i64);
        }
        let c = out.exponent.coeff(0);
        if !c.is_zero() {
            out.exponent.add_term(0, -c);
        }
        out
    }

    /// Whether `self = c * other` for a nonzero constant `c`.
    pub fn proportional_to(&self, other: &WavefunctionForm) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        let close_poly = |p: &LaurentPoly, q: &LaurentPoly| {
            let diff = p - q;
            diff.is_zero_within(APPROX_REL_TOL * p.max_abs_coeff().max(q.max_abs_coeff()).max(1.0))
        };
        a.t_power.approx_eq(&b.t_power, APPROX_REL_TOL)
            && a.f_power.approx_eq(&b.f_power, APPROX_REL_TOL)
            && close_poly(&a.prefactor, &b.prefactor)
            && close_poly(&a.exponent, &b.exponent)
    }

    /// Number of sign changes along an increasing sequence of points; exact
    /// zeros are skipped.
    pub fn sign_changes(&self, xs: &[f64]) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for &x in xs {
            let s = self.log_eval(x).sign;
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

/// `psi_0 = f^{-1/2} exp(-int W/f dx)`.
pub fn ground_state(w: &LaurentPoly, f: &DeformingFunction) -> Result<WavefunctionForm, SusyError> {
    let anti = integrate_over_f(w, f)?;
    Ok(WavefunctionForm {
        t_power: -anti.c_log_t,
        f_power: Scalar::ratio(-1, 2) - anti.c_log_f,
        prefactor: LaurentPoly::constant(1, w.base()),
        exponent: -anti.poly_part,
        f: f.clone(),
    })
}

/// `psi_1 = W+ f^{-1/2} exp(-int W'/f dx)`.
pub fn first_excited(
    gp: &GeneratingPair,
    wprime: &LaurentPoly,
    f: &DeformingFunction,
) -> Result<WavefunctionForm, SusyError> {
    let mut psi = ground_state(wprime, f)?;
    psi.prefactor = gp.wplus.clone();
    Ok(psi)
}

/// Pointwise relative residual `|H psi - E psi| / |psi|` of the deformed
/// Hamiltonian `-sqrt(f) d/dx f d/dx sqrt(f) + V`.
///
/// `phi = sqrt(f) psi` is differentiated with five-point stencils whose step
/// follows the local wavelength; `f` and `f'` enter analytically.
pub fn hamiltonian_residual(
    psi: &WavefunctionForm,
    v: &LaurentPoly,
    energy: f64,
    probes: &[f64],
    exec: Execution,
) -> Result<Vec<f64>, SusyError> {
    let base = psi.base();
    if let Some(&x) = probes.iter().find(|&&x| !base.contains(x)) {
        return Err(SusyError::ProbeOutOfDomain(x));
    }
    let f = &psi.f;
    let df = f.derivative();
    Ok(parallel::map(probes, exec, |&x| {
        let fx = f.eval(x);
        let kappa = ((v.eval(x) - energy).abs() + 1.0).sqrt() / fx;
        let mut h = 2e-3 / kappa;
        for end in [base.lower(), base.upper()] {
            if end.is_finite() {
                h = h.min(0.01 * (x - end).abs());
            }
        }
        let stencil: Vec<f64> = (-2..=2).map(|k| x + k as f64 * h).collect();
        let logs: Vec<LogValue> = stencil.iter().map(|&y| psi.log_eval(y)).collect();
        let reference = logs
            .iter()
            .map(|l| l.ln_abs)
            .filter(|l| l.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if !reference.is_finite() {
            return f64::NAN;
        }
        let phi: Vec<f64> = stencil
            .iter()
            .zip(&logs)
            .map(|(&y, l)| l.sign as f64 * (l.ln_abs - reference + 0.5 * f.eval(y).ln()).exp())
            .collect();
        let d1 = (phi[0] - 8.0 * phi[1] + 8.0 * phi[3] - phi[4]) / (12.0 * h);
        let d2 = (-phi[0] + 16.0 * phi[1] - 30.0 * phi[2] + 16.0 * phi[3] - phi[4]) / (12.0 * h * h);
        let sqrt_f = fx.sqrt();
        let psi_x = phi[2] / sqrt_f;
        let kinetic = -sqrt_f * (df.eval(x) * d1 + fx * d2);
        (kinetic + (v.eval(x) - energy) * psi_x).abs() / psi_x.abs().max(1e-30)
    }))
}

/// Probe points walking out to one end of the domain: `x = +-2^k` towards an
/// infinite end of the identity base, `x = a +- 2^-k` towards a finite end,
/// and `x = +-2k` (geometric in `t`) for the exponential base.
pub fn boundary_ladder(base: &BaseCoordinate, upper: bool) -> Vec<f64> {
    let end = if upper { base.upper() } else { base.lower() };
    let dir = if upper { 1.0 } else { -1.0 };
    if end.is_finite() {
        return (1..=20).map(|k| end - dir * 2f64.powi(-k)).collect();
    }
    match base.kind() {
        BaseKind::Identity => (0..=20).map(|k| dir * 2f64.powi(k)).collect(),
        BaseKind::ExpNeg => (1..=20).map(|k| dir * 2.0 * k as f64).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EndDecay {
    pub points: Vec<f64>,
    /// `ln(|psi|^2 f)` along the ladder.
    pub log_density: Vec<f64>,
    pub decays: bool,
}

/// `|psi|^2 f` along the boundary ladder at each end. An end passes when the
/// last five rungs decrease strictly and the final one sits at least `e^10`
/// below the largest value seen.
pub fn boundary_decay(psi: &WavefunctionForm) -> (EndDecay, EndDecay) {
    let base = psi.base();
    let end = |upper| {
        let points = boundary_ladder(&base, upper);
        let log_density: Vec<f64> = points
            .iter()
            .map(|&x| 2.0 * psi.log_eval(x).ln_abs + psi.f.eval(x).ln())
            .collect();
        let n = log_density.len();
        let tail = &log_density[n - 5..];
        let monotone = tail.windows(2).all(|w| w[1] < w[0]);
        let peak = log_density.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let last = log_density[n - 1];
        let decays = monotone && (last == f64::NEG_INFINITY || last < peak - 10.0);
        EndDecay { points, log_density, decays }
    };
    (end(false), end(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::{generating_pair_from_wplus, riccati_v1, superpotentials_from_generating};

    fn ho_m1() -> (DeformingFunction, GeneratingPair) {
        let base = BaseCoordinate::line();
        let f = DeformingFunction::quadratic(1, base).unwrap();
        let gp = generating_pair_from_wplus(&LaurentPoly::from_terms([(1, 3), (3, 2)], base), &f).unwrap();
        (f, gp)
    }

    #[test]
    fn ho_ground_and_excited() {
        let (f, gp) = ho_m1();
        let base = f.base();
        let (w, wp) = superpotentials_from_generating(&gp);
        let psi0 = ground_state(&w, &f).unwrap();
        assert_eq!(psi0.f_power, Scalar::zero());
        assert_eq!(psi0.t_power, Scalar::zero());
        assert_eq!(psi0.exponent, LaurentPoly::monomial(Scalar::ratio(-1, 2), 2, base));
        assert!(psi0.is_nodeless_form());

        let psi1 = first_excited(&gp, &wp, &f).unwrap();
        assert_eq!(psi1.f_power, Scalar::ratio(-3, 2));
        assert_eq!(psi1.exponent, LaurentPoly::monomial(Scalar::ratio(-1, 2), 2, base));
        assert_eq!(psi1.prefactor, LaurentPoly::from_terms([(1, 3), (3, 2)], base));
        let xs: Vec<f64> = (0..=200).map(|i| -5.0 + 0.05 * i as f64).collect();
        assert_eq!(psi1.sign_changes(&xs), 1);
        assert_eq!(psi0.sign_changes(&xs), 0);

        let v = riccati_v1(&w, &f);
        let probes = [-1.3, -0.2, 0.4, 0.9, 2.1];
        for r in hamiltonian_residual(&psi0, &v, 0.0, &probes, Execution::Sequential).unwrap() {
            assert!(r < 1e-7, "{r}");
        }
        for r in hamiltonian_residual(&psi1, &v, 3.0, &probes, Execution::Parallel).unwrap() {
            assert!(r < 1e-7, "{r}");
        }
        let (lo, hi) = boundary_decay(&psi1);
        assert!(lo.decays && hi.decays);
    }

    #[test]
    fn free_gaussian_residual() {
        let base = BaseCoordinate::line();
        let f = DeformingFunction::unit(base);
        let w = LaurentPoly::t(base);
        let psi = ground_state(&w, &f).unwrap();
        let v = &riccati_v1(&w, &f) + &LaurentPoly::constant(1, base);
        let r = hamiltonian_residual(&psi, &v, 1.0, &[0.3, -1.7], Execution::Sequential).unwrap();
        assert!(r.iter().all(|&r| r < 1e-7));
        assert!(matches!(
            hamiltonian_residual(&psi, &v, 1.0, &[f64::INFINITY], Execution::Sequential),
            Err(SusyError::ProbeOutOfDomain(_))
        ));
    }

    #[test]
    fn proportionality() {
        let (f, gp) = ho_m1();
        let (_, wp) = superpotentials_from_generating(&gp);
        let psi1 = first_excited(&gp, &wp, &f).unwrap();
        let mut scaled = psi1.clone();
        scaled.prefactor = psi1.prefactor.scale(&Scalar::int(-7));
        scaled.exponent.add_term(0, Scalar::int(4));
        assert!(psi1.proportional_to(&scaled));
        let mut other = psi1.clone();
        other.f_power = Scalar::ratio(-1, 2);
        assert!(!psi1.proportional_to(&other));
    }

    #[test]
    fn growing_form_fails_decay() {
        let base = BaseCoordinate::line();
        let f = DeformingFunction::quadratic(1, base).unwrap();
        let psi = ground_state(&LaurentPoly::monomial(-1, 3, base), &f).unwrap();
        let (lo, hi) = boundary_decay(&psi);
        assert!(!lo.decays && !hi.decays);
    }

    #[test]
    fn ladders() {
        let line = BaseCoordinate::line();
        assert_eq!(boundary_ladder(&line, true)[10], 1024.0);
        let half = BaseCoordinate::half_line();
        assert!(boundary_ladder(&half, false).iter().all(|&x| x > 0.0 && x <= 0.5));
        assert_eq!(boundary_ladder(&BaseCoordinate::exp_neg(), false)[0], -2.0);
    }
}
