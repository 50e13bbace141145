use serde::Serialize;

use super::base::BaseKind;
use super::deform::{DeformShape, DeformingFunction};
use super::division::poly_div_dense;
use super::laurent::LaurentPoly;
use super::SymbolicError;
use crate::scalar::{Scalar, APPROX_REL_TOL};

/// Closed form `c_log_f ln f + c_log_t ln t + poly_part(t)` of an integral
/// `int g/f dx`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntiderivativeForm {
    pub c_log_f: Scalar,
    pub c_log_t: Scalar,
    pub poly_part: LaurentPoly,
}

impl AntiderivativeForm {
    /// `f * dF/dx`, which must reproduce the integrand numerator `g`.
    pub fn derivative_times_f(&self, f: &DeformingFunction) -> LaurentPoly {
        let base = self.poly_part.base();
        // f * (d/dx ln t) as a Laurent polynomial
        let f_dlogt = match base.kind() {
            BaseKind::Identity => f.poly().shift(-1),
            BaseKind::ExpNeg => -f.poly(),
        };
        f.derivative().scale(&self.c_log_f)
            + f_dlogt.scale(&self.c_log_t)
            + f.poly() * &self.poly_part.differentiate()
    }

    pub fn eval(&self, x: f64, f: &DeformingFunction) -> f64 {
        let base = self.poly_part.base();
        let mut v = self.poly_part.eval(x);
        if !self.c_log_f.is_zero() {
            v += self.c_log_f.to_f64() * f.eval(x).ln();
        }
        if !self.c_log_t.is_zero() {
            let ln_t = match base.kind() {
                BaseKind::Identity => x.ln(),
                BaseKind::ExpNeg => -x,
            };
            v += self.c_log_t.to_f64() * ln_t;
        }
        v
    }
}

/// `int g/f dx` in closed form.
///
/// The integrand is rewritten in `t` (for `t = exp(-x)`, `dx = -dt/t`), the
/// negative powers are peeled off from below using `f(0) = 1`, and the
/// remaining polynomial is divided by `f`. Monomials integrate termwise, `1/t`
/// gives `ln t`, and the proper remainder `r/f` must be a multiple of `f'`.
pub fn integrate_over_f(
    g: &LaurentPoly,
    f: &DeformingFunction,
) -> Result<AntiderivativeForm, SymbolicError> {
    let base = g.base();
    let mut rem = match base.kind() {
        BaseKind::Identity => g.clone(),
        BaseKind::ExpNeg => -g.shift(-1),
    };
    let scale = rem.max_abs_coeff().max(1.0);

    let mut laurent_part = LaurentPoly::zero(base);
    while let Some(k) = rem.min_exponent().filter(|&k| k < 0) {
        let c = rem.coeff(k);
        laurent_part.add_term(k, c.clone());
        rem = rem - f.poly().shift(k).scale(&c);
        // drop the eliminated term outright so float residue cannot stall the loop
        let residue = rem.coeff(k);
        if !residue.is_zero() {
            rem.add_term(k, -residue);
        }
    }

    let (quotient, remainder) = poly_div_dense(&rem.to_dense(), &f.poly().to_dense());
    let integrand = laurent_part + LaurentPoly::from_dense(&quotient, base);

    let mut c_log_t = Scalar::zero();
    let mut poly_part = LaurentPoly::zero(base);
    for (k, c) in integrand.terms() {
        if k == -1 {
            c_log_t = c.clone();
        } else {
            poly_part.add_term(k + 1, c / Scalar::from(k + 1));
        }
    }

    let r = |i: usize| remainder.get(i).cloned().unwrap_or_else(Scalar::zero);
    let alpha = f.alpha();
    let c_log_f = match f.shape() {
        DeformShape::Unit => Scalar::zero(),
        DeformShape::Linear => r(0) / alpha,
        DeformShape::Quadratic => {
            let r0 = r(0);
            let negligible = !r0.is_exact() && r0.to_f64().abs() <= APPROX_REL_TOL * scale;
            if !r0.is_zero() && !negligible {
                return Err(SymbolicError::NonElementary(format!(
                    "constant remainder {r0} over 1 + alpha t^2 integrates to an arctangent"
                )));
            }
            r(1) / (Scalar::int(2) * alpha)
        }
    };

    Ok(AntiderivativeForm { c_log_f, c_log_t, poly_part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::BaseCoordinate;

    #[test]
    fn x_over_one_plus_x2() {
        let f = DeformingFunction::quadratic(1, BaseCoordinate::line()).unwrap();
        let g = LaurentPoly::t(BaseCoordinate::line());
        let a = integrate_over_f(&g, &f).unwrap();
        assert_eq!(a.c_log_f, Scalar::ratio(1, 2));
        assert!(a.c_log_t.is_zero());
        assert!(a.poly_part.is_zero());
    }

    #[test]
    fn simple_pole_partial_fractions() {
        // (lambda/t + mu) / (1 + alpha t) with lambda = 3, mu = 2, alpha = 1/2
        let base = BaseCoordinate::half_line();
        let alpha = Scalar::ratio(1, 2);
        let f = DeformingFunction::linear(alpha.clone(), base).unwrap();
        let (lambda, mu) = (Scalar::int(3), Scalar::int(2));
        let g = LaurentPoly::from_terms([(-1, lambda.clone()), (0, mu.clone())], base);
        let a = integrate_over_f(&g, &f).unwrap();
        assert_eq!(a.c_log_t, lambda);
        assert_eq!(a.c_log_f, (&mu - &lambda * &alpha) / &alpha);
        assert!(a.poly_part.is_zero());
        assert_eq!(a.derivative_times_f(&f), g);
    }

    #[test]
    fn exp_neg_log_f() {
        let base = BaseCoordinate::exp_neg();
        let f = DeformingFunction::linear(1, base).unwrap();
        let g = LaurentPoly::t(base);
        let a = integrate_over_f(&g, &f).unwrap();
        assert_eq!(a.c_log_f, Scalar::int(-1));
        assert!(a.c_log_t.is_zero() && a.poly_part.is_zero());
        // d/dx of -ln(1 + e^-x) equals e^-x / (1 + e^-x)
        let (x, h) = (0.3, 1e-5);
        let fd = (a.eval(x + h, &f) - a.eval(x - h, &f)) / (2.0 * h);
        assert!((fd - (-x).exp() / (1.0 + (-x).exp())).abs() < 1e-9);
    }

    #[test]
    fn arctangent_is_rejected() {
        let f = DeformingFunction::quadratic(1, BaseCoordinate::line()).unwrap();
        let g = LaurentPoly::constant(1, BaseCoordinate::line());
        assert!(matches!(integrate_over_f(&g, &f), Err(SymbolicError::NonElementary(_))));
    }

    #[test]
    fn high_powers_and_poles() {
        let base = BaseCoordinate::half_line();
        let f = DeformingFunction::quadratic(Scalar::ratio(2, 3), base).unwrap();
        let g = LaurentPoly::from_terms(
            [(-3, 2), (-1, -5), (1, 7), (3, 1), (5, -4)],
            base,
        );
        let a = integrate_over_f(&g, &f).unwrap();
        assert_eq!(a.derivative_times_f(&f), g);
    }
}
