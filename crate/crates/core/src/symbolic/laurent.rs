use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::base::{BaseCoordinate, BaseKind};
use super::SymbolicError;
use crate::scalar::Scalar;

/// A finite sum `sum_k c_k t^k` with integer (possibly negative) exponents,
/// where `t` is the base coordinate. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, Scalar>,
    base: BaseCoordinate,
}

impl LaurentPoly {
    pub fn zero(base: BaseCoordinate) -> Self {
        Self { coeffs: BTreeMap::new(), base }
    }

    pub fn constant(c: impl Into<Scalar>, base: BaseCoordinate) -> Self {
        Self::monomial(c, 0, base)
    }

    pub fn monomial(c: impl Into<Scalar>, exponent: i32, base: BaseCoordinate) -> Self {
        let mut p = Self::zero(base);
        p.add_term(exponent, c.into());
        p
    }

    /// The coordinate `t` itself.
    pub fn t(base: BaseCoordinate) -> Self {
        Self::monomial(Scalar::one(), 1, base)
    }

    pub fn from_terms<I, S>(terms: I, base: BaseCoordinate) -> Self
    where
        I: IntoIterator<Item = (i32, S)>,
        S: Into<Scalar>,
    {
        let mut p = Self::zero(base);
        for (k, c) in terms {
            p.add_term(k, c.into());
        }
        p
    }

    /// Inverse of the JSON serialization: `{exponent: coefficient-string}`.
    pub fn from_coefficient_map(
        map: &BTreeMap<String, String>,
        base: BaseCoordinate,
    ) -> Result<Self, SymbolicError> {
        let mut p = Self::zero(base);
        for (k, v) in map {
            let exp: i32 = k.parse().map_err(|_| SymbolicError::Parse(k.clone()))?;
            let c: Scalar = v.parse().map_err(|_| SymbolicError::Parse(v.clone()))?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    pub fn base(&self) -> BaseCoordinate {
        self.base
    }

    pub fn with_base(mut self, base: BaseCoordinate) -> Self {
        assert_eq!(self.base.kind(), base.kind(), "cannot change the kind of base coordinate");
        self.base = base;
        self
    }

    /// Adds `c t^k` in place, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, k: i32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let updated = match self.coeffs.remove(&k) {
            Some(old) => old + c,
            None => c,
        };
        if !updated.is_zero() {
            self.coeffs.insert(k, updated);
        }
    }

    pub fn coeff(&self, k: i32) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Scalar)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = i32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(Scalar::is_exact)
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// True if the polynomial is a constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.base);
        for (k, v) in self.terms() {
            out.add_term(k, v * c);
        }
        out
    }

    /// Multiplication by `t^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
            base: self.base,
        }
    }

    /// `dp/dx`, applying the chain rule through the base coordinate.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero(self.base);
        for (k, c) in self.terms() {
            if k == 0 {
                continue;
            }
            let factor = Scalar::from(k);
            match self.base.kind() {
                BaseKind::Identity => out.add_term(k - 1, c * factor),
                BaseKind::ExpNeg => out.add_term(k, -(c * factor)),
            }
        }
        out
    }

    /// Value at the point `x` (not `t`).
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_t(self.base.t_of_x(x))
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.terms().map(|(k, c)| c.to_f64() * t.powi(k)).sum()
    }

    /// Coefficients converted once to `f64` for fast repeated evaluation.
    pub fn to_numeric(&self) -> NumericLaurent {
        NumericLaurent {
            terms: self.terms().map(|(k, c)| (k, c.to_f64())).collect(),
            base: self.base,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Zero, or every coefficient below `tol` in absolute value.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    /// Dense coefficient vector of a polynomial with no negative exponents,
    /// index = exponent.
    pub(crate) fn to_dense(&self) -> Vec<Scalar> {
        debug_assert!(self.min_exponent().map_or(true, |k| k >= 0));
        let n = self.max_exponent().map_or(0, |k| k as usize + 1);
        let mut v = vec![Scalar::zero(); n];
        for (k, c) in self.terms() {
            v[k as usize] = c.clone();
        }
        v
    }

    pub(crate) fn from_dense(v: &[Scalar], base: BaseCoordinate) -> Self {
        Self::from_terms(v.iter().enumerate().map(|(k, c)| (k as i32, c.clone())), base)
    }

    fn check_base(&self, other: &Self) {
        assert_eq!(
            self.base.kind(),
            other.base.kind(),
            "Laurent polynomials over different base coordinates"
        );
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.check_base(rhs);
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.check_base(rhs);
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.check_base(rhs);
        let mut out = LaurentPoly::zero(self.base);
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl<'a> Neg for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Scalar::int(-1))
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = match self.base.kind() {
            BaseKind::Identity => "x",
            BaseKind::ExpNeg => "e^(-x)",
        };
        for (i, (k, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{var}")?,
                _ => write!(f, "({c})*{var}^{k}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as `{exponent: coefficient-string}` in ascending exponent order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            map.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

/// Floating-point image of a [`LaurentPoly`], used on hot numerical paths.
#[derive(Clone, Debug)]
pub struct NumericLaurent {
    terms: Vec<(i32, f64)>,
    base: BaseCoordinate,
}

impl NumericLaurent {
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_t(self.base.t_of_x(x))
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(k, c)| c * t.powi(k)).sum()
    }

    pub fn base(&self) -> BaseCoordinate {
        self.base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> BaseCoordinate {
        BaseCoordinate::line()
    }

    #[test]
    fn power_rule_identity() {
        let p = LaurentPoly::monomial(1, 3, line());
        assert_eq!(p.differentiate(), LaurentPoly::monomial(3, 2, line()));
    }

    #[test]
    fn exp_neg_derivative() {
        let base = BaseCoordinate::exp_neg();
        let p = LaurentPoly::t(base);
        assert_eq!(p.differentiate(), LaurentPoly::monomial(-1, 1, base));
    }

    #[test]
    fn rho_superpotential_derivative() {
        // lambda/t + mu t with lambda = -2, mu = 1
        let base = BaseCoordinate::half_line();
        let w = LaurentPoly::from_terms([(-1, Scalar::int(-2)), (1, Scalar::one())], base);
        let dw = w.differentiate();
        assert_eq!(dw, LaurentPoly::from_terms([(-2, Scalar::int(2)), (0, Scalar::one())], base));
        let (x, h) = (0.7, 1e-5);
        let fd = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
        assert!((fd - dw.eval(x)).abs() < 1e-8);
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = LaurentPoly::from_terms([(2, 1), (0, 3)], line());
        let q = LaurentPoly::from_terms([(2, -1)], line());
        let s = &p + &q;
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(0), Scalar::int(3));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn json_map_round_trip() {
        let p = LaurentPoly::from_terms(
            [(-2, Scalar::ratio(3, 4)), (1, Scalar::int(-12)), (5, Scalar::approx(0.25))],
            BaseCoordinate::exp_neg(),
        );
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-2":"3/4","1":"-12","5":"0.25"}"#);
        let map: BTreeMap<String, String> = serde_json::from_str(&s).unwrap();
        let back = LaurentPoly::from_coefficient_map(&map, BaseCoordinate::exp_neg()).unwrap();
        assert_eq!(back.coeff(-2), p.coeff(-2));
        assert_eq!(back.coeff(1), p.coeff(1));
        assert!((back.coeff(5).to_f64() - 0.25).abs() < 1e-15);
    }
}
