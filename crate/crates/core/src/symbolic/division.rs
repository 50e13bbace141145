use super::laurent::LaurentPoly;
use super::SymbolicError;
use crate::scalar::{Scalar, APPROX_REL_TOL};

/// Dense polynomial long division, coefficients indexed by degree.
/// `den` must have a nonzero leading coefficient.
pub(crate) fn poly_div_dense(num: &[Scalar], den: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let n = den.len();
    assert!(n > 0 && !den[n - 1].is_zero(), "division by a zero polynomial");
    if num.len() < n {
        return (Vec::new(), num.to_vec());
    }
    let lead = &den[n - 1];
    let mut rem = num.to_vec();
    let mut quot = vec![Scalar::zero(); num.len() - n + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + n - 1] / lead;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * d);
            }
        }
        rem[i + n - 1] = Scalar::zero();
        quot[i] = c;
    }
    rem.truncate(n - 1);
    (quot, rem)
}

/// Writes `g = q d + c` with `q` a Laurent polynomial and `c` a constant.
///
/// `d` is split as `t^s D(t)` with `D(0) != 0`. Since `D` is coprime to `t`,
/// divisibility of `g - c` by `d` reduces to polynomial divisibility of
/// `t^M g - c t^M` by `D`, which fixes `c` as the ratio of the remainders of
/// `t^M g` and `t^M` modulo `D`. When `d` is a monomial every `g` divides, and
/// the constant coefficient of `g` is taken as `c`.
pub fn divide_with_constant_remainder(
    g: &LaurentPoly,
    d: &LaurentPoly,
) -> Result<(LaurentPoly, Scalar), SymbolicError> {
    let base = g.base();
    let low_d = d.min_exponent().ok_or(SymbolicError::DivisionByZero)?;
    let big_d = d.shift(-low_d);
    let dense_d = big_d.to_dense();

    if dense_d.len() == 1 {
        let c = g.coeff(0);
        let q = (g - &LaurentPoly::constant(c.clone(), base)).shift(-low_d).scale(&dense_d[0].recip());
        return Ok((q, c));
    }

    let m = g.min_exponent().map_or(0, |k| (-k).max(0));
    let (a, r) = poly_div_dense(&g.shift(m).to_dense(), &dense_d);
    let (b, s) = poly_div_dense(&LaurentPoly::monomial(1, m, base).to_dense(), &dense_d);

    let get = |v: &[Scalar], i: usize| v.get(i).cloned().unwrap_or_else(Scalar::zero);
    let width = dense_d.len() - 1;
    let pivot = (0..width)
        .max_by(|&i, &j| {
            get(&s, i).to_f64().abs().partial_cmp(&get(&s, j).to_f64().abs()).unwrap()
        })
        .filter(|&i| !get(&s, i).is_zero())
        .ok_or(SymbolicError::NotDivisible)?;
    let c = get(&r, pivot) / get(&s, pivot);

    let scale = g.max_abs_coeff().max(c.to_f64().abs()).max(1.0);
    for i in 0..width {
        let resid = get(&r, i) - &c * get(&s, i);
        let zero = if resid.is_exact() {
            resid.is_zero()
        } else {
            resid.to_f64().abs() <= APPROX_REL_TOL * scale
        };
        if !zero {
            return Err(SymbolicError::NotDivisible);
        }
    }

    let q_dense: Vec<Scalar> = (0..a.len().max(b.len()))
        .map(|i| get(&a, i) - &c * get(&b, i))
        .collect();
    let q = LaurentPoly::from_dense(&q_dense, base).shift(-m - low_d);
    Ok((q, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::BaseCoordinate;

    #[test]
    fn ho_generator_division() {
        let base = BaseCoordinate::line();
        let g = LaurentPoly::from_terms([(0, 3), (2, 9), (4, 6)], base);
        let d = LaurentPoly::from_terms([(1, 3), (3, 2)], base);
        let (q, c) = divide_with_constant_remainder(&g, &d).unwrap();
        assert_eq!(q, LaurentPoly::monomial(3, 1, base));
        assert_eq!(c, Scalar::int(3));
    }

    #[test]
    fn monomial_divisor_conventions() {
        let base = BaseCoordinate::line();
        let t = LaurentPoly::t(base);
        let (q, c) = divide_with_constant_remainder(&LaurentPoly::constant(5, base), &t).unwrap();
        assert!(q.is_zero());
        assert_eq!(c, Scalar::int(5));
        let (q, c) = divide_with_constant_remainder(&LaurentPoly::monomial(1, 2, base), &t).unwrap();
        assert_eq!(q, t);
        assert!(c.is_zero());
    }

    #[test]
    fn laurent_divisor() {
        // kc family, m = alpha = L = B2 = 1
        let base = BaseCoordinate::half_line();
        let d = LaurentPoly::from_terms([(-1, -5), (0, -10), (1, 2)], base);
        let g = LaurentPoly::from_terms([(-2, 5), (-1, 5), (0, 2), (1, 2)], base);
        let (q, c) = divide_with_constant_remainder(&g, &d).unwrap();
        assert_eq!(q, LaurentPoly::from_terms([(-1, -1), (0, 1)], base));
        assert_eq!(c, Scalar::int(14));
    }

    #[test]
    fn rejects_incompatible() {
        let base = BaseCoordinate::line();
        let d = LaurentPoly::from_terms([(0, 1), (2, 1)], base);
        let g = LaurentPoly::t(base);
        assert!(matches!(divide_with_constant_remainder(&g, &d), Err(SymbolicError::NotDivisible)));
        assert!(matches!(
            divide_with_constant_remainder(&g, &LaurentPoly::zero(base)),
            Err(SymbolicError::DivisionByZero)
        ));
    }
}
