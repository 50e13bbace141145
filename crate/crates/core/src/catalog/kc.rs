use super::combinatorics::binomial as c;
use super::{apow, int, q, CatalogError, ClosedForm, FamilyInstance, FamilyParams};
use crate::scalar::Scalar;
use crate::susy::WavefunctionForm;
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly};

/// Extension of the Kepler-Coulomb problem:
/// `V = L(L+1)/x^2 + B_{-1}/x + sum_{k=1}^{2m} B_k x^k` on `(0, inf)` with
/// `f = 1 + alpha x`.
pub fn build_kc(
    m: u32,
    alpha: impl Into<Scalar>,
    l: impl Into<Scalar>,
    b_top: impl Into<Scalar>,
) -> Result<FamilyInstance, CatalogError> {
    let params = FamilyParams::kc(m, alpha, l, b_top);
    params.validate()?;

    let base = BaseCoordinate::half_line();
    let m = params.m as i64;
    let a = params.alpha.clone();
    let big_l = params.l.clone().expect("kc carries L");
    let big_b = params.b_top.clone();
    let sb = big_b.sqrt().expect("B_top validated positive");
    let f = DeformingFunction::linear(a.clone(), base)?;
    let two_l3 = int(2) * &big_l + int(3);
    let one = int(1);

    let mut wplus = LaurentPoly::from_terms([(-1, -two_l3.clone()), (0, -(int(m + 1) * &a * &two_l3))], base);
    for k in 1..=m {
        wplus.add_term(k as i32, int(2) * &sb * c(m + 1, k + 1) * apow(&a, k - m));
    }
    let wminus = LaurentPoly::from_terms([(-1, int(-1)), (0, int(m) * &a)], base);

    let mut v = LaurentPoly::monomial(&big_l * &(&big_l + &one), -2, base);
    v.add_term(
        -1,
        int(2) * &a * (&big_l + &one) * (int(m + 1) * &big_l + int(2 * m + 1)),
    );
    v.add_term(
        1,
        -(q(2, 3) * int(m * (m + 1) * (2 * m + 1)) * (&big_l + &int(2)) * apow(&a, 2 - m) * &sb),
    );
    for k in 2..=m {
        let lin = c(m + 1, k + 2) * (int(2) * &big_l + int(k + 3))
            + c(m + 1, k + 1) * (int(2 * m + 2) * &big_l + int(4 * m + k + 3));
        let quad = c(2 * m + 2, k + 2) - int(2) * c(m + 1, k + 2) - int(2 * (m + 1)) * c(m + 1, k + 1);
        v.add_term(k as i32, -lin * apow(&a, k - m + 1) * &sb + quad * apow(&a, k - 2 * m) * &big_b);
    }
    for k in m + 1..=2 * m {
        v.add_term(k as i32, c(2 * m + 2, k + 2) * apow(&a, k - 2 * m) * &big_b);
    }

    let lm = int(m + 1) * &big_l;
    let e0 = -((&lm + &q(4 * m + 3, 2)).powi(2)) * &a * &a
        + q(m * (m + 1), 2) * &two_l3 * apow(&a, 1 - m) * &sb;
    let e1 = -((&lm + &q(2 * m + 3, 2)).powi(2)) * &a * &a
        + q(m * (m + 1), 2) * (int(2) * &big_l + int(7)) * apow(&a, 1 - m) * &sb;

    let mut exponent = LaurentPoly::zero(base);
    for l in 1..=m {
        exponent.add_term(l as i32, -(&sb / int(l) * c(m, l) * apow(&a, l - m - 1)));
    }
    let tail = apow(&a, -m - 1) * &sb;
    let mut p1 = LaurentPoly::from_terms([(0, -two_l3.clone()), (1, -(int(m + 1) * &two_l3 * &a))], base);
    for k in 2..=m + 1 {
        p1.add_term(k as i32, int(2) * &sb * c(m + 1, k) * apow(&a, k - m - 1));
    }
    let psi0 = WavefunctionForm {
        t_power: &big_l + &one,
        f_power: int(m) * (&big_l + &int(2) + &tail),
        prefactor: LaurentPoly::constant(1, base),
        exponent: exponent.clone(),
        f: f.clone(),
    };
    let psi1 = WavefunctionForm {
        t_power: &big_l + &one,
        f_power: int(m) * &big_l + int(m - 1) + int(m) * &tail,
        prefactor: p1,
        exponent,
        f: f.clone(),
    };

    Ok(ClosedForm {
        params,
        delta: None,
        f,
        v,
        wplus,
        wminus,
        e0,
        e1,
        psi0,
        psi1,
        partner_coeffs: None,
        r: None,
    }
    .assemble())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_instance() {
        let inst = build_kc(1, 1, 1, 1).unwrap();
        let base = inst.base;
        assert_eq!(inst.v, LaurentPoly::from_terms([(-2, 2), (-1, 20), (1, -12), (2, 1)], base));
        assert_eq!(inst.e1, Scalar::ratio(-45, 4));
        assert_eq!(inst.e0, Scalar::ratio(-101, 4));
        assert_eq!(inst.gap(), Scalar::int(14));
        assert_eq!(inst.wplus, LaurentPoly::from_terms([(-1, -5), (0, -10), (1, 2)], base));
    }
}
