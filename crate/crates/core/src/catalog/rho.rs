use super::combinatorics::binomial as c;
use super::{apow, int, q, CatalogError, ClosedForm, FamilyInstance, FamilyParams};
use crate::scalar::Scalar;
use crate::susy::WavefunctionForm;
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly};

/// Extension of the radial oscillator:
/// `V = L(L+1)/x^2 + sum_{k=1}^{2m+1} B_{2k} x^{2k}` on `(0, inf)` with
/// `f = 1 + alpha x^2`.
pub fn build_rho(
    m: u32,
    alpha: impl Into<Scalar>,
    l: impl Into<Scalar>,
    b_top: impl Into<Scalar>,
) -> Result<FamilyInstance, CatalogError> {
    let params = FamilyParams::rho(m, alpha, l, b_top);
    params.validate()?;

    let base = BaseCoordinate::half_line();
    let m = params.m as i64;
    let a = params.alpha.clone();
    let big_l = params.l.clone().expect("rho carries L");
    let big_b = params.b_top.clone();
    let sb = big_b.sqrt().expect("B_top validated positive");
    let f = DeformingFunction::quadratic(a.clone(), base)?;
    let two_l3 = int(2) * &big_l + int(3);

    let mut wplus = LaurentPoly::monomial(-two_l3.clone(), -1, base);
    let mut p1 = LaurentPoly::constant(-two_l3.clone(), base);
    for k in 1..=m + 1 {
        let coeff = int(2) * &sb * c(m + 1, k) * apow(&a, k - m - 1);
        wplus.add_term((2 * k - 1) as i32, coeff.clone());
        p1.add_term((2 * k) as i32, coeff);
    }
    let wminus = LaurentPoly::from_terms([(-1, int(-1)), (1, int(2 * m + 1) * &a)], base);

    let mut v = LaurentPoly::monomial(&big_l * &(&big_l + &int(1)), -2, base);
    v.add_term(
        2,
        q(2 * m + 1, 2) * q(2 * m + 3, 2) * &a * &a
            - q(1, 2) * int(m + 1) * (int(2 * m) * &big_l + int(9 * m + 4)) * apow(&a, 1 - m) * &sb
            + int((m + 1) * (m + 1)) * apow(&a, -2 * m) * &big_b,
    );
    for k in 2..=m + 1 {
        let lin = c(m + 1, k + 1) * (int(2) * &big_l + int(2 * k + 3)) + c(m + 1, k) * int(2 * m + 2 * k);
        let quad = c(2 * m + 2, k + 1) - int(2) * c(m + 1, k + 1);
        v.add_term(
            (2 * k) as i32,
            -lin * apow(&a, k - m) * &sb + quad * apow(&a, k - 1 - 2 * m) * &big_b,
        );
    }
    for k in m + 2..=2 * m + 1 {
        v.add_term((2 * k) as i32, c(2 * m + 2, k + 1) * apow(&a, k - 1 - 2 * m) * &big_b);
    }

    let e0 = -(int(2 * m) * &big_l + q(6 * m + 1, 2)) * &a + int(m + 1) * &two_l3 * apow(&a, -m) * &sb;
    let e1 = (int(2 * m + 4) * &big_l + q(6 * m + 11, 2)) * &a
        + int(m + 1) * (int(2) * &big_l + int(7)) * apow(&a, -m) * &sb;

    let mut exponent = LaurentPoly::zero(base);
    for l in 1..=m {
        exponent.add_term((2 * l) as i32, q(-1, 2) * &sb / int(l) * c(m, l) * apow(&a, l - m - 1));
    }
    let tail = apow(&a, -m - 1) * &sb;
    let psi0 = WavefunctionForm {
        t_power: &big_l + &int(1),
        f_power: q(-1, 2) * (&big_l - &int(m) + q(3, 2) + &tail),
        prefactor: LaurentPoly::constant(1, base),
        exponent: exponent.clone(),
        f: f.clone(),
    };
    let psi1 = WavefunctionForm {
        t_power: &big_l + &int(1),
        f_power: q(-1, 2) * (&big_l + &int(m) + q(7, 2) + &tail),
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
        let inst = build_rho(1, 1, 1, 1).unwrap();
        let base = inst.base;
        assert_eq!(
            inst.v,
            LaurentPoly::from_terms(
                [(-2, Scalar::int(2)), (2, Scalar::ratio(-29, 4)), (4, Scalar::int(-2)), (6, Scalar::int(1))],
                base
            )
        );
        assert_eq!(inst.e0, Scalar::ratio(9, 2));
        assert_eq!(inst.e1, Scalar::ratio(65, 2));
        assert_eq!(inst.psi0.t_power, Scalar::int(2));
        // -(1/2)(L - m + 3/2 + 1) = -5/4
        assert_eq!(inst.psi0.f_power, Scalar::ratio(-5, 4));
        assert_eq!(inst.psi0.exponent, LaurentPoly::monomial(Scalar::ratio(-1, 2), 2, base));
    }

    #[test]
    fn rejects_small_l() {
        assert!(build_rho(1, 1, Scalar::ratio(-3, 4), 1).is_err());
        assert!(build_rho(1, 1, Scalar::ratio(-1, 2), 1).is_ok());
    }
}
