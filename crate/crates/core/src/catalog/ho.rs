use super::combinatorics::double_factorial as dfac;
use super::{apow, int, q, CatalogError, ClosedForm, Family, FamilyInstance, FamilyParams};
use crate::scalar::Scalar;
use crate::susy::WavefunctionForm;
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly};

/// `S^{(m,k)}_{a,b}`, the double-factorial sum entering the HO coefficients.
pub fn ho_s_sum(m: i64, k: i64, a: i64, b: i64) -> Scalar {
    let top = dfac(2 * m + 1);
    let top2 = &top * &top;
    (a..=b)
        .map(|l| {
            let den = dfac(2 * l + 1) * dfac(2 * k - 2 * l - 1) * dfac(2 * m - 2 * l) * dfac(2 * m - 2 * k + 2 * l + 2);
            &top2 / &den
        })
        .sum()
}

/// Extension of the deformed oscillator: `V = sum_{k=1}^{2m+1} B_{2k} x^{2k}`
/// on the line with `f = 1 + alpha x^2`.
pub fn build_ho(m: u32, alpha: impl Into<Scalar>, b_top: impl Into<Scalar>) -> Result<FamilyInstance, CatalogError> {
    let params = FamilyParams::ho(m, alpha, b_top);
    params.validate()?;
    Ok(closed_form(params)?.assemble())
}

/// The same closed forms evaluated without the `m >= 1` check, so that the
/// `m = 0` reduction to the starting oscillator can be inspected.
pub fn build_ho_formal(m: u32, alpha: Scalar, b_top: Scalar) -> Result<FamilyInstance, CatalogError> {
    Ok(closed_form(FamilyParams::ho(m, alpha, b_top))?.assemble())
}

fn closed_form(params: FamilyParams) -> Result<ClosedForm, CatalogError> {
    let base = BaseCoordinate::line();
    let m = params.m as i64;
    let a = params.alpha.clone();
    let big_b = params.b_top.clone();
    let sb = big_b.sqrt().expect("B_top validated positive");
    let f = DeformingFunction::quadratic(a.clone(), base)?;

    let d = dfac(2 * m + 1) / dfac(2 * m);
    let half_m = q(2 * m + 1, 2);
    let ratio = |k: i64| dfac(2 * m + 1) / (dfac(2 * k + 1) * dfac(2 * m - 2 * k));

    let mut wplus = LaurentPoly::zero(base);
    let mut p1 = LaurentPoly::zero(base);
    for k in 0..=m {
        wplus.add_term((2 * k + 1) as i32, int(2) * &sb * ratio(k) * apow(&a, k - m));
        p1.add_term((2 * k + 1) as i32, ratio(k) * apow(&a, k));
    }
    let wminus = LaurentPoly::monomial(int(2 * m + 1) * &a, 1, base);

    let mut v = LaurentPoly::zero(base);
    v.add_term(
        2,
        &half_m * q(2 * m + 3, 2) * &a * &a - int(2 * (2 * m + 1)) * &d * apow(&a, 1 - m) * &sb
            + &d * &d * apow(&a, -2 * m) * &big_b,
    );
    let mut partner = LaurentPoly::zero(base);
    partner.add_term(2, q(2 * m - 1, 2) * &half_m * &a * &a + &d * &d * apow(&a, -2 * m) * &big_b);
    for k in 2..=m + 1 {
        let s = ho_s_sum(m, k, 0, k - 1) * apow(&a, k - 2 * m - 1) * &big_b;
        let lin = int(2 * (2 * m + 1)) * dfac(2 * m + 1) / (dfac(2 * k - 1) * dfac(2 * m - 2 * k + 2))
            * apow(&a, k - m)
            * &sb;
        v.add_term((2 * k) as i32, &s - &lin);
        partner.add_term((2 * k) as i32, s);
    }
    for k in m + 2..=2 * m + 1 {
        let s = ho_s_sum(m, k, k - m - 1, m) * apow(&a, k - 2 * m - 1) * &big_b;
        v.add_term((2 * k) as i32, s.clone());
        partner.add_term((2 * k) as i32, s);
    }

    let e0 = -&half_m * &a + &d * apow(&a, -m) * &sb;
    let e1 = -&half_m * &a + int(3) * &d * apow(&a, -m) * &sb;

    let c = dfac(2 * m - 1) / dfac(2 * m) * apow(&a, -m - 1) * &sb;
    let mut exponent = LaurentPoly::zero(base);
    for l in 1..=m {
        let coeff = q(-1, 2) * &sb * dfac(2 * m - 1) / (dfac(2 * l - 1) * dfac(2 * m - 2 * l)) * apow(&a, l - m - 1)
            / int(l);
        exponent.add_term((2 * l) as i32, coeff);
    }
    let psi0 = WavefunctionForm {
        t_power: Scalar::zero(),
        f_power: q(-1, 2) * (q(1, 2) - int(m) + &c),
        prefactor: LaurentPoly::constant(1, base),
        exponent: exponent.clone(),
        f: f.clone(),
    };
    let psi1 = WavefunctionForm {
        t_power: Scalar::zero(),
        f_power: q(-1, 2) * (q(3, 2) + int(m) + &c),
        prefactor: p1,
        exponent,
        f: f.clone(),
    };

    Ok(ClosedForm {
        params: FamilyParams { family: Family::Ho, ..params },
        delta: None,
        f,
        v,
        wplus,
        wminus,
        r: Some(e0.clone()),
        e0,
        e1,
        psi0,
        psi1,
        partner_coeffs: Some(partner),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_unit_instance() {
        let inst = build_ho(1, 1, 1).unwrap();
        let base = inst.base;
        assert_eq!(inst.v, LaurentPoly::from_terms([(2, -3), (4, -3), (6, 1)], base));
        assert_eq!(inst.e0, Scalar::zero());
        assert_eq!(inst.e1, Scalar::int(3));
        assert_eq!(inst.w, LaurentPoly::monomial(1, 3, base));
        assert_eq!(inst.wminus, LaurentPoly::monomial(3, 1, base));
        assert_eq!(inst.psi0.f_power, Scalar::zero());
        assert_eq!(inst.psi1.f_power, Scalar::ratio(-3, 2));
    }

    #[test]
    fn m2_unit_instance() {
        let inst = build_ho(2, 1, 1).unwrap();
        let base = inst.base;
        let expected = LaurentPoly::from_terms(
            [
                (10, Scalar::int(1)),
                (8, Scalar::int(5)),
                (4, Scalar::ratio(-125, 8)),
                (2, Scalar::ratio(-415, 64)),
            ],
            base,
        );
        assert_eq!(inst.v, expected);
        assert_eq!(inst.e0, Scalar::ratio(-5, 8));
        assert_eq!(inst.e1, Scalar::ratio(25, 8));
        assert_eq!(
            inst.psi1.prefactor,
            LaurentPoly::from_terms([(1, 15), (3, 20), (5, 8)], base).scale(&Scalar::ratio(1, 8))
        );
    }

    #[test]
    fn gap_formula() {
        let inst = build_ho(1, 1, 4).unwrap();
        assert_eq!(inst.gap(), Scalar::int(6));
    }

    #[test]
    fn m0_reduces_to_starting_oscillator() {
        use crate::catalog::{es_energy, StartingKind, StartingPotential};
        for (alpha, b) in [(Scalar::int(1), Scalar::int(4)), (Scalar::ratio(1, 2), Scalar::ratio(9, 4))] {
            let inst = build_ho_formal(0, alpha.clone(), b).unwrap();
            assert_eq!(inst.v.len(), 1);
            let omega = (Scalar::int(4) * inst.v.coeff(2)).sqrt().unwrap();
            let sp = StartingPotential::new(StartingKind::Ho { omega }, alpha).unwrap();
            assert!(inst.e0.approx_eq(&es_energy(&sp, 0).unwrap(), 1e-14));
            assert!(inst.e1.approx_eq(&es_energy(&sp, 1).unwrap(), 1e-14));
        }
    }

    #[test]
    fn rejects_m0() {
        let err = build_ho(0, 1, 1).unwrap_err();
        assert!(err.to_string().contains("m must be ≥ 1"));
        assert!(build_ho(1, -1, 1).is_err());
        assert!(build_ho(1, 1, 0).is_err());
    }
}
