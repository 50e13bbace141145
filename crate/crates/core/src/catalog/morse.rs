use super::combinatorics::binomial as c;
use super::{apow, int, q, CatalogError, ClosedForm, FamilyInstance, FamilyParams};
use crate::scalar::Scalar;
use crate::susy::WavefunctionForm;
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly};

/// Extension of the Morse potential:
/// `V = B^2 e^{-2x} + B_{-1} e^{-x} + sum_{k=1}^{2m} B_k e^{kx}` on the line
/// with `f = 1 + alpha e^{-x}`. Everything is expressed in `t = e^{-x}`, so
/// `e^{kx}` is `t^{-k}` and a factor `exp(c x)` becomes `t^{-c}`.
///
/// `b_minus2` is `B^2` itself, which keeps `Delta = sqrt(4B^2 + alpha^2)`
/// rational whenever possible.
pub fn build_morse(
    m: u32,
    alpha: impl Into<Scalar>,
    b_minus2: impl Into<Scalar>,
    b_top: impl Into<Scalar>,
) -> Result<FamilyInstance, CatalogError> {
    let params = FamilyParams::morse(m, alpha, b_minus2, b_top);
    params.validate()?;

    let base = BaseCoordinate::exp_neg();
    let m = params.m as i64;
    let a = params.alpha.clone();
    let b2 = params.b_minus2.clone().expect("morse carries B2minus");
    let big_b = params.b_top.clone();
    let sb = big_b.sqrt().expect("B_top validated positive");
    let delta = (int(4) * &b2 + &a * &a).sqrt().expect("positive");
    let f = DeformingFunction::linear(a.clone(), base)?;
    let d_over_a = &delta / &a;

    let mut wplus = LaurentPoly::from_terms(
        [(1, -(int(2) * &a + &delta)), (0, -(int(m + 1) * (&d_over_a + &int(2))))],
        base,
    );
    for k in 1..=m {
        wplus.add_term(-k as i32, int(2) * &sb * c(m + 1, k + 1) * apow(&a, m - k));
    }
    let wminus = LaurentPoly::from_terms([(1, -a.clone()), (0, int(m))], base);

    let mut v = LaurentPoly::monomial(b2.clone(), 2, base);
    v.add_term(
        1,
        (&a + &delta) * (int(3 * m + 1) * &a + int(m + 1) * &delta) / (int(2) * &a),
    );
    v.add_term(
        -1,
        -(q(m * (m + 1) * (2 * m + 1), 3) * (int(3) * &a + &delta) * apow(&a, m - 2) * &sb),
    );
    for k in 2..=m {
        let lin = (int(k + 2) * c(m + 1, k + 2) + int(3 * m + k + 2) * c(m + 1, k + 1)) * &a
            + (c(m + 1, k + 2) + int(m + 1) * c(m + 1, k + 1)) * &delta;
        let quad = c(2 * m + 2, k + 2) - int(2) * c(m + 1, k + 2) - int(2 * (m + 1)) * c(m + 1, k + 1);
        v.add_term(-k as i32, -lin * apow(&a, m - k - 1) * &sb + quad * apow(&a, 2 * m - k) * &big_b);
    }
    for k in m + 1..=2 * m {
        v.add_term(-k as i32, c(2 * m + 2, k + 2) * apow(&a, 2 * m - k) * &big_b);
    }

    let mm1 = q(m * (m + 1), 2);
    let e0 = q(-1, 4) * (int(m + 1) * &d_over_a + int(3 * m + 2)).powi(2)
        + &mm1 * (int(2) * &a + &delta) * apow(&a, m - 1) * &sb;
    let e1 = q(-1, 4) * (int(m + 1) * &d_over_a + int(m + 2)).powi(2)
        + &mm1 * (int(6) * &a + &delta) * apow(&a, m - 1) * &sb;

    let mut exponent = LaurentPoly::zero(base);
    for l in 1..=m {
        exponent.add_term(-l as i32, -(&sb / int(l) * c(m, l) * apow(&a, m - l)));
    }
    let am_sb = apow(&a, m) * &sb;
    let x0 = q(1, 2) * (int(m + 1) * &d_over_a + int(3 * m + 2)) + int(m) * &am_sb;
    let x1 = q(1, 2) * (int(m + 1) * &d_over_a + int(m)) + int(m) * &am_sb;
    let mut p1 = LaurentPoly::from_terms(
        [(0, -(int(2) * &a + &delta)), (-1, -(int(m + 1) * (&d_over_a + &int(2))))],
        base,
    );
    for k in 2..=m + 1 {
        p1.add_term(-k as i32, int(2) * &sb * c(m + 1, k) * apow(&a, m + 1 - k));
    }
    let psi0 = WavefunctionForm {
        t_power: -x0,
        f_power: int(m) * (q(3, 2) + &d_over_a / int(2) + &am_sb),
        prefactor: LaurentPoly::constant(1, base),
        exponent: exponent.clone(),
        f: f.clone(),
    };
    let psi1 = WavefunctionForm {
        t_power: -x1,
        f_power: q(m, 2) - int(1) + int(m) * &d_over_a / int(2) + int(m) * &am_sb,
        prefactor: p1,
        exponent,
        f: f.clone(),
    };

    Ok(ClosedForm {
        params,
        delta: Some(delta),
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
