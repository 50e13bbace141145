use serde::Serialize;

use super::{int, q, CatalogError};
use crate::scalar::Scalar;
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly};

/// The exactly solvable potential an extension family starts from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StartingKind {
    /// `omega^2 x^2 / 4` on the line, `f = 1 + alpha x^2`.
    Ho { omega: Scalar },
    /// `L(L+1)/x^2 + omega^2 x^2 / 4` on `(0, inf)`, `f = 1 + alpha x^2`.
    Rho { omega: Scalar, #[serde(rename = "L")] l: Scalar },
    /// `L(L+1)/x^2 - Q/x` on `(0, inf)`, `f = 1 + alpha x`.
    Kc { #[serde(rename = "Q")] q: Scalar, #[serde(rename = "L")] l: Scalar },
    /// `B^2 e^{-2x} - B(2A+1) e^{-x}` on the line, `f = 1 + alpha e^{-x}`.
    Morse { #[serde(rename = "A")] a: Scalar, #[serde(rename = "B")] b: Scalar },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartingPotential {
    #[serde(flatten)]
    pub kind: StartingKind,
    pub alpha: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelCount {
    Finite(u32),
    Infinite,
}

impl StartingPotential {
    /// Oscillator starts accept `alpha = 0` (the constant-mass limit); the
    /// Kepler-Coulomb and Morse starts need `alpha > 0`.
    pub fn new(kind: StartingKind, alpha: impl Into<Scalar>) -> Result<Self, CatalogError> {
        let alpha = alpha.into();
        let bad = |msg: &str| Err(CatalogError::InvalidParams(msg.to_string()));
        match &kind {
            StartingKind::Ho { omega } | StartingKind::Rho { omega, .. } => {
                if alpha.is_negative() {
                    return bad("alpha must be ≥ 0");
                }
                if !omega.is_positive() {
                    return bad("omega must be > 0");
                }
            }
            StartingKind::Kc { q, .. } => {
                if !alpha.is_positive() {
                    return bad("alpha must be > 0");
                }
                if !q.is_positive() {
                    return bad("Q must be > 0");
                }
            }
            StartingKind::Morse { a, b } => {
                if !alpha.is_positive() {
                    return bad("alpha must be > 0");
                }
                if !a.is_positive() || !b.is_positive() {
                    return bad("A and B must be > 0");
                }
            }
        }
        if let StartingKind::Rho { l, .. } | StartingKind::Kc { l, .. } = &kind {
            if *l < q(-1, 2) {
                return bad("L must be ≥ -1/2");
            }
        }
        Ok(Self { kind, alpha })
    }

    pub fn base(&self) -> BaseCoordinate {
        match self.kind {
            StartingKind::Ho { .. } => BaseCoordinate::line(),
            StartingKind::Rho { .. } | StartingKind::Kc { .. } => BaseCoordinate::half_line(),
            StartingKind::Morse { .. } => BaseCoordinate::exp_neg(),
        }
    }

    pub fn deforming_function(&self) -> DeformingFunction {
        let base = self.base();
        if self.alpha.is_zero() {
            return DeformingFunction::unit(base);
        }
        match self.kind {
            StartingKind::Ho { .. } | StartingKind::Rho { .. } => {
                DeformingFunction::quadratic(self.alpha.clone(), base)
            }
            StartingKind::Kc { .. } | StartingKind::Morse { .. } => {
                DeformingFunction::linear(self.alpha.clone(), base)
            }
        }
        .expect("alpha validated")
    }

    pub fn potential(&self) -> LaurentPoly {
        let base = self.base();
        match &self.kind {
            StartingKind::Ho { omega } => LaurentPoly::monomial(omega * omega * q(1, 4), 2, base),
            StartingKind::Rho { omega, l } => LaurentPoly::from_terms(
                [(-2, l * &(l + &int(1))), (2, omega * omega * q(1, 4))],
                base,
            ),
            StartingKind::Kc { q: big_q, l } => {
                LaurentPoly::from_terms([(-2, l * &(l + &int(1))), (-1, -big_q.clone())], base)
            }
            StartingKind::Morse { a, b } => LaurentPoly::from_terms(
                [(2, b * b), (1, -(b * &(int(2) * a + int(1))))],
                base,
            ),
        }
    }

    /// `Delta = sqrt(omega^2 + alpha^2)` for the oscillators and
    /// `sqrt(4B^2 + alpha^2)` for Morse.
    pub fn delta(&self) -> Option<Scalar> {
        let a2 = &self.alpha * &self.alpha;
        match &self.kind {
            StartingKind::Ho { omega } | StartingKind::Rho { omega, .. } => (omega * omega + a2).sqrt(),
            StartingKind::Morse { b, .. } => (int(4) * b * b + a2).sqrt(),
            StartingKind::Kc { .. } => None,
        }
    }

    /// `lambda` and `mu` of the Morse superpotential `lambda e^{-x} + mu`.
    fn morse_lambda_mu(&self) -> Option<(Scalar, Scalar)> {
        let StartingKind::Morse { a, b } = &self.kind else { return None };
        let lambda = q(-1, 2) * (&self.alpha + &self.delta()?);
        let mu = q(-1, 2) * (b * &(int(2) * a + int(1)) / &lambda + int(1));
        Some((lambda, mu))
    }

    fn level_exists(&self, n: u32) -> bool {
        let n = int(n as i64);
        match &self.kind {
            StartingKind::Ho { .. } | StartingKind::Rho { .. } => true,
            StartingKind::Kc { q: big_q, l } => {
                &n * &n + (l + &int(1)) * (int(2) * &n + int(1)) < big_q / &self.alpha
            }
            StartingKind::Morse { .. } => {
                let (lambda, mu) = self.morse_lambda_mu().expect("morse");
                let abs_l = lambda.abs();
                &n * &(int(2) * &abs_l + &n * &self.alpha) < int(2) * &abs_l * &mu
            }
        }
    }
}

/// Bound-state energy `E_n` of a starting potential.
pub fn es_energy(sp: &StartingPotential, n: u32) -> Result<Scalar, CatalogError> {
    if !sp.level_exists(n) {
        let n_max = match es_level_count(sp) {
            LevelCount::Finite(0) | LevelCount::Infinite => None,
            LevelCount::Finite(k) => Some(k - 1),
        };
        return Err(CatalogError::AboveNmax { n, n_max });
    }
    let a = &sp.alpha;
    let nn = int(n as i64);
    Ok(match &sp.kind {
        StartingKind::Ho { .. } => {
            let delta = sp.delta().expect("oscillator delta");
            (&nn + &q(1, 2)) * delta + (&nn * &nn + &nn + q(1, 2)) * a
        }
        StartingKind::Rho { l, .. } => {
            let delta = sp.delta().expect("oscillator delta");
            delta * (int(2) * &nn + l + q(3, 2))
                + a * &(int(2) * (&nn + l + int(1)) * (int(2) * &nn + int(1)) + q(1, 2))
        }
        StartingKind::Kc { q: big_q, l } => {
            let num = big_q - &(a * &(&nn * &nn + (l + &int(1)) * (int(2) * &nn + int(1))));
            let den = int(2) * (&nn + l + int(1));
            -(num / den).powi(2)
        }
        StartingKind::Morse { a: big_a, b } => {
            let delta = sp.delta().expect("morse delta");
            let num = int(2) * b * &(int(2) * big_a + int(1))
                - ((int(2) * &nn + int(1)) * &delta + (int(2) * &nn * &nn + int(2) * &nn + int(1)) * a);
            let den = &delta + &((int(2) * &nn + int(1)) * a);
            q(-1, 4) * (num / den).powi(2)
        }
    })
}

/// Number of bound states: infinite for the oscillators, `n_max + 1` for
/// Kepler-Coulomb and Morse (zero when even `n = 0` fails the window).
pub fn es_level_count(sp: &StartingPotential) -> LevelCount {
    match sp.kind {
        StartingKind::Ho { .. } | StartingKind::Rho { .. } => LevelCount::Infinite,
        _ => {
            let mut n = 0;
            while sp.level_exists(n) {
                n += 1;
            }
            LevelCount::Finite(n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_limits() {
        let sp = StartingPotential::new(StartingKind::Ho { omega: int(2) }, 0).unwrap();
        for n in 0..5 {
            assert_eq!(es_energy(&sp, n).unwrap(), int(2 * n as i64 + 1));
        }
        let sp = StartingPotential::new(StartingKind::Ho { omega: int(1) }, 1).unwrap();
        let e0 = es_energy(&sp, 0).unwrap().to_f64();
        assert!((e0 - (2f64.sqrt() + 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(es_level_count(&sp), LevelCount::Infinite);
    }

    #[test]
    fn kc_window() {
        let sp = StartingPotential::new(StartingKind::Kc { q: int(10), l: int(0) }, 1).unwrap();
        assert_eq!(es_level_count(&sp), LevelCount::Finite(3));
        assert!(es_energy(&sp, 2).is_ok());
        assert!(matches!(es_energy(&sp, 3), Err(CatalogError::AboveNmax { n: 3, n_max: Some(2) })));
    }

    #[test]
    fn morse_window() {
        // shallow well: 2|lambda| mu <= 2|lambda| + alpha leaves only n = 0
        let sp = StartingPotential::new(
            StartingKind::Morse { a: q(1, 2), b: int(1) },
            1,
        )
        .unwrap();
        assert_eq!(es_level_count(&sp), LevelCount::Finite(1));
        let deep = StartingPotential::new(StartingKind::Morse { a: int(10), b: int(2) }, 1).unwrap();
        match es_level_count(&deep) {
            LevelCount::Finite(k) => assert!(k > 1),
            LevelCount::Infinite => panic!(),
        }
    }
}
