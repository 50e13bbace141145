use serde::Serialize;

use super::OracleError;
use crate::symbolic::{BaseKind, DeformShape, DeformingFunction, LaurentPoly, NumericLaurent};

/// Stand-in for potential values that overflow; far above any eigenvalue of
/// interest, still finite so the Sturm recurrences stay well defined.
const V_CLAMP: f64 = 1e250;

/// Closed-form change of variable `du = dx / f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum CoordinateMap {
    /// `f = 1`: `u = x`.
    Identity,
    /// `f = 1 + alpha x^2`: `u = arctan(sqrt(alpha) x) / sqrt(alpha)`.
    Arctan { alpha: f64 },
    /// `f = 1 + alpha x` on `(0, inf)`: `u = ln(1 + alpha x) / alpha`.
    Log { alpha: f64 },
    /// `f = 1 + alpha e^{-x}`: `u = ln(e^x + alpha)`.
    LogExp { alpha: f64 },
}

impl CoordinateMap {
    pub fn u_of_x(&self, x: f64) -> f64 {
        match *self {
            CoordinateMap::Identity => x,
            CoordinateMap::Arctan { alpha } => {
                let s = alpha.sqrt();
                (s * x).atan() / s
            }
            CoordinateMap::Log { alpha } => (alpha * x).ln_1p() / alpha,
            CoordinateMap::LogExp { alpha } => {
                let la = alpha.ln();
                if x > la {
                    x + (alpha * (-x).exp()).ln_1p()
                } else {
                    la + ((x - la).exp()).ln_1p()
                }
            }
        }
    }

    pub fn x_of_u(&self, u: f64) -> f64 {
        match *self {
            CoordinateMap::Identity => u,
            CoordinateMap::Arctan { alpha } => {
                let s = alpha.sqrt();
                (s * u).tan() / s
            }
            CoordinateMap::Log { alpha } => (alpha * u).exp_m1() / alpha,
            CoordinateMap::LogExp { alpha } => {
                let la = alpha.ln();
                la + (u - la).exp_m1().ln()
            }
        }
    }

    /// `dx/du = f(x(u))`.
    pub fn f_at_u(&self, u: f64) -> f64 {
        let x = self.x_of_u(u);
        match *self {
            CoordinateMap::Identity => 1.0,
            CoordinateMap::Arctan { alpha } => 1.0 + alpha * x * x,
            CoordinateMap::Log { alpha } => 1.0 + alpha * x,
            CoordinateMap::LogExp { alpha } => 1.0 + alpha * (-x).exp(),
        }
    }
}

/// How one end of the solved interval was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndKind {
    /// The natural end of the `u`-domain.
    Endpoint,
    /// Cut inside the classically forbidden region.
    Truncated,
    /// The potential never rises far enough above the reference energy; cut
    /// at a fixed distance from the well.
    Open,
}

/// Settings that decide where infinite or very long `u`-ends are cut.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationRule {
    /// A cut needs at least this WKB action `int sqrt(V - E) du` past the
    /// turning point.
    pub min_action: f64,
    pub cap_floor: f64,
    pub cap_factor: f64,
    /// Distance from the well used for [`EndKind::Open`] ends.
    pub open_span: f64,
}

impl Default for TruncationRule {
    fn default() -> Self {
        Self { min_action: 30.0, cap_floor: 1e3, cap_factor: 50.0, open_span: 400.0 }
    }
}

/// `-chi'' + V(x(u)) chi = E chi` on `(lower, upper)` with `chi = sqrt(f) psi`.
#[derive(Clone, Debug, Serialize)]
pub struct TransformedProblem {
    pub map: CoordinateMap,
    /// The natural `u`-domain, possibly with infinite ends.
    pub u_domain: (f64, f64),
    pub lower: f64,
    pub upper: f64,
    pub lower_kind: EndKind,
    pub upper_kind: EndKind,
    /// Reference energy the box was sized for.
    pub e_ref: f64,
    pub rule: TruncationRule,
    #[serde(skip)]
    v: NumericLaurent,
}

/// Maps the deformed equation to constant mass and sizes a box for energies
/// up to roughly the minimum of the potential. [`TransformedProblem::sized_for`]
/// resizes it for a higher reference energy.
pub fn transform(v: &LaurentPoly, f: &DeformingFunction) -> Result<TransformedProblem, OracleError> {
    let base = f.base();
    if v.base() != base {
        return Err(OracleError::UnsupportedDeformation(
            "potential and deforming function use different coordinates".into(),
        ));
    }
    let alpha = f.alpha().to_f64();
    let map = match (f.shape(), base.kind()) {
        (DeformShape::Unit, _) => CoordinateMap::Identity,
        (DeformShape::Quadratic, BaseKind::Identity) => CoordinateMap::Arctan { alpha },
        (DeformShape::Linear, BaseKind::Identity) if base.lower() == 0.0 => CoordinateMap::Log { alpha },
        (DeformShape::Linear, BaseKind::ExpNeg) => CoordinateMap::LogExp { alpha },
        (shape, kind) => {
            return Err(OracleError::UnsupportedDeformation(format!(
                "{shape:?} deformation on a {kind:?} base over ({}, {})",
                base.lower(),
                base.upper()
            )))
        }
    };
    let u_domain = (map.u_of_x(base.lower()), map.u_of_x(base.upper()));
    let mut tp = TransformedProblem {
        map,
        u_domain,
        lower: u_domain.0,
        upper: u_domain.1,
        lower_kind: EndKind::Endpoint,
        upper_kind: EndKind::Endpoint,
        e_ref: 0.0,
        rule: TruncationRule::default(),
        v: v.to_numeric(),
    };
    let (_, vmin) = tp.well();
    tp.resize(vmin + 1.0);
    Ok(tp)
}

impl TransformedProblem {
    pub fn x_of_u(&self, u: f64) -> f64 {
        self.map.x_of_u(u)
    }

    pub fn u_of_x(&self, x: f64) -> f64 {
        self.map.u_of_x(x)
    }

    /// `V(x(u))`, with overflow clamped to a huge positive value.
    pub fn potential(&self, u: f64) -> f64 {
        let v = self.v.eval(self.map.x_of_u(u));
        if v.is_nan() || v > V_CLAMP {
            V_CLAMP
        } else {
            v
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Interior points `lower + i h`, `i = 1..n-1`, of an `n`-interval mesh.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let h = self.width() / n as f64;
        (1..n).map(|i| self.lower + i as f64 * h).collect()
    }

    /// A copy with a different truncation rule, resized for the same energy.
    pub fn with_rule(&self, rule: TruncationRule) -> Self {
        let mut tp = self.clone();
        tp.rule = rule;
        tp.resize(self.e_ref);
        tp
    }

    /// A copy whose box is sized for eigenvalues up to `e_ref`.
    pub fn sized_for(&self, e_ref: f64) -> Self {
        let mut tp = self.clone();
        tp.resize(e_ref);
        tp
    }

    /// The box grown by `extra` on the cut ends, sharing the growth between
    /// them and stopping at natural endpoints.
    pub fn enlarged(&self, extra: f64) -> Self {
        let mut tp = self.clone();
        let grow_lo = self.lower_kind != EndKind::Endpoint;
        let grow_hi = self.upper_kind != EndKind::Endpoint;
        let ends = grow_lo as u8 + grow_hi as u8;
        if ends == 0 {
            return tp;
        }
        let extra = extra / ends as f64;
        if grow_lo {
            tp.lower = self.lower - extra;
            if tp.lower <= self.u_domain.0 {
                tp.lower = self.u_domain.0;
                tp.lower_kind = EndKind::Endpoint;
            }
        }
        if grow_hi {
            tp.upper = self.upper + extra;
            if tp.upper >= self.u_domain.1 {
                tp.upper = self.u_domain.1;
                tp.upper_kind = EndKind::Endpoint;
            }
        }
        tp
    }

    pub fn is_truncated(&self) -> bool {
        self.lower_kind != EndKind::Endpoint || self.upper_kind != EndKind::Endpoint
    }

    /// Location in `u` and value of the lowest sampled point of `V`.
    pub fn well(&self) -> (f64, f64) {
        let base = self.v.base();
        let xs: Vec<f64> = match (base.kind(), base.lower()) {
            (BaseKind::Identity, l) if l == 0.0 => (1..=6000).map(|i| i as f64 * 0.01).collect(),
            _ => (0..=6000).map(|i| -30.0 + i as f64 * 0.01).collect(),
        };
        let mut best = (self.map.u_of_x(xs[0]), f64::INFINITY);
        for x in xs {
            let u = self.map.u_of_x(x);
            if !(u > self.u_domain.0 && u < self.u_domain.1) {
                continue;
            }
            let v = self.potential(u);
            if v < best.1 {
                best = (u, v);
            }
        }
        best
    }

    /// Smallest potential value a long way out along the infinite ends, if
    /// there are any.
    pub fn far_potential(&self) -> Option<f64> {
        let (uc, _) = self.well();
        let span = self.rule.open_span;
        let mut far: Option<f64> = None;
        if self.u_domain.0 == f64::NEG_INFINITY {
            far = Some(self.potential(uc - span));
        }
        if self.u_domain.1 == f64::INFINITY {
            let v = self.potential(uc + span);
            far = Some(far.map_or(v, |f| f.min(v)));
        }
        far
    }

    fn resize(&mut self, e_ref: f64) {
        let (uc, _) = self.well();
        let (lo, lo_kind) = self.walk(uc, -1.0, e_ref);
        let (hi, hi_kind) = self.walk(uc, 1.0, e_ref);
        self.lower = lo;
        self.upper = hi;
        self.lower_kind = lo_kind;
        self.upper_kind = hi_kind;
        self.e_ref = e_ref;
    }

    /// Walks from the well towards one end, accumulating the WKB action above
    /// `e_ref`. The cut is placed once both the action and the potential are
    /// large, or the action alone is twice the minimum; ends reached first are kept, so centrifugal walls and other
    /// slowly integrable singularities keep their Dirichlet endpoint.
    fn walk(&self, uc: f64, dir: f64, e_ref: f64) -> (f64, EndKind) {
        let rule = self.rule;
        let cap = rule.cap_floor.max(rule.cap_factor * e_ref.abs());
        let end = if dir < 0.0 { self.u_domain.0 } else { self.u_domain.1 };
        let mut u = uc;
        let mut action = 0.0;
        for _ in 0..10_000_000 {
            let kin = (self.potential(u) - e_ref).max(0.0);
            let mut step = 0.05 / (1.0 + kin).sqrt();
            if end.is_finite() {
                let dist = (end - u).abs();
                if dist <= 1e-12 * (1.0 + end.abs()) {
                    return (end, EndKind::Endpoint);
                }
                step = step.min(0.25 * dist);
            } else if (u - uc).abs() >= rule.open_span {
                return (uc + dir * rule.open_span, EndKind::Open);
            }
            let next = u + dir * step;
            let v_next = self.potential(next);
            let mid = (self.potential(u + 0.5 * dir * step) - e_ref).max(0.0);
            action += mid.sqrt() * step;
            u = next;
            // tails that level off below the cap are cut on action alone
            if (action >= rule.min_action && v_next >= cap) || action >= 2.0 * rule.min_action {
                return (u, EndKind::Truncated);
            }
        }
        (u, EndKind::Truncated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::BaseCoordinate;
    use std::f64::consts::FRAC_PI_2;

    fn check_map(map: CoordinateMap, xs: &[f64], f: impl Fn(f64) -> f64) {
        for &x in xs {
            let u = map.u_of_x(x);
            assert!((map.x_of_u(u) - x).abs() < 1e-10 * (1.0 + x.abs()), "{map:?} at {x}");
            // du/dx * f = 1
            let h = 1e-5 * (1.0 + x.abs());
            let du = (map.u_of_x(x + h) - map.u_of_x(x - h)) / (2.0 * h);
            assert!((du * f(x) - 1.0).abs() < 1e-9, "{map:?} at {x}: {}", du * f(x));
            assert!((map.f_at_u(u) - f(x)).abs() < 1e-10 * f(x));
        }
    }

    #[test]
    fn closed_form_maps() {
        check_map(CoordinateMap::Arctan { alpha: 1.0 }, &[-3.0, -0.5, 0.0, 0.7, 4.0], |x| 1.0 + x * x);
        check_map(CoordinateMap::Log { alpha: 1.0 }, &[0.01, 0.5, 2.0, 9.0], |x| 1.0 + x);
        check_map(CoordinateMap::LogExp { alpha: 1.0 }, &[-6.0, -1.0, 0.0, 0.3, 5.0], |x| 1.0 + (-x).exp());
        check_map(CoordinateMap::LogExp { alpha: 2.5 }, &[-4.0, -0.2, 1.0, 7.0], |x| 1.0 + 2.5 * (-x).exp());
        let m = CoordinateMap::Arctan { alpha: 1.0 };
        assert!((m.x_of_u(0.3) - 0.3f64.tan()).abs() < 1e-15);
        let m = CoordinateMap::Log { alpha: 1.0 };
        assert!((m.x_of_u(0.4) - (0.4f64.exp() - 1.0)).abs() < 1e-15);
        let m = CoordinateMap::LogExp { alpha: 1.0 };
        assert!((m.x_of_u(0.9) - (0.9f64.exp() - 1.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn natural_domains() {
        let v = LaurentPoly::monomial(1, 2, BaseCoordinate::line());
        let tp = transform(&v, &DeformingFunction::quadratic(1, BaseCoordinate::line()).unwrap()).unwrap();
        assert!((tp.u_domain.0 + FRAC_PI_2).abs() < 1e-15 && (tp.u_domain.1 - FRAC_PI_2).abs() < 1e-15);

        let half = BaseCoordinate::half_line();
        let v = LaurentPoly::monomial(1, 2, half);
        let tp = transform(&v, &DeformingFunction::linear(1, half).unwrap()).unwrap();
        assert_eq!(tp.u_domain, (0.0, f64::INFINITY));
        assert_eq!(tp.lower_kind, EndKind::Endpoint);
        assert_eq!(tp.upper_kind, EndKind::Truncated);

        let e = BaseCoordinate::exp_neg();
        let v = LaurentPoly::from_terms([(-2, 1), (2, 1)], e);
        let tp = transform(&v, &DeformingFunction::linear(3, e).unwrap()).unwrap();
        assert!((tp.u_domain.0 - 3f64.ln()).abs() < 1e-15);
        assert_eq!(tp.lower_kind, EndKind::Endpoint);
    }

    #[test]
    fn unsupported_shapes() {
        let f = DeformingFunction::quadratic(1, BaseCoordinate::line()).unwrap();
        let v = LaurentPoly::monomial(1, 2, BaseCoordinate::exp_neg());
        assert!(matches!(transform(&v, &f), Err(OracleError::UnsupportedDeformation(_))));
    }

    #[test]
    fn long_finite_domain_is_cut() {
        // alpha = 1e-6 leaves u-ends near +-1571, far past where x^2 matters
        let line = BaseCoordinate::line();
        let f = DeformingFunction::quadratic(crate::scalar::Scalar::approx(1e-6), line).unwrap();
        let tp = transform(&LaurentPoly::monomial(1, 2, line), &f).unwrap().sized_for(12.0);
        assert_eq!(tp.lower_kind, EndKind::Truncated);
        assert!(tp.upper > 5.0 && tp.upper < 100.0, "{}", tp.upper);
    }
}
