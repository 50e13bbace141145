use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::SymbolicError;

/// How the expansion variable `t` of a Laurent polynomial relates to `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// `t = x`
    Identity,
    /// `t = exp(-x)`
    ExpNeg,
}

/// The coordinate `t(x)` together with the open interval `(lower, upper)` on
/// which `x` lives. Infinite endpoints are represented by `f64` infinities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaseCoordinate {
    kind: BaseKind,
    lower: f64,
    upper: f64,
}

impl BaseCoordinate {
    pub fn new(kind: BaseKind, lower: f64, upper: f64) -> Result<Self, SymbolicError> {
        let ok = match kind {
            BaseKind::Identity => {
                upper == f64::INFINITY && (lower == f64::NEG_INFINITY || lower == 0.0)
            }
            BaseKind::ExpNeg => lower == f64::NEG_INFINITY && upper == f64::INFINITY,
        };
        if !ok {
            return Err(SymbolicError::InvalidDomain { kind, lower, upper });
        }
        Ok(Self { kind, lower, upper })
    }

    /// `t = x` on the whole real line.
    pub fn line() -> Self {
        Self { kind: BaseKind::Identity, lower: f64::NEG_INFINITY, upper: f64::INFINITY }
    }

    /// `t = x` on `(0, inf)`.
    pub fn half_line() -> Self {
        Self { kind: BaseKind::Identity, lower: 0.0, upper: f64::INFINITY }
    }

    /// `t = exp(-x)` on the whole real line.
    pub fn exp_neg() -> Self {
        Self { kind: BaseKind::ExpNeg, lower: f64::NEG_INFINITY, upper: f64::INFINITY }
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    /// True when `t > 0` everywhere on the domain, which is what makes `ln t`
    /// and non-integer powers of `t` well defined.
    pub fn t_positive(&self) -> bool {
        match self.kind {
            BaseKind::Identity => self.lower >= 0.0,
            BaseKind::ExpNeg => true,
        }
    }

    pub fn t_of_x(&self, x: f64) -> f64 {
        match self.kind {
            BaseKind::Identity => x,
            BaseKind::ExpNeg => (-x).exp(),
        }
    }

    pub fn x_of_t(&self, t: f64) -> f64 {
        match self.kind {
            BaseKind::Identity => t,
            BaseKind::ExpNeg => -t.ln(),
        }
    }

    /// `dt/dx` evaluated at `x`: 1 for the identity base, `-t` for `t = exp(-x)`.
    pub fn chain_factor(&self, x: f64) -> f64 {
        match self.kind {
            BaseKind::Identity => 1.0,
            BaseKind::ExpNeg => -(-x).exp(),
        }
    }
}

fn endpoint(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

impl Serialize for BaseCoordinate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BaseCoordinate", 2)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("domain", &[endpoint(self.lower), endpoint(self.upper)])?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_rules() {
        assert!(BaseCoordinate::new(BaseKind::Identity, f64::NEG_INFINITY, f64::INFINITY).is_ok());
        assert!(BaseCoordinate::new(BaseKind::Identity, 0.0, f64::INFINITY).is_ok());
        assert!(BaseCoordinate::new(BaseKind::Identity, 1.0, f64::INFINITY).is_err());
        assert!(BaseCoordinate::new(BaseKind::ExpNeg, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn chain_factor_matches_finite_difference() {
        for base in [BaseCoordinate::line(), BaseCoordinate::exp_neg()] {
            for &x in &[-1.3, 0.2, 0.7, 2.5] {
                let h = 1e-5;
                let fd = (base.t_of_x(x + h) - base.t_of_x(x - h)) / (2.0 * h);
                let exact = base.chain_factor(x);
                assert!((fd - exact).abs() < 1e-8 * (1.0 + exact.abs()), "{base:?} at {x}");
            }
        }
    }
}
