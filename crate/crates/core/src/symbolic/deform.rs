use serde::Serialize;

use super::base::{BaseCoordinate, BaseKind};
use super::laurent::LaurentPoly;
use super::SymbolicError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformShape {
    /// `1 + alpha t^2`
    Quadratic,
    /// `1 + alpha t`
    Linear,
    /// `f = 1`, the constant-mass limit.
    Unit,
}

/// The deforming function `f`, strictly positive on its domain. The mass is
/// `m(x) = 1 / f(x)^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformingFunction {
    shape: DeformShape,
    alpha: Scalar,
    #[serde(skip)]
    poly: LaurentPoly,
}

impl DeformingFunction {
    /// `1 + alpha x^2`, on the line or the half-line.
    pub fn quadratic(alpha: impl Into<Scalar>, base: BaseCoordinate) -> Result<Self, SymbolicError> {
        let alpha = alpha.into();
        check_alpha(&alpha)?;
        if base.kind() != BaseKind::Identity {
            return Err(SymbolicError::InvalidDeformation(
                "1 + alpha t^2 requires the identity base".into(),
            ));
        }
        let poly = LaurentPoly::from_terms([(0, Scalar::one()), (2, alpha.clone())], base);
        Ok(Self { shape: DeformShape::Quadratic, alpha, poly })
    }

    /// `1 + alpha x` on `(0, inf)`, or `1 + alpha exp(-x)` on the line.
    pub fn linear(alpha: impl Into<Scalar>, base: BaseCoordinate) -> Result<Self, SymbolicError> {
        let alpha = alpha.into();
        check_alpha(&alpha)?;
        if !base.t_positive() {
            return Err(SymbolicError::InvalidDeformation(
                "1 + alpha t is only positive where t > 0".into(),
            ));
        }
        let poly = LaurentPoly::from_terms([(0, Scalar::one()), (1, alpha.clone())], base);
        Ok(Self { shape: DeformShape::Linear, alpha, poly })
    }

    pub fn unit(base: BaseCoordinate) -> Self {
        Self { shape: DeformShape::Unit, alpha: Scalar::zero(), poly: LaurentPoly::constant(1, base) }
    }

    pub fn shape(&self) -> DeformShape {
        self.shape
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn base(&self) -> BaseCoordinate {
        self.poly.base()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    /// `df/dx`.
    pub fn derivative(&self) -> LaurentPoly {
        self.poly.differentiate()
    }
}

fn check_alpha(alpha: &Scalar) -> Result<(), SymbolicError> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(SymbolicError::InvalidDeformation(format!("alpha must be > 0, got {alpha}")))
    }
}
