//! Laurent polynomials in a base coordinate `t(x)` and the small amount of
//! calculus the supersymmetric construction needs: differentiation in `x`,
//! division with a constant remainder, and integration of `g/f`.

mod base;
mod deform;
mod division;
mod integrate;
mod laurent;

pub use base::{BaseCoordinate, BaseKind};
pub use deform::{DeformShape, DeformingFunction};
pub use division::divide_with_constant_remainder;
pub use integrate::{integrate_over_f, AntiderivativeForm};
pub use laurent::{LaurentPoly, NumericLaurent};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolicError {
    #[error("invalid domain ({lower}, {upper}) for base {kind:?}")]
    InvalidDomain { kind: BaseKind, lower: f64, upper: f64 },
    #[error("invalid deforming function: {0}")]
    InvalidDeformation(String),
    #[error("no decomposition g = q d + c with constant c exists")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("integral is not of the form a ln f + b ln t + polynomial: {0}")]
    NonElementary(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// `d/dx` of a Laurent polynomial. Free-function alias of
/// [`LaurentPoly::differentiate`].
pub fn differentiate(p: &LaurentPoly) -> LaurentPoly {
    p.differentiate()
}
