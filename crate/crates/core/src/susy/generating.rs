use serde::Serialize;

use super::SusyError;
use crate::scalar::Scalar;
use crate::symbolic::{divide_with_constant_remainder, DeformingFunction, LaurentPoly, SymbolicError};

/// `W+ = W' + W`, `W- = W' - W` and the gap `E1 - E0`, tied together by
/// `f dW+/dx = W+ W- + gap`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratingPair {
    pub wplus: LaurentPoly,
    pub wminus: LaurentPoly,
    pub gap: Scalar,
}

impl GeneratingPair {
    /// `f dW+/dx - W+ W- - gap`, identically zero for a consistent pair.
    pub fn defect(&self, f: &DeformingFunction) -> LaurentPoly {
        let base = self.wplus.base();
        f.poly() * &self.wplus.differentiate()
            - &self.wplus * &self.wminus
            - LaurentPoly::constant(self.gap.clone(), base)
    }
}

/// Recovers `W-` and the gap from a generating function `W+` by exact
/// division of `f dW+/dx` by `W+`.
pub fn generating_pair_from_wplus(
    wplus: &LaurentPoly,
    f: &DeformingFunction,
) -> Result<GeneratingPair, SusyError> {
    if wplus.is_zero() {
        return Err(SusyError::IncompatibleGenerator);
    }
    let g = f.poly() * &wplus.differentiate();
    let (wminus, gap) = match divide_with_constant_remainder(&g, wplus) {
        Ok(v) => v,
        Err(SymbolicError::NotDivisible) => return Err(SusyError::IncompatibleGenerator),
        Err(e) => return Err(e.into()),
    };
    if !gap.is_positive() {
        return Err(SusyError::NonPositiveGap(gap.to_f64()));
    }
    Ok(GeneratingPair { wplus: wplus.clone(), wminus, gap })
}

/// `(W, W') = ((W+ - W-)/2, (W+ + W-)/2)`.
pub fn superpotentials_from_generating(gp: &GeneratingPair) -> (LaurentPoly, LaurentPoly) {
    let half = Scalar::ratio(1, 2);
    let w = (&gp.wplus - &gp.wminus).scale(&half);
    let wprime = (&gp.wplus + &gp.wminus).scale(&half);
    (w, wprime)
}
