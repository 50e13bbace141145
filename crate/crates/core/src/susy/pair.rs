use serde::Serialize;

use crate::scalar::Scalar;
use crate::symbolic::{DeformingFunction, LaurentPoly};

/// `V1 = W^2 - f dW/dx`, the rescaled potential `V - E0`.
pub fn riccati_v1(w: &LaurentPoly, f: &DeformingFunction) -> LaurentPoly {
    w * w - f.poly() * &w.differentiate()
}

/// `V2 = W^2 + f dW/dx`, the supersymmetric partner of [`riccati_v1`].
pub fn partner_v2(w: &LaurentPoly, f: &DeformingFunction) -> LaurentPoly {
    w * w + f.poly() * &w.differentiate()
}

/// Potential seen under BenDaniel-Duke ordering:
/// `V - f f''/2 - f'^2/4`.
pub fn effective_potential_bdd(v: &LaurentPoly, f: &DeformingFunction) -> LaurentPoly {
    let df = f.derivative();
    let ddf = df.differentiate();
    v - &(f.poly() * &ddf).scale(&Scalar::ratio(1, 2)) - (&df * &df).scale(&Scalar::ratio(1, 4))
}

/// A superpotential with its two partner potentials.
#[derive(Clone, Debug, Serialize)]
pub struct SusyPair {
    pub w: LaurentPoly,
    #[serde(skip)]
    pub f: DeformingFunction,
    pub v1: LaurentPoly,
    pub v2: LaurentPoly,
    pub e0: Scalar,
}

impl SusyPair {
    pub fn new(w: LaurentPoly, f: DeformingFunction, e0: Scalar) -> Self {
        let v1 = riccati_v1(&w, &f);
        let v2 = partner_v2(&w, &f);
        Self { w, f, v1, v2, e0 }
    }

    /// The unshifted potential `V = V1 + E0`.
    pub fn potential(&self) -> LaurentPoly {
        &self.v1 + &LaurentPoly::constant(self.e0.clone(), self.w.base())
    }
}
