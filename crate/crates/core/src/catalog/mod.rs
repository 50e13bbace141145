//! Closed-form extension families of the harmonic oscillator (HO), radial
//! oscillator (RHO), Kepler-Coulomb (KC) and Morse potentials, together with
//! the exactly solvable starting potentials they extend.

mod combinatorics;
mod ho;
mod kc;
mod morse;
mod rho;
mod starting;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use combinatorics::{binomial, double_factorial};
pub use ho::{build_ho, build_ho_formal, ho_s_sum};
pub use kc::build_kc;
pub use morse::build_morse;
pub use rho::build_rho;
pub use starting::{es_energy, es_level_count, LevelCount, StartingKind, StartingPotential};

use crate::scalar::Scalar;
use crate::susy::{
    partner_v2, superpotentials_from_generating, GeneratingPair, SusyPair, WavefunctionForm,
};
use crate::symbolic::{BaseCoordinate, DeformingFunction, LaurentPoly, SymbolicError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("level n = {n} lies above n_max = {n_max:?}")]
    AboveNmax { n: u32, n_max: Option<u32> },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ho,
    Rho,
    Kc,
    Morse,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Ho, Family::Rho, Family::Kc, Family::Morse];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ho => "ho",
            Family::Rho => "rho",
            Family::Kc => "kc",
            Family::Morse => "morse",
        }
    }

    /// Index of the highest potential coefficient, the free scale `B_top`.
    pub fn top_index(self, m: u32) -> u32 {
        match self {
            Family::Ho | Family::Rho => 4 * m + 2,
            Family::Kc | Family::Morse => 2 * m,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ho" => Ok(Family::Ho),
            "rho" => Ok(Family::Rho),
            "kc" => Ok(Family::Kc),
            "morse" | "m" => Ok(Family::Morse),
            other => Err(CatalogError::InvalidParams(format!("unknown family `{other}`"))),
        }
    }
}

/// The free parameters of an extension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyParams {
    pub family: Family,
    pub m: u32,
    pub alpha: Scalar,
    #[serde(rename = "B_top")]
    pub b_top: Scalar,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<Scalar>,
    /// `B_{-2} = B^2` of the Morse family.
    #[serde(rename = "B2minus", skip_serializing_if = "Option::is_none")]
    pub b_minus2: Option<Scalar>,
}

impl FamilyParams {
    pub fn ho(m: u32, alpha: impl Into<Scalar>, b_top: impl Into<Scalar>) -> Self {
        Self { family: Family::Ho, m, alpha: alpha.into(), b_top: b_top.into(), l: None, b_minus2: None }
    }

    pub fn rho(m: u32, alpha: impl Into<Scalar>, l: impl Into<Scalar>, b_top: impl Into<Scalar>) -> Self {
        Self {
            family: Family::Rho,
            m,
            alpha: alpha.into(),
            b_top: b_top.into(),
            l: Some(l.into()),
            b_minus2: None,
        }
    }

    pub fn kc(m: u32, alpha: impl Into<Scalar>, l: impl Into<Scalar>, b_top: impl Into<Scalar>) -> Self {
        Self { family: Family::Kc, ..Self::rho(m, alpha, l, b_top) }
    }

    pub fn morse(
        m: u32,
        alpha: impl Into<Scalar>,
        b_minus2: impl Into<Scalar>,
        b_top: impl Into<Scalar>,
    ) -> Self {
        Self {
            family: Family::Morse,
            m,
            alpha: alpha.into(),
            b_top: b_top.into(),
            l: None,
            b_minus2: Some(b_minus2.into()),
        }
    }

    pub fn build(&self) -> Result<FamilyInstance, CatalogError> {
        let need = |v: &Option<Scalar>, name: &str| {
            v.clone().ok_or_else(|| {
                CatalogError::InvalidParams(format!("{} family requires {name}", self.family))
            })
        };
        match self.family {
            Family::Ho => build_ho(self.m, self.alpha.clone(), self.b_top.clone()),
            Family::Rho => build_rho(self.m, self.alpha.clone(), need(&self.l, "L")?, self.b_top.clone()),
            Family::Kc => build_kc(self.m, self.alpha.clone(), need(&self.l, "L")?, self.b_top.clone()),
            Family::Morse => build_morse(
                self.m,
                self.alpha.clone(),
                need(&self.b_minus2, "B2minus")?,
                self.b_top.clone(),
            ),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: &str| Err(CatalogError::InvalidParams(msg.to_string()));
        if self.m < 1 {
            return bad("m must be ≥ 1");
        }
        if !self.alpha.is_positive() {
            return bad("alpha must be > 0");
        }
        if !self.b_top.is_positive() {
            return bad("B_top must be > 0");
        }
        if let Some(l) = &self.l {
            if *l < Scalar::ratio(-1, 2) {
                return bad("L must be ≥ -1/2");
            }
        }
        if let Some(b) = &self.b_minus2 {
            if !b.is_positive() {
                return bad("B2minus must be > 0");
            }
        }
        Ok(())
    }
}

/// `L = l + (d - 3)/2` from the angular momentum `l` in `d` dimensions.
pub fn effective_l(l: u32, d: u32) -> Scalar {
    Scalar::int(l as i64) + Scalar::ratio(d as i64 - 3, 2)
}

/// A fully parameterized extension `V^(m)` with its superpotentials, energies
/// and lowest two wavefunctions.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInstance {
    #[serde(flatten)]
    pub params: FamilyParams,
    #[serde(rename = "Delta", skip_serializing_if = "Option::is_none")]
    pub delta: Option<Scalar>,
    pub f: DeformingFunction,
    pub base: BaseCoordinate,
    #[serde(rename = "V")]
    pub v: LaurentPoly,
    #[serde(rename = "W")]
    pub w: LaurentPoly,
    #[serde(rename = "Wprime")]
    pub wprime: LaurentPoly,
    #[serde(rename = "Wplus")]
    pub wplus: LaurentPoly,
    #[serde(rename = "Wminus")]
    pub wminus: LaurentPoly,
    #[serde(rename = "E0")]
    pub e0: Scalar,
    #[serde(rename = "E1")]
    pub e1: Scalar,
    pub psi0: WavefunctionForm,
    pub psi1: WavefunctionForm,
    /// `B'_{2k}` of the partner `V2 = sum B'_{2k} t^{2k} + R`; HO only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner_coeffs: Option<LaurentPoly>,
    #[serde(rename = "R")]
    pub r: Scalar,
}

impl FamilyInstance {
    pub fn family(&self) -> Family {
        self.params.family
    }

    pub fn gap(&self) -> Scalar {
        &self.e1 - &self.e0
    }

    pub fn susy_pair(&self) -> SusyPair {
        SusyPair::new(self.w.clone(), self.f.clone(), self.e0.clone())
    }

    pub fn generating_pair(&self) -> GeneratingPair {
        GeneratingPair { wplus: self.wplus.clone(), wminus: self.wminus.clone(), gap: self.gap() }
    }
}

/// Pieces every family supplies in closed form; the rest is derived.
struct ClosedForm {
    params: FamilyParams,
    delta: Option<Scalar>,
    f: DeformingFunction,
    v: LaurentPoly,
    wplus: LaurentPoly,
    wminus: LaurentPoly,
    e0: Scalar,
    e1: Scalar,
    psi0: WavefunctionForm,
    psi1: WavefunctionForm,
    partner_coeffs: Option<LaurentPoly>,
    r: Option<Scalar>,
}

impl ClosedForm {
    fn assemble(self) -> FamilyInstance {
        let gp = GeneratingPair { wplus: self.wplus, wminus: self.wminus, gap: &self.e1 - &self.e0 };
        let (w, wprime) = superpotentials_from_generating(&gp);
        let r = self.r.unwrap_or_else(|| partner_v2(&w, &self.f).coeff(0));
        FamilyInstance {
            params: self.params,
            delta: self.delta,
            base: self.f.base(),
            f: self.f,
            v: self.v,
            w,
            wprime,
            wplus: gp.wplus,
            wminus: gp.wminus,
            e0: self.e0,
            e1: self.e1,
            psi0: self.psi0,
            psi1: self.psi1,
            partner_coeffs: self.partner_coeffs,
            r,
        }
    }
}

/// `alpha^k` for any integer `k`.
fn apow(alpha: &Scalar, k: i64) -> Scalar {
    alpha.powi(k as i32)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}
