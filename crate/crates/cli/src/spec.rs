use std::path::Path;

use pdmqes::catalog::{Family, FamilyParams};
use pdmqes::scalar::Scalar;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// The parameters of one instance, as read from and written to spec files.
/// Numbers may be written as JSON numbers or as strings such as `"3/4"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    pub m: u32,
    pub alpha: Scalar,
    #[serde(rename = "B_top")]
    pub b_top: Scalar,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Scalar>,
    #[serde(rename = "B2minus", default, skip_serializing_if = "Option::is_none")]
    pub b_minus2: Option<Scalar>,
}

/// Instance flags as given on the command line, before validation.
#[derive(Clone, Debug, Default)]
pub struct InstanceFlags {
    pub spec: Option<String>,
    pub family: Option<String>,
    pub m: Option<u32>,
    pub alpha: Option<String>,
    pub b_top: Option<String>,
    pub l: Option<String>,
    pub b_minus2: Option<String>,
}

impl InstanceFlags {
    pub fn is_empty(&self) -> bool {
        self.spec.is_none()
            && self.family.is_none()
            && self.m.is_none()
            && self.alpha.is_none()
            && self.b_top.is_none()
            && self.l.is_none()
            && self.b_minus2.is_none()
    }

    /// A spec file, or the individual flags; not both.
    pub fn resolve(&self) -> Result<InstanceSpec, CliError> {
        if let Some(path) = &self.spec {
            let others = InstanceFlags { spec: None, ..self.clone() };
            if !others.is_empty() {
                return Err(CliError::Usage("--spec cannot be combined with instance flags".into()));
            }
            return InstanceSpec::read(Path::new(path));
        }
        let need = |v: &Option<String>, flag: &str| {
            v.clone().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
        };
        let family: Family = need(&self.family, "family")?.parse()?;
        let m = self.m.ok_or_else(|| CliError::Usage("missing --m".into()))?;
        let num = |s: String, flag: &str| {
            s.parse::<Scalar>()
                .map_err(|_| CliError::Usage(format!("--{flag}: `{s}` is not a number")))
        };
        let alpha = num(need(&self.alpha, "alpha")?, "alpha")?;
        let b_top = num(need(&self.b_top, "Btop")?, "Btop")?;
        let l = self.l.clone().map(|s| num(s, "L")).transpose()?;
        let b_minus2 = self.b_minus2.clone().map(|s| num(s, "B2minus")).transpose()?;
        let spec = InstanceSpec { family, m, alpha, b_top, l, b_minus2 };
        spec.check_flags()?;
        Ok(spec)
    }
}

impl InstanceSpec {
    pub fn from_params(p: &FamilyParams) -> Self {
        Self {
            family: p.family,
            m: p.m,
            alpha: p.alpha.clone(),
            b_top: p.b_top.clone(),
            l: p.l.clone(),
            b_minus2: p.b_minus2.clone(),
        }
    }

    pub fn params(&self) -> FamilyParams {
        FamilyParams {
            family: self.family,
            m: self.m,
            alpha: self.alpha.clone(),
            b_top: self.b_top.clone(),
            l: self.l.clone(),
            b_minus2: self.b_minus2.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let spec: InstanceSpec = serde_json::from_str(text).map_err(|e| CliError::SpecFile(e.to_string()))?;
        spec.check_flags()?;
        Ok(spec)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// `L` belongs to RHO/KC and `B2minus` to Morse only.
    fn check_flags(&self) -> Result<(), CliError> {
        let radial = matches!(self.family, Family::Rho | Family::Kc);
        if radial != self.l.is_some() {
            let msg = if radial { "requires L" } else { "does not take L" };
            return Err(CliError::Usage(format!("{} family {msg}", self.family)));
        }
        let morse = self.family == Family::Morse;
        if morse != self.b_minus2.is_some() {
            let msg = if morse { "requires B2minus" } else { "does not take B2minus" };
            return Err(CliError::Usage(format!("{} family {msg}", self.family)));
        }
        Ok(())
    }

    /// `family m=.. alpha=.. ...` for report headers.
    pub fn label(&self) -> String {
        let mut s = format!("{} m={} alpha={} B_top={}", self.family, self.m, self.alpha, self.b_top);
        if let Some(l) = &self.l {
            s.push_str(&format!(" L={l}"));
        }
        if let Some(b) = &self.b_minus2 {
            s.push_str(&format!(" B2minus={b}"));
        }
        s
    }
}
