use std::fmt::Write as _;
use std::str::FromStr;

use pdmqes::catalog::{Family, FamilyInstance};
use serde::Serialize;
use serde_json::json;

use crate::figures;
use crate::format::sig12;
use crate::spec::InstanceSpec;
use crate::suite::{round_floats, verify_all, SuiteOptions, VerifyReport};
use crate::{CliError, SCHEMA_VERSION};

pub fn instance(spec: &InstanceSpec) -> Result<FamilyInstance, CliError> {
    Ok(spec.params().build()?)
}

/// The full instance as JSON, with the energies also given as numbers.
pub fn build(spec: &InstanceSpec) -> Result<String, CliError> {
    let inst = instance(spec)?;
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "E0": inst.e0.to_f64(),
        "E1": inst.e1.to_f64(),
        "gap": inst.gap().to_f64(),
        "instance": inst,
    });
    round_floats(&mut doc);
    Ok(serde_json::to_string_pretty(&doc).expect("instance serializes") + "\n")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Potential,
    Psi0,
    Psi1,
    Wplus,
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "potential" => Ok(Quantity::Potential),
            "psi0" => Ok(Quantity::Psi0),
            "psi1" => Ok(Quantity::Psi1),
            "wplus" => Ok(Quantity::Wplus),
            _ => Err(CliError::Usage(format!("unknown quantity `{s}` (potential, psi0, psi1, wplus)"))),
        }
    }
}

/// The gauge point where `psi0` is set to 1.
pub fn reference_point(family: Family) -> f64 {
    match family {
        Family::Ho | Family::Morse => 0.0,
        Family::Rho | Family::Kc => 1.0,
    }
}

pub fn default_range(family: Family) -> (f64, f64) {
    match family {
        Family::Ho | Family::Morse => (-3.0, 3.0),
        Family::Rho | Family::Kc => (0.02, 5.0),
    }
}

/// `points` evenly spaced values on `[from, to]` as `x,value` CSV.
///
/// Wavefunctions are unnormalized: `psi0` is 1 at [`reference_point`] and
/// `psi1` is divided by its largest-magnitude sample, keeping its sign.
pub fn sample(
    spec: &InstanceSpec,
    what: Quantity,
    range: Option<(f64, f64)>,
    points: usize,
) -> Result<String, CliError> {
    let inst = instance(spec)?;
    let (from, to) = range.unwrap_or_else(|| default_range(spec.family));
    let base = inst.f.base();
    if !(from < to) || !base.contains(from) || !base.contains(to) {
        return Err(CliError::Usage(format!(
            "range [{from}, {to}] must be increasing and inside the domain ({}, {})",
            base.lower(),
            base.upper()
        )));
    }
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let xs: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { to } else { from + (to - from) * i as f64 / (points - 1) as f64 })
        .collect();
    let values: Vec<f64> = match what {
        Quantity::Potential => xs.iter().map(|&x| inst.v.eval(x)).collect(),
        Quantity::Wplus => xs.iter().map(|&x| inst.wplus.eval(x)).collect(),
        Quantity::Psi0 => {
            let r = inst.psi0.log_eval(reference_point(spec.family));
            xs.iter()
                .map(|&x| {
                    let l = inst.psi0.log_eval(x);
                    (l.sign * r.sign) as f64 * (l.ln_abs - r.ln_abs).exp()
                })
                .collect()
        }
        Quantity::Psi1 => {
            let logs: Vec<_> = xs.iter().map(|&x| inst.psi1.log_eval(x)).collect();
            let top = logs
                .iter()
                .filter(|l| l.sign != 0)
                .max_by(|a, b| a.ln_abs.total_cmp(&b.ln_abs))
                .copied()
                .ok_or_else(|| CliError::Usage("psi1 vanishes on the whole range".into()))?;
            logs.iter().map(|l| (l.sign * top.sign) as f64 * (l.ln_abs - top.ln_abs).exp()).collect()
        }
    };
    let mut out = String::from("x,value\n");
    for (x, v) in xs.iter().zip(values) {
        writeln!(out, "{},{}", sig12(*x), sig12(v)).unwrap();
    }
    Ok(out)
}

pub fn figure_specs() -> Vec<InstanceSpec> {
    figures::all().iter().map(|f| InstanceSpec::from_params(&f.params)).collect()
}

pub fn verify(specs: &[InstanceSpec], opts: &SuiteOptions) -> Result<VerifyReport, CliError> {
    let items = specs
        .iter()
        .map(|s| Ok((s.clone(), instance(s)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(verify_all(&items, opts))
}

#[derive(Serialize)]
struct FigureRow {
    name: &'static str,
    figures: [u8; 2],
    instance: InstanceSpec,
    caption_e0: String,
    caption_e1: String,
    e0: String,
    e1: String,
}

pub fn figures_list(as_json: bool) -> Result<String, CliError> {
    let rows: Vec<FigureRow> = figures::all()
        .into_iter()
        .map(|f| {
            let inst = f.params.build()?;
            Ok(FigureRow {
                name: f.name,
                figures: [f.figures.0, f.figures.1],
                instance: InstanceSpec::from_params(&f.params),
                caption_e0: f.caption_e0.to_string(),
                caption_e1: f.caption_e1.to_string(),
                e0: inst.e0.to_string(),
                e1: inst.e1.to_string(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    if as_json {
        let doc = json!({ "schema_version": SCHEMA_VERSION, "figures": rows });
        return Ok(serde_json::to_string_pretty(&doc).expect("figures serialize") + "\n");
    }
    let mut out = format!("{:<6} {:<5} {:<44} {:>14} {:>14}\n", "name", "figs", "instance", "E0", "E1");
    for r in rows {
        let e0 = if r.e0 == r.caption_e0 { r.e0 } else { format!("{} [{}]", r.e0, r.caption_e0) };
        writeln!(
            out,
            "{:<6} {:<5} {:<44} {:>14} {:>14}",
            r.name,
            format!("{},{}", r.figures[0], r.figures[1]),
            r.instance.label(),
            e0,
            r.e1
        )
        .unwrap();
    }
    out.push_str("bracketed values are the caption's where it differs from the closed form\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::round12;
    use pdmqes::catalog::FamilyParams;

    fn spec(p: FamilyParams) -> InstanceSpec {
        InstanceSpec::from_params(&p)
    }

    fn column(csv: &str) -> Vec<(f64, f64)> {
        csv.lines()
            .skip(1)
            .map(|l| {
                let (x, v) = l.split_once(',').unwrap();
                (x.parse().unwrap(), v.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn build_reports_energies() {
        let out = build(&spec(FamilyParams::ho(1, 1, 1))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["E0"], 0.0);
        assert_eq!(v["E1"], 3.0);
        assert_eq!(v["instance"]["E1"], "3");
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
    }

    #[test]
    fn gauges() {
        let ho = spec(FamilyParams::ho(1, 1, 1));
        let pot = column(&sample(&ho, Quantity::Potential, Some((-1.0, 1.0)), 3).unwrap());
        assert_eq!(pot[1], (0.0, 0.0));
        let psi0 = column(&sample(&ho, Quantity::Psi0, Some((-1.0, 1.0)), 3).unwrap());
        assert_eq!(psi0[1], (0.0, 1.0));
        let psi1 = column(&sample(&ho, Quantity::Psi1, None, 201).unwrap());
        let top = psi1.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        assert_eq!(top, 1.0);
        assert!(psi1.iter().any(|p| p.1 == 1.0));
    }

    #[test]
    fn rho_psi1_starts_like_x_squared() {
        let rho = spec(FamilyParams::rho(1, 1, 1, 1));
        let s = column(&sample(&rho, Quantity::Psi1, Some((1e-3, 2e-3)), 2).unwrap());
        let ratio = s[1].1 / s[0].1;
        assert!((ratio - 4.0).abs() < 1e-2, "{ratio}");
    }

    #[test]
    fn range_must_lie_in_the_domain() {
        let kc = spec(FamilyParams::kc(1, 1, 1, 1));
        assert!(matches!(sample(&kc, Quantity::Psi0, Some((-1.0, 1.0)), 10), Err(CliError::Usage(_))));
        assert!(matches!(sample(&kc, Quantity::Psi0, Some((2.0, 1.0)), 10), Err(CliError::Usage(_))));
    }

    #[test]
    fn figure_table() {
        let text = figures_list(false).unwrap();
        assert!(text.contains("-101/4 [-99/4]"));
        let v: serde_json::Value = serde_json::from_str(&figures_list(true).unwrap()).unwrap();
        assert_eq!(v["figures"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn rounding_keeps_exact_energies() {
        assert_eq!(round12(-65.0 / 4.0), -16.25);
    }
}
