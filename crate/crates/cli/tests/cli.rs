use std::io::Write;
use std::process::{Command, Output};

fn pdmqes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdmqes")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn csv(o: &Output) -> Vec<(f64, f64)> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    lines
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

const HO: &[&str] = &["--family", "ho", "--m", "1", "--alpha", "1", "--Btop", "1"];
const RHO: &[&str] = &["--family", "rho", "--m", "1", "--alpha", "1", "--L", "1", "--Btop", "1"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn build_ho_figure() {
    let o = pdmqes(&with(&["build"], HO));
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["E0"], 0.0);
    assert_eq!(v["E1"], 3.0);
    assert_eq!(v["instance"]["V"], serde_json::json!({"2": "-3", "4": "-3", "6": "1"}));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn build_morse_figure() {
    let o = pdmqes(&["build", "--family", "morse", "--m", "1", "--alpha", "1", "--B2minus", "0.75", "--Btop", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["E0"], -16.25);
    assert_eq!(v["instance"]["E0"], "-65/4");
    assert_eq!(v["instance"]["Delta"], "2");
}

#[test]
fn invalid_parameters_exit_2() {
    let o = pdmqes(&["build", "--family", "ho", "--m", "0", "--alpha", "1", "--Btop", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m must be ≥ 1"));

    let o = pdmqes(&["build", "--family", "ho", "--m", "1", "--alpha", "-1", "--Btop", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must be > 0"));

    for args in [
        &["build", "--family", "ho", "--m", "1"][..],
        &["build", "--family", "kc", "--m", "1", "--alpha", "1", "--Btop", "1"],
        &["build", "--family", "nope", "--m", "1", "--alpha", "1", "--Btop", "1"],
        &["frobnicate"],
        &["verify"],
    ] {
        assert_eq!(pdmqes(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sample_ho_gauge() {
    let pot = csv(&pdmqes(&with(&["sample", "--what", "potential", "--from", "-1", "--to", "1", "--points", "5"], HO)));
    assert_eq!(pot.len(), 5);
    assert_eq!(pot[2], (0.0, 0.0));
    assert_eq!(pot[4], (1.0, -5.0));
    let psi0 = csv(&pdmqes(&with(&["sample", "--what", "psi0", "--from", "-1", "--to", "1", "--points", "5"], HO)));
    assert_eq!(psi0[2], (0.0, 1.0));
    assert_eq!(psi0[0].1, psi0[4].1);
}

#[test]
fn sample_rho_psi1_near_origin() {
    let s = csv(&pdmqes(&with(&["sample", "--what", "psi1", "--from", "0.0005", "--to", "0.004", "--points", "8"], RHO)));
    // x^(L+1) = x^2 leading behaviour
    for w in s.windows(2) {
        let slope = (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln();
        assert!((slope - 2.0).abs() < 0.02, "{slope}");
    }
}

#[test]
fn sample_rejects_out_of_domain_ranges() {
    let o = pdmqes(&with(&["sample", "--what", "psi0", "--from", "-1", "--to", "1"], RHO));
    assert_eq!(o.status.code(), Some(2));
    let o = pdmqes(&with(&["sample", "--what", "energy"], HO));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_figures() {
    let o = pdmqes(&["verify", "--all-figures"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("PASS").count(), 4 * 7);
    assert!(!text.contains("FAIL"));

    let v = json(&pdmqes(&["verify", "--all-figures", "--json"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_reports_kc_e0() {
    let o = pdmqes(&["verify", "--family", "kc", "--m", "1", "--alpha", "1", "--L", "1", "--Btop", "1", "--report-e0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("oracle E0 = -25.25"), "{text}");
    assert!(text.contains("-101/4") && text.contains("-99/4"));
    assert!(text.contains("E0 agrees with the closed form\n"), "{text}");

    let v = json(&pdmqes(&[
        "verify", "--family", "kc", "--m", "1", "--alpha", "1", "--L", "1", "--Btop", "1", "--report-e0", "--json",
    ]));
    let a = &v["instances"][0]["e0_arbitration"];
    assert_eq!(a["matched"], serde_json::json!(["closed form"]));
    assert_eq!(a["candidates"][1]["value"], "-99/4");
    assert_eq!(a["candidates"][1]["matches"], false);
}

#[test]
fn verify_from_spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("morse.json");
    std::fs::write(&good, r#"{"family": "morse", "m": 1, "alpha": 1, "B2minus": "3/4", "B_top": 1}"#).unwrap();
    let o = pdmqes(&["verify", "--spec", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let bad = dir.path().join("bad.json");
    let mut f = std::fs::File::create(&bad).unwrap();
    f.write_all(br#"{"family": "morse", "m": 1, "alpha": "#).unwrap();
    let o = pdmqes(&["verify", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(pdmqes(&["verify", "--spec", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_fails_with_exit_1() {
    // an unresolvably coarse mesh cannot reach 1e-5
    let o = pdmqes(&with(&["verify", "--n", "200"], HO));
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL oracle"));
}

#[test]
fn figures_list() {
    let o = pdmqes(&["figures", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("m=1")).count(), 4);
    let v = json(&pdmqes(&["figures", "list", "--json"]));
    assert_eq!(v["figures"][2]["caption_e0"], "-99/4");
    assert_eq!(v["figures"][2]["e0"], "-101/4");
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        with(&["build"], HO),
        with(&["build"], RHO),
        with(&["sample", "--what", "psi1", "--points", "301"], RHO),
        with(&["verify", "--all-figures", "--json"], &[]),
    ] {
        let (a, b) = (pdmqes(&args), pdmqes(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
