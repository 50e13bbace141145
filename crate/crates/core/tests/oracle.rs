//! Oracle runs against closed-form spectra. Energies of the starting
//! potentials come from `es_energy`; tolerances come from convergence runs.

use pdmqes::catalog::{es_energy, es_level_count, FamilyParams, LevelCount, StartingKind, StartingPotential};
use pdmqes::oracle::{eigenvalues_at, solve, transform, OracleConfig};
use pdmqes::parallel::Execution;
use pdmqes::scalar::Scalar;

#[test]
fn deformed_linear_oscillator_six_levels() {
    let sp = StartingPotential::new(StartingKind::Ho { omega: Scalar::int(1) }, 1).unwrap();
    let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
    // the u-image has an inverse-square wall at both ends, so convergence is
    // slower than h^2 and the default mesh is not fine enough for 1e-5
    let r = solve(&tp, 6, &OracleConfig::with_n(32000)).unwrap();
    for n in 0..6 {
        let exact = es_energy(&sp, n as u32).unwrap().to_f64();
        let err = (r.richardson_estimate[n] - exact).abs();
        assert!(err < 1e-5, "level {n}: {} vs {exact}", r.richardson_estimate[n]);
    }
    assert_eq!(r.node_counts, vec![0, 1, 2, 3, 4, 5]);
    assert!(r.eigenvalues.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn rho_starting_levels() {
    let sp = StartingPotential::new(
        StartingKind::Rho { omega: Scalar::int(2), l: Scalar::int(1) },
        Scalar::ratio(1, 2),
    )
    .unwrap();
    let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
    let r = solve(&tp, 3, &OracleConfig::with_n(16000)).unwrap();
    for n in 0..3 {
        let exact = es_energy(&sp, n as u32).unwrap().to_f64();
        assert!((r.richardson_estimate[n] - exact).abs() < 1e-5 * exact.abs().max(1.0), "level {n}");
    }
}

#[test]
fn kc_and_morse_level_counts() {
    let cfg = OracleConfig::default();
    let kc = [(10, 0, Scalar::int(1)), (12, 1, Scalar::int(1)), (20, 2, Scalar::ratio(1, 2)), (8, 0, Scalar::ratio(1, 4))];
    for (q, l, alpha) in kc {
        let sp = StartingPotential::new(StartingKind::Kc { q: Scalar::int(q), l: Scalar::int(l) }, alpha).unwrap();
        let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
        let LevelCount::Finite(n) = es_level_count(&sp) else { panic!("finite") };
        assert_eq!(pdmqes::oracle::count_below(&tp, 0.0, &cfg).unwrap(), n as usize, "kc Q={q} L={l}");
    }
    for (a, b, alpha) in [(3, 2, 1), (5, 3, 1), (2, 1, 2)] {
        let sp = StartingPotential::new(StartingKind::Morse { a: Scalar::int(a), b: Scalar::int(b) }, alpha).unwrap();
        let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
        let LevelCount::Finite(n) = es_level_count(&sp) else { panic!("finite") };
        assert_eq!(pdmqes::oracle::count_below(&tp, 0.0, &cfg).unwrap(), n as usize, "morse A={a} B={b}");
    }
}

#[test]
fn kc_bound_levels_match() {
    let sp = StartingPotential::new(StartingKind::Kc { q: Scalar::int(20), l: Scalar::int(1) }, Scalar::ratio(1, 2)).unwrap();
    let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
    let r = solve(&tp, 2, &OracleConfig::with_n(8000)).unwrap();
    for n in 0..2 {
        let exact = es_energy(&sp, n as u32).unwrap().to_f64();
        assert!((r.richardson_estimate[n] - exact).abs() < 1e-5, "level {n}: {} vs {exact}", r.richardson_estimate[n]);
    }
}

#[test]
fn second_order_convergence_on_figure_instances() {
    for params in [
        FamilyParams::ho(1, 1, 1),
        FamilyParams::rho(1, 1, 1, 1),
        FamilyParams::kc(1, 1, 1, 1),
        FamilyParams::morse(1, 1, Scalar::ratio(3, 4), 1),
    ] {
        let inst = params.build().unwrap();
        let tp = solve(&transform(&inst.v, &inst.f).unwrap(), 2, &OracleConfig::default()).unwrap().problem;
        let e: Vec<Vec<f64>> = [1000, 2000, 4000]
            .iter()
            .map(|&n| eigenvalues_at(&tp, n, 2, Execution::default()))
            .collect();
        for k in 0..2 {
            let ratio = (e[0][k] - e[1][k]).abs() / (e[1][k] - e[2][k]).abs();
            assert!(ratio >= 3.5, "{:?} level {k}: ratio {ratio}", params.family);
        }
    }
}

#[test]
fn truncation_is_robust() {
    let inst = FamilyParams::morse(1, 1, Scalar::ratio(3, 4), 1).build().unwrap();
    let r = solve(&transform(&inst.v, &inst.f).unwrap(), 2, &OracleConfig::default()).unwrap();
    assert!(r.problem.is_truncated());
    assert!(r.truncation_shift.unwrap() < 1e-7);
}

#[test]
fn norm_is_preserved_by_the_map() {
    // int |psi|^2 dx = int |chi|^2 du for the catalog ground state
    let inst = FamilyParams::ho(1, 1, 1).build().unwrap();
    let tp = transform(&inst.v, &inst.f).unwrap();
    let n = 20000;
    let (a, b) = (tp.u_domain.0, tp.u_domain.1);
    let hu = (b - a) / n as f64;
    let in_u: f64 = (1..n)
        .map(|i| {
            let u = a + i as f64 * hu;
            let x = tp.x_of_u(u);
            let chi = inst.f.eval(x).sqrt() * inst.psi0.eval(x);
            chi * chi * hu
        })
        .sum();
    let hx = 20.0 / n as f64;
    let in_x: f64 = (1..n)
        .map(|i| {
            let x = -10.0 + i as f64 * hx;
            inst.psi0.eval(x).powi(2) * hx
        })
        .sum();
    assert!((in_u - in_x).abs() < 1e-8 * in_x, "{in_u} vs {in_x}");
}
