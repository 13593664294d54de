use photon_bell::fiber_transfer::{
    build_fiber, exact_evolution, pole_depletion, quantization_roots, transfer_amplitude,
    DressedModes, FiberConfig,
};
use photon_bell::fock_core::C64;

fn cavity_start(m: usize) -> Vec<C64> {
    let mut s = vec![C64::new(0.0, 0.0); m + 1];
    s[0] = C64::new(1.0, 0.0);
    s
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn envelope_error(cfg: &FiberConfig) -> f64 {
    let model = build_fiber(cfg).unwrap();
    let modes = DressedModes::new(&model.detunings, &model.kappa_a).unwrap();
    let times: Vec<f64> = (0..=30)
        .map(|i| (0.5 + 7.5 * i as f64 / 30.0) / model.gamma_a)
        .collect();
    modes
        .evolve_many(&cavity_start(model.n_modes()), &times)
        .iter()
        .zip(&times)
        .map(|(v, &t)| {
            let pole = pole_depletion(C64::new(1.0, 0.0), &model, t).0.norm();
            (v[0].norm() - pole).abs() / pole
        })
        .fold(0.0, f64::max)
}

#[test]
fn engineered_transfer_is_nearly_perfect() {
    let model = build_fiber(&FiberConfig::matched(1000)).unwrap();
    assert_eq!(model.n_modes(), 2001);
    assert!(model.timing_ok());
    let r = transfer_amplitude(&model, C64::new(1.0, 0.0)).unwrap();
    assert!(r.fidelity >= 0.99, "{r:?}");
    assert!(r.fidelity <= 1.0 + 1e-6);
    let budget = r.fidelity.powi(2) + r.residual_fiber + r.residual_a;
    assert!((budget - 1.0).abs() < 1e-6, "{budget}");
    assert!(r.pole_fidelity > 0.99, "{r:?}");
}

#[test]
fn transfer_without_phase_engineering_fails() {
    let mut cfg = FiberConfig::matched(1000);
    cfg.engineered = false;
    let r = transfer_amplitude(&build_fiber(&cfg).unwrap(), C64::new(1.0, 0.0)).unwrap();
    assert!(r.fidelity < 0.5, "{r:?}");
}

#[test]
fn rate_mismatch_degrades_transfer() {
    let matched = transfer_amplitude(
        &build_fiber(&FiberConfig::matched(1000)).unwrap(),
        C64::new(1.0, 0.0),
    )
    .unwrap();
    let mut cfg = FiberConfig::matched(1000);
    cfg.gamma_b = 2.0 * cfg.gamma_a;
    let r = transfer_amplitude(&build_fiber(&cfg).unwrap(), C64::new(1.0, 0.0)).unwrap();
    assert!(
        r.fidelity < matched.fidelity,
        "{} vs {}",
        r.fidelity,
        matched.fidelity
    );
}

#[test]
fn fidelity_converges_with_mode_count() {
    let f: Vec<f64> = [250, 500, 1000]
        .iter()
        .map(|&k| {
            transfer_amplitude(
                &build_fiber(&FiberConfig::matched(k)).unwrap(),
                C64::new(1.0, 0.0),
            )
            .unwrap()
            .fidelity
        })
        .collect();
    assert!(f[1] >= f[0] - 1e-3 && f[2] >= f[1] - 1e-3, "{f:?}");
    assert!(1.0 - f[2] < 1.0 - f[0], "{f:?}");
}

#[test]
fn decay_envelope_follows_pole_approximation() {
    let err = envelope_error(&FiberConfig::matched(1000));
    assert!(err < 0.02, "{err}");
}

#[test]
fn pole_error_shrinks_as_band_widens() {
    let errs: Vec<f64> = [10.0, 40.0, 160.0]
        .iter()
        .map(|&ratio| {
            let mut cfg = FiberConfig::matched(0);
            cfg.band = ratio * cfg.gamma_a;
            envelope_error(&cfg)
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn dressed_roots_solve_the_quantization_condition() {
    let model = build_fiber(&FiberConfig::matched(100)).unwrap();
    let modes = DressedModes::new(&model.detunings, &model.kappa_a).unwrap();
    assert_eq!(modes.len(), 202);
    for j in 0..modes.len() {
        assert!(
            modes.residual(j) < 1e-9 * model.omega,
            "root {j}: {}",
            modes.residual(j)
        );
    }
    let roots = quantization_roots(&model).unwrap();
    for (j, w) in model.mode_freqs.iter().enumerate() {
        assert!(
            roots[j] < *w && *w < roots[j + 1],
            "interlacing fails at {j}"
        );
    }
}

#[test]
fn large_lattice_residuals_and_interlacing() {
    let model = build_fiber(&FiberConfig::matched(1000)).unwrap();
    let modes = DressedModes::new(&model.detunings, &model.kappa_a).unwrap();
    let worst = (0..modes.len())
        .map(|j| modes.residual(j))
        .fold(0.0, f64::max);
    assert!(worst < 1e-9 * model.omega, "{worst}");
    let r = modes.roots();
    for (j, x) in model.detunings.iter().enumerate() {
        assert!(r[j] < *x && *x < r[j + 1]);
    }
}

#[test]
fn exact_evolution_is_unitary() {
    let model = build_fiber(&FiberConfig::matched(1000)).unwrap();
    let m = model.n_modes();
    let start = cavity_start(m);
    let at_zero = exact_evolution(&model, &start, 0.0).unwrap();
    let diff = at_zero
        .iter()
        .zip(&start)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-9, "{diff}");
    let modes = DressedModes::new(&model.detunings, &model.kappa_a).unwrap();
    let times: Vec<f64> = (0..=10).map(|i| 2.0 * i as f64).collect();
    for (v, t) in modes.evolve_many(&start, &times).iter().zip(&times) {
        assert!((norm(v) - 1.0).abs() < 1e-9, "t = {t}: {}", norm(v) - 1.0);
    }
}

#[test]
fn pole_solution_empties_into_the_fiber() {
    let model = build_fiber(&FiberConfig::matched(1000)).unwrap();
    let (c, fiber) = pole_depletion(C64::new(1.0, 0.0), &model, 20.0);
    let total = norm(&fiber) + c.norm_sqr();
    assert!((total - 1.0).abs() < 0.01, "{total}");
}
