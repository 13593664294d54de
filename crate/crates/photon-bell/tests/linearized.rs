use std::f64::consts::{PI, SQRT_2};

use photon_bell::fock_core::{coherent_state, FieldVec, C64};
use photon_bell::helstrom_povm::povm;
use photon_bell::linearized_oracle::{
    approx_branches, approx_overlaps, approx_prior, coherent_shift_overlap, dephasing,
    linearization_valid, resonant_zero_times, DEFAULT_MARGIN,
};
use photon_bell::ramsey_dynamics::{branch_states, joint_pure_state, InteractionParams};

fn fidelity(a: &FieldVec, b: &FieldVec) -> f64 {
    a.inner(b).norm() / (a.norm_sqr() * b.norm_sqr()).sqrt()
}

fn exact_overlaps(p: &InteractionParams) -> (C64, C64) {
    let b = branch_states(p).unwrap();
    let alpha = b.a0.scaled(C64::new(2.0, 0.0));
    (alpha.inner(&b.g1), b.g3.inner(&b.g1))
}

// Measured floors of the linearised forms at n̄ = 100; g6 carries two
// photon-number dependent Rabi factors frozen at n̄.
const BRANCH_FLOOR: [f64; 6] = [0.999, 0.99, 0.99, 0.99, 0.99, 0.97];

#[test]
fn branch_superpositions_match_exact_branches() {
    let p0 = InteractionParams::new(100.0, 0.0, 0.0);
    let mut worst = [1.0f64; 6];
    for i in 1..=40 {
        let p = p0.with_tau(i as f64 / 40.0 * 4.0 * PI / p0.omega0_bar());
        let exact = branch_states(&p).unwrap();
        let approx = approx_branches(&p);
        for (j, (e, a)) in exact.g().iter().zip(approx.g()).enumerate() {
            if e.norm_sqr() < 1e-20 {
                continue;
            }
            worst[j] = worst[j].min(fidelity(e, &a.to_fock(p.n_max)));
        }
    }
    for j in 0..6 {
        assert!(
            worst[j] > BRANCH_FLOOR[j],
            "g{}: worst fidelity {:?}",
            j + 1,
            worst
        );
    }
}

#[test]
fn overlaps_track_the_exact_pipeline() {
    for ratio in [0.0, 5.0] {
        let p0 = InteractionParams::new(100.0, ratio, 0.0);
        for i in 0..=400 {
            let p = p0.with_tau(i as f64 / 400.0 * 10.0 * PI / p0.omega_bar());
            if !linearization_valid(&p, DEFAULT_MARGIN).0 {
                continue;
            }
            let (ea, eb) = exact_overlaps(&p);
            let (aa, ab) = approx_overlaps(&p);
            assert!(
                (ea - aa).norm() < 0.01,
                "ratio {ratio} step {i}: {}",
                (ea - aa).norm()
            );
            assert!(
                (eb - ab).norm() < 0.01,
                "ratio {ratio} step {i}: {}",
                (eb - ab).norm()
            );
        }
    }
}

#[test]
fn prior_absolute_error_is_small() {
    for ratio in [0.0, 5.0] {
        let p0 = InteractionParams::new(100.0, ratio, 0.0);
        for i in 0..=400 {
            let p = p0.with_tau(i as f64 / 400.0 * 10.0 * PI / p0.omega_bar());
            if !linearization_valid(&p, DEFAULT_MARGIN).0 {
                continue;
            }
            let exact = branch_states(&p).unwrap().g1.norm_sqr();
            assert!((exact - approx_prior(&p)).abs() < 0.005);
        }
    }
}

#[test]
fn shift_overlap_matches_coherent_states() {
    let p0 = InteractionParams::new(100.0, 0.0, 0.0);
    for i in 1..=20 {
        let p = p0.with_tau(i as f64 / 20.0 * 1.5 * PI / p0.omega0_bar());
        let theta = photon_bell::linearized_oracle::LinearizedParams::new(&p).theta;
        for k in -2..=2i32 {
            for kp in -2..=2i32 {
                let a =
                    coherent_state(p.alpha * C64::from_polar(1.0, k as f64 * theta), 300).unwrap();
                let b =
                    coherent_state(p.alpha * C64::from_polar(1.0, kp as f64 * theta), 300).unwrap();
                let exact = a.inner(&b).norm();
                let approx = coherent_shift_overlap(k, kp, &p);
                assert!(
                    (exact - approx).abs() / exact < 1e-3,
                    "k={k} k'={kp} step {i}"
                );
            }
        }
    }
}

#[test]
fn weak_coupling_overlap_asymptotes() {
    let mut gaps = Vec::new();
    for ratio in [5.0, 10.0] {
        let p0 = InteractionParams::new(100.0, ratio, 0.0);
        let mut worst: f64 = 0.0;
        for i in 1..=60 {
            let p = p0.with_tau(i as f64 / 60.0 * 10.0 * PI / p0.omega_bar());
            let x = dephasing(&p);
            let env = (-x * x / 8.0).exp();
            let (a, b) = exact_overlaps(&p);
            worst = worst.max((a.norm() - env / SQRT_2).abs());
            worst = worst.max((b.norm() - env / (2.0 * SQRT_2)).abs());
        }
        gaps.push(worst);
    }
    assert!(gaps[1] < gaps[0] / 2.0, "{gaps:?}");
}

#[test]
fn operating_point_is_the_eleventh_zero() {
    let p = InteractionParams::new(100.0, 0.0, 0.0);
    let tau = 23.0 / 4.0 * 2.0 * PI / p.omega0_bar();
    assert!((resonant_zero_times(11, &p).unwrap() - tau).abs() < 1e-14);
}

#[test]
fn exact_fidelity_gap_shrinks_with_photon_number() {
    let mut gaps = Vec::new();
    for nbar in [25.0, 100.0, 400.0] {
        let p0 = InteractionParams::new(nbar, 0.0, 0.0);
        let p = p0.with_tau(resonant_zero_times(11, &p0).unwrap());
        let f = povm(&joint_pure_state(&p).unwrap()).unwrap().f_opt.unwrap();
        gaps.push(1.0 - f);
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gaps {gaps:?}");
}

#[test]
fn linearised_prior_error_shrinks_with_photon_number() {
    let mut errs = Vec::new();
    for nbar in [25.0, 100.0, 400.0] {
        let p0 = InteractionParams::new(nbar, 0.0, 0.0);
        let mut worst: f64 = 0.0;
        for i in 1..=50 {
            let p = p0.with_tau(i as f64 / 50.0 * 4.0 * PI / p0.omega0_bar());
            let exact = branch_states(&p).unwrap().g1.norm_sqr();
            worst = worst.max((exact - approx_prior(&p)).abs());
        }
        errs.push(worst);
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "errors {errs:?}");
}
