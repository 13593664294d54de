use std::f64::consts::PI;

use photon_bell::fock_core::{coherent_state, FieldVec, C64};
use photon_bell::ramsey_dynamics::{
    branch_states, jc_unitary_oracle, joint_pure_state, matter_index, InteractionParams,
};
use proptest::prelude::*;

fn draw(
    nbar: f64,
    ratio: f64,
    cycles: f64,
    g_phase: f64,
    arg_alpha: f64,
    extra_t: f64,
) -> InteractionParams {
    let mut p = InteractionParams::new(nbar, ratio, 0.0);
    let tau = cycles * 2.0 * PI / p.omega_bar();
    p = p.with_tau(tau);
    p.g_phase = g_phase;
    p.alpha = C64::from_polar(nbar.sqrt(), arg_alpha);
    p.t += extra_t;
    p
}

fn param_strategy() -> impl Strategy<Value = InteractionParams> {
    (
        prop::sample::select(vec![1.0, 10.0, 100.0]),
        prop::sample::select(vec![0.0, 1.0, 5.0]),
        0.0..10.0f64,
        -PI..PI,
        -PI..PI,
        0.0..3.0f64,
    )
        .prop_map(|(n, r, c, gp, aa, et)| draw(n, r, c, gp, aa, et))
}

#[test]
fn oracle_agrees_at_full_rabi_cycle() {
    let p0 = InteractionParams::new(100.0, 0.0, 0.0);
    let p = p0.with_tau(2.0 * PI / p0.omega0_bar());
    let exact = joint_pure_state(&p).unwrap();
    let oracle = jc_unitary_oracle(&p).unwrap();
    assert!(exact.max_abs_diff(&oracle) < 1e-10);
}

#[test]
fn zero_time_is_the_initial_product_state() {
    let p = InteractionParams::new(100.0, 0.0, 0.0);
    let s = joint_pure_state(&p).unwrap();
    let a = coherent_state(p.alpha, p.n_max).unwrap();
    for x in 0..2 {
        for y in 0..2 {
            let blk = s.block(x, y);
            assert!((blk.inner(&a).norm() - 0.5).abs() < 1e-12);
        }
    }
    assert!(s.block(2, 2).norm_sqr() == 0.0);
}

#[test]
fn field_trace_after_quarter_cycle() {
    let p0 = InteractionParams::new(100.0, 0.0, 0.0);
    let p = p0.with_tau(PI / 2.0 / p0.omega0_bar());
    let s = joint_pure_state(&p).unwrap();
    let rho_trace: f64 = s.blocks().iter().map(FieldVec::norm_sqr).sum();
    assert!((rho_trace - 1.0).abs() < 1e-10);
}

#[test]
fn bell_branch_is_symmetric() {
    let p = draw(10.0, 1.0, 1.7, 0.3, -0.4, 0.5);
    let s = joint_pure_state(&p).unwrap();
    assert!(s.block(0, 1).max_abs_diff(s.block(1, 0)) == 0.0);
    let o = jc_unitary_oracle(&p).unwrap();
    assert!(o.block(0, 1).max_abs_diff(o.block(1, 0)) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalisation_identity(p in param_strategy()) {
        let b = branch_states(&p).unwrap();
        prop_assert!((b.total_norm() - 1.0).abs() < 1e-10);
        let s = joint_pure_state(&p).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_propagator(p in param_strategy()) {
        let exact = joint_pure_state(&p).unwrap();
        let oracle = jc_unitary_oracle(&p).unwrap();
        prop_assert!(exact.max_abs_diff(&oracle) < 1e-10, "deviation {}", exact.max_abs_diff(&oracle));
    }

    #[test]
    fn free_rotation_keeps_norms_and_overlaps(p in param_strategy(), s in 0.0..50.0f64) {
        let b = branch_states(&p).unwrap();
        let all: Vec<&FieldVec> = std::iter::once(&b.a0).chain(b.g()).collect();
        let rotated: Vec<FieldVec> = all.iter().map(|v| v.number_phase(p.omega * s)).collect();
        for i in 0..all.len() {
            prop_assert!((all[i].norm_sqr() - rotated[i].norm_sqr()).abs() < 1e-12);
            for j in 0..all.len() {
                let d = all[i].inner(all[j]).norm() - rotated[i].inner(&rotated[j]).norm();
                prop_assert!(d.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn second_excited_pair_needs_two_photons() {
    let p = draw(1.0, 0.0, 0.3, 0.0, 0.0, 0.0);
    let s = joint_pure_state(&p).unwrap();
    let top = s.block(2, 2);
    assert_eq!(top.get(top.n_max()), C64::new(0.0, 0.0));
    assert!(s.blocks()[matter_index(2, 2)].norm_sqr() > 0.0);
}
