//! Large-`n̄` linearisation of `Ω(n)` around the mean photon number.
//!
//! Every branch becomes a short superposition of coherent states rotated by
//! multiples of `θ`, which gives closed forms for the prior and the key
//! overlaps. These serve as an independent check on the exact pipeline.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::fock_core::{coherent_state_unchecked, FieldVec, C64};
use crate::ramsey_dynamics::InteractionParams;

/// Default margin `m` in the validity test `lhs < m·π`.
pub const DEFAULT_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearizedParams {
    pub theta: f64,
    pub omega_c: f64,
    pub validity_lhs: f64,
}

impl LinearizedParams {
    pub fn new(p: &InteractionParams) -> Self {
        let nbar = p.nbar();
        let o0 = p.omega0_bar();
        let ob = p.omega_bar();
        Self {
            theta: o0 * o0 * p.tau / (2.0 * ob * nbar),
            omega_c: ob * (1.0 - o0 * o0 / (2.0 * ob * ob)),
            validity_lhs: o0.powi(4) * p.tau / (8.0 * nbar * ob.powi(3)),
        }
    }
}

/// Returns `(lhs < margin·π, lhs)`.
pub fn linearization_valid(p: &InteractionParams, margin: f64) -> (bool, f64) {
    let lhs = LinearizedParams::new(p).validity_lhs;
    (lhs < margin * PI, lhs)
}

/// `x = Ω̄₀² τ / (Ω̄ √n̄)`, the dephasing parameter of the branch superpositions.
pub fn dephasing(p: &InteractionParams) -> f64 {
    let o0 = p.omega0_bar();
    o0 * o0 * p.tau / (p.omega_bar() * p.nbar().sqrt())
}

/// `Σ_k w_k |β_k⟩`
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentSuperposition {
    pub terms: Vec<(C64, C64)>,
}

impl CoherentSuperposition {
    pub fn to_fock(&self, n_max: usize) -> FieldVec {
        let mut v = FieldVec::zeros(n_max);
        for &(beta, w) in &self.terms {
            v.add_scaled(w, &coherent_state_unchecked(beta, n_max));
        }
        v
    }

    /// Sum of the weight magnitudes.
    pub fn weight_mass(&self) -> f64 {
        self.terms.iter().map(|(_, w)| w.norm()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxBranches {
    pub a0: CoherentSuperposition,
    pub g1: CoherentSuperposition,
    pub g2: CoherentSuperposition,
    pub g3: CoherentSuperposition,
    pub g4: CoherentSuperposition,
    pub g5: CoherentSuperposition,
    pub g6: CoherentSuperposition,
}

impl ApproxBranches {
    pub fn g(&self) -> [&CoherentSuperposition; 6] {
        [&self.g1, &self.g2, &self.g3, &self.g4, &self.g5, &self.g6]
    }
}

pub fn approx_branches(p: &InteractionParams) -> ApproxBranches {
    let lp = LinearizedParams::new(p);
    let d = p.delta / (2.0 * p.omega_bar());
    let ratio = p.omega0_bar() / p.omega_bar();
    let base = p.alpha * C64::from_polar(1.0, -p.omega * p.t);
    let beta = |k: i32| base * C64::from_polar(1.0, k as f64 * lp.theta);
    let rot = |k: i32| C64::from_polar(1.0, k as f64 * lp.omega_c * p.tau);
    // coupling and initial-field phases carried by branches that absorbed photons
    let chi = C64::from_polar(1.0, p.g_phase + p.alpha.arg());
    let re = |x: f64| C64::new(x, 0.0);
    let sup = |terms: Vec<(i32, C64)>| CoherentSuperposition {
        terms: terms.into_iter().map(|(k, w)| (beta(k), w)).collect(),
    };

    let g45 = sup(vec![
        (2, -chi * ratio / 8.0 * rot(2) * (1.0 + d)),
        (-2, chi * ratio / 8.0 * rot(-2) * (1.0 - d)),
        (0, chi * ratio / 8.0 * 2.0 * d),
    ]);
    ApproxBranches {
        a0: sup(vec![(0, re(0.5))]),
        g1: sup(vec![
            (1, rot(1) * (1.0 + d) / (2.0 * SQRT_2)),
            (-1, rot(-1) * (1.0 - d) / (2.0 * SQRT_2)),
        ]),
        g2: sup(vec![
            (1, -chi * ratio / 4.0 * rot(1)),
            (-1, chi * ratio / 4.0 * rot(-1)),
        ]),
        g3: sup(vec![
            (2, rot(2) * (1.0 + d).powi(2) / 8.0),
            (-2, rot(-2) * (1.0 - d).powi(2) / 8.0),
            (0, re((1.0 - d * d) / 4.0)),
        ]),
        g4: g45.clone(),
        g5: g45,
        g6: sup(vec![
            (2, chi * chi * ratio * ratio / 8.0 * rot(2)),
            (-2, chi * chi * ratio * ratio / 8.0 * rot(-2)),
            (0, -chi * chi * ratio * ratio / 8.0 * 2.0),
        ]),
    }
}

/// Linearised prior `p ≈ Δ²/(8Ω̄²) + (¼ − (Δ/4Ω̄)²)(1 + cos(2Ω̄τ) e^{−x²/2})`.
pub fn approx_prior(p: &InteractionParams) -> f64 {
    let ob = p.omega_bar();
    let delta = p.delta;
    let x = dephasing(p);
    delta * delta / (8.0 * ob * ob)
        + (0.25 - (delta / (4.0 * ob)).powi(2))
            * (1.0 + (2.0 * ob * p.tau).cos() * (-x * x / 2.0).exp())
}

/// `(⟨α e^{−iωt}|g₁⟩, ⟨g₃|g₁⟩)` in the linearised picture.
pub fn approx_overlaps(p: &InteractionParams) -> (C64, C64) {
    let ob = p.omega_bar();
    let d = p.delta / (2.0 * ob);
    let x = dephasing(p);
    let y = x / 2.0;
    let phase = |k: f64| C64::from_polar(1.0, k * ob * p.tau);
    let r = 16.0 * SQRT_2;

    let alpha_g1 =
        (-x * x / 8.0).exp() / SQRT_2 * C64::new((ob * p.tau).cos(), d * (ob * p.tau).sin());

    let near = (-y * y / 2.0).exp();
    let far = (-9.0 * y * y / 2.0).exp();
    let g3_g1 = near * (phase(-1.0) * (1.0 + d).powi(3) / r + phase(1.0) * (1.0 - d).powi(3) / r)
        + far
            * (phase(-3.0) * (1.0 + d).powi(2) * (1.0 - d) / r
                + phase(3.0) * (1.0 + d) * (1.0 - d).powi(2) / r)
        + near
            * (phase(1.0) * (1.0 + d) * (1.0 - d * d) * 2.0 / r
                + phase(-1.0) * (1.0 - d) * (1.0 - d * d) * 2.0 / r);
    (alpha_g1, g3_g1)
}

/// `|⟨α e^{ikθ}|α e^{ik'θ}⟩| ≈ exp(−[(k' − k) x / 2]² / 2)`
pub fn coherent_shift_overlap(k: i32, k_prime: i32, p: &InteractionParams) -> f64 {
    let s = (k_prime - k) as f64 * dephasing(p) / 2.0;
    (-s * s / 2.0).exp()
}

/// Interaction times `(π + 2kπ)/(2Ω̄₀)` at which the resonant overlaps vanish.
pub fn resonant_zero_times(k: u32, p: &InteractionParams) -> Result<f64> {
    if p.delta != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "zero times are defined on resonance only (delta = {})",
            p.delta
        )));
    }
    Ok((PI + 2.0 * k as f64 * PI) / (2.0 * p.omega0_bar()))
}
