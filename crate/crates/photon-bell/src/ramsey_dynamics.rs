//! Ramsey-type sequence: system A couples to the mode on `[0, τ]`, system B on
//! `[t − τ, t]`, and the joint state is read out at `t`.
//!
//! Both systems start in `(|0⟩ + |1⟩)/√2` and only the `|1⟩ ↔ |2⟩` transition
//! is resonant with the field, so the mode acts as a which-path bus.

use crate::error::{Error, Result};
use crate::fock_core::{coherent_state, default_n_max, FieldVec, C64};

/// Mode frequency used when none is given, in units of `|g|`.
pub const DEFAULT_OMEGA: f64 = 10.0;

/// Number of matter labels `(a, b)` with `a, b ∈ {0, 1, 2}`.
pub const MATTER_DIM: usize = 9;

/// Flattened matter index of `|a⟩_A |b⟩_B`.
pub const fn matter_index(a: usize, b: usize) -> usize {
    3 * a + b
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionParams {
    pub alpha: C64,
    pub g_mag: f64,
    pub g_phase: f64,
    pub delta: f64,
    pub omega: f64,
    pub tau: f64,
    pub t: f64,
    pub n_max: usize,
    pub e0: f64,
    pub e1: f64,
}

impl InteractionParams {
    /// `|g| = 1`, real `α = √n̄`, `Δ = ratio · Ω̄₀` and readout at `t = 2τ`.
    pub fn new(nbar: f64, delta_over_omega0: f64, tau: f64) -> Self {
        let g_mag = 1.0;
        Self {
            alpha: C64::new(nbar.sqrt(), 0.0),
            g_mag,
            g_phase: 0.0,
            delta: delta_over_omega0 * g_mag * nbar.sqrt(),
            omega: DEFAULT_OMEGA,
            tau,
            t: 2.0 * tau,
            n_max: default_n_max(nbar),
            e0: 0.0,
            e1: 1.0,
        }
    }

    /// Replaces `τ` and moves the readout to `2τ`.
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self.t = 2.0 * tau;
        self
    }

    pub fn nbar(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn g(&self) -> C64 {
        C64::from_polar(self.g_mag, self.g_phase)
    }

    /// `E₂ = E₁ + ω + Δ`
    pub fn e2(&self) -> f64 {
        self.e1 + self.omega + self.delta
    }

    pub fn level_energy(&self, level: usize) -> f64 {
        match level {
            0 => self.e0,
            1 => self.e1,
            2 => self.e2(),
            _ => panic!("three-level system has no level {level}"),
        }
    }

    /// Resonant Rabi frequency at the mean photon number.
    pub fn omega0_bar(&self) -> f64 {
        self.g_mag * self.nbar().sqrt()
    }

    /// Effective Rabi frequency at the mean photon number.
    pub fn omega_bar(&self) -> f64 {
        rabi(self.delta, self.g_mag, self.nbar())
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.alpha.re,
            self.alpha.im,
            self.g_mag,
            self.g_phase,
            self.delta,
            self.omega,
            self.tau,
            self.t,
            self.e0,
            self.e1,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(
                "non-finite interaction parameter".into(),
            ));
        }
        if self.g_mag <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "g_mag = {} must be positive",
                self.g_mag
            )));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tau = {} must be non-negative",
                self.tau
            )));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(())
    }
}

fn rabi(delta: f64, g_mag: f64, n: f64) -> f64 {
    (delta * delta / 4.0 + g_mag * g_mag * n).sqrt()
}

/// `Ω(n) = √(Δ²/4 + |g|² n)`
pub fn effective_rabi(n: usize, params: &InteractionParams) -> f64 {
    rabi(params.delta, params.g_mag, n as f64)
}

/// Interference phases carried by each matter branch at readout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSet {
    pub phi_00: f64,
    pub phi_10: f64,
    pub phi_20: f64,
    pub phi_02: f64,
    pub phi_11: f64,
    pub phi_12: f64,
    pub phi_21: f64,
    pub phi_22: f64,
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
}

impl PhaseSet {
    pub fn new(p: &InteractionParams) -> Self {
        let (e0, e1, e2) = (p.e0, p.e1, p.e2());
        let (t, w, dt) = (p.t, p.omega, p.delta * p.tau);
        Self {
            phi_00: 2.0 * e0 * t,
            phi_10: (e0 + e1) * t + dt / 2.0,
            phi_20: (e0 + e2) * t - dt / 2.0,
            phi_02: (e0 + e1 + w) * t + dt / 2.0,
            phi_11: 2.0 * e1 * t + dt,
            phi_12: (2.0 * e1 + w) * t + dt,
            phi_21: (e1 + e2) * t,
            phi_22: (e1 + e2 + w) * t,
            e0,
            e1,
            e2,
        }
    }
}

/// The seven unnormalised field branches of the joint state.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSet {
    pub a0: FieldVec,
    pub g1: FieldVec,
    pub g2: FieldVec,
    pub g3: FieldVec,
    pub g4: FieldVec,
    pub g5: FieldVec,
    pub g6: FieldVec,
}

impl BranchSet {
    pub fn g(&self) -> [&FieldVec; 6] {
        [&self.g1, &self.g2, &self.g3, &self.g4, &self.g5, &self.g6]
    }

    /// `‖a0‖² + ‖g₁‖² + 2‖g₂‖² + Σ₃⁶ ‖gⱼ‖²`
    pub fn total_norm(&self) -> f64 {
        self.a0.norm_sqr()
            + self.g1.norm_sqr()
            + 2.0 * self.g2.norm_sqr()
            + self.g3.norm_sqr()
            + self.g4.norm_sqr()
            + self.g5.norm_sqr()
            + self.g6.norm_sqr()
    }
}

/// Two-level rotation coefficients `(c_n, s_n)` on the `|1, n⟩ ↔ |2, n−1⟩` doublet.
fn rotation(n: usize, p: &InteractionParams) -> (C64, C64) {
    let om = effective_rabi(n, p);
    if om == 0.0 {
        return (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    }
    let (sin, cos) = (om * p.tau).sin_cos();
    let c = C64::new(cos, p.delta / (2.0 * om) * sin);
    let s = -C64::i() * p.g() * ((n as f64).sqrt() / om * sin);
    (c, s)
}

pub fn branch_states(p: &InteractionParams) -> Result<BranchSet> {
    p.validate()?;
    let nm = p.n_max;
    let alpha = coherent_state(p.alpha, nm)?;
    let a = |n: usize| alpha.get(n);
    let rot: Vec<(C64, C64)> = (0..nm + 3).map(|n| rotation(n, p)).collect();
    let (c, s) = (|n: usize| rot[n].0, |n: usize| rot[n].1);
    let h = 0.5;
    let r2 = std::f64::consts::FRAC_1_SQRT_2;

    let mut set = BranchSet {
        a0: FieldVec::zeros(nm),
        g1: FieldVec::zeros(nm),
        g2: FieldVec::zeros(nm),
        g3: FieldVec::zeros(nm),
        g4: FieldVec::zeros(nm),
        g5: FieldVec::zeros(nm),
        g6: FieldVec::zeros(nm),
    };
    for n in 0..=nm {
        let ph = C64::from_polar(1.0, -p.omega * n as f64 * p.t);
        set.a0.amplitudes_mut()[n] = h * a(n) * ph;
        set.g1.amplitudes_mut()[n] = r2 * a(n) * c(n) * ph;
        set.g2.amplitudes_mut()[n] = h * a(n + 1) * s(n + 1) * ph;
        set.g3.amplitudes_mut()[n] = h * a(n) * c(n) * c(n) * ph;
        set.g4.amplitudes_mut()[n] = h * a(n + 1) * s(n + 1) * c(n) * ph;
        set.g5.amplitudes_mut()[n] = h * a(n + 1) * s(n + 1) * c(n + 1) * ph;
        set.g6.amplitudes_mut()[n] = h * a(n + 2) * s(n + 2) * s(n + 1) * ph;
    }
    Ok(set)
}

/// Pure matter–field state as nine field vectors, one per product label `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    blocks: Vec<FieldVec>,
}

impl JointState {
    pub fn from_blocks(blocks: Vec<FieldVec>) -> Self {
        assert_eq!(blocks.len(), MATTER_DIM);
        Self { blocks }
    }

    pub fn block(&self, a: usize, b: usize) -> &FieldVec {
        &self.blocks[matter_index(a, b)]
    }

    pub fn blocks(&self) -> &[FieldVec] {
        &self.blocks
    }

    pub fn n_max(&self) -> usize {
        self.blocks[0].n_max()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(FieldVec::norm_sqr).sum()
    }

    /// Field vector paired with `|Ψ⁺⟩ = (|01⟩ + |10⟩)/√2`.
    pub fn bell_component(&self) -> FieldVec {
        let mut v = self.block(0, 1).clone();
        v.add_scaled(C64::new(1.0, 0.0), self.block(1, 0));
        v.scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    pub fn max_abs_diff(&self, other: &JointState) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(x, y)| x.max_abs_diff(y))
            .fold(0.0, f64::max)
    }
}

pub fn joint_pure_state(p: &InteractionParams) -> Result<JointState> {
    let b = branch_states(p)?;
    let ph = PhaseSet::new(p);
    let e = |phi: f64| C64::from_polar(1.0, -phi);
    let g1 = b.g1.scaled(e(ph.phi_10) * std::f64::consts::FRAC_1_SQRT_2);
    let mut blocks = vec![FieldVec::zeros(p.n_max); MATTER_DIM];
    blocks[matter_index(0, 0)] = b.a0.scaled(e(ph.phi_00));
    blocks[matter_index(0, 1)] = g1.clone();
    blocks[matter_index(1, 0)] = g1;
    blocks[matter_index(0, 2)] = b.g2.scaled(e(ph.phi_02));
    blocks[matter_index(2, 0)] = b.g2.scaled(e(ph.phi_20));
    blocks[matter_index(1, 1)] = b.g3.scaled(e(ph.phi_11));
    blocks[matter_index(2, 1)] = b.g4.scaled(e(ph.phi_21));
    blocks[matter_index(1, 2)] = b.g5.scaled(e(ph.phi_12));
    blocks[matter_index(2, 2)] = b.g6.scaled(e(ph.phi_22));
    Ok(JointState { blocks })
}

/// State of system A and the mode right after the A window, with B untouched.
///
/// Entry `a` is the field vector paired with `|a⟩_A`; the `1/√2` of the
/// initial superposition is included.
pub fn single_interaction(p: &InteractionParams) -> Result<[FieldVec; 3]> {
    p.validate()?;
    let nm = p.n_max;
    let alpha = coherent_state(p.alpha, nm)?;
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = [
        FieldVec::zeros(nm),
        FieldVec::zeros(nm),
        FieldVec::zeros(nm),
    ];
    let free = |e: f64| C64::from_polar(1.0, -e * p.tau);
    for n in 0..=nm {
        let w = p.omega * n as f64;
        let (c, _) = rotation(n, p);
        let (_, s1) = rotation(n + 1, p);
        out[0].amplitudes_mut()[n] = r2 * alpha.get(n) * free(p.e0 + w);
        out[1].amplitudes_mut()[n] = r2 * alpha.get(n) * c * free(p.e1 + w + p.delta / 2.0);
        out[2].amplitudes_mut()[n] =
            r2 * alpha.get(n + 1) * s1 * free(p.e1 + w + p.omega + p.delta / 2.0);
    }
    Ok(out)
}

type Mat2 = [[C64; 2]; 2];

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// `exp(−i H τ)` for a Hermitian 2×2 block by scaling and squaring a Taylor series.
fn expm2(h: &Mat2, tau: f64) -> Mat2 {
    let mu = (h[0][0] + h[1][1]) * 0.5;
    let minus_i = -C64::i() * tau;
    let mut m = [
        [minus_i * (h[0][0] - mu), minus_i * h[0][1]],
        [minus_i * h[1][0], minus_i * (h[1][1] - mu)],
    ];
    let norm = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max) * 2.0;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    for z in m.iter_mut().flatten() {
        *z *= scale;
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut sum = [[one, zero], [zero, one]];
    let mut term = sum;
    for k in 1..=24 {
        term = mat2_mul(&term, &m);
        for z in term.iter_mut().flatten() {
            *z /= k as f64;
        }
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mat2_mul(&sum, &sum);
    }
    let global = (minus_i * mu).exp();
    for z in sum.iter_mut().flatten() {
        *z *= global;
    }
    sum
}

/// Propagator of one three-level system and the mode over an interaction window.
///
/// Block `n` acts on `(|1, n+1⟩, |2, n⟩)`; `|1, 0⟩`, `|2, n_max⟩` and the
/// `|0⟩` ladder only pick up free phases.
#[derive(Clone, Debug)]
pub struct JcPropagator {
    level0: Vec<C64>,
    blocks: Vec<Mat2>,
    one_vacuum: C64,
    two_top: C64,
}

impl JcPropagator {
    pub fn new(p: &InteractionParams) -> Self {
        let nm = p.n_max;
        let (e0, e1, e2) = (p.e0, p.e1, p.e2());
        let g = p.g();
        let tau = p.tau;
        let phase = |e: f64| C64::from_polar(1.0, -e * tau);
        let level0 = (0..=nm).map(|n| phase(e0 + p.omega * n as f64)).collect();
        let blocks = (0..nm)
            .map(|n| {
                let r = ((n + 1) as f64).sqrt();
                let h = [
                    [C64::new(e1 + p.omega * (n + 1) as f64, 0.0), g.conj() * r],
                    [g * r, C64::new(e2 + p.omega * n as f64, 0.0)],
                ];
                expm2(&h, tau)
            })
            .collect();
        Self {
            level0,
            blocks,
            one_vacuum: phase(e1),
            two_top: phase(e2 + p.omega * nm as f64),
        }
    }

    pub fn n_max(&self) -> usize {
        self.level0.len() - 1
    }

    /// In-place action on the amplitudes paired with levels 0, 1 and 2.
    pub fn apply_slices(&self, v0: &mut [C64], v1: &mut [C64], v2: &mut [C64]) {
        let nm = self.n_max();
        for (x, ph) in v0.iter_mut().zip(&self.level0) {
            *x *= ph;
        }
        let top = v2[nm];
        v1[0] *= self.one_vacuum;
        for (n, u) in self.blocks.iter().enumerate() {
            let x = v1[n + 1];
            let y = v2[n];
            v1[n + 1] = u[0][0] * x + u[0][1] * y;
            v2[n] = u[1][0] * x + u[1][1] * y;
        }
        v2[nm] = top * self.two_top;
    }

    pub fn apply(&self, levels: &[FieldVec; 3]) -> [FieldVec; 3] {
        let mut out = levels.clone();
        let [v0, v1, v2] = &mut out;
        self.apply_slices(
            v0.amplitudes_mut(),
            v1.amplitudes_mut(),
            v2.amplitudes_mut(),
        );
        out
    }
}

/// Numerical propagation of the full sequence, independent of the closed form.
pub fn jc_unitary_oracle(p: &InteractionParams) -> Result<JointState> {
    p.validate()?;
    let nm = p.n_max;
    let alpha = coherent_state(p.alpha, nm)?;
    let half = alpha.scaled(C64::new(0.5, 0.0));
    let mut blocks = vec![FieldVec::zeros(nm); MATTER_DIM];
    for a in 0..2 {
        for b in 0..2 {
            blocks[matter_index(a, b)] = half.clone();
        }
    }
    let u = JcPropagator::new(p);
    let spectator = |level: usize, dt: f64| C64::from_polar(1.0, -p.level_energy(level) * dt);

    for b in 0..3 {
        let levels = [
            blocks[matter_index(0, b)].clone(),
            blocks[matter_index(1, b)].clone(),
            blocks[matter_index(2, b)].clone(),
        ];
        let out = u.apply(&levels);
        for (a, v) in out.into_iter().enumerate() {
            blocks[matter_index(a, b)] = v.scaled(spectator(b, p.tau));
        }
    }

    let gap = p.t - 2.0 * p.tau;
    for a in 0..3 {
        for b in 0..3 {
            let e = p.level_energy(a) + p.level_energy(b);
            let v = &blocks[matter_index(a, b)];
            blocks[matter_index(a, b)] = v
                .number_phase(p.omega * gap)
                .scaled(C64::from_polar(1.0, -e * gap));
        }
    }

    for a in 0..3 {
        let levels = [
            blocks[matter_index(a, 0)].clone(),
            blocks[matter_index(a, 1)].clone(),
            blocks[matter_index(a, 2)].clone(),
        ];
        let out = u.apply(&levels);
        for (b, v) in out.into_iter().enumerate() {
            blocks[matter_index(a, b)] = v.scaled(spectator(a, p.tau));
        }
    }
    Ok(JointState { blocks })
}
