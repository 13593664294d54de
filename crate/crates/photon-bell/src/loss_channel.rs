//! Photon loss on the mode while it travels from A to B.
//!
//! The channel is the zero-temperature damped oscillator with amplitude decay
//! `e^{−γT/2}`. It is applied once, between the two interaction windows.

use std::f64::consts::LN_10;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock_core::{FieldOp, FieldVec, C64};
use crate::helstrom_povm::{povm, MatterDensity, MatterFieldState, PovmResult};
use crate::ramsey_dynamics::{
    matter_index, single_interaction, InteractionParams, JcPropagator, JointState, MATTER_DIM,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossParams {
    /// Dimensionless damping `γT`.
    pub gamma_t: f64,
}

impl LossParams {
    pub fn new(gamma_t: f64) -> Result<Self> {
        let p = Self { gamma_t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_t.is_finite() && self.gamma_t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma_t = {} must be finite and non-negative",
                self.gamma_t
            )));
        }
        Ok(())
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Number-basis solution of the loss channel:
/// `ρ_{n,m} ← Σ_j a_j(n) a_j(m) ρ_{n+j,m+j}` with
/// `a_j(n)² = C(n+j, j) e^{−γTn} (1 − e^{−γT})^j`.
pub fn damp_number_matrix(rho: &FieldOp, loss: LossParams) -> FieldOp {
    if loss.gamma_t == 0.0 {
        return rho.clone();
    }
    let d = rho.dim();
    let nm = d - 1;
    let lf = ln_factorials(2 * nm + 1);
    let ln_s = -loss.gamma_t;
    let ln_q = (-(-loss.gamma_t).exp_m1()).ln();
    let src = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(d, d);
    let mut a = vec![0.0; d];
    for j in 0..d {
        let len = d - j;
        for (n, an) in a.iter_mut().enumerate().take(len) {
            let jf = j as f64;
            *an = (0.5 * (lf[n + j] - lf[n] - lf[j] + n as f64 * ln_s + jf * ln_q)).exp();
        }
        for m in 0..len {
            let am = a[m];
            if am == 0.0 {
                continue;
            }
            for n in 0..len {
                out[(n, m)] += src[(n + j, m + j)] * (a[n] * am);
            }
        }
    }
    FieldOp::from_matrix(out)
}

/// `|β⟩⟨α| ↦ c |β e^{−γT/2}⟩⟨α e^{−γT/2}|`, returned as `(c, β', α')`.
pub fn damp_coherent_coherence(beta: C64, alpha: C64, loss: LossParams) -> (C64, C64, C64) {
    let q = -(-loss.gamma_t).exp_m1();
    let shrink = (-loss.gamma_t / 2.0).exp();
    let exponent = -(alpha.norm_sqr() / 2.0 + beta.norm_sqr() / 2.0 - beta * alpha.conj()) * q;
    (exponent.exp(), beta * shrink, alpha * shrink)
}

/// `L = γT · 20 / (D ln 10)` for a fiber loss of `D` dB per metre.
pub fn gamma_t_to_fiber_length(gamma_t: f64, d_db_per_m: f64) -> Result<f64> {
    if !(d_db_per_m > 0.0 && d_db_per_m.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "fiber loss {d_db_per_m} dB/m must be positive"
        )));
    }
    Ok(gamma_t * 20.0 / (d_db_per_m * LN_10))
}

pub fn fiber_length_to_gamma_t(length_m: f64, d_db_per_m: f64) -> Result<f64> {
    if !(d_db_per_m > 0.0 && d_db_per_m.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "fiber loss {d_db_per_m} dB/m must be positive"
        )));
    }
    Ok(length_m * d_db_per_m * LN_10 / 20.0)
}

/// Mixed state `Σ |m⟩⟨m'| ⊗ F[m, m']` over the nine matter labels.
#[derive(Clone, Debug)]
pub struct JointDensity {
    blocks: Vec<FieldOp>,
}

const fn pair(m: usize, mp: usize) -> usize {
    m * MATTER_DIM + mp
}

impl JointDensity {
    /// Blocks in row-major order over `(m, m')`.
    pub fn from_blocks(blocks: Vec<FieldOp>) -> Self {
        assert_eq!(blocks.len(), MATTER_DIM * MATTER_DIM, "need 81 blocks");
        Self { blocks }
    }

    pub fn from_pure(state: &JointState) -> Self {
        let v = state.blocks();
        let mut blocks = Vec::with_capacity(MATTER_DIM * MATTER_DIM);
        for m in 0..MATTER_DIM {
            for mp in 0..MATTER_DIM {
                blocks.push(v[m].outer(&v[mp]));
            }
        }
        Self { blocks }
    }

    pub fn block(&self, m: usize, mp: usize) -> &FieldOp {
        &self.blocks[pair(m, mp)]
    }

    pub fn blocks(&self) -> &[FieldOp] {
        &self.blocks
    }

    pub fn trace(&self) -> f64 {
        (0..MATTER_DIM).map(|m| self.block(m, m).trace().re).sum()
    }

    /// Largest entry of `|F[m', m] − F[m, m']†|` over all label pairs.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for m in 0..MATTER_DIM {
            for mp in m..MATTER_DIM {
                dev = dev.max(self.block(mp, m).max_abs_diff(&self.block(m, mp).adjoint()));
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &JointDensity) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Applies the loss channel to every block.
    pub fn damped(&self, loss: LossParams) -> JointDensity {
        JointDensity {
            blocks: self
                .blocks
                .iter()
                .map(|b| damp_number_matrix(b, loss))
                .collect(),
        }
    }
}

impl MatterFieldState for JointDensity {
    fn n_max(&self) -> usize {
        self.blocks[0].n_max()
    }

    fn field_state(&self) -> FieldOp {
        let mut rho = FieldOp::zeros(self.n_max());
        for m in 0..MATTER_DIM {
            rho.add_scaled(C64::new(1.0, 0.0), self.block(m, m));
        }
        rho
    }

    fn bell_block(&self) -> FieldOp {
        let (i, j) = (matter_index(0, 1), matter_index(1, 0));
        let mut out = FieldOp::zeros(self.n_max());
        for (m, mp) in [(i, i), (i, j), (j, i), (j, j)] {
            out.add_scaled(C64::new(0.5, 0.0), self.block(m, mp));
        }
        out
    }

    fn matter_weights(&self, t: &FieldOp) -> MatterDensity {
        DMatrix::from_fn(MATTER_DIM, MATTER_DIM, |m, mp| {
            self.block(m, mp).trace_product(t)
        })
    }
}

/// Applies the B-window propagator to the ket side of every block with column label `col`.
fn left_apply_b(u: &JcPropagator, blocks: &mut [FieldOp], col: usize) {
    for a in 0..3 {
        let i0 = pair(matter_index(a, 0), col);
        let i1 = pair(matter_index(a, 1), col);
        let i2 = pair(matter_index(a, 2), col);
        let (lo, rest) = blocks.split_at_mut(i1);
        let (mid, hi) = rest.split_at_mut(i2 - i1);
        let d = lo[i0].dim();
        let c0 = lo[i0].matrix_mut().as_mut_slice().chunks_mut(d);
        let c1 = mid[0].matrix_mut().as_mut_slice().chunks_mut(d);
        let c2 = hi[0].matrix_mut().as_mut_slice().chunks_mut(d);
        for ((x0, x1), x2) in c0.zip(c1).zip(c2) {
            u.apply_slices(x0, x1, x2);
        }
    }
}

fn conjugate_by_b(u: &JcPropagator, mut blocks: Vec<FieldOp>) -> Vec<FieldOp> {
    for col in 0..MATTER_DIM {
        left_apply_b(u, &mut blocks, col);
    }
    // (U (Uρ)†) = U ρ U† for Hermitian ρ
    let mut swapped: Vec<FieldOp> = (0..MATTER_DIM * MATTER_DIM)
        .map(|k| blocks[pair(k % MATTER_DIM, k / MATTER_DIM)].adjoint())
        .collect();
    drop(blocks);
    for col in 0..MATTER_DIM {
        left_apply_b(u, &mut swapped, col);
    }
    swapped
}

/// Joint state at readout when the mode loses photons between the windows.
pub fn lossy_state(p: &InteractionParams, loss: LossParams) -> Result<JointDensity> {
    loss.validate()?;
    let after_a = single_interaction(p)?;
    let gap = p.t - 2.0 * p.tau;
    if gap < -1e-12 * p.t.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "readout t = {} precedes the end of the B window",
            p.t
        )));
    }
    // free evolution up to the end of the B window, A acting as spectator during it
    let f: Vec<FieldVec> = after_a
        .iter()
        .enumerate()
        .map(|(a, v)| {
            let phase = C64::from_polar(1.0, -p.level_energy(a) * (gap + p.tau));
            v.number_phase(p.omega * gap).scaled(phase)
        })
        .collect();
    let beta: Vec<C64> = (0..2)
        .map(|b| {
            C64::from_polar(
                std::f64::consts::FRAC_1_SQRT_2,
                -p.level_energy(b) * (p.t - p.tau),
            )
        })
        .collect();

    let zero = FieldOp::zeros(p.n_max);
    let mut blocks = vec![zero; MATTER_DIM * MATTER_DIM];
    for a in 0..3 {
        for ap in 0..3 {
            let d = damp_number_matrix(&f[a].outer(&f[ap]), loss);
            for b in 0..2 {
                for bp in 0..2 {
                    let w = beta[b] * beta[bp].conj();
                    blocks[pair(matter_index(a, b), matter_index(ap, bp))] = d.scaled(w);
                }
            }
        }
    }
    let u = JcPropagator::new(p);
    Ok(JointDensity::from_blocks(conjugate_by_b(&u, blocks)))
}

/// Measurement figures of merit for the lossy protocol.
pub fn lossy_scenario(p: &InteractionParams, loss: LossParams) -> Result<PovmResult> {
    povm(&lossy_state(p, loss)?)
}
