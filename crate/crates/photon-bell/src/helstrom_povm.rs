//! Minimum-error discrimination of the field conditioned on `|Ψ⁺⟩` against the
//! field conditioned on every other matter branch, and the heralded Bell pair.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock_core::{hermitian_eig, FieldOp, SpectralDecomp, C64};
use crate::ramsey_dynamics::{matter_index, JointState, MATTER_DIM};

/// Relative threshold above which an eigenvalue of `pρ₁ − (1−p)ρ₂` counts as positive.
pub const ZERO_TOL: f64 = 1e-12;

/// Priors closer than this to 0 or 1 leave nothing to discriminate.
pub const PRIOR_EPS: f64 = 1e-14;

/// Eigenvalues of a density operator down to `-NEGATIVITY_TOL` are clipped to zero.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// Negativity at or above this level is rounding noise and left untouched.
const ROUNDING_FLOOR: f64 = 1e-14;

/// 9×9 matter density matrix over the labels `(a, b)`.
pub type MatterDensity = DMatrix<C64>;

/// Anything that can be written as `Σ |m⟩⟨m'| ⊗ F[m, m']` over the nine matter labels.
pub trait MatterFieldState {
    fn n_max(&self) -> usize;

    /// Reduced field state `ρ_F = Σ_m F[m, m]`.
    fn field_state(&self) -> FieldOp;

    /// `⟨Ψ⁺| ρ |Ψ⁺⟩` as an unnormalised field operator.
    fn bell_block(&self) -> FieldOp;

    /// `M[m, m'] = Tr(F[m, m'] T)`.
    fn matter_weights(&self, t: &FieldOp) -> MatterDensity;
}

impl MatterFieldState for JointState {
    fn n_max(&self) -> usize {
        JointState::n_max(self)
    }

    fn field_state(&self) -> FieldOp {
        let mut rho = FieldOp::zeros(self.n_max());
        for v in self.blocks() {
            rho.add_scaled(C64::new(1.0, 0.0), &v.outer(v));
        }
        rho
    }

    fn bell_block(&self) -> FieldOp {
        let v = self.bell_component();
        v.outer(&v)
    }

    fn matter_weights(&self, t: &FieldOp) -> MatterDensity {
        let tv: Vec<_> = self
            .blocks()
            .iter()
            .map(|v| t.matrix() * nalgebra::DVector::from_column_slice(v.amplitudes()))
            .collect();
        DMatrix::from_fn(MATTER_DIM, MATTER_DIM, |m, mp| {
            // Tr(|f_m⟩⟨f_m'| T) = ⟨f_m'| T |f_m⟩
            let fmp = self.blocks()[mp].amplitudes();
            fmp.iter()
                .zip(tv[m].iter())
                .map(|(a, b)| a.conj() * b)
                .sum()
        })
    }
}

#[derive(Clone, Debug)]
pub struct FieldComponents {
    pub p: f64,
    pub rho1: FieldOp,
    pub rho2: FieldOp,
}

impl FieldComponents {
    /// `Â = p ρ₁ − (1−p) ρ₂`
    pub fn helstrom_operator(&self) -> FieldOp {
        let mut a = self.rho1.scaled(C64::new(self.p, 0.0));
        a.add_scaled(C64::new(-(1.0 - self.p), 0.0), &self.rho2);
        a
    }

    /// `p ρ₁ + (1−p) ρ₂`
    pub fn field_state(&self) -> FieldOp {
        let mut a = self.rho1.scaled(C64::new(self.p, 0.0));
        a.add_scaled(C64::new(1.0 - self.p, 0.0), &self.rho2);
        a
    }

    /// Upper bound on `‖Â‖` used to scale the positivity threshold.
    fn scale(&self) -> f64 {
        self.p * self.rho1.trace().re.abs() + (1.0 - self.p) * self.rho2.trace().re.abs()
    }
}

/// Clips small negative eigenvalues and renormalises; larger negativity is an error.
pub fn enforce_density(rho: FieldOp) -> Result<FieldOp> {
    let eig = hermitian_eig(&rho)?;
    let lowest = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if lowest >= -ROUNDING_FLOOR * rho.trace().re.abs() {
        return Ok(rho);
    }
    if lowest < -NEGATIVITY_TOL {
        return Err(Error::Negativity {
            value: lowest,
            tolerance: NEGATIVITY_TOL,
        });
    }
    let clipped = SpectralDecomp {
        eigenvalues: eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect(),
        eigenvectors: eig.eigenvectors,
    };
    let fixed = clipped.reconstruct();
    let tr = fixed.trace().re;
    Ok(fixed.scaled(C64::new(1.0 / tr, 0.0)))
}

pub fn field_components<S: MatterFieldState + ?Sized>(state: &S) -> Result<FieldComponents> {
    let rho_f = state.field_state();
    let bell = state.bell_block();
    let total = rho_f.trace().re;
    let p = bell.trace().re / total;
    if !(p > PRIOR_EPS && p < 1.0 - PRIOR_EPS) {
        return Err(Error::DegeneratePrior(p));
    }
    let rho1 = bell.scaled(C64::new(1.0 / (p * total), 0.0));
    let mut rest = rho_f;
    rest.add_scaled(C64::new(-1.0, 0.0), &bell);
    let rho2 = rest.scaled(C64::new(1.0 / ((1.0 - p) * total), 0.0));
    Ok(FieldComponents {
        p,
        rho1: enforce_density(rho1)?,
        rho2: enforce_density(rho2)?,
    })
}

/// Projector `T₁` onto the strictly positive part of `Â`, with its rank.
#[derive(Clone, Debug)]
pub struct HelstromMeasurement {
    pub t1: FieldOp,
    pub rank: usize,
    pub spectrum: Vec<f64>,
}

pub fn helstrom_measurement(fc: &FieldComponents, zero_tol: f64) -> Result<HelstromMeasurement> {
    let eig = hermitian_eig(&fc.helstrom_operator())?;
    let threshold = zero_tol * fc.scale();
    let (t1, rank) = eig.projector(|l| l > threshold);
    Ok(HelstromMeasurement {
        t1,
        rank,
        spectrum: eig.eigenvalues,
    })
}

pub fn helstrom_projector(fc: &FieldComponents, zero_tol: f64) -> Result<FieldOp> {
    Ok(helstrom_measurement(fc, zero_tol)?.t1)
}

/// `E_min = ½(1 − ‖p ρ₁ − (1−p) ρ₂‖₁)`
pub fn min_error(fc: &FieldComponents) -> Result<f64> {
    let norm = hermitian_eig(&fc.helstrom_operator())?.trace_norm();
    Ok(0.5 * (1.0 - norm))
}

/// `p Tr(ρ₂ T₁)`-style operational error of an arbitrary projector.
pub fn operational_error(fc: &FieldComponents, t1: &FieldOp) -> f64 {
    let d = t1.n_max();
    let mut t0 = FieldOp::identity(d);
    t0.add_scaled(C64::new(-1.0, 0.0), t1);
    fc.p * fc.rho1.trace_product(&t0).re + (1.0 - fc.p) * fc.rho2.trace_product(t1).re
}

/// `P_Bell = p Tr(ρ₁ T₁)`
pub fn bell_success(fc: &FieldComponents, t1: &FieldOp) -> f64 {
    fc.p * fc.rho1.trace_product(t1).re
}

/// `ρ_AB = Tr_F(ρ T₁) / Tr(ρ T₁)`
pub fn postselected_state<S: MatterFieldState + ?Sized>(
    state: &S,
    t1: &FieldOp,
) -> Result<MatterDensity> {
    let w = state.matter_weights(t1);
    // weak heralds amplify rounding in the anti-Hermitian part
    let w = (&w + w.adjoint()) * C64::new(0.5, 0.0);
    let norm = w.trace().re;
    if norm <= 0.0 || !norm.is_finite() {
        return Err(Error::ZeroSuccess);
    }
    Ok(w / C64::new(norm, 0.0))
}

/// `√⟨Ψ⁺| ρ_AB |Ψ⁺⟩`
pub fn bell_fidelity(rho_ab: &MatterDensity) -> f64 {
    let (i, j) = (matter_index(0, 1), matter_index(1, 0));
    let overlap = 0.5 * (rho_ab[(i, i)] + rho_ab[(i, j)] + rho_ab[(j, i)] + rho_ab[(j, j)]).re;
    overlap.max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PovmResult {
    pub p_prior: f64,
    pub e_min: f64,
    pub p_bell: f64,
    /// Undefined when the measurement never heralds.
    pub f_opt: Option<f64>,
    pub t1_rank: usize,
    /// `Tr(ρ_F T₁)`
    pub herald_probability: f64,
}

/// Full chain: components, projector, error, success and heralded fidelity.
pub fn povm<S: MatterFieldState + ?Sized>(state: &S) -> Result<PovmResult> {
    let fc = field_components(state)?;
    let m = helstrom_measurement(&fc, ZERO_TOL)?;
    let e_min = 0.5 * (1.0 - m.spectrum.iter().map(|l| l.abs()).sum::<f64>());
    let p_bell = bell_success(&fc, &m.t1);
    let herald = fc.field_state().trace_product(&m.t1).re;
    let f_opt = if m.rank == 0 {
        None
    } else {
        Some(bell_fidelity(&postselected_state(state, &m.t1)?))
    };
    Ok(PovmResult {
        p_prior: fc.p,
        e_min,
        p_bell,
        f_opt,
        t1_rank: m.rank,
        herald_probability: herald,
    })
}
