//! Truncated Fock-space linear algebra for a single field mode.
//!
//! Vectors and operators live on `|0⟩ … |n_max⟩`. Coherent states are built
//! by the recurrence `a(n+1) = a(n) α / √(n+1)` and refuse truncations that
//! would drop more than [`COHERENT_TAIL_TOL`] of the probability mass.

use std::ops::Index;

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest coherent-state probability mass allowed above `n_max`.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

/// Relative anti-Hermitian part tolerated by the spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FieldVec {
    amps: Vec<C64>,
}

impl FieldVec {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            amps: vec![C64::new(0.0, 0.0); n_max + 1],
        }
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        assert!(!amps.is_empty(), "a field vector needs at least the vacuum");
        Self { amps }
    }

    pub fn vacuum(n_max: usize) -> Self {
        let mut v = Self::zeros(n_max);
        v.amps[0] = C64::new(1.0, 0.0);
        v
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Amplitude of `|n⟩`, zero above the truncation.
    pub fn get(&self, n: usize) -> C64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FieldVec) -> C64 {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, s: C64) -> FieldVec {
        FieldVec {
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    /// `self += s·x`
    pub fn add_scaled(&mut self, s: C64, x: &FieldVec) {
        assert_eq!(self.len(), x.len(), "dimension mismatch");
        for (a, b) in self.amps.iter_mut().zip(&x.amps) {
            *a += s * b;
        }
    }

    /// Applies `exp(-i φ n̂)`.
    pub fn number_phase(&self, phi: f64) -> FieldVec {
        FieldVec {
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(n, a)| a * C64::from_polar(1.0, -phi * n as f64))
                .collect(),
        }
    }

    /// `|self⟩⟨other|`
    pub fn outer(&self, other: &FieldVec) -> FieldOp {
        let d = self.len();
        assert_eq!(d, other.len(), "dimension mismatch");
        FieldOp(DMatrix::from_fn(d, d, |i, j| {
            self.amps[i] * other.amps[j].conj()
        }))
    }

    pub fn max_abs_diff(&self, other: &FieldVec) -> f64 {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for FieldVec {
    type Output = C64;
    fn index(&self, n: usize) -> &C64 {
        &self.amps[n]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldOp(DMatrix<C64>);

impl FieldOp {
    pub fn zeros(n_max: usize) -> Self {
        FieldOp(DMatrix::zeros(n_max + 1, n_max + 1))
    }

    pub fn identity(n_max: usize) -> Self {
        FieldOp(DMatrix::identity(n_max + 1, n_max + 1))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        assert!(m.is_square(), "field operators are square");
        FieldOp(m)
    }

    pub fn from_fn(n_max: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        FieldOp(DMatrix::from_fn(n_max + 1, n_max + 1, f))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn adjoint(&self) -> FieldOp {
        FieldOp(self.0.adjoint())
    }

    pub fn scaled(&self, s: C64) -> FieldOp {
        FieldOp(&self.0 * s)
    }

    pub fn add_scaled(&mut self, s: C64, x: &FieldOp) {
        self.0.zip_apply(&x.0, |a, b| *a += s * b);
    }

    pub fn max_abs_diff(&self, other: &FieldOp) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> FieldOp {
        FieldOp((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Largest entry of `|M − M†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev: f64 = 0.0;
        for j in 0..d {
            for i in j..d {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &FieldOp) -> C64 {
        let d = self.dim();
        assert_eq!(d, other.dim(), "dimension mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            for i in 0..d {
                acc += self.0[(i, j)] * other.0[(j, i)];
            }
        }
        acc
    }

    /// `⟨v|M|v⟩`
    pub fn expectation(&self, v: &FieldVec) -> C64 {
        let d = self.dim();
        assert_eq!(d, v.len(), "dimension mismatch");
        let a = v.amplitudes();
        a.iter()
            .enumerate()
            .map(|(j, aj)| {
                let col: C64 = a
                    .iter()
                    .enumerate()
                    .map(|(i, ai)| ai.conj() * self.0[(i, j)])
                    .sum();
                col * aj
            })
            .sum()
    }

    /// `e^{-iφn̂} M e^{iφn̂}`
    pub fn number_conjugated(&self, phi: f64) -> FieldOp {
        let d = self.dim();
        FieldOp(DMatrix::from_fn(d, d, |i, j| {
            self.0[(i, j)] * C64::from_polar(1.0, -phi * (i as f64 - j as f64))
        }))
    }
}

/// Eigenvalues in descending order with their eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralDecomp {
    pub fn reconstruct(&self) -> FieldOp {
        let v = &self.eigenvectors;
        let d = v.nrows();
        let mut scaled = v.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(l);
        }
        let m = &scaled * v.adjoint();
        debug_assert_eq!(m.nrows(), d);
        FieldOp(m).hermitian_part()
    }

    /// Sum of `|v_k⟩⟨v_k|` over the selected eigenvalues.
    pub fn projector(&self, mut keep: impl FnMut(f64) -> bool) -> (FieldOp, usize) {
        let cols: Vec<usize> = self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| keep(l))
            .map(|(k, _)| k)
            .collect();
        let d = self.eigenvectors.nrows();
        let sub = self.eigenvectors.select_columns(&cols);
        let p = if cols.is_empty() {
            DMatrix::zeros(d, d)
        } else {
            &sub * sub.adjoint()
        };
        (FieldOp(p).hermitian_part(), cols.len())
    }

    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }
}

/// Probability mass of `|α⟩` above `n_max`, summed in log space.
pub fn coherent_tail_mass(alpha_abs: f64, n_max: usize) -> f64 {
    let nbar = alpha_abs * alpha_abs;
    if nbar == 0.0 {
        return 0.0;
    }
    let ln_nbar = nbar.ln();
    let mut ln_p = -nbar;
    for n in 1..=n_max {
        ln_p += ln_nbar - (n as f64).ln();
    }
    let mut tail = 0.0;
    let mut n = n_max;
    loop {
        n += 1;
        ln_p += ln_nbar - (n as f64).ln();
        let term = ln_p.exp();
        tail += term;
        if n as f64 > nbar && (term <= 1e-40 || term <= 1e-18 * tail) {
            break;
        }
    }
    tail
}

/// Default truncation: `⌈n̄ + 10√n̄⌉`, raised until the coherent tail is below
/// [`COHERENT_TAIL_TOL`].
pub fn default_n_max(nbar: f64) -> usize {
    let mut n = ((nbar + 10.0 * nbar.sqrt()).ceil() as usize).max(1);
    while coherent_tail_mass(nbar.sqrt(), n) >= COHERENT_TAIL_TOL {
        n += 1;
    }
    n
}

pub fn coherent_state(alpha: C64, n_max: usize) -> Result<FieldVec> {
    let tail = coherent_tail_mass(alpha.norm(), n_max);
    if tail >= COHERENT_TAIL_TOL {
        return Err(Error::Truncation {
            n_max,
            alpha_abs: alpha.norm(),
            tail,
            limit: COHERENT_TAIL_TOL,
        });
    }
    Ok(coherent_state_unchecked(alpha, n_max))
}

/// Same recurrence without the truncation guard.
pub fn coherent_state_unchecked(alpha: C64, n_max: usize) -> FieldVec {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(a);
    for n in 0..n_max {
        a = a * alpha / ((n + 1) as f64).sqrt();
        amps.push(a);
    }
    FieldVec { amps }
}

/// Closed form of `⟨β|α⟩`.
pub fn coherent_overlap(beta: C64, alpha: C64) -> C64 {
    (-alpha.norm_sqr() / 2.0 - beta.norm_sqr() / 2.0 + beta.conj() * alpha).exp()
}

pub fn hermitian_eig(m: &FieldOp) -> Result<SpectralDecomp> {
    let dev = m.hermitian_deviation();
    let tol = HERMITIAN_TOL * m.norm();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol,
        });
    }
    let eig = m.0.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(&order);
    Ok(SpectralDecomp {
        eigenvalues,
        eigenvectors,
    })
}

pub fn trace_norm(m: &FieldOp) -> Result<f64> {
    Ok(hermitian_eig(m)?.trace_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_amplitude_is_vacuum() {
        let v = coherent_state(c(0.0, 0.0), 10).unwrap();
        assert_eq!(v, FieldVec::vacuum(10));
    }

    #[test]
    fn coherent_normalised_at_default_cut() {
        let v = coherent_state(c(10.0, 0.0), 200).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_overlap_matches_fock_sum() {
        let a = c(10.0, 0.0);
        let b = C64::from_polar(10.0, 0.05);
        let va = coherent_state(a, 300).unwrap();
        let vb = coherent_state(b, 300).unwrap();
        let direct = vb.inner(&va);
        assert!((direct - coherent_overlap(b, a)).norm() < 1e-10);
    }

    #[test]
    fn rejects_short_truncation() {
        let err = coherent_state(c(10.0, 0.0), 120).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn default_cut_for_nbar_100_is_200() {
        assert_eq!(default_n_max(100.0), 200);
        assert!(coherent_tail_mass(1.0, default_n_max(1.0)) < COHERENT_TAIL_TOL);
    }

    #[test]
    fn identity_spectrum() {
        let d = hermitian_eig(&FieldOp::identity(4)).unwrap();
        assert!(d.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = FieldOp::from_fn(1, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let d = hermitian_eig(&m).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = FieldOp::from_fn(2, |i, j| if i < j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn trace_norm_trivial_cases() {
        assert_eq!(trace_norm(&FieldOp::zeros(5)).unwrap(), 0.0);
        let p = FieldOp::from_fn(5, |i, j| {
            if i == j && i < 3 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!((trace_norm(&p).unwrap() - 3.0).abs() < 1e-12);
        let u = coherent_state(c(1.0, 0.5), 30).unwrap();
        let uu = u.outer(&u);
        let mut m = uu.scaled(c(0.5, 0.0));
        m.add_scaled(c(-0.5, 0.0), &uu);
        assert!(trace_norm(&m).unwrap() < 1e-15);
    }

    #[test]
    fn expectation_and_trace_product_agree() {
        let u = coherent_state(c(1.5, -0.3), 25).unwrap();
        let m = FieldOp::from_fn(25, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64));
        let lhs = m.expectation(&u);
        let rhs = m.trace_product(&u.outer(&u));
        assert!((lhs - rhs).norm() < 1e-10);
    }
}
