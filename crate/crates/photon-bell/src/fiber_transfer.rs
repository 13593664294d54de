//! Single-excitation transfer from cavity A to cavity B through a fiber with a
//! discrete, equally spaced mode lattice.
//!
//! Units have `ħ = 1`. Frequencies are stored as detunings `x_n = ω_n − ω`
//! from the cavity frequency, which keeps the pole structure well conditioned
//! when `ω` is large.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fock_core::C64;

/// Rotating-wave validity requires `band < ω / RWA_RATIO`.
pub const RWA_RATIO: f64 = 10.0;

/// Relative tolerance on the timing condition `c (T₁ + T₂) = l`.
pub const TIMING_TOL: f64 = 1e-9;

/// Edge roots are first searched within this many mode spacings of the band edge.
const EDGE_SPACINGS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberConfig {
    pub length_l: f64,
    pub c: f64,
    pub omega: f64,
    /// Half-width of the band of fiber modes kept around `ω`.
    pub band: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    /// Dwell times in units of `1/Γ_A`.
    pub gamma_t1: f64,
    pub gamma_t2: f64,
    /// Apply the time-reversal phases to the couplings.
    pub engineered: bool,
}

impl FiberConfig {
    /// `Γ = 1`, `c = 1`, `l = 24`, `ΓT₁ = ΓT₂ = 12` and `2K + 1` modes centred on `ω`.
    pub fn matched(modes_per_side: usize) -> Self {
        let l = 24.0;
        let spacing = 2.0 * PI / l;
        Self {
            length_l: l,
            c: 1.0,
            omega: 12_000.0 * spacing,
            band: (modes_per_side as f64 + 0.5) * spacing,
            gamma_a: 1.0,
            gamma_b: 1.0,
            gamma_t1: 12.0,
            gamma_t2: 12.0,
            engineered: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberModel {
    pub length_l: f64,
    pub c: f64,
    pub omega: f64,
    pub band: f64,
    /// `ω_n = 2πcn/l` inside `(ω − band, ω + band)`.
    pub mode_freqs: Vec<f64>,
    /// `ω_n − ω`
    pub detunings: Vec<f64>,
    pub kappa_a: Vec<C64>,
    pub kappa_b: Vec<C64>,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub t1: f64,
    pub t2: f64,
}

impl FiberModel {
    pub fn spacing(&self) -> f64 {
        2.0 * PI * self.c / self.length_l
    }

    pub fn n_modes(&self) -> usize {
        self.detunings.len()
    }

    /// Whether `c (T₁ + T₂) = l` within [`TIMING_TOL`].
    pub fn timing_ok(&self) -> bool {
        (self.c * (self.t1 + self.t2) - self.length_l).abs() <= TIMING_TOL * self.length_l
    }

    /// Lamb-type shift `Σ |κ_n|² / (ω − ω_n)` of the cavity mode; diagnostic only.
    pub fn frequency_shift(&self) -> f64 {
        self.kappa_a
            .iter()
            .zip(&self.detunings)
            .map(|(k, x)| -k.norm_sqr() / x)
            .filter(|v| v.is_finite())
            .sum()
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{key} = {v} must be positive"
        )))
    }
}

/// `|κ|² = Γ c / l`, so that `2π |κ|² ρ(ω) = Γ` with mode density `ρ = l / (2πc)`.
pub fn coupling_strength(gamma: f64, c: f64, length_l: f64) -> f64 {
    (gamma * c / length_l).sqrt()
}

pub fn build_fiber(config: &FiberConfig) -> Result<FiberModel> {
    for (k, v) in [
        ("length_l", config.length_l),
        ("c", config.c),
        ("omega", config.omega),
        ("band", config.band),
        ("gamma_a", config.gamma_a),
        ("gamma_b", config.gamma_b),
        ("gamma_t1", config.gamma_t1),
        ("gamma_t2", config.gamma_t2),
    ] {
        positive(k, v)?;
    }
    if config.band >= config.omega / RWA_RATIO {
        return Err(Error::InvalidParameter(format!(
            "band {} must stay below omega / {RWA_RATIO} = {}",
            config.band,
            config.omega / RWA_RATIO
        )));
    }
    let spacing = 2.0 * PI * config.c / config.length_l;
    let lo = ((config.omega - config.band) / spacing).floor() as i64;
    let hi = ((config.omega + config.band) / spacing).ceil() as i64;
    let mode_freqs: Vec<f64> = (lo..=hi)
        .map(|n| spacing * n as f64)
        .filter(|w| (w - config.omega).abs() < config.band)
        .collect();
    if mode_freqs.is_empty() {
        return Err(Error::InvalidParameter(
            "no fiber mode falls inside the band".into(),
        ));
    }
    let detunings: Vec<f64> = mode_freqs.iter().map(|w| w - config.omega).collect();
    let ka = coupling_strength(config.gamma_a, config.c, config.length_l);
    let kb = coupling_strength(config.gamma_b, config.c, config.length_l);
    let mut model = FiberModel {
        length_l: config.length_l,
        c: config.c,
        omega: config.omega,
        band: config.band,
        kappa_a: vec![C64::new(ka, 0.0); detunings.len()],
        kappa_b: vec![C64::new(kb, 0.0); detunings.len()],
        mode_freqs,
        detunings,
        gamma_a: config.gamma_a,
        gamma_b: config.gamma_b,
        t1: config.gamma_t1 / config.gamma_a,
        t2: config.gamma_t2 / config.gamma_a,
    };
    if config.engineered {
        let phases = breit_wigner_phases(&model);
        model.kappa_a = model
            .kappa_a
            .iter()
            .zip(&phases)
            .map(|(k, &phi)| k * C64::from_polar(1.0, phi))
            .collect();
        model.kappa_b = model
            .kappa_b
            .iter()
            .zip(&phases)
            .map(|(k, &phi)| k * C64::from_polar(1.0, -phi))
            .collect();
    }
    Ok(model)
}

/// `φ_n = arg(ω_n − ω + iΓ_A/2)`, so that `e^{2iφ}` is the ratio
/// `(ω_n − ω + iΓ_A/2)/(ω_n − ω − iΓ_A/2)`. Continuous in `ω_n`, tends to 0
/// far above the resonance and to `π` far below it.
pub fn breit_wigner_phases(model: &FiberModel) -> Vec<f64> {
    model
        .detunings
        .iter()
        .map(|&x| C64::new(x, model.gamma_a / 2.0).arg())
        .collect()
}

/// B-side couplings `κ'_n = κ_n*` for the A-side couplings `|κ_n| e^{iφ_n}`.
pub fn engineered_couplings(model: &FiberModel) -> Vec<C64> {
    model
        .kappa_a
        .iter()
        .zip(breit_wigner_phases(model))
        .map(|(k, phi)| C64::from_polar(k.norm(), -phi))
        .collect()
}

/// Normal modes of one cavity coupled to the fiber lattice.
///
/// Root `j` is stored as an offset from its nearest bare mode, which keeps
/// `x_n − λ_j` accurate for the mode that dominates the eigenvector.
#[derive(Clone, Debug)]
pub struct DressedModes {
    detunings: Vec<f64>,
    kappa: Vec<C64>,
    anchor: Vec<usize>,
    offset: Vec<f64>,
    cavity_weight: Vec<f64>,
}

impl DressedModes {
    pub fn new(detunings: &[f64], kappa: &[C64]) -> Result<Self> {
        assert_eq!(detunings.len(), kappa.len(), "one coupling per mode");
        let m = detunings.len();
        if m == 0 {
            return Err(Error::InvalidParameter("fiber has no modes".into()));
        }
        if let Some(i) = detunings
            .windows(2)
            .position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::Bracketing(i + 1));
        }
        let k2: Vec<f64> = kappa.iter().map(|k| k.norm_sqr()).collect();
        let mut modes = Self {
            detunings: detunings.to_vec(),
            kappa: kappa.to_vec(),
            anchor: Vec::with_capacity(m + 1),
            offset: Vec::with_capacity(m + 1),
            cavity_weight: Vec::with_capacity(m + 1),
        };
        let mean_spacing = if m > 1 {
            (detunings[m - 1] - detunings[0]) / (m - 1) as f64
        } else {
            k2[0].sqrt().max(1.0)
        };
        for j in 0..=m {
            let (anchor, d) = modes.find_root(j, &k2, mean_spacing)?;
            modes.anchor.push(anchor);
            modes.offset.push(d);
        }
        for j in 0..=m {
            let s: f64 = (0..m).map(|n| k2[n] / modes.gap(n, j).powi(2)).sum();
            modes.cavity_weight.push(1.0 / (1.0 + s).sqrt());
        }
        Ok(modes)
    }

    pub fn len(&self) -> usize {
        self.offset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offset.is_empty()
    }

    /// Dressed frequency `λ_j` as a detuning from `ω`.
    pub fn root(&self, j: usize) -> f64 {
        self.detunings[self.anchor[j]] + self.offset[j]
    }

    pub fn roots(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.root(j)).collect()
    }

    /// `x_n − λ_j`
    fn gap(&self, n: usize, j: usize) -> f64 {
        let a = self.anchor[j];
        if n == a {
            -self.offset[j]
        } else {
            (self.detunings[n] - self.detunings[a]) - self.offset[j]
        }
    }

    /// `f(λ) = −λ − Σ |κ_n|² / (x_n − λ)` with `λ = x_anchor + d`.
    fn quantization(&self, k2: &[f64], anchor: usize, d: f64) -> f64 {
        let xa = self.detunings[anchor];
        let mut sum = 0.0;
        for (n, (&x, &k)) in self.detunings.iter().zip(k2).enumerate() {
            let g = if n == anchor { -d } else { (x - xa) - d };
            sum += k / g;
        }
        -(xa + d) - sum
    }

    /// Residual `|f(λ_j)|` of the quantization condition.
    pub fn residual(&self, j: usize) -> f64 {
        let k2: Vec<f64> = self.kappa.iter().map(|k| k.norm_sqr()).collect();
        self.quantization(&k2, self.anchor[j], self.offset[j]).abs()
    }

    fn bisect(&self, k2: &[f64], anchor: usize, mut lo: f64, mut hi: f64) -> f64 {
        // f decreases through the root: positive at lo, negative at hi
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi || (hi - lo).abs() <= 1e-15 * lo.abs().max(hi.abs()) {
                break;
            }
            if self.quantization(k2, anchor, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn find_root(&self, j: usize, k2: &[f64], spacing: f64) -> Result<(usize, f64)> {
        let m = self.detunings.len();
        if j == 0 {
            let mut reach = EDGE_SPACINGS * spacing;
            for _ in 0..64 {
                if self.quantization(k2, 0, -reach) > 0.0 {
                    return Ok((0, self.bisect(k2, 0, -reach, 0.0)));
                }
                reach *= 2.0;
            }
            return Err(Error::Bracketing(0));
        }
        if j == m {
            let top = m - 1;
            let mut reach = EDGE_SPACINGS * spacing;
            for _ in 0..64 {
                if self.quantization(k2, top, reach) < 0.0 {
                    return Ok((top, self.bisect(k2, top, 0.0, reach)));
                }
                reach *= 2.0;
            }
            return Err(Error::Bracketing(m));
        }
        let (a, b) = (j - 1, j);
        let half = 0.5 * (self.detunings[b] - self.detunings[a]);
        let f_mid = self.quantization(k2, a, half);
        if !f_mid.is_finite() {
            return Err(Error::Bracketing(j));
        }
        if f_mid > 0.0 {
            Ok((b, self.bisect(k2, b, -half, 0.0)))
        } else {
            Ok((a, self.bisect(k2, a, 0.0, half)))
        }
    }

    /// Column `j` of the eigenvector matrix: cavity amplitude first, then the fiber modes.
    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        let ua = self.cavity_weight[j];
        let mut v = Vec::with_capacity(self.detunings.len() + 1);
        v.push(C64::new(ua, 0.0));
        for (n, k) in self.kappa.iter().enumerate() {
            v.push(-k * ua / self.gap(n, j));
        }
        v
    }

    /// Amplitudes after time `t` in the frame rotating at `ω`.
    pub fn evolve(&self, state: &[C64], t: f64) -> Vec<C64> {
        self.evolve_many(state, &[t]).pop().unwrap()
    }

    pub fn evolve_many(&self, state: &[C64], times: &[f64]) -> Vec<Vec<C64>> {
        assert_eq!(
            state.len(),
            self.len(),
            "state covers the cavity and every mode"
        );
        let mut coeff = Vec::with_capacity(self.len());
        let mut vectors = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            let v = self.eigenvector(j);
            coeff.push(v.iter().zip(state).map(|(u, s)| u.conj() * s).sum::<C64>());
            vectors.push(v);
        }
        times
            .iter()
            .map(|&t| {
                let mut out = vec![C64::new(0.0, 0.0); self.len()];
                for (j, v) in vectors.iter().enumerate() {
                    let w = coeff[j] * C64::from_polar(1.0, -self.root(j) * t);
                    for (o, u) in out.iter_mut().zip(v) {
                        *o += u * w;
                    }
                }
                out
            })
            .collect()
    }
}

/// Dressed frequencies `λ_j` of cavity A and the fiber, in absolute units.
pub fn quantization_roots(model: &FiberModel) -> Result<Vec<f64>> {
    let modes = DressedModes::new(&model.detunings, &model.kappa_a)?;
    Ok(modes.roots().into_iter().map(|y| y + model.omega).collect())
}

/// Exact amplitudes over `{A} ∪ fiber` at time `t`, with cavity A coupled.
pub fn exact_evolution(model: &FiberModel, initial: &[C64], t: f64) -> Result<Vec<C64>> {
    let modes = DressedModes::new(&model.detunings, &model.kappa_a)?;
    let frame = C64::from_polar(1.0, -model.omega * t);
    Ok(modes
        .evolve(initial, t)
        .into_iter()
        .map(|a| a * frame)
        .collect())
}

/// Weisskopf-Wigner solution for an excitation starting in cavity A.
pub fn pole_depletion(alpha: C64, model: &FiberModel, t: f64) -> (C64, Vec<C64>) {
    let g = model.gamma_a;
    let cavity = C64::from_polar(1.0, -model.omega * t) * (-g * t / 2.0).exp();
    let fiber = model
        .mode_freqs
        .iter()
        .zip(&model.kappa_a)
        .zip(&model.detunings)
        .map(|((&w, k), &x)| {
            alpha * k * (C64::from_polar(1.0, -w * t) - cavity) / C64::new(x, g / 2.0)
        })
        .collect();
    (alpha * cavity, fiber)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferResult {
    /// Cavity-B amplitude at `T₁ + T₂` from the exact two-stage evolution.
    pub alpha_out: C64,
    pub fidelity: f64,
    pub residual_fiber: f64,
    /// Population left in cavity A after the first stage, relative to `|α_in|²`.
    pub residual_a: f64,
    /// Cavity-B amplitude from the pole-approximation sum.
    pub pole_amplitude: C64,
    pub pole_fidelity: f64,
    /// `c (T₁ + T₂) = l` holds within tolerance.
    pub timing_ok: bool,
}

/// Releases `α` from cavity A for `T₁`, then lets cavity B absorb the fiber
/// field for `T₂` with A decoupled.
pub fn transfer_amplitude(model: &FiberModel, alpha: C64) -> Result<TransferResult> {
    let m = model.n_modes();
    let stage_a = DressedModes::new(&model.detunings, &model.kappa_a)?;
    let stage_b = DressedModes::new(&model.detunings, &model.kappa_b)?;
    let mut start = vec![C64::new(0.0, 0.0); m + 1];
    start[0] = alpha;
    let mut mid = stage_a.evolve(&start, model.t1);
    let left_in_a = mid[0];
    mid[0] = C64::new(0.0, 0.0);
    let end = stage_b.evolve(&mid, model.t2);

    let total = model.t1 + model.t2;
    let (ga, gb) = (model.gamma_a, model.gamma_b);
    let pole_rot: C64 = model
        .kappa_a
        .iter()
        .zip(&model.kappa_b)
        .zip(&model.detunings)
        .map(|((ka, kb), &x)| {
            kb.conj() * ka * C64::from_polar(1.0, -x * total)
                / (C64::new(x, gb / 2.0) * C64::new(x, ga / 2.0))
        })
        .sum::<C64>()
        * alpha;
    let frame = C64::from_polar(1.0, -model.omega * total);
    let norm = alpha.norm();
    Ok(TransferResult {
        alpha_out: end[0] * frame,
        fidelity: end[0].norm() / norm,
        residual_fiber: end[1..].iter().map(|a| a.norm_sqr()).sum::<f64>() / alpha.norm_sqr(),
        residual_a: left_in_a.norm_sqr() / alpha.norm_sqr(),
        pole_amplitude: pole_rot * frame,
        pole_fidelity: pole_rot.norm() / norm,
        timing_ok: model.timing_ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_count_and_spacing() {
        let model = build_fiber(&FiberConfig::matched(500)).unwrap();
        assert_eq!(model.n_modes(), 1001);
        let s = model.spacing();
        for w in model.mode_freqs.windows(2) {
            assert!(((w[1] - w[0]) - s).abs() < 1e-9);
        }
        assert!((s - 2.0 * PI / 24.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_reproduces_decay_rate() {
        let model = build_fiber(&FiberConfig::matched(10)).unwrap();
        let k2 = model.kappa_a[0].norm_sqr();
        let gamma = 2.0 * PI * k2 * model.length_l / (2.0 * PI * model.c);
        assert!((gamma - model.gamma_a).abs() < 1e-12);
    }

    #[test]
    fn wide_band_is_rejected() {
        let mut cfg = FiberConfig::matched(10);
        cfg.band = cfg.omega / 5.0;
        assert!(build_fiber(&cfg).is_err());
        cfg.band = -1.0;
        assert!(build_fiber(&cfg).is_err());
    }

    #[test]
    fn single_resonant_mode_splits_symmetrically() {
        let k = 0.3;
        let modes = DressedModes::new(&[0.0], &[C64::new(0.0, k)]).unwrap();
        let r = modes.roots();
        assert!(
            (r[0] + k).abs() < 1e-12 && (r[1] - k).abs() < 1e-12,
            "{r:?}"
        );
    }

    #[test]
    fn weak_coupling_recovers_bare_frequencies() {
        let x = [-2.0, -0.5, 0.7, 1.9];
        let modes = DressedModes::new(&x, &[C64::new(1e-7, 0.0); 4]).unwrap();
        let r = modes.roots();
        let mut bare = x.to_vec();
        bare.push(0.0);
        bare.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip(&bare) {
            assert!((a - b).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn degenerate_lattice_fails_bracketing() {
        let r = DressedModes::new(&[0.0, 0.0], &[C64::new(0.1, 0.0); 2]);
        assert!(matches!(r, Err(Error::Bracketing(1))));
    }

    #[test]
    fn phase_profile() {
        let model = build_fiber(&FiberConfig::matched(200)).unwrap();
        let phases = breit_wigner_phases(&model);
        let kp = engineered_couplings(&model);
        for ((k, kp), x) in model.kappa_a.iter().zip(&kp).zip(&model.detunings) {
            assert!((k.norm() - kp.norm()).abs() < 1e-15);
            let ratio = C64::new(*x, 0.5) / C64::new(*x, -0.5);
            assert!((kp.conj() / kp - ratio).norm() < 1e-12);
        }
        let centre = phases.len() / 2;
        assert!(model.detunings[centre].abs() < 1e-9);
        assert!((phases[centre] - PI / 2.0).abs() < 1e-9);
        assert!(phases.last().unwrap().abs() < 0.01);
        assert!(phases.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn pole_depletion_limits() {
        let model = build_fiber(&FiberConfig::matched(50)).unwrap();
        let a = C64::new(0.6, 0.8);
        let (c0, f0) = pole_depletion(a, &model, 0.0);
        assert!((c0 - a).norm() < 1e-15);
        assert!(f0.iter().all(|z| z.norm() < 1e-12));
        let (c10, _) = pole_depletion(a, &model, 10.0);
        assert!((c10.norm() - (-5.0f64).exp()).abs() < 1e-12);
    }
}
