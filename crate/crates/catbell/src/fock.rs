//! Single-mode states in a truncated Fock basis.
//!
//! Units are chosen with ħ = 1 and the quadratures fixed to
//! X̂ = (â + â†)/√2, P̂ = (â − â†)/(i√2), so a coherent state |α⟩ with
//! real α has ⟨X̂⟩ = √2·α and quadrature variance 1/2.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default probability-deficit tolerance for coherent-state builders.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;

/// Truncation rule: the Poisson tail of a coherent state beyond
/// `|α|² + 8|α| + 20` carries less than ~1e-12 of the norm for |α| ≤ 4,
/// and the neglected amplitudes themselves are below ~1e-14.
pub fn default_n_max(alpha: f64) -> usize {
    let a = alpha.abs();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Nonlinear evolution parameters for H = Ω·n̂^k.
///
/// The evolution is an exact phase map in the number basis,
/// amplitude[n] → amplitude[n]·exp(−i·Ω·t·n^k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    /// Nonlinear coefficient Ω (rad / time), > 0.
    pub omega: f64,
    /// Nonlinearity exponent; must be even and ≥ 2.
    pub k: u32,
    /// Interaction time, ≥ 0.
    pub t: f64,
}

impl EvolutionParams {
    pub fn new(omega: f64, k: u32, t: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::ConfigInvalid(format!("omega must be > 0, got {omega}")));
        }
        if k < 2 || k % 2 != 0 {
            return Err(Error::ConfigInvalid(format!("k must be even and >= 2, got {k}")));
        }
        if !(t >= 0.0) {
            return Err(Error::ConfigInvalid(format!("t must be >= 0, got {t}")));
        }
        Ok(EvolutionParams { omega, k, t })
    }

    /// phase[n] = Ω·t·n^k for n = 0..=n_max.
    pub fn phases(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max)
            .map(|n| self.omega * self.t * (n as f64).powi(self.k as i32))
            .collect()
    }
}

/// A pure single-mode state as amplitudes over |0⟩..|n_max⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: Vec<Complex64>,
}

impl FockState {
    /// Wraps raw amplitudes; the truncation cutoff is `len - 1`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        assert!(!amplitudes.is_empty(), "state needs at least the vacuum amplitude");
        FockState { amplitudes }
    }

    /// The vacuum state |0⟩ in a space truncated at `n_max`.
    pub fn vacuum(n_max: usize) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; n_max + 1];
        amplitudes[0] = Complex64::ONE;
        FockState { amplitudes }
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨ψ|ψ⟩ (captured probability within the truncated space).
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        FockState {
            amplitudes: self.amplitudes.iter().map(|c| c * factor).collect(),
        }
    }

    /// amplitude-wise sum; callers manage normalization.
    pub fn add(&self, other: &FockState) -> Self {
        let n = self.amplitudes.len().max(other.amplitudes.len());
        let mut amplitudes = vec![Complex64::ZERO; n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[i] += a;
        }
        for (i, b) in other.amplitudes.iter().enumerate() {
            amplitudes[i] += b;
        }
        FockState { amplitudes }
    }
}

/// Coherent state |α⟩ with amplitudes e^(−|α|²/2)·αⁿ/√n!.
///
/// Fails with `TruncationTooSmall` when the captured norm drops below
/// `1 − tolerance`; growing `n_max` (see [`default_n_max`]) is the fix.
pub fn coherent_with_tolerance(
    alpha: Complex64,
    n_max: usize,
    tolerance: f64,
) -> Result<FockState> {
    let mut amplitudes = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amplitudes.push(c);
    for n in 0..n_max {
        c *= alpha / ((n + 1) as f64).sqrt();
        amplitudes.push(c);
    }
    let state = FockState { amplitudes };
    let captured = state.norm_sqr();
    if captured < 1.0 - tolerance {
        return Err(Error::TruncationTooSmall { captured, tolerance, n_max });
    }
    Ok(state)
}

/// Coherent state with the default 1e-10 deficit tolerance.
pub fn coherent(alpha: Complex64, n_max: usize) -> Result<FockState> {
    coherent_with_tolerance(alpha, n_max, DEFAULT_TRUNCATION_TOL)
}

/// Coherent state for real α with the default truncation rule.
pub fn coherent_real(alpha: f64) -> Result<FockState> {
    coherent(Complex64::new(alpha, 0.0), default_n_max(alpha))
}

/// Exact nonlinear evolution under H = Ω·n̂^k: a pure phase map, so the
/// norm is preserved to the last bit.
pub fn evolve_nonlinear(state: &FockState, params: &EvolutionParams) -> FockState {
    let phases = params.phases(state.n_max());
    let amplitudes = state
        .amplitudes
        .iter()
        .zip(&phases)
        .map(|(c, &phi)| c * Complex64::from_polar(1.0, -phi))
        .collect();
    FockState { amplitudes }
}

/// ⟨a|b⟩ = Σₙ conj(a[n])·b[n]; shorter states are zero-padded.
pub fn inner(a: &FockState, b: &FockState) -> Complex64 {
    a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// |⟨a|b⟩|² — global phases never enter comparisons.
pub fn fidelity(a: &FockState, b: &FockState) -> f64 {
    inner(a, b).norm_sqr()
}

/// Harmonic-oscillator eigenfunctions ψ₀(x)..ψ_{n_max}(x) by the
/// normalized three-term recurrence
/// ψ_{n+1} = x·√(2/(n+1))·ψ_n − √(n/(n+1))·ψ_{n−1},
/// which avoids factorial overflow for n into the hundreds.
pub fn hermite_wavefunctions(n_max: usize, x: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(n_max + 1);
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    psi.push(psi0);
    if n_max == 0 {
        return psi;
    }
    psi.push(x * std::f64::consts::SQRT_2 * psi0);
    for n in 1..n_max {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
        psi.push(next);
    }
    psi
}

/// Position-representation amplitude ⟨x|ψ⟩ = Σₙ ψ[n]·ψₙ(x).
pub fn x_overlap(x: f64, state: &FockState) -> Complex64 {
    let psi = hermite_wavefunctions(state.n_max(), x);
    state
        .amplitudes
        .iter()
        .zip(&psi)
        .map(|(c, &h)| c * h)
        .sum()
}

/// Momentum-representation amplitude ⟨p|ψ⟩ = Σₙ ψ[n]·(−i)ⁿ·ψₙ(p).
pub fn p_overlap(p: f64, state: &FockState) -> Complex64 {
    let psi = hermite_wavefunctions(state.n_max(), p);
    let mut phase = Complex64::ONE;
    let mut acc = Complex64::ZERO;
    for (c, &h) in state.amplitudes.iter().zip(&psi) {
        acc += c * phase * h;
        phase *= Complex64::new(0.0, -1.0);
    }
    acc
}

/// ⟨X̂²⟩ from ladder-operator matrix elements:
/// X̂² = (â² + â†² + 2n̂ + 1)/2.
pub fn x_squared_expectation(state: &FockState) -> f64 {
    quadrature_second_moment(state, 1.0)
}

/// ⟨P̂²⟩ = (−â² − â†² + 2n̂ + 1)/2.
pub fn p_squared_expectation(state: &FockState) -> f64 {
    quadrature_second_moment(state, -1.0)
}

fn quadrature_second_moment(state: &FockState, sign: f64) -> f64 {
    let a = &state.amplitudes;
    let mut diag = 0.0;
    for (n, c) in a.iter().enumerate() {
        diag += c.norm_sqr() * (n as f64 + 0.5);
    }
    let mut cross = 0.0;
    for n in 0..a.len().saturating_sub(2) {
        let w = ((n + 1) as f64 * (n + 2) as f64).sqrt();
        cross += w * (a[n].conj() * a[n + 2]).re;
    }
    diag + sign * cross
}
