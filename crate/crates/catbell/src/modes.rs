//! Two-mode states: entangled cat states, pointer mixtures, local
//! nonlinear evolution per site, and sign-readout collapse.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    self, coherent, hermite_wavefunctions, EvolutionParams, FockState,
};
use crate::grid::gauss_legendre;

/// Which mode a local operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

/// Correlation sign of the Bell cat state: `Anticorrelated` is
/// N(|α⟩|−β⟩ − |−α⟩|β⟩); `Correlated` replaces β → −β.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSign {
    Anticorrelated,
    Correlated,
}

/// A pure two-mode state: complex amplitude matrix over Fock⊗Fock,
/// rows indexing mode a (site A) and columns mode b (site B).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: Array2<Complex64>,
}

impl TwoModeState {
    pub fn from_amplitudes(amplitudes: Array2<Complex64>) -> Self {
        TwoModeState { amplitudes }
    }

    /// Product state |a⟩⊗|b⟩.
    pub fn product(a: &FockState, b: &FockState) -> Self {
        let (na, nb) = (a.n_max() + 1, b.n_max() + 1);
        let mut amplitudes = Array2::zeros((na, nb));
        for (i, ai) in a.amplitudes().iter().enumerate() {
            for (j, bj) in b.amplitudes().iter().enumerate() {
                amplitudes[(i, j)] = ai * bj;
            }
        }
        TwoModeState { amplitudes }
    }

    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.amplitudes
    }

    pub fn n_max_a(&self) -> usize {
        self.amplitudes.nrows() - 1
    }

    pub fn n_max_b(&self) -> usize {
        self.amplitudes.ncols() - 1
    }

    /// Frobenius norm (√⟨ψ|ψ⟩).
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        TwoModeState { amplitudes: &self.amplitudes * factor }
    }

    pub fn sub(&self, other: &TwoModeState) -> Self {
        TwoModeState { amplitudes: &self.amplitudes - &other.amplitudes }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// Transpose of the amplitude matrix (swap of the two sites).
    pub fn swapped(&self) -> Self {
        TwoModeState { amplitudes: self.amplitudes.t().to_owned() }
    }

    /// Reduced density matrix of one site (partial trace over the other).
    pub fn reduced_density(&self, site: Site) -> Array2<Complex64> {
        let c = &self.amplitudes;
        match site {
            // ρ_A[n, n'] = Σ_m c[n, m]·conj(c[n', m])
            Site::A => {
                let n = c.nrows();
                let mut rho = Array2::zeros((n, n));
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = Complex64::ZERO;
                        for m in 0..c.ncols() {
                            acc += c[(i, m)] * c[(j, m)].conj();
                        }
                        rho[(i, j)] = acc;
                    }
                }
                rho
            }
            // ρ_B[m, m'] = Σ_n conj(c[n, m])·c[n, m']
            Site::B => {
                let m = c.ncols();
                let mut rho = Array2::zeros((m, m));
                for i in 0..m {
                    for j in 0..m {
                        let mut acc = Complex64::ZERO;
                        for n in 0..c.nrows() {
                            acc += c[(n, i)].conj() * c[(n, j)];
                        }
                        rho[(i, j)] = acc;
                    }
                }
                rho
            }
        }
    }
}

/// tr(ρ²) of a density matrix.
pub fn purity(rho: &Array2<Complex64>) -> f64 {
    rho.iter().map(|c| c.norm_sqr()).sum()
}

/// A rank-limited mixed state as a weighted list of pure states.
/// Every mixture in this crate has rank ≤ 2, so the representation is
/// exact and cheap.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, TwoModeState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, TwoModeState)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::DegenerateState("ensemble with no members".into()));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateState(format!(
                "ensemble weights sum to {total}, expected 1"
            )));
        }
        if members.iter().any(|(w, _)| *w <= 0.0 || *w > 1.0) {
            return Err(Error::DegenerateState("ensemble weights must lie in (0, 1]".into()));
        }
        Ok(Ensemble { members })
    }

    pub fn pure(state: TwoModeState) -> Self {
        Ensemble { members: vec![(1.0, state)] }
    }

    pub fn members(&self) -> &[(f64, TwoModeState)] {
        &self.members
    }
}

/// Entangled Bell cat state N(|α⟩|−β⟩ − |−α⟩|β⟩) with the exact
/// normalization N = (1/√2)·{1 − exp(−2α² − 2β²)}^{−1/2}.
///
/// Rejects near-degenerate inputs (both amplitudes below 1e-6), where
/// the two branches coincide and N diverges.
pub fn bell_cat(
    alpha: f64,
    beta: f64,
    sign: BellSign,
    n_max_a: usize,
    n_max_b: usize,
) -> Result<TwoModeState> {
    if alpha < 0.0 || beta < 0.0 {
        return Err(Error::DegenerateState(format!(
            "bell_cat expects alpha, beta >= 0, got ({alpha}, {beta})"
        )));
    }
    if alpha < 1e-6 && beta < 1e-6 {
        return Err(Error::DegenerateState(format!(
            "bell_cat branches coincide at alpha = {alpha}, beta = {beta}; \
             the normalization diverges"
        )));
    }
    let b = match sign {
        BellSign::Anticorrelated => beta,
        BellSign::Correlated => -beta,
    };
    let a_plus = coherent(Complex64::new(alpha, 0.0), n_max_a)?;
    let a_minus = coherent(Complex64::new(-alpha, 0.0), n_max_a)?;
    let b_minus = coherent(Complex64::new(-b, 0.0), n_max_b)?;
    let b_plus = coherent(Complex64::new(b, 0.0), n_max_b)?;

    let norm = 0.5 / (1.0 - (-2.0 * alpha * alpha - 2.0 * beta * beta).exp());
    let n_const = Complex64::new(norm.sqrt(), 0.0);
    let first = TwoModeState::product(&a_plus, &b_minus);
    let second = TwoModeState::product(&a_minus, &b_plus);
    Ok(first.sub(&second).scaled(n_const))
}

/// Bell cat with the default truncation rule on each mode.
pub fn bell_cat_default(alpha: f64, beta: f64, sign: BellSign) -> Result<TwoModeState> {
    bell_cat(alpha, beta, sign, fock::default_n_max(alpha), fock::default_n_max(beta))
}

/// The non-entangled pointer mixture
/// ½·|α⟩|−β⟩⟨α|⟨−β| + ½·|−α⟩|β⟩⟨−α|⟨β|.
pub fn pointer_mixture(
    alpha: f64,
    beta: f64,
    n_max_a: usize,
    n_max_b: usize,
) -> Result<Ensemble> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::DegenerateState(format!(
            "pointer_mixture expects alpha, beta > 0, got ({alpha}, {beta})"
        )));
    }
    let a_plus = coherent(Complex64::new(alpha, 0.0), n_max_a)?;
    let a_minus = coherent(Complex64::new(-alpha, 0.0), n_max_a)?;
    let b_minus = coherent(Complex64::new(-beta, 0.0), n_max_b)?;
    let b_plus = coherent(Complex64::new(beta, 0.0), n_max_b)?;
    Ensemble::new(vec![
        (0.5, TwoModeState::product(&a_plus, &b_minus)),
        (0.5, TwoModeState::product(&a_minus, &b_plus)),
    ])
}

pub fn pointer_mixture_default(alpha: f64, beta: f64) -> Result<Ensemble> {
    pointer_mixture(alpha, beta, fock::default_n_max(alpha), fock::default_n_max(beta))
}

/// Local unitary e^(−iΩt·n̂^k) on one site: row phases for A, column
/// phases for B. Local operators on distinct factors commute, so the
/// application order of A and B never matters.
pub fn apply_local(state: &TwoModeState, site: Site, params: &EvolutionParams) -> TwoModeState {
    let mut amplitudes = state.amplitudes.clone();
    match site {
        Site::A => {
            let phases = params.phases(state.n_max_a());
            for (n, mut row) in amplitudes.rows_mut().into_iter().enumerate() {
                let ph = Complex64::from_polar(1.0, -phases[n]);
                row.mapv_inplace(|c| c * ph);
            }
        }
        Site::B => {
            let phases = params.phases(state.n_max_b());
            for (m, mut col) in amplitudes.columns_mut().into_iter().enumerate() {
                let ph = Complex64::from_polar(1.0, -phases[m]);
                col.mapv_inplace(|c| c * ph);
            }
        }
    }
    TwoModeState { amplitudes }
}

/// Member-wise local evolution; the weights are untouched.
pub fn apply_local_ensemble(ens: &Ensemble, site: Site, params: &EvolutionParams) -> Ensemble {
    Ensemble {
        members: ens
            .members
            .iter()
            .map(|(w, s)| (*w, apply_local(s, site, params)))
            .collect(),
    }
}

/// Fock-basis matrix of the half-line projector ∫ over x>0 (or x≤0) of
/// |x⟩⟨x| dx, i.e. entries ∫ ψ_m(x)·ψ_n(x) dx over the half-line.
/// Composite Gauss-Legendre panels resolve the Hermite oscillations to
/// near machine precision.
pub fn halfline_projector(n_max: usize, positive: bool) -> Array2<f64> {
    let order = 24;
    let panel = 0.5;
    let upper = (2.0 * (n_max as f64 + 1.0)).sqrt() + 8.0;
    let (nodes, weights) = gauss_legendre(order);

    let mut proj = Array2::zeros((n_max + 1, n_max + 1));
    let panels = (upper / panel).ceil() as usize;
    for p in 0..panels {
        let lo = p as f64 * panel;
        for (t, w) in nodes.iter().zip(&weights) {
            let x = lo + 0.5 * panel * (t + 1.0);
            let gw = 0.5 * panel * w;
            let psi = hermite_wavefunctions(n_max, x);
            for m in 0..=n_max {
                let pm = psi[m] * gw;
                for n in m..=n_max {
                    proj[(m, n)] += pm * psi[n];
                }
            }
        }
    }
    for m in 0..=n_max {
        for n in 0..m {
            proj[(m, n)] = proj[(n, m)];
        }
    }
    if !positive {
        // ∫_{x≤0} ψ_m ψ_n = δ_mn − ∫_{x>0} by completeness and parity
        for m in 0..=n_max {
            for n in 0..=n_max {
                proj[(m, n)] = if m == n { 1.0 - proj[(m, n)] } else { -proj[(m, n)] };
            }
        }
    }
    proj
}

/// Readout-induced collapse at site B: project mode B onto the
/// X_B > 0 and X_B ≤ 0 sign sectors and renormalize each branch.
/// Branch weights are the sector probabilities; branches below 1e-12
/// are dropped and the remaining weights renormalized.
pub fn collapse_by_b_sign(state: &TwoModeState) -> Result<Ensemble> {
    let n_max_b = state.n_max_b();
    let mut members = Vec::new();
    for positive in [true, false] {
        let proj = halfline_projector(n_max_b, positive);
        // C' = C·Πᵀ = C·Π (Π symmetric), acting on the B index
        let c = state.amplitudes();
        let mut projected = Array2::zeros(c.dim());
        for n in 0..c.nrows() {
            for m in 0..c.ncols() {
                let mut acc = Complex64::ZERO;
                for mp in 0..c.ncols() {
                    acc += c[(n, mp)] * proj[(mp, m)];
                }
                projected[(n, m)] = acc;
            }
        }
        let branch = TwoModeState { amplitudes: projected };
        // ⟨ψ|Π|ψ⟩ = ⟨ψ|Π²|ψ⟩ only up to quadrature error; use the
        // physical probability ⟨ψ|Π|ψ⟩ via the original state
        let prob = state
            .amplitudes()
            .iter()
            .zip(branch.amplitudes().iter())
            .map(|(orig, proj)| (orig.conj() * proj).re)
            .sum::<f64>();
        if prob >= 1e-12 {
            let renorm = Complex64::new(1.0 / branch.norm(), 0.0);
            members.push((prob, branch.scaled(renorm)));
        }
    }
    if members.is_empty() {
        return Err(Error::DegenerateState(
            "collapse produced no branch with probability >= 1e-12".into(),
        ));
    }
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    for (w, _) in members.iter_mut() {
        *w /= total;
    }
    Ensemble::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bell_cat_is_normalized() {
        let s = bell_cat_default(3.0, 3.0, BellSign::Anticorrelated).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-10);
        let s = bell_cat_default(0.5, 0.7, BellSign::Correlated).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_cat_rejected() {
        assert!(matches!(
            bell_cat_default(0.0, 0.0, BellSign::Anticorrelated),
            Err(Error::DegenerateState(_))
        ));
        assert!(matches!(
            bell_cat_default(1e-8, 1e-9, BellSign::Anticorrelated),
            Err(Error::DegenerateState(_))
        ));
        // one large amplitude keeps the state well defined
        assert!(bell_cat_default(0.0, 3.0, BellSign::Anticorrelated).is_ok());
    }

    #[test]
    fn reduced_purity_is_half() {
        // the qubit limit of the Bell cat is maximally entangled; at
        // α = β the finite-α corrections cancel exactly
        let s = bell_cat_default(3.0, 3.0, BellSign::Anticorrelated).unwrap();
        let rho = s.reduced_density(Site::A);
        assert!((purity(&rho) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn pointer_mixture_members() {
        let ens = pointer_mixture_default(3.0, 3.0).unwrap();
        assert_eq!(ens.members().len(), 2);
        for (w, s) in ens.members() {
            assert!((w - 0.5).abs() < 1e-15);
            assert!((s.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn local_evolution_commutes_and_preserves_norm() {
        let s = bell_cat_default(1.5, 1.0, BellSign::Anticorrelated).unwrap();
        let pa = EvolutionParams::new(1.0, 4, 0.37).unwrap();
        let pb = EvolutionParams::new(1.0, 4, 1.11).unwrap();
        let ab = apply_local(&apply_local(&s, Site::A, &pa), Site::B, &pb);
        let ba = apply_local(&apply_local(&s, Site::B, &pb), Site::A, &pa);
        assert_eq!(ab.amplitudes(), ba.amplitudes());
        assert!((ab.norm() - s.norm()).abs() < 1e-14);

        let zero = EvolutionParams::new(1.0, 4, 0.0).unwrap();
        assert_eq!(apply_local(&s, Site::A, &zero).amplitudes(), s.amplitudes());
    }

    #[test]
    fn bell_state_invariant_at_equal_eighth_rotations() {
        // U_A(π/4Ω)·U_B(π/4Ω)|ψ_Bell⟩ = e^{−iπ/4}|ψ_Bell⟩
        let s = bell_cat_default(3.0, 3.0, BellSign::Anticorrelated).unwrap();
        let p = EvolutionParams::new(1.0, 4, PI / 4.0).unwrap();
        let evolved = apply_local(&apply_local(&s, Site::A, &p), Site::B, &p);
        let overlap = s.inner(&evolved);
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
        assert!((overlap.arg() + PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn apply_local_leaves_other_site_reduced_state() {
        let s = bell_cat_default(2.0, 1.5, BellSign::Anticorrelated).unwrap();
        let p = EvolutionParams::new(1.0, 4, 0.7).unwrap();
        let evolved = apply_local(&s, Site::A, &p);
        let before = s.reduced_density(Site::B);
        let after = evolved.reduced_density(Site::B);
        let max_diff = before
            .iter()
            .zip(after.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(max_diff < 1e-12, "reduced state of B moved by {max_diff:e}");
    }

    #[test]
    fn halfline_projector_basics() {
        let n = 24;
        let proj = halfline_projector(n, true);
        // diagonal ½, even-sum off-diagonal 0, first odd element 1/√(2π)
        for m in 0..=n {
            assert!((proj[(m, m)] - 0.5).abs() < 1e-12);
        }
        assert!((proj[(0, 2)]).abs() < 1e-12);
        assert!((proj[(0, 1)] - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
        // idempotence Π² = Π
        let mut max_diff = 0.0f64;
        for i in 0..=n {
            for j in 0..=n {
                let mut acc = 0.0;
                for k in 0..=n {
                    acc += proj[(i, k)] * proj[(k, j)];
                }
                max_diff = max_diff.max((acc - proj[(i, j)]).abs());
            }
        }
        // truncated Π² misses the n > n_max completeness tail; the
        // largest Fock amplitudes used sit well below the cutoff
        assert!(max_diff < 2e-2, "projector idempotence defect {max_diff:e}");
    }

    #[test]
    fn collapse_of_bell_cat_splits_evenly() {
        let s = bell_cat_default(3.0, 3.0, BellSign::Anticorrelated).unwrap();
        let ens = collapse_by_b_sign(&s).unwrap();
        assert_eq!(ens.members().len(), 2);
        for (w, member) in ens.members() {
            assert!((w - 0.5).abs() < 1e-6, "branch weight {w}");
            assert!((member.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn collapse_of_displaced_product_keeps_one_branch() {
        // |α⟩|β⟩ with β = 3: P(X_B > 0) = (1 + erf(√2·3))/2 ≈ 1 − 1e-9
        let a = coherent(Complex64::new(1.0, 0.0), 30).unwrap();
        let b = coherent(Complex64::new(3.0, 0.0), 53).unwrap();
        let s = TwoModeState::product(&a, &b);
        let ens = collapse_by_b_sign(&s).unwrap();
        let wmax = ens.members().iter().map(|(w, _)| *w).fold(0.0f64, f64::max);
        let expect = 0.5 * (1.0 + crate::special::erf(2.0_f64.sqrt() * 3.0));
        assert!((wmax - expect).abs() < 1e-9, "got {wmax}, want {expect}");
    }

    #[test]
    fn collapse_is_idempotent_per_branch() {
        let s = bell_cat_default(2.0, 2.0, BellSign::Anticorrelated).unwrap();
        let ens = collapse_by_b_sign(&s).unwrap();
        for (_, branch) in ens.members() {
            let again = collapse_by_b_sign(branch).unwrap();
            // one branch survives and equals the input up to phase
            let (w, top) = again
                .members()
                .iter()
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            assert!(*w > 1.0 - 1e-6);
            let fid = branch.inner(top).norm_sqr();
            assert!(fid > 1.0 - 1e-6, "fidelity {fid}");
        }
    }
}
