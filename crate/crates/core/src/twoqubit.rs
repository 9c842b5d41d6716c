//! Two Ising-coupled qubits under collective dephasing.
//!
//! H = ω_A σ_z^A + ω_B σ_z^B + J σ_z^A σ_z^B and L = σ_z^A + σ_z^B, in the
//! product basis |1> = |++>, |2> = |+->, |3> = |-+>, |4> = |-->.
//! L has eigenvalues (2, 0, 0, −2), so every coherence except ρ₂₃ dephases:
//! ρ₁₄ at rate 16·F_R, the single-excitation coherences at 4·F_R.

use num_complex::Complex64 as C64;

use crate::dynamics::{CommutingModel, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues_general, eigenvalues_hermitian, kron, pauli, ComplexMatrix, DensityMatrix,
};

/// Largest imaginary part tolerated in the spectrum of ρρ̃.
pub const CONCURRENCE_IMAG_TOL: f64 = 1e-8;

/// Default absolute tolerance for the amplitude-product tests in [`classify`].
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub coupling_j: f64,
}

impl TwoQubitParams {
    pub fn new(omega_a: f64, omega_b: f64, coupling_j: f64) -> Result<Self> {
        if ![omega_a, omega_b, coupling_j].iter().all(|x| x.is_finite()) {
            return Err(Error::arg("two-qubit parameters must be finite"));
        }
        Ok(TwoQubitParams {
            omega_a,
            omega_b,
            coupling_j,
        })
    }
}

pub fn build_model(p: &TwoQubitParams) -> CommutingModel {
    let id = pauli::identity();
    let z = pauli::z();
    let za = kron(&z, &id);
    let zb = kron(&id, &z);
    let zz = kron(&z, &z);
    let h = za
        .scale(C64::new(p.omega_a, 0.0))
        .zip_unchecked(&zb, |x, y| x + y * p.omega_b)
        .zip_unchecked(&zz, |x, y| x + y * p.coupling_j);
    let l = za.zip_unchecked(&zb, |x, y| x + y);
    CommutingModel::from_matrices(h, l).expect("σ_z products are diagonal")
}

/// Normalised amplitudes (a₁, a₂, a₃, a₄) of a two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateAmplitudes([C64; 4]);

impl PureStateAmplitudes {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(a: [C64; 4]) -> Result<Self> {
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::arg(format!(
                "amplitudes are not normalised (Σ|a_i|² = {norm})"
            )));
        }
        Ok(PureStateAmplitudes(a))
    }

    /// Rescales to unit norm. Fails only for the zero vector.
    pub fn normalized(a: [C64; 4]) -> Result<Self> {
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::arg(
                "cannot normalise a zero or non-finite amplitude vector",
            ));
        }
        Self::new(a.map(|z| z / norm))
    }

    pub fn from_real(a: [f64; 4]) -> Result<Self> {
        Self::new(a.map(|x| C64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.0).expect("amplitudes are normalised")
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state must be 4x4, got {0}x{0}",
            rho.dim()
        )));
    }
    Ok(())
}

/// ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y) with ρ* conjugated in the product basis.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&pauli::y(), &pauli::y());
    yy.mul_unchecked(&rho.conj()).mul_unchecked(&yy)
}

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λ_i are the square roots of the eigenvalues of ρρ̃. They are
/// computed without squaring: with ρ = AA† from a pivoted Cholesky
/// factorisation, ρρ̃ is similar to τ†τ for τ = Aᵀ(σ_y⊗σ_y)A, so the λ_i
/// are the singular values of τ. Those come from the Hermitian dilation
/// [[0, τ], [τ†, 0]], whose eigenvalues are ±λ_i, and stay accurate to
/// rounding level even when λ_i ≈ 0. See [`concurrence_spin_flip_spectrum`]
/// for the direct route.
///
/// Exact zero patterns that dephasing preserves are handled in closed form
/// first, which keeps full relative accuracy as C decays far below 1e-16.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let factor = psd_factor(rho.matrix())?;
    if let Some(c) = structured_concurrence(rho.matrix()) {
        return Ok(c);
    }
    dilation_concurrence(&factor)
}

fn dilation_concurrence(factor: &[Vec<C64>]) -> Result<f64> {
    let r = factor.len();
    let mut lambdas = vec![0.0; 4];
    if r > 0 {
        let yy = kron(&pauli::y(), &pauli::y());
        let mut dilation = ComplexMatrix::zeros(2 * r);
        for k in 0..r {
            let y_ck: Vec<C64> = (0..4)
                .map(|i| (0..4).map(|j| yy[(i, j)] * factor[k][j]).sum())
                .collect();
            for l in 0..r {
                let tau_lk: C64 = (0..4).map(|i| factor[l][i] * y_ck[i]).sum();
                dilation[(l, r + k)] = tau_lk;
                dilation[(r + k, l)] = tau_lk.conj();
            }
        }
        let eigs = eigenvalues_hermitian(&dilation)?;
        for (slot, &e) in lambdas.iter_mut().zip(eigs.iter().rev().take(r)) {
            *slot = e.max(0.0);
        }
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Closed forms for structurally sparse states. If row k of ρ vanishes, the
/// nonzero part of ρρ̃ lives on the two-dimensional block that k's spin-flip
/// partner excludes, and its λ's are √(ρ_ii ρ_jj) ± |ρ_ij|. X-shaped states
/// reduce the same way on both blocks.
fn structured_concurrence(m: &ComplexMatrix) -> Option<f64> {
    let zero = C64::new(0.0, 0.0);
    let row_zero = |k: usize| (0..4).all(|j| m[(k, j)] == zero && m[(j, k)] == zero);
    let p = |i: usize| m[(i, i)].re.max(0.0);
    let (c14, c23) = (m[(0, 3)].norm(), m[(1, 2)].norm());
    if row_zero(1) || row_zero(2) {
        return Some(2.0 * c14);
    }
    if row_zero(0) || row_zero(3) {
        return Some(2.0 * c23);
    }
    let x_shaped = [(0, 1), (0, 2), (1, 3), (2, 3)]
        .iter()
        .all(|&(i, j)| m[(i, j)] == zero && m[(j, i)] == zero);
    if x_shaped {
        let c = (c14 - (p(1) * p(2)).sqrt()).max(c23 - (p(0) * p(3)).sqrt());
        return Some(2.0 * c.max(0.0));
    }
    None
}

/// Columns c_k of a factor with ρ ≈ Σ c_k c_k†, by diagonally pivoted
/// Cholesky. Pivots at or below rounding level of the trace end the
/// factorisation.
fn psd_factor(rho: &ComplexMatrix) -> Result<Vec<Vec<C64>>> {
    let n = rho.dim();
    let mut work = rho.hermitian_part();
    let scale = work.trace().re.abs().max(rho.max_abs());
    let floor = 4.0 * f64::EPSILON * scale;
    let mut cols = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for _ in 0..n {
        let (p, d) = (0..n)
            .filter(|&i| !used[i])
            .map(|i| (i, work[(i, i)].re))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one unused pivot");
        if d <= floor {
            break;
        }
        used[p] = true;
        let inv = 1.0 / d.sqrt();
        let col: Vec<C64> = (0..n).map(|i| work[(i, p)] * inv).collect();
        for i in 0..n {
            for j in 0..n {
                work[(i, j)] -= col[i] * col[j].conj();
            }
        }
        cols.push(col);
    }
    let worst = (0..n)
        .map(|i| work[(i, i)].re)
        .fold(f64::INFINITY, f64::min);
    if worst < -1e-8 * scale.max(1.0) {
        return Err(Error::Numerical(format!(
            "state is not positive semidefinite (residual diagonal {worst:e})"
        )));
    }
    Ok(cols)
}

/// Concurrence straight from the spectrum of ρρ̃ via
/// [`eigenvalues_general`]. Rounding in a zero eigenvalue μ shows up as √μ,
/// so near-pure states carry errors of order 1e-8 here.
pub fn concurrence_spin_flip_spectrum(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let m = rho.matrix();
    let r = m.mul_unchecked(&spin_flip(m));
    let eigs = eigenvalues_general(&r)?;
    if let Some(bad) = eigs.iter().find(|z| z.im.abs() > CONCURRENCE_IMAG_TOL) {
        return Err(Error::Numerical(format!(
            "spectrum of ρρ̃ has imaginary part {:e}; input is not a valid state",
            bad.im
        )));
    }
    let mut lambdas: Vec<f64> = eigs.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// C = 2|a₂a₃ − a₁a₄| for a pure state.
pub fn pure_concurrence(a: &PureStateAmplitudes) -> f64 {
    let [a1, a2, a3, a4] = a.0;
    2.0 * (a2 * a3 - a1 * a4).norm()
}

/// Reduced state of qubit A (trace over B).
pub fn reduce_a(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    let r = |i: usize, j: usize| rho.get(i - 1, j - 1);
    let m = ComplexMatrix::from_rows(vec![
        vec![r(1, 1) + r(2, 2), r(1, 3) + r(2, 4)],
        vec![r(3, 1) + r(4, 2), r(3, 3) + r(4, 4)],
    ])?;
    Ok(DensityMatrix::from_evolved(m))
}

/// Reduced state of qubit B (trace over A).
pub fn reduce_b(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    let r = |i: usize, j: usize| rho.get(i - 1, j - 1);
    let m = ComplexMatrix::from_rows(vec![
        vec![r(1, 1) + r(3, 3), r(1, 2) + r(3, 4)],
        vec![r(2, 1) + r(4, 3), r(2, 2) + r(4, 4)],
    ])?;
    Ok(DensityMatrix::from_evolved(m))
}

/// |ρ^A₁₂| = |ρ₁₃ + ρ₂₄|. Panics on a non-4×4 state.
pub fn coherence_a(rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.dim(), 4, "coherence_a needs a two-qubit state");
    (rho.get(0, 2) + rho.get(1, 3)).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntanglementClass {
    Separable,
    /// Concurrence is conserved exactly (a₁ = 0 or a₄ = 0).
    Robust,
    /// Concurrence decays to zero (a₂ = 0 or a₃ = 0).
    Fragile,
    Generic,
}

impl std::fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EntanglementClass::Separable => "Separable",
            EntanglementClass::Robust => "Robust",
            EntanglementClass::Fragile => "Fragile",
            EntanglementClass::Generic => "Generic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateClass {
    pub class: EntanglementClass,
    /// Concurrence left once every dephasing coherence has decayed,
    /// 2·max(0, |a₂a₃| − |a₁a₄|).
    pub asymptotic_concurrence: f64,
}

pub fn classify(a: &PureStateAmplitudes, tol: f64) -> StateClass {
    let [a1, a2, a3, a4] = a.0;
    let p23 = (a2 * a3).norm();
    let p14 = (a1 * a4).norm();
    let class = if (a2 * a3 - a1 * a4).norm() <= tol {
        EntanglementClass::Separable
    } else if (a1.norm() <= tol || a4.norm() <= tol) && p23 > tol {
        EntanglementClass::Robust
    } else if (a2.norm() <= tol || a3.norm() <= tol) && p14 > tol {
        EntanglementClass::Fragile
    } else {
        EntanglementClass::Generic
    };
    StateClass {
        class,
        asymptotic_concurrence: 2.0 * (p23 - p14).max(0.0),
    }
}

/// Entanglement decay time, local dephasing time and the Markov rate that
/// sets both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    pub entanglement: f64,
    pub dephasing: f64,
    pub markov_rate: f64,
}

pub fn time_scales(markov_rate: f64) -> Result<TimeScales> {
    if !(markov_rate > 0.0) || !markov_rate.is_finite() {
        return Err(Error::arg(format!(
            "Markov rate must be positive and finite, got {markov_rate}"
        )));
    }
    Ok(TimeScales {
        entanglement: 1.0 / (16.0 * markov_rate),
        dephasing: 1.0 / (4.0 * markov_rate),
        markov_rate,
    })
}

/// 2|a₁a₄|·exp(−16 D(t)).
pub fn fragile_concurrence_analytic(a1: C64, a4: C64, d_t: f64) -> f64 {
    2.0 * (a1 * a4).norm() * (-16.0 * d_t).exp()
}

/// Least-squares decay rate of log|signal| against time, over samples with
/// `window.0 <= t <= window.1`. Fails if fewer than two samples fall in the
/// window or the signal vanishes there.
pub fn fit_decay_rate(times: &[f64], signal: &[f64], window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(signal)
        .filter(|(&t, _)| t >= window.0 && t <= window.1)
        .map(|(&t, &s)| (t, s.abs()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::arg(format!(
            "fit window [{}, {}] holds {} samples, need at least 2",
            window.0,
            window.1,
            pts.len()
        )));
    }
    if let Some(&(t, _)) = pts.iter().find(|(_, s)| !(*s > 0.0)) {
        return Err(Error::Numerical(format!(
            "signal vanishes at t = {t} inside the fit window"
        )));
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, s) in &pts {
        sxy += (t - mean_t) * (s.ln() - mean_y);
        sxx += (t - mean_t) * (t - mean_t);
    }
    Ok(-sxy / sxx)
}

/// Why a trajectory contributes no fitted rate for one of its signals.
#[derive(Debug, Clone, PartialEq)]
pub enum RateExclusion {
    /// The signal is identically zero from the start.
    IdenticallyZero,
    /// The signal hits zero before or inside the window (sudden death).
    VanishesAt(f64),
    /// The signal does not decay over the window (fitted rate below threshold).
    NotDecaying(f64),
}

impl std::fmt::Display for RateExclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RateExclusion::IdenticallyZero => write!(f, "identically zero"),
            RateExclusion::VanishesAt(t) => write!(f, "vanishes at t = {t:.4}"),
            RateExclusion::NotDecaying(r) => write!(f, "not decaying (fitted rate {r:.3e})"),
        }
    }
}

/// Fitted asymptotic rates of concurrence and of qubit A's coherence.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRates {
    pub concurrence: std::result::Result<f64, RateExclusion>,
    pub coherence: std::result::Result<f64, RateExclusion>,
}

/// Rates below this are treated as "not decaying".
pub const MIN_DECAY_RATE: f64 = 1e-3;

fn signal_rate(
    times: &[f64],
    signal: &[f64],
    window: (f64, f64),
) -> std::result::Result<f64, RateExclusion> {
    let zero_floor = 1e-300;
    if signal.iter().all(|&s| s.abs() <= zero_floor) {
        return Err(RateExclusion::IdenticallyZero);
    }
    if let Some((&t, _)) = times
        .iter()
        .zip(signal)
        .find(|(&t, &s)| t <= window.1 && s.abs() <= zero_floor)
    {
        return Err(RateExclusion::VanishesAt(t));
    }
    match fit_decay_rate(times, signal, window) {
        Ok(r) if r >= MIN_DECAY_RATE => Ok(r),
        Ok(r) => Err(RateExclusion::NotDecaying(r)),
        Err(_) => Err(RateExclusion::IdenticallyZero),
    }
}

/// Fits both decay rates of a two-qubit trajectory over `window`.
pub fn fit_rates(traj: &Trajectory, window: (f64, f64)) -> Result<DecayRates> {
    let (c, coh) = match (&traj.concurrence, &traj.coherence_a) {
        (Some(c), Some(coh)) => (c, coh),
        _ => return Err(Error::arg("rate fitting needs a two-qubit trajectory")),
    };
    Ok(DecayRates {
        concurrence: signal_rate(&traj.times, c, window),
        coherence: signal_rate(&traj.times, coh, window),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse_mixture(zeros: &[usize], seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::zeros(4);
        for _ in 0..3 {
            let mut a = [C64::new(0.0, 0.0); 4];
            for (k, z) in a.iter_mut().enumerate() {
                if !zeros.contains(&k) {
                    *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let w: f64 = rng.gen_range(0.1..1.0);
            let p = PureStateAmplitudes::normalized(a).unwrap().density_matrix();
            m = m.add(&p.matrix().scale(C64::new(w, 0.0))).unwrap();
        }
        let t = m.trace();
        DensityMatrix::new(m.scale(t.inv())).unwrap()
    }

    #[test]
    fn structured_forms_match_dilation_route() {
        for (pattern, seed) in [
            (vec![1], 1),
            (vec![2], 2),
            (vec![0], 3),
            (vec![3], 4),
            (vec![1, 2], 5),
            (vec![0, 3], 6),
        ] {
            for s in 0..20 {
                let rho = sparse_mixture(&pattern, seed * 100 + s);
                let fast = structured_concurrence(rho.matrix()).unwrap();
                let general = dilation_concurrence(&psd_factor(rho.matrix()).unwrap()).unwrap();
                assert!(
                    (fast - general).abs() < 1e-12,
                    "{pattern:?}: {fast} vs {general}"
                );
            }
        }
        // A dephased X state mixes both blocks.
        let mut x = ComplexMatrix::from_real_diagonal(&[0.3, 0.2, 0.1, 0.4]);
        x[(0, 3)] = C64::new(0.2, 0.1);
        x[(3, 0)] = C64::new(0.2, -0.1);
        x[(1, 2)] = C64::new(0.05, 0.0);
        x[(2, 1)] = C64::new(0.05, 0.0);
        let rho = DensityMatrix::new(x).unwrap();
        let fast = structured_concurrence(rho.matrix()).unwrap();
        let general = dilation_concurrence(&psd_factor(rho.matrix()).unwrap()).unwrap();
        assert!((fast - general).abs() < 1e-12);
        assert!(fast > 0.0);
    }

    #[test]
    fn decayed_fragile_concurrence_keeps_relative_accuracy() {
        let a = PureStateAmplitudes::from_real([0.6, 0.0, 0.0, 0.8]).unwrap();
        let mut m = a.density_matrix().into_matrix();
        let f = (-40.0f64).exp();
        m[(0, 3)] *= f;
        m[(3, 0)] *= f;
        let c = concurrence(&DensityMatrix::new(m).unwrap()).unwrap();
        assert!((c / (0.96 * f) - 1.0).abs() < 1e-14);
    }
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn amps(a: [f64; 4]) -> PureStateAmplitudes {
        PureStateAmplitudes::from_real(a).unwrap()
    }

    #[test]
    fn model_spectrum() {
        let m = build_model(&TwoQubitParams::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(m.energies(), &[2.0, 0.0, 0.0, -2.0]);
        assert_eq!(m.couplings(), &[2.0, 0.0, 0.0, -2.0]);
        let p = TwoQubitParams::new(0.7, -1.3, 0.25).unwrap();
        let m = build_model(&p);
        let expected = [
            p.omega_a + p.omega_b + p.coupling_j,
            p.omega_a - p.omega_b - p.coupling_j,
            -p.omega_a + p.omega_b - p.coupling_j,
            -p.omega_a - p.omega_b + p.coupling_j,
        ];
        for (e, x) in m.energies().iter().zip(expected) {
            assert!((e - x).abs() < 1e-15);
        }
        assert_eq!(m.couplings(), &[2.0, 0.0, 0.0, -2.0]);
        let zero = build_model(&TwoQubitParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(zero.hamiltonian(), &ComplexMatrix::zeros(4));
    }

    #[test]
    fn concurrence_examples() {
        let s = FRAC_1_SQRT_2;
        let bell = amps([s, 0.0, 0.0, s]).density_matrix();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-14);
        let product = amps([1.0, 0.0, 0.0, 0.0]).density_matrix();
        assert_eq!(concurrence(&product).unwrap(), 0.0);
        assert_eq!(
            concurrence(&DensityMatrix::maximally_mixed(4)).unwrap(),
            0.0
        );
        assert!(concurrence(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn concurrence_of_werner_states() {
        // p|Φ+><Φ+| + (1−p)I/4 has C = max(0, (3p − 1)/2).
        let s = FRAC_1_SQRT_2;
        let bell = amps([s, 0.0, 0.0, s]).density_matrix();
        for p in [0.1, 0.3, 0.5, 0.8, 1.0] {
            let m = bell
                .matrix()
                .scale(c(p, 0.0))
                .add(&ComplexMatrix::identity(4).scale(c((1.0 - p) / 4.0, 0.0)))
                .unwrap();
            let rho = DensityMatrix::new(m).unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!(
                (concurrence(&rho).unwrap() - expected).abs() < 1e-12,
                "p={p}"
            );
        }
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!((pure_concurrence(&amps([0.6, 0.0, 0.0, 0.8])) - 0.96).abs() < 1e-15);
        assert_eq!(pure_concurrence(&amps([0.5; 4])), 0.0);
        let s = FRAC_1_SQRT_2;
        assert!((pure_concurrence(&amps([0.0, s, s, 0.0])) - 1.0).abs() < 1e-15);
        let eig_route = concurrence(&amps([0.6, 0.0, 0.0, 0.8]).density_matrix()).unwrap();
        assert!((eig_route - 0.96).abs() < 1e-12);
        let direct =
            concurrence_spin_flip_spectrum(&amps([0.6, 0.0, 0.0, 0.8]).density_matrix()).unwrap();
        assert!((direct - 0.96).abs() < 1e-7);
    }

    #[test]
    fn amplitudes_must_be_normalised() {
        assert!(PureStateAmplitudes::from_real([1.0, 1.0, 0.0, 0.0]).is_err());
        let a =
            PureStateAmplitudes::normalized([c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        assert!((a.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(PureStateAmplitudes::normalized([c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn reduced_states() {
        let s = FRAC_1_SQRT_2;
        let bell = amps([s, 0.0, 0.0, s]).density_matrix();
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(
            reduce_a(&bell)
                .unwrap()
                .matrix()
                .sub(&half)
                .unwrap()
                .max_abs()
                < 1e-15
        );
        assert!(
            reduce_b(&bell)
                .unwrap()
                .matrix()
                .sub(&half)
                .unwrap()
                .max_abs()
                < 1e-15
        );
        let up = amps([1.0, 0.0, 0.0, 0.0]).density_matrix();
        assert_eq!(
            reduce_a(&up).unwrap().matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        // |+> ⊗ (|+> + |->)/√2: qubit B carries the coherence, qubit A none.
        let psi = amps([s, s, 0.0, 0.0]).density_matrix();
        assert!(coherence_a(&psi) < 1e-15);
        assert!((reduce_b(&psi).unwrap().get(0, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classification_examples() {
        let s = FRAC_1_SQRT_2;
        let robust = classify(&amps([s, 0.5, 0.5, 0.0]), CLASSIFY_TOL);
        assert_eq!(robust.class, EntanglementClass::Robust);
        assert!((robust.asymptotic_concurrence - 0.5).abs() < 1e-15);

        let fragile = classify(&amps([0.6, 0.0, 0.0, 0.8]), CLASSIFY_TOL);
        assert_eq!(fragile.class, EntanglementClass::Fragile);
        assert_eq!(fragile.asymptotic_concurrence, 0.0);

        let generic = PureStateAmplitudes::new([
            c(0.5, 0.0),
            c(0.5, 0.0),
            c(0.5, 0.0),
            C64::from_polar(0.5, PI / 3.0),
        ])
        .unwrap();
        let g = classify(&generic, CLASSIFY_TOL);
        assert_eq!(g.class, EntanglementClass::Generic);
        assert!(g.asymptotic_concurrence.abs() < 1e-15);

        let sep = classify(&amps([1.0, 0.0, 0.0, 0.0]), CLASSIFY_TOL);
        assert_eq!(sep.class, EntanglementClass::Separable);
        let sep2 = classify(&amps([0.5; 4]), CLASSIFY_TOL);
        assert_eq!(sep2.class, EntanglementClass::Separable);

        let bell23 = classify(&amps([0.0, s, s, 0.0]), CLASSIFY_TOL);
        assert_eq!(bell23.class, EntanglementClass::Robust);
        assert!((bell23.asymptotic_concurrence - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classification_tolerance_is_tunable() {
        let a =
            PureStateAmplitudes::normalized([c(1e-9, 0.0), c(0.6, 0.0), c(0.8, 0.0), c(0.3, 0.0)])
                .unwrap();
        assert_eq!(classify(&a, CLASSIFY_TOL).class, EntanglementClass::Generic);
        assert_eq!(classify(&a, 1e-8).class, EntanglementClass::Robust);
    }

    #[test]
    fn time_scale_relations() {
        let ts = time_scales(0.2 * PI).unwrap();
        assert!((ts.entanglement - 0.0995).abs() < 1e-4);
        assert!((ts.dephasing - 0.3979).abs() < 1e-4);
        assert!((ts.dephasing / ts.entanglement - 4.0).abs() < 1e-15);
        let doubled = time_scales(0.4 * PI).unwrap();
        assert!((doubled.entanglement - ts.entanglement / 2.0).abs() < 1e-16);
        assert!((doubled.dephasing - ts.dephasing / 2.0).abs() < 1e-16);
        assert!(time_scales(0.0).is_err());
        assert!(time_scales(-1.0).is_err());
    }

    #[test]
    fn fragile_analytic_values() {
        let s = c(FRAC_1_SQRT_2, 0.0);
        assert!((fragile_concurrence_analytic(s, s, 0.0) - 1.0).abs() < 1e-15);
        let half = fragile_concurrence_analytic(s, s, 2f64.ln() / 16.0);
        assert!((half - 0.5).abs() < 1e-15);
    }

    #[test]
    fn decay_fit_recovers_exponential() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let sig: Vec<f64> = times.iter().map(|t| 3.0 * (-1.7 * t).exp()).collect();
        let r = fit_decay_rate(&times, &sig, (2.0, 8.0)).unwrap();
        assert!((r - 1.7).abs() < 1e-12);
        assert!(fit_decay_rate(&times, &sig, (20.0, 30.0)).is_err());
        let mut dead = sig.clone();
        dead[100] = 0.0;
        assert!(fit_decay_rate(&times, &dead, (2.0, 8.0)).is_err());
    }
}
