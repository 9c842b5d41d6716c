//! Time evolution under the time-local dephasing master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ] + F(t)[Lρ, L] + F*(t)[L, ρL] + G(t)[ρ, L] + G*(t)[L, ρ]
//! ```
//!
//! [`exact_propagate`] applies the closed-form solution valid when H and L
//! are simultaneously diagonal. [`integrate_master_equation`] integrates the
//! equation directly with fixed-step RK4 and serves as the oracle for it.

use num_complex::Complex64 as C64;

use crate::bath::CoefficientTable;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_hermitian, ComplexMatrix, DensityMatrix};
use crate::twoqubit;

/// Trace drift beyond which the RK4 integrator gives up.
pub const MAX_TRACE_DRIFT: f64 = 1e-6;

/// Spectral data of a Hamiltonian and coupling operator that are both
/// diagonal in the working basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingModel {
    energies: Vec<f64>,
    couplings: Vec<f64>,
    hamiltonian: ComplexMatrix,
    coupling_op: ComplexMatrix,
}

impl CommutingModel {
    pub fn diagonal(energies: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if energies.is_empty() || energies.len() != couplings.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} energies vs {} coupling eigenvalues",
                energies.len(),
                couplings.len()
            )));
        }
        if energies.iter().chain(&couplings).any(|x| !x.is_finite()) {
            return Err(Error::arg("model spectrum must be finite"));
        }
        Ok(CommutingModel {
            hamiltonian: ComplexMatrix::from_real_diagonal(&energies),
            coupling_op: ComplexMatrix::from_real_diagonal(&couplings),
            energies,
            couplings,
        })
    }

    /// Reads the spectrum off dense H and L, which must both be exactly
    /// diagonal with real diagonals.
    pub fn from_matrices(h: ComplexMatrix, l: ComplexMatrix) -> Result<Self> {
        if h.dim() != l.dim() {
            return Err(Error::DimensionMismatch(format!(
                "H is {0}x{0}, L is {1}x{1}",
                h.dim(),
                l.dim()
            )));
        }
        let n = h.dim();
        let mut energies = Vec::with_capacity(n);
        let mut couplings = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && (h[(i, j)] != C64::new(0.0, 0.0) || l[(i, j)] != C64::new(0.0, 0.0)) {
                    return Err(Error::arg(
                        "closed-form propagation needs H and L diagonal in the working basis",
                    ));
                }
            }
            if h[(i, i)].im != 0.0 || l[(i, i)].im != 0.0 {
                return Err(Error::arg("H and L must be Hermitian"));
            }
            energies.push(h[(i, i)].re);
            couplings.push(l[(i, i)].re);
        }
        Ok(CommutingModel {
            energies,
            couplings,
            hamiltonian: h,
            coupling_op: l,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn coupling_operator(&self) -> &ComplexMatrix {
        &self.coupling_op
    }
}

/// States on a time grid plus the scalars derived from them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub purity: Vec<f64>,
    /// Present for two-qubit (N = 4) trajectories.
    pub concurrence: Option<Vec<f64>>,
    /// |ρ₁₃ + ρ₂₄|, the off-diagonal element of qubit A's reduced state (N = 4).
    pub coherence_a: Option<Vec<f64>>,
    /// F_R(t) and D(t) = ∫₀ᵗ F_R at the same times, copied from the table.
    pub f_re: Vec<f64>,
    pub d: Vec<f64>,
}

/// Worst-case deviations from the density-matrix invariants along a
/// trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    /// max |ρ_nn(t) − ρ_nn(0)|.
    pub max_population_drift: f64,
}

impl Trajectory {
    fn assemble(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        table: &CoefficientTable,
    ) -> Result<Self> {
        let purity = states.iter().map(purity).collect();
        let (concurrence, coherence_a) = if states.first().map(|s| s.dim()) == Some(4) {
            let c = states
                .iter()
                .map(twoqubit::concurrence)
                .collect::<Result<Vec<_>>>()?;
            let coh = states.iter().map(twoqubit::coherence_a).collect();
            (Some(c), Some(coh))
        } else {
            (None, None)
        };
        let n = times.len();
        Ok(Trajectory {
            times,
            states,
            purity,
            concurrence,
            coherence_a,
            f_re: table.f_re()[..n].to_vec(),
            d: table.d()[..n].to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn invariant_report(&self) -> Result<InvariantReport> {
        let first = self
            .states
            .first()
            .ok_or_else(|| Error::arg("empty trajectory"))?;
        let pops0 = first.matrix().diagonal();
        let mut report = InvariantReport {
            max_trace_error: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
            max_population_drift: 0.0,
        };
        for s in &self.states {
            let m = s.matrix();
            report.max_trace_error = report
                .max_trace_error
                .max((m.trace() - C64::new(1.0, 0.0)).norm());
            report.max_hermiticity_error = report.max_hermiticity_error.max(m.hermiticity_error());
            report.min_eigenvalue = report.min_eigenvalue.min(eigenvalues_hermitian(m)?[0]);
            for (p, p0) in m.diagonal().iter().zip(&pops0) {
                report.max_population_drift = report.max_population_drift.max((p - p0).norm());
            }
        }
        Ok(report)
    }
}

/// Closed-form evolution for commuting (H, L):
/// ρ_nm(t) = exp[−i(E_n−E_m)t − i(l_n²−l_m²)Φ(t) − (l_n−l_m)²D(t)] ρ_nm(0).
pub fn exact_propagate(
    model: &CommutingModel,
    rho0: &DensityMatrix,
    table: &CoefficientTable,
) -> Result<Trajectory> {
    if table.kappa() != 0.0 {
        return Err(Error::Unsupported(format!(
            "closed-form propagation requires kappa = 0 (got {})",
            table.kappa()
        )));
    }
    let n = model.dim();
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "state is {0}x{0}, model is {1}x{1}",
            rho0.dim(),
            n
        )));
    }
    let (e, l) = (model.energies(), model.couplings());
    let mut states = Vec::with_capacity(table.len());
    for ((&t, &d), &phi) in table.times().iter().zip(table.d()).zip(table.phi()) {
        let mut m = rho0.matrix().clone();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dl = l[i] - l[j];
                let phase = -(e[i] - e[j]) * t - (l[i] * l[i] - l[j] * l[j]) * phi;
                let factor = C64::from_polar((-dl * dl * d).exp(), phase);
                m[(i, j)] *= factor;
            }
        }
        states.push(DensityMatrix::from_evolved(m));
    }
    Trajectory::assemble(table.times().to_vec(), states, table)
}

struct MasterEquation<'a> {
    h: &'a ComplexMatrix,
    l: &'a ComplexMatrix,
    table: &'a CoefficientTable,
}

impl MasterEquation<'_> {
    fn rhs(&self, t: f64, rho: &ComplexMatrix) -> ComplexMatrix {
        let c = self.table.interpolate(t);
        let (f, g) = (c.f, c.g);
        let l = self.l;
        let l_rho = l.mul_unchecked(rho);
        let rho_l = rho.mul_unchecked(l);
        let l_rho_l = l.mul_unchecked(&rho_l);
        let l_l_rho = l.mul_unchecked(&l_rho);
        let rho_l_l = rho_l.mul_unchecked(l);
        let h_rho = self.h.mul_unchecked(rho);
        let rho_h = rho.mul_unchecked(self.h);
        let minus_i = C64::new(0.0, -1.0);
        let entries = |k: usize| -> C64 {
            let comm_h = h_rho.entries()[k] - rho_h.entries()[k];
            let lrl = l_rho_l.entries()[k];
            // [Lρ, L] = LρL − LLρ, [L, ρL] = LρL − ρLL, [ρ, L] = ρL − Lρ.
            let a = lrl - l_l_rho.entries()[k];
            let b = lrl - rho_l_l.entries()[k];
            let c = rho_l.entries()[k] - l_rho.entries()[k];
            minus_i * comm_h + f * a + f.conj() * b + g * c - g.conj() * c
        };
        let n = rho.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = entries(i * n + j);
            }
        }
        out
    }
}

fn axpy(y: &ComplexMatrix, a: f64, x: &ComplexMatrix) -> ComplexMatrix {
    y.zip_unchecked(x, |yi, xi| yi + xi * a)
}

/// Classic fixed-step RK4 on the full master equation. Coefficients between
/// table samples come from cubic interpolation; ρ is re-Hermitised after
/// every step. Output is recorded at every table time.
pub fn integrate_master_equation(
    h: &ComplexMatrix,
    l: &ComplexMatrix,
    table: &CoefficientTable,
    rho0: &DensityMatrix,
    substeps: usize,
) -> Result<Trajectory> {
    if substeps == 0 {
        return Err(Error::arg("substeps must be >= 1"));
    }
    let n = rho0.dim();
    if h.dim() != n || l.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "state is {n}x{n}, H is {0}x{0}, L is {1}x{1}",
            h.dim(),
            l.dim()
        )));
    }
    for (name, op) in [("H", h), ("L", l)] {
        let err = op.hermiticity_error();
        if err > 1e-12 {
            return Err(Error::arg(format!(
                "{name} is not Hermitian (deviation {err:e})"
            )));
        }
    }
    let eq = MasterEquation { h, l, table };
    let dt = table.step() / substeps as f64;
    let mut rho = rho0.matrix().clone();
    let mut states = Vec::with_capacity(table.len());
    states.push(DensityMatrix::from_evolved(rho.clone()));
    for cell in 0..table.len() - 1 {
        let t_cell = table.times()[cell];
        for k in 0..substeps {
            let t = t_cell + k as f64 * dt;
            let k1 = eq.rhs(t, &rho);
            let k2 = eq.rhs(t + 0.5 * dt, &axpy(&rho, 0.5 * dt, &k1));
            let k3 = eq.rhs(t + 0.5 * dt, &axpy(&rho, 0.5 * dt, &k2));
            let k4 = eq.rhs(t + dt, &axpy(&rho, dt, &k3));
            let mut next = rho.clone();
            for (idx, z) in next.entries().to_vec().into_iter().enumerate() {
                let (i, j) = (idx / n, idx % n);
                next[(i, j)] = z
                    + (k1.entries()[idx]
                        + k2.entries()[idx] * 2.0
                        + k3.entries()[idx] * 2.0
                        + k4.entries()[idx])
                        * (dt / 6.0);
            }
            rho = next.hermitian_part();
            let drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
            if !(drift <= MAX_TRACE_DRIFT) {
                return Err(Error::IntegrationUnstable {
                    time: t + dt,
                    drift,
                });
            }
        }
        states.push(DensityMatrix::from_evolved(rho.clone()));
    }
    Trajectory::assemble(table.times().to_vec(), states, table)
}

/// Tr ρ².
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (m[(i, j)] * m[(j, i)]).re;
        }
    }
    acc
}

/// Purity of an initially pure state after dephasing. Each coherence decays
/// as exp[−(l_i − l_j)² D] and Tr ρ² sums their squared moduli, so
/// P = Σ_ij |a_i|²|a_j|² exp[−2(l_i − l_j)² D].
pub fn analytic_purity(amplitudes: &[C64], couplings: &[f64], d_t: f64) -> Result<f64> {
    if amplitudes.len() != couplings.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes vs {} coupling eigenvalues",
            amplitudes.len(),
            couplings.len()
        )));
    }
    let weights: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let norm: f64 = weights.iter().sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!(
            "amplitudes have norm² {norm}, expected 1"
        )));
    }
    let mut p = 0.0;
    for (wi, li) in weights.iter().zip(couplings) {
        for (wj, lj) in weights.iter().zip(couplings) {
            let dl = li - lj;
            p += wi * wj * (-2.0 * dl * dl * d_t).exp();
        }
    }
    Ok(p)
}
