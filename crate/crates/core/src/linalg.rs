//! Small dense complex matrices.
//!
//! Everything here is sized for the two-qubit problem (N = 4) and stays
//! usable up to N = 8. Matrices are stored row-major in a flat `Vec`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerances and iteration caps shared by the eigenvalue routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Accuracy contract of [`eigenvalues_general`], relative to the matrix norm.
    pub general_accuracy: f64,
    /// Accuracy contract of [`eigenvalues_hermitian`], relative to the matrix norm.
    pub hermitian_accuracy: f64,
    /// Largest entrywise deviation from Hermiticity accepted by the Jacobi routine.
    pub hermitian_input_tol: f64,
    /// QR iterations allowed per eigenvalue before giving up.
    pub max_qr_iterations: usize,
    pub max_jacobi_sweeps: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            general_accuracy: 1e-10,
            hermitian_accuracy: 1e-11,
            hermitian_input_tol: 1e-8,
            max_qr_iterations: 60,
            max_jacobi_sweeps: 64,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6e}{:+.6e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries; rejects non-square or
    /// non-finite input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::arg("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::arg("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { n, data })
    }

    /// Real-valued convenience constructor, mostly for tests and Pauli matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    fn check_same_dim(&self, other: &Self, op: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "matmul")?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "add")?;
        Ok(self.zip_unchecked(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "sub")?;
        Ok(self.zip_unchecked(other, |a, b| a - b))
    }

    pub(crate) fn zip_unchecked(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "commutator")?;
        let ab = self.mul_unchecked(other);
        let ba = other.mul_unchecked(self);
        Ok(ab.zip_unchecked(&ba, |x, y| x - y))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        self.zip_unchecked(&adj, |a, b| (a + b) * 0.5)
    }

    fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.n, b.n);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub mod pauli {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ])
        .unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }
}

/// A validated density matrix.
///
/// Basis ordering for two qubits is |1> = |++>, |2> = |+->, |3> = |-+>,
/// |4> = |-->, with `+` the σ_z = +1 eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-10;

    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let herm = m.hermiticity_error();
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::arg(format!(
                "density matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > Self::TRACE_TOL {
            return Err(Error::arg(format!(
                "density matrix trace is {} (expected 1)",
                tr.re
            )));
        }
        let min_eig = eigenvalues_hermitian(&m)?[0];
        if min_eig < -Self::POSITIVITY_TOL {
            return Err(Error::arg(format!(
                "density matrix is not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps a matrix produced by an evolution routine. Invariants are
    /// checked separately by the caller at its own tolerance.
    pub(crate) fn from_evolved(m: ComplexMatrix) -> Self {
        DensityMatrix(m)
    }

    /// `|ψ><ψ|` for a normalised state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::arg("state vector is empty"));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!(
                "state vector has norm² {norm}, expected 1"
            )));
        }
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Ok(DensityMatrix(m))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(n).scale(C64::new(1.0 / n as f64, 0.0)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    /// Entry `ρ_{ij}` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }
}

/// All eigenvalues of a general complex matrix (N ≤ 8), in no particular
/// order. Exactly decoupled rows and columns are split off first, then the
/// remainder goes through Householder Hessenberg reduction and
/// Wilkinson-shifted complex QR.
pub fn eigenvalues_general(m: &ComplexMatrix) -> Result<Vec<C64>> {
    eigenvalues_general_with(m, &EigenConfig::default())
}

pub fn eigenvalues_general_with(m: &ComplexMatrix, cfg: &EigenConfig) -> Result<Vec<C64>> {
    if m.n > 8 {
        return Err(Error::arg(format!(
            "eigenvalues_general supports N <= 8, got {}",
            m.n
        )));
    }
    let (mut eigs, rest) = isolate_decoupled(m.to_rows());
    if !rest.is_empty() {
        let h = hessenberg(rest);
        eigs.extend(hessenberg_qr(h, cfg)?);
    }
    Ok(eigs)
}

/// Peels off indices whose row (or column) is zero off the diagonal within
/// the remaining block. Each such index carries an exact eigenvalue.
fn isolate_decoupled(mut a: Vec<Vec<C64>>) -> (Vec<C64>, Vec<Vec<C64>>) {
    let mut eigs = Vec::new();
    loop {
        let n = a.len();
        let found = (0..n).find(|&i| {
            let row_free = (0..n).all(|j| j == i || a[i][j] == ZERO);
            let col_free = (0..n).all(|j| j == i || a[j][i] == ZERO);
            row_free || col_free
        });
        match found {
            Some(i) => {
                eigs.push(a[i][i]);
                a.remove(i);
                for row in a.iter_mut() {
                    row.remove(i);
                }
                if a.is_empty() {
                    break;
                }
            }
            None => break,
        }
    }
    (eigs, a)
}

fn hessenberg(mut a: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let tail_norm: f64 = (k + 2..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let xnorm = (x0.norm_sqr() + tail_norm * tail_norm).sqrt();
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- (I - 2vv†) A
        for j in 0..n {
            let dot: C64 = (0..v.len()).map(|i| v[i].conj() * a[k + 1 + i][j]).sum();
            for i in 0..v.len() {
                a[k + 1 + i][j] -= v[i] * dot * 2.0;
            }
        }
        // A <- A (I - 2vv†)
        for row in a.iter_mut() {
            let dot: C64 = (0..v.len()).map(|j| row[k + 1 + j] * v[j]).sum();
            for j in 0..v.len() {
                row[k + 1 + j] -= dot * v[j].conj() * 2.0;
            }
        }
        a[k + 1][k] = alpha;
        for row in a.iter_mut().skip(k + 2) {
            row[k] = ZERO;
        }
    }
    a
}

fn eig2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    // Larger-magnitude root first, the other from the determinant.
    let first = if (half_tr + root).norm() >= (half_tr - root).norm() {
        half_tr + root
    } else {
        half_tr - root
    };
    let det = a * d - b * c;
    let second = if first.norm() == 0.0 {
        ZERO
    } else {
        det / first
    };
    (first, second)
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, ONE);
    }
    let an = a.norm();
    let r = an.hypot(b.norm());
    (an / r, (a / an) * b.conj() / r)
}

fn hessenberg_qr(mut h: Vec<Vec<C64>>, cfg: &EigenConfig) -> Result<Vec<C64>> {
    let n = h.len();
    let norm: f64 = h
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut its = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let mut s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if s == 0.0 {
                s = norm;
            }
            if h[lo][lo - 1].norm() <= f64::EPSILON * s {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            its = 0;
            continue;
        }
        if lo == hi - 2 {
            let (e1, e2) = eig2x2(h[lo][lo], h[lo][lo + 1], h[lo + 1][lo], h[lo + 1][lo + 1]);
            eigs.push(e1);
            eigs.push(e2);
            hi -= 2;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > cfg.max_qr_iterations {
            return Err(Error::EigenConvergence { iterations: total });
        }
        let m = hi - 1;
        let shift = if its % 10 == 0 {
            h[m][m] + C64::new(h[m][m - 1].norm() * 0.75, 0.0)
        } else {
            let (e1, e2) = eig2x2(h[m - 1][m - 1], h[m - 1][m], h[m][m - 1], h[m][m]);
            if (e1 - h[m][m]).norm() <= (e2 - h[m][m]).norm() {
                e1
            } else {
                e2
            }
        };
        for k in lo..hi {
            h[k][k] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            for j in k..hi {
                let x = h[k][j];
                let y = h[k + 1][j];
                h[k][j] = x * c + s * y;
                h[k + 1][j] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for row in h.iter_mut().take((k + 2).min(hi)).skip(lo) {
                let x = row[k];
                let y = row[k + 1];
                row[k] = x * c + y * s.conj();
                row[k + 1] = -x * s + y * c;
            }
        }
        for k in lo..hi {
            h[k][k] += shift;
        }
    }
    Ok(eigs)
}

/// Real spectrum of a Hermitian matrix in ascending order, by cyclic
/// complex Jacobi rotations.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigenvalues_hermitian_with(m, &EigenConfig::default())
}

pub fn eigenvalues_hermitian_with(m: &ComplexMatrix, cfg: &EigenConfig) -> Result<Vec<f64>> {
    let herm = m.hermiticity_error();
    if herm > cfg.hermitian_input_tol {
        return Err(Error::arg(format!(
            "matrix is not Hermitian (deviation {herm:e})"
        )));
    }
    let n = m.n;
    let mut a = m.hermitian_part();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > f64::EPSILON * 1e-2 * scale {
        sweeps += 1;
        if sweeps > cfg.max_jacobi_sweeps {
            return Err(Error::EigenConvergence {
                iterations: sweeps * n * (n - 1) / 2,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Rotate the phase of basis vector q so that a_pq becomes real.
                let phase = apq / mag;
                for k in 0..n {
                    a[(k, q)] *= phase.conj();
                    a[(q, k)] *= phase;
                }
                a[(p, q)] = C64::new(mag, 0.0);
                a[(q, p)] = C64::new(mag, 0.0);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted_by_re_im(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let id = kron(&pauli::identity(), &pauli::identity());
        assert_eq!(id, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_zz_is_diagonal() {
        let zz = kron(&pauli::z(), &pauli::z());
        assert_eq!(
            zz,
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn kron_yy_is_signed_antidiagonal() {
        let yy = kron(&pauli::y(), &pauli::y());
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(yy, expected);
    }

    #[test]
    fn basic_ops() {
        assert_eq!(ComplexMatrix::identity(4).trace(), c(4.0, 0.0));
        let y = pauli::y();
        assert_eq!(y.matmul(&y).unwrap(), ComplexMatrix::identity(2));
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(3.0, -1.0)],
            vec![c(0.5, 0.0), c(-2.0, 4.0)],
        ])
        .unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.add(&m).unwrap(), m.scale(c(2.0, 0.0)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(4);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch(_))));
        assert!(ComplexMatrix::from_rows(vec![vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn general_eigenvalues_of_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 4.0, 1.0]);
        let e = sorted_by_re_im(eigenvalues_general(&m).unwrap());
        let expected = [1.0, 1.0, 3.0, 4.0];
        for (z, x) in e.iter().zip(expected) {
            assert!((z - c(x, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn general_eigenvalues_of_rotation_generator() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let e = sorted_by_re_im(eigenvalues_general(&m).unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn general_eigenvalues_nonnormal_upper_hessenberg() {
        // Companion matrix of (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24.
        let m = ComplexMatrix::from_real_rows(&[
            &[10.0, -35.0, 50.0, -24.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let e = sorted_by_re_im(eigenvalues_general(&m).unwrap());
        for (z, x) in e.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((z - c(x, 0.0)).norm() < 1e-9, "{z} vs {x}");
        }
    }

    #[test]
    fn hermitian_eigenvalues_examples() {
        assert_eq!(eigenvalues_hermitian(&pauli::z()).unwrap(), vec![-1.0, 1.0]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)]).unwrap();
        let e = eigenvalues_hermitian(bell.matrix()).unwrap();
        for (x, y) in e.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((x - y).abs() < 1e-15);
        }

        let mixed = DensityMatrix::maximally_mixed(4);
        assert_eq!(
            eigenvalues_hermitian(mixed.matrix()).unwrap(),
            vec![0.25; 4]
        );
    }

    #[test]
    fn hermitian_rejects_nonhermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            eigenvalues_hermitian(&m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn general_rejects_oversized() {
        assert!(eigenvalues_general(&ComplexMatrix::identity(9)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(DensityMatrix::new(neg).is_err());
        let nonherm = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(DensityMatrix::new(nonherm).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25; 4])).is_ok());
    }
}
