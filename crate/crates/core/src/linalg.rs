//! Dense complex linear algebra at desk scale.
//!
//! Everything here is written for small matrices (d ≤ 64): products,
//! adjoints, a cyclic Jacobi eigensolver for Hermitian matrices, singular
//! values by one-sided Jacobi, and the PSD square root.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative Frobenius asymmetry accepted (and symmetrized away) by the
/// Hermitian routines.
pub const SYMMETRIZATION_TOL: f64 = 1e-10;

/// Eigenvalues in `[-CLAMP_TOL * λ_max, 0)` are treated as zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of the diagonal mass.
pub const JACOBI_TOL: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite entry at index {k}")));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.entries[i * d + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let d = diag.len();
        let mut m = Self::zeros(d, d);
        for (i, &z) in diag.iter().enumerate() {
            m.entries[i * d + i] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&diag)
    }

    /// Builds a matrix entrywise from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: C64) {
        self.entries[i * self.cols + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A* A`, i.e. `|A|²`.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..self.rows {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                out.set(i, j, acc);
                out.set(j, i, acc.conj());
            }
            let d = out.get(i, i);
            out.set(i, i, C64::new(d.re, 0.0));
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&z| z * c).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `‖H − H*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Sums a non-empty slice of same-shape matrices.
    pub fn sum_of(items: &[Self]) -> Result<Self> {
        let (first, rest) = items
            .split_first()
            .ok_or_else(|| Error::Shape("sum of an empty list".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.try_add(m))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator sugar for internal code paths whose shapes are already checked.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("shape mismatch in matrix addition")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("shape mismatch in matrix subtraction")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn gram(a: &ComplexMatrix) -> ComplexMatrix {
    a.gram()
}

/// `tr(B* A)`.
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "trace inner product of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.entries.iter().zip(&b.entries).map(|(&x, &y)| y.conj() * x).sum())
}

/// Eigenvalues of a Hermitian matrix, nonincreasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianSpectrum(Vec<f64>);

impl HermitianSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        *self.0.last().expect("spectrum is never empty")
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Singular values, nonincreasing and nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum(Vec<f64>);

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Eigen-decomposition `H = V diag(values) V*` with `values` nonincreasing
/// and the eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn symmetrized(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", h.rows, h.cols)));
    }
    let defect = h.hermitian_defect();
    let scale = h.frobenius_norm();
    if defect > SYMMETRIZATION_TOL * scale {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian: ‖H − H*‖_F = {defect:e} vs ‖H‖_F = {scale:e}"
        )));
    }
    let n = h.rows;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(h.get(i, i).re, 0.0)
        } else {
            (h.get(i, j) + h.get(j, i).conj()) * 0.5
        }
    }))
}

/// Unitary 2×2 factor that zeroes the `(p, q)` entry of a Hermitian pair
/// block `[[a, h], [h̄, b]]`. Returns `(g_pp, g_pq, g_qp, g_qq, t)` where the
/// new diagonal is `(a − t|h|, b + t|h|)`.
fn jacobi_rotation(a: f64, b: f64, h: C64) -> (C64, C64, C64, C64, f64) {
    let c = h.norm();
    let phase = h / c;
    let tau = (b - a) / (2.0 * c);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    let conj_phase = phase.conj();
    (C64::new(cs, 0.0), C64::new(sn, 0.0), conj_phase * (-sn), conj_phase * cs, t)
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut a = symmetrized(h)?;
    let n = a.rows;
    let mut v = ComplexMatrix::identity(n);

    let off_mass = |m: &ComplexMatrix| {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    diag += m.get(i, i).norm_sqr();
                } else {
                    off += m.get(i, j).norm_sqr();
                }
            }
        }
        (off.sqrt(), diag.sqrt())
    };

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let (off, diag) = off_mass(&a);
        if off == 0.0 || off <= JACOBI_TOL * diag {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = a.get(p, q);
                if hpq.norm() == 0.0 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let (gpp, gpq, gqp, gqq, t) = jacobi_rotation(app, aqq, hpq);
                let c = hpq.norm();
                // columns: A ← A G
                for k in 0..n {
                    let x = a.get(k, p);
                    let y = a.get(k, q);
                    a.set(k, p, x * gpp + y * gqp);
                    a.set(k, q, x * gpq + y * gqq);
                    let x = v.get(k, p);
                    let y = v.get(k, q);
                    v.set(k, p, x * gpp + y * gqp);
                    v.set(k, q, x * gpq + y * gqq);
                }
                // rows: A ← G* A
                for k in 0..n {
                    let x = a.get(p, k);
                    let y = a.get(q, k);
                    a.set(p, k, gpp.conj() * x + gqp.conj() * y);
                    a.set(q, k, gpq.conj() * x + gqq.conj() * y);
                }
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
                a.set(p, p, C64::new(app - t * c, 0.0));
                a.set(q, q, C64::new(aqq + t * c, 0.0));
            }
        }
    }
    if !converged {
        let (off, diag) = off_mass(&a);
        if !(off == 0.0 || off <= JACOBI_TOL * diag) {
            return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(HermitianEigen { values, vectors })
}

pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    hermitian_eigen(h).map(|e| HermitianSpectrum(e.values))
}

/// Clamps roundoff-negative eigenvalues of a PSD matrix to zero, rejecting
/// anything more negative than the clamp threshold. Positive values below
/// the numerical-rank cutoff are zeroed as well.
pub(crate) fn clamp_psd(values: &[f64]) -> Result<Vec<f64>> {
    let top = values.iter().copied().fold(0.0_f64, f64::max);
    let floor = -CLAMP_TOL * top;
    let cutoff = rank_cutoff(values.len(), top);
    values
        .iter()
        .map(|&x| {
            if x > cutoff {
                Ok(x)
            } else if x >= floor {
                Ok(0.0)
            } else {
                Err(Error::Domain(format!(
                    "matrix is not positive semidefinite: eigenvalue {x:e} below {floor:e}"
                )))
            }
        })
        .collect()
}

/// Singular values by one-sided (Hestenes) Jacobi.
///
/// This is the cyclic Jacobi iteration on `A* A` carried out implicitly on
/// the columns of `A`, so the results are the square roots of the
/// eigenvalues of `gram(A)` while keeping relative accuracy for the small
/// ones. Values below the numerical-rank cutoff are returned as exact zeros.
pub fn singular_values(a: &ComplexMatrix) -> SingularSpectrum {
    let work = if a.cols > a.rows { a.adjoint() } else { a.clone() };
    let (m, n) = work.shape();
    // rescale so squared column norms cannot overflow or underflow
    let scale = work.entries.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return SingularSpectrum(vec![0.0; n]);
    }
    let work = work.scale_real(1.0 / scale);
    // column-major copy; columns are what the rotations mix
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| work.get(i, j)).collect()).collect();
    let tol = (m as f64) * f64::EPSILON;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = cp.iter().zip(cq).map(|(x, y)| x.conj() * y).sum();
                    (alpha, beta, gamma)
                };
                if gamma.norm() == 0.0 || gamma.norm() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (gpp, gpq, gqp, gqq, _) = jacobi_rotation(alpha, beta, gamma);
                let (head, tail) = cols.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    (*x, *y) = (*x * gpp + *y * gqp, *x * gpq + *y * gqq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> =
        cols.iter().map(|c| scale * c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    let cutoff = rank_cutoff(m, values[0]);
    for v in values.iter_mut().filter(|v| **v <= cutoff) {
        *v = 0.0;
    }
    SingularSpectrum(values)
}

/// Values at or below `dim · ε · top` are roundoff and count as exact zeros.
/// Without this, `σ^p` for small `p` turns a `1e-16` residue into a visible
/// contribution (`(1e-16)^{1/4} = 1e-4`).
fn rank_cutoff(dim: usize, top: f64) -> f64 {
    dim as f64 * f64::EPSILON * top
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    let roots: Vec<f64> = clamp_psd(&eig.values)?.into_iter().map(f64::sqrt).collect();
    let n = h.rows;
    let v = &eig.vectors;
    let mut out = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &r) in roots.iter().enumerate() {
            if r != 0.0 {
                acc += v.get(i, k) * v.get(j, k).conj() * r;
            }
        }
        acc
    });
    for i in 0..n {
        let d = out.get(i, i);
        out.set(i, i, C64::new(d.re, 0.0));
    }
    Ok(out)
}

/// Modified Gram–Schmidt on the columns. The implied triangular factor has
/// a positive real diagonal, which makes the result a deterministic function
/// of the input.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return Err(Error::Shape(format!("cannot orthonormalize {cols} columns in dimension {rows}")));
    }
    let mut q: Vec<Vec<C64>> = (0..cols).map(|j| (0..rows).map(|i| m.get(i, j)).collect()).collect();
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = q[k].iter().zip(&q[j]).map(|(x, y)| x.conj() * y).sum();
                let (done, cur) = q.split_at_mut(j);
                for (y, x) in cur[0].iter_mut().zip(&done[k]) {
                    *y -= proj * x;
                }
            }
        }
        let norm = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale {
            return Err(Error::Domain(format!("column {j} is numerically dependent")));
        }
        for z in q[j].iter_mut() {
            *z /= norm;
        }
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.try_sub(b).unwrap().frobenius_norm() <= tol * b.frobenius_norm().max(1.0)
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = ComplexMatrix::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(m.adjoint().get(0, 0), c(0.0, -1.0));
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.adjoint(), ComplexMatrix::from_real(2, 2, &[1.0, 3.0, 2.0, 4.0]).unwrap());
        let r = ComplexMatrix::new(2, 3, (0..6).map(|k| c(k as f64, 1.0 - k as f64)).collect()).unwrap();
        assert_eq!(r.adjoint().adjoint(), r);
    }

    #[test]
    fn matmul_examples() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0)]).unwrap();
        assert_eq!(ComplexMatrix::identity(2).matmul(&m).unwrap(), m);
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(n.matmul(&n).unwrap(), ComplexMatrix::zeros(2, 2));
        let ones = ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        assert_eq!(ones.matmul(&ones).unwrap(), ComplexMatrix::from_real(2, 2, &[2.0; 4]).unwrap());
        let bad = ComplexMatrix::zeros(3, 1);
        assert!(matches!(ones.matmul(&bad), Err(Error::Shape(_))));
    }

    #[test]
    fn gram_examples() {
        let d = ComplexMatrix::from_real_diag(&[3.0, -4.0]);
        assert_eq!(d.gram(), ComplexMatrix::from_real_diag(&[9.0, 16.0]));
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(n.gram(), ComplexMatrix::from_real_diag(&[0.0, 1.0]));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]).unwrap();
        assert!(close(&u.gram(), &ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = |e: &[f64], n: usize| hermitian_eigenvalues(&ComplexMatrix::from_real(n, n, e).unwrap()).unwrap();
        assert_eq!(ev(&[4.0, 0.0, 0.0, 0.0], 2).values(), &[4.0, 0.0]);
        let v = ev(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((v.values()[0] - 3.0).abs() < 1e-14 && (v.values()[1] - 1.0).abs() < 1e-14);
        let v = ev(&[2.0, 2.0, 2.0, 2.0], 2);
        assert!((v.values()[0] - 4.0).abs() < 1e-14 && v.values()[1].abs() < 1e-14);
    }

    #[test]
    fn eigen_decomposition_reconstructs_complex_input() {
        let h = ComplexMatrix::new(
            3,
            3,
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.5, 2.0), c(1.0, 1.0), c(-1.0, 0.0), c(0.0, 0.3), c(0.5, -2.0), c(0.0, -0.3), c(4.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        let d = ComplexMatrix::from_real_diag(&e.values);
        let back = e.vectors.matmul(&d).unwrap().matmul(&e.vectors.adjoint()).unwrap();
        assert!(close(&back, &h, 1e-13));
        let tr: f64 = e.values.iter().sum();
        assert!((tr - 5.0).abs() < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_rejects_bad_input() {
        assert!(matches!(hermitian_eigenvalues(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(singular_values(&ComplexMatrix::from_real_diag(&[3.0, -4.0])).values(), &[4.0, 3.0]);
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(singular_values(&n).values(), &[1.0, 0.0]);
        let s = singular_values(&ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap());
        assert!((s.values()[0] - 2.0).abs() < 1e-15);
        assert_eq!(s.values()[1], 0.0);
        let wide = ComplexMatrix::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(singular_values(&wide).values(), &[2.0, 1.0]);
    }

    #[test]
    fn psd_sqrt_examples() {
        let s = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(close(&s, &ComplexMatrix::from_real_diag(&[2.0, 3.0]), 1e-15));
        let s = psd_sqrt(&ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap()).unwrap();
        let r3 = 3f64.sqrt();
        let want = ComplexMatrix::from_real(2, 2, &[(r3 + 1.0) / 2.0, (r3 - 1.0) / 2.0, (r3 - 1.0) / 2.0, (r3 + 1.0) / 2.0]).unwrap();
        assert!(close(&s, &want, 1e-14));
        assert_eq!(psd_sqrt(&ComplexMatrix::zeros(2, 2)).unwrap(), ComplexMatrix::zeros(2, 2));
        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::Domain(_))));
    }

    #[test]
    fn clamp_keeps_roundoff_negatives() {
        assert_eq!(clamp_psd(&[1.0, -1e-13]).unwrap(), vec![1.0, 0.0]);
        assert!(clamp_psd(&[1.0, -1e-11]).is_err());
        assert_eq!(clamp_psd(&[1.0, 1e-17, 1e-14]).unwrap(), vec![1.0, 0.0, 1e-14]);
    }

    #[test]
    fn rank_deficient_sums_have_exact_zeros() {
        // u v* + w v* is rank one; the remaining singular values are roundoff
        let u = ComplexMatrix::from_fn(3, 1, |i, _| C64::new(0.3 * i as f64 + 0.1, -0.7));
        let w = ComplexMatrix::from_fn(3, 1, |i, _| C64::new(1.0, 0.2 * i as f64));
        let v = ComplexMatrix::from_fn(3, 1, |i, _| C64::new(0.5, 1.0 / (i as f64 + 1.0)));
        let m = &u.matmul(&v.adjoint()).unwrap() + &w.matmul(&v.adjoint()).unwrap();
        let s = singular_values(&m);
        assert!(s.values()[0] > 0.0);
        assert_eq!(&s.values()[1..], &[0.0, 0.0]);
    }

    #[test]
    fn trace_inner_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(trace_inner(&i2, &i2).unwrap(), c(2.0, 0.0));
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert_eq!(trace_inner(&a, &b).unwrap(), c(11.0, 0.0));
        let x = ComplexMatrix::new(1, 2, vec![c(1.0, 2.0), c(0.0, -1.0)]).unwrap();
        let y = ComplexMatrix::new(1, 2, vec![c(-3.0, 0.5), c(2.0, 2.0)]).unwrap();
        assert_eq!(trace_inner(&x, &y).unwrap(), trace_inner(&y, &x).unwrap().conj());
        assert!(matches!(trace_inner(&x, &i2), Err(Error::Shape(_))));
    }

    #[test]
    fn construction_rejects_nonfinite_and_bad_lengths() {
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0)]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn gram_schmidt_yields_unitary() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(1.0, 3.0)]).unwrap();
        let q = orthonormalize_columns(&m).unwrap();
        assert!(close(&q.gram(), &ComplexMatrix::identity(2), 1e-14));
        let dep = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 1.0, 2.0]).unwrap();
        assert!(orthonormalize_columns(&dep).is_err());
    }
}
