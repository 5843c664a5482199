//! Dense square complex matrices.
//!
//! `ComplexMatrix` is a thin square-only wrapper over `faer::Mat<c64>` that
//! carries every operator, group element and discretization in the crate.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use faer::linalg::solvers::DenseSolveCore;
use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(Mat<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(Mat::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(Mat::from_fn(dim, dim, f))
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| C64::new(f(i, j), 0.0))
    }

    /// Builds a matrix from rows; fails unless the rows form a square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = C64::new(d, 0.0);
        }
        m
    }

    /// Wraps a faer matrix, rejecting non-square input.
    pub fn from_faer(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        Ok(ComplexMatrix(mat))
    }

    pub fn as_faer(&self) -> &Mat<C64> {
        &self.0
    }

    pub fn into_faer(self) -> Mat<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint().to_owned())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose().to_owned())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix(self.0.conjugate().to_owned())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix(&self.0 * Scale(s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Kronecker product `self ⊗ other`; index `(i·m + a, j·m + b)`.
    pub fn kron(&self, other: &Self) -> Self {
        let m = other.dim();
        let n = self.dim();
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let s = self[(i, j)];
                if s == ZERO {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        out[(i * m + a, j * m + b)] = s * other[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// `self · diag(d)`: column `j` scaled by `d[j]`.
    pub fn mul_diag_right(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.dim());
        Self::from_fn(self.dim(), |i, j| self[(i, j)] * d[j])
    }

    /// `diag(d) · self`: row `i` scaled by `d[i]`.
    pub fn mul_diag_left(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.dim());
        Self::from_fn(self.dim(), |i, j| d[i] * self[(i, j)])
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm_l2()
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.0.norm_max()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|k| self[(k, k)]).sum()
    }

    pub fn determinant(&self) -> C64 {
        self.0.as_ref().determinant()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|k| self[(k, k)]).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self[(i, j)] == ZERO))
    }

    /// Errors with the first non-finite entry, if any.
    pub fn check_finite(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                let z = self[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Distance `‖self − other‖_F`.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// `‖self − other‖_F / max(1, ‖other‖_F)`.
    pub fn rel_dist(&self, other: &Self) -> f64 {
        self.dist(other) / other.norm().max(1.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        if n == 0 {
            return Ok(self.clone());
        }
        let lu = self.0.partial_piv_lu();
        let inv = lu.inverse();
        let out = ComplexMatrix(inv);
        out.check_finite()
            .map_err(|_| Error::Singular(format!("LU inverse of {n}x{n} produced non-finite entries")))?;
        Ok(out)
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rhs.dim() });
        }
        let lu = self.0.partial_piv_lu();
        let x = ComplexMatrix(lu.solve(&rhs.0));
        x.check_finite()
            .map_err(|_| Error::Singular("LU solve produced non-finite entries".into()))?;
        Ok(x)
    }

    /// Copies rows/columns `range × range` into a new square matrix.
    pub fn principal_submatrix(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, |i, j| self[(start + i, start + j)])
    }

    /// Row-major entries, used for vectorizing matrices in rank tests.
    pub fn entries(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self[(i, j)]).collect()
    }

    /// Block diagonal assembly of equally sized blocks.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let sizes: Vec<usize> = blocks.iter().map(|b| b.dim()).collect();
        let total = sizes.iter().sum();
        let mut out = Self::zeros(total);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.dim();
        }
        out
    }

    /// Block `(bi, bj)` of size `m` with block-major indexing.
    pub fn block(&self, bi: usize, bj: usize, m: usize) -> Self {
        Self::from_fn(m, |a, b| self[(bi * m + a, bj * m + b)])
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, block: &Self) {
        let m = block.dim();
        for a in 0..m {
            for b in 0..m {
                self[(bi * m + a, bj * m + b)] = block[(a, b)];
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[(i, j)]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[(i, j)]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        if self.dim() <= 8 {
            for i in 0..self.dim() {
                let row: Vec<String> = (0..self.dim())
                    .map(|j| {
                        let z = self[(i, j)];
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    })
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli(k: u8) -> ComplexMatrix {
    let rows: [[C64; 2]; 2] = match k {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index must be 1, 2 or 3"),
    };
    ComplexMatrix::from_fn(2, |i, j| rows[i][j])
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Numerical rank of a set of vectors (all the same length), via the
/// eigenvalues of their Gram matrix.
pub fn rank_of_vectors(vectors: &[Vec<C64>], rel_tol: f64) -> usize {
    let k = vectors.len();
    if k == 0 {
        return 0;
    }
    let gram = ComplexMatrix::from_fn(k, |i, j| {
        vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a.conj() * b).sum()
    });
    let evals = gram
        .as_faer()
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("Gram matrix eigenvalues");
    let top = evals.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    evals.iter().filter(|&&e| e > rel_tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (pauli(1), pauli(2), pauli(3));
        let id = ComplexMatrix::identity(2);
        for s in [&s1, &s2, &s3] {
            assert_eq!(&(s * s), &id);
        }
        assert_eq!(s1.anticommutator(&s2), ComplexMatrix::zeros(2));
        // σ₁σ₂ = iσ₃
        assert_eq!(&s1 * &s2, s3.scale(I));
    }

    #[test]
    fn kron_indexing() {
        let a = ComplexMatrix::from_real_fn(2, |i, j| (i * 2 + j) as f64);
        let b = pauli(1);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(2, 1)], a[(1, 0)] * b[(0, 1)]);
        assert_eq!(k[(3, 3)], a[(1, 1)] * b[(1, 1)]);
    }

    #[test]
    fn inverse_and_solve() {
        let a = ComplexMatrix::from_fn(3, |i, j| C64::new((i + 2 * j) as f64, if i == j { 3.0 } else { 0.5 }));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).dist(&ComplexMatrix::identity(3)) < 1e-13);
        let x = a.solve(&ComplexMatrix::identity(3)).unwrap();
        assert!(x.dist(&inv) < 1e-13);
    }

    #[test]
    fn singular_inverse_fails() {
        let a = ComplexMatrix::zeros(3);
        assert!(a.inverse().is_err());
    }

    #[test]
    fn from_rows_rejects_ragged() {
        assert!(ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn rank_counts_independent_vectors() {
        let v1 = vec![ONE, ZERO, ZERO];
        let v2 = vec![ZERO, ONE, ZERO];
        let v3 = vec![ONE, ONE, ZERO];
        assert_eq!(rank_of_vectors(&[v1.clone(), v2.clone()], 1e-12), 2);
        assert_eq!(rank_of_vectors(&[v1, v2, v3], 1e-12), 2);
    }
}
