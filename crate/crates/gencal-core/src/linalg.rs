//! Dense matrices over any [`Scalar`], with elimination-based kernels that
//! stay exact for rationals, plus a few `f64`-only factorizations.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{CoreError, Result};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Pivot statistics of an elimination, used to report how clear-cut a rank
/// decision was.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PivotReport {
    pub rank: usize,
    /// Smallest pivot magnitude that was kept.
    pub min_kept: f64,
    /// Largest candidate magnitude that was treated as zero.
    pub max_dropped: f64,
}

impl PivotReport {
    pub fn gap(&self) -> f64 {
        if self.max_dropped == 0.0 {
            f64::INFINITY
        } else {
            self.min_kept / self.max_dropped
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CoreError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(values: &[S]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    /// Skew matrix from its strict upper triangle, listed row by row.
    pub fn skew_from_upper(n: usize, upper: &[S]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(CoreError::DimensionMismatch { expected, found: upper.len() });
        }
        let mut m = Self::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().cloned().unwrap_or_else(S::zero);
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn upper_triangle(&self) -> Vec<S> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                out.push(self[(i, j)].clone());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn set_column(&mut self, j: usize, col: &[S]) {
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = v.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    let cur = core::mem::replace(&mut out[(i, j)], S::zero());
                    out[(i, j)] = cur + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.transpose(), tol)
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.transpose().neg(), tol)
    }

    /// Reduced row echelon form with partial pivoting. Candidates whose
    /// magnitude is at most `tol · max(1, max|entry|)` count as zero.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>, PivotReport) {
        let mut m = self.clone();
        let threshold = tol * f64::max(1.0, self.max_abs());
        let mut pivots = Vec::new();
        let mut min_kept = f64::INFINITY;
        let mut max_dropped: f64 = 0.0;
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best = row;
            let mut best_mag = m[(row, col)].magnitude();
            for r in row + 1..m.rows {
                let mag = m[(r, col)].magnitude();
                let better = if S::EXACT { best_mag == 0.0 && !m[(r, col)].is_zero() } else { mag > best_mag };
                if better {
                    best = r;
                    best_mag = mag;
                }
            }
            let negligible = if S::EXACT { m[(best, col)].is_zero() } else { best_mag <= threshold };
            if negligible {
                max_dropped = max_dropped.max(best_mag);
                continue;
            }
            min_kept = min_kept.min(best_mag);
            if best != row {
                for j in 0..m.cols {
                    m.data.swap(row * m.cols + j, best * m.cols + j);
                }
            }
            let p = m[(row, col)].clone();
            for j in 0..m.cols {
                let v = m[(row, j)].clone() / p.clone();
                m[(row, j)] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m[(r, j)].clone() - factor.clone() * m[(row, j)].clone();
                    m[(r, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let report = PivotReport { rank: pivots.len(), min_kept, max_dropped };
        (m, pivots, report)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the null space, one column per free variable.
    pub fn kernel(&self, tol: f64) -> (Self, PivotReport) {
        let (r, pivots, report) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = S::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                basis[(pcol, k)] = -r[(prow, f)].clone();
            }
        }
        (basis, report)
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let mut best = col;
            for r in col + 1..n {
                let better = if S::EXACT {
                    m[(best, col)].is_zero() && !m[(r, col)].is_zero()
                } else {
                    m[(r, col)].magnitude() > m[(best, col)].magnitude()
                };
                if better {
                    best = r;
                }
            }
            if m[(best, col)].is_zero() {
                return S::zero();
            }
            if best != col {
                for j in 0..n {
                    m.data.swap(col * n + j, best * n + j);
                }
                det = -det;
            }
            let p = m[(col, col)].clone();
            det = det * p.clone();
            for r in col + 1..n {
                let factor = m[(r, col)].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m[(r, j)].clone() - factor.clone() * m[(col, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self, tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(CoreError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots, _) = aug.rref(tol);
        if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
            return Err(CoreError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solves `self · x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &Self, tol: f64) -> Result<Self> {
        Ok(self.inverse(tol)?.mul(rhs))
    }

    /// Bilinear form value `uᵀ · self · v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> S {
        let mv = self.mul_vec(v);
        u.iter().zip(mv).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    }
}

impl<S: RealScalar> Matrix<S> {
    /// Symmetric positive definiteness via leading principal minors; exact
    /// for rationals.
    pub fn is_spd(&self, tol: f64) -> bool {
        if !self.is_symmetric(tol) {
            return false;
        }
        (1..=self.rows).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            let d = self.submatrix(&idx, &idx).determinant();
            if S::EXACT {
                d > S::zero()
            } else {
                d.as_f64() > tol
            }
        })
    }
}

impl Matrix<f64> {
    /// Lower-triangular `L` with `self = L Lᵀ`.
    pub fn cholesky(&self) -> Result<Self> {
        if !self.is_symmetric(1e-9 * f64::max(1.0, self.max_abs())) {
            return Err(CoreError::NotSymmetricPositiveDefinite);
        }
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(CoreError::NotSymmetricPositiveDefinite);
            }
            let dj = libm::sqrt(d);
            l[(j, j)] = dj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / dj;
            }
        }
        Ok(l)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
    /// Returns eigenvalues (ascending) and the matching orthonormal columns.
    pub fn symmetric_eigen(&self) -> (Vec<f64>, Self) {
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off < 1e-30 * f64::max(1.0, a.frobenius_norm() * a.frobenius_norm()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(core::cmp::Ordering::Equal));
        let vals = order.iter().map(|&i| a[(i, i)]).collect();
        let vecs = Self::from_fn(n, n, |i, j| v[(i, order[j])]);
        (vals, vecs)
    }

    /// Gram–Schmidt of the columns with respect to the inner product `g`.
    /// Fails when the columns are (numerically) dependent.
    pub fn orthonormalize(&self, g: &Self, tol: f64) -> Result<Self> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut v = self.column(j);
            for _pass in 0..2 {
                for u in &out {
                    let proj = g.bilinear(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = libm::sqrt(g.bilinear(&v, &v).max(0.0));
            let scale = libm::sqrt(g.bilinear(&self.column(j), &self.column(j)).max(0.0));
            if norm <= tol * f64::max(1.0, scale) {
                return Err(CoreError::DegenerateSubspace);
            }
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
        Ok(Self::from_columns(self.rows, &out))
    }

    /// Matrix exponential by scaling and squaring of the Taylor series.
    pub fn expm(&self) -> Self {
        let norm = self.frobenius_norm();
        let mut s = 0;
        while norm / (1u64 << s) as f64 > 0.5 {
            s += 1;
        }
        let a = self.scale(&(1.0 / (1u64 << s) as f64));
        let mut sum = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for k in 1..30 {
            term = term.mul(&a).scale(&(1.0 / k as f64));
            sum = sum.add(&term);
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// Bitmasks of all `p`-element subsets of `{0..n}`, in increasing order.
pub fn masks_of_degree(n: usize, p: usize) -> Vec<usize> {
    (0..1usize << n).filter(|m| m.count_ones() as usize == p).collect()
}
