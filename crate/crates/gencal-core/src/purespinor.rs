//! Isotropic pairs `(L, F)`, their pure spinors, annihilators, rank,
//! factorisation and gluing matrices.
//!
//! A pair stores a basis of `L` as the columns of an `n × k` matrix, the
//! two-form `F` by its components in that basis, and an orientation sign
//! relative to the column order. The extension of `F` to `T` uses the
//! `g`-orthogonal projection onto `L`.

use alloc::vec::Vec;

use crate::clifford::{CliffordElement, Frame};
use crate::error::{CoreError, Result};
use crate::exterior::{Form, GenVector};
use crate::genmetric::GeneralisedMetric;
use crate::linalg::{Matrix, PivotReport};
use crate::scalar::{RealScalar, Scalar};

/// Default tolerance for rank decisions in floating point.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicPair<S> {
    l: Matrix<S>,
    f: Matrix<S>,
    orientation: i8,
}

impl<S: RealScalar> IsotropicPair<S> {
    pub fn new(l: Matrix<S>, f: Matrix<S>, orientation: i8) -> Result<Self> {
        if f.rows() != l.cols() || f.cols() != l.cols() {
            return Err(CoreError::DimensionMismatch { expected: l.cols(), found: f.rows() });
        }
        let tol = if S::EXACT { 0.0 } else { 1e-9 * f64::max(1.0, f.max_abs()) };
        if !f.is_skew(tol) {
            return Err(CoreError::NotSkew);
        }
        if orientation != 1 && orientation != -1 {
            return Err(CoreError::Parse("orientation must be +1 or -1".into()));
        }
        if l.rank(if S::EXACT { 0.0 } else { RANK_TOL }) < l.cols() {
            return Err(CoreError::DegenerateSubspace);
        }
        Ok(IsotropicPair { l, f, orientation })
    }

    /// Pair with `F = 0` from the span of the listed coordinate axes.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        let l = Matrix::from_fn(n, axes.len(), |i, a| if axes[a] == i { S::one() } else { S::zero() });
        Self::new(l, Matrix::zeros(axes.len(), axes.len()), 1)
    }

    /// The zero-dimensional pair.
    pub fn point(n: usize) -> Self {
        IsotropicPair { l: Matrix::zeros(n, 0), f: Matrix::zeros(0, 0), orientation: 1 }
    }

    pub fn l(&self) -> &Matrix<S> {
        &self.l
    }

    pub fn f(&self) -> &Matrix<S> {
        &self.f
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn n(&self) -> usize {
        self.l.rows()
    }

    pub fn k(&self) -> usize {
        self.l.cols()
    }

    pub fn with_f(&self, f: Matrix<S>) -> Result<Self> {
        Self::new(self.l.clone(), f, self.orientation)
    }

    pub fn flipped(&self) -> Self {
        IsotropicPair { orientation: -self.orientation, ..self.clone() }
    }

    pub fn to_f64(&self) -> IsotropicPair<f64> {
        IsotropicPair { l: self.l.map(|v| v.as_f64()), f: self.f.map(|v| v.as_f64()), orientation: self.orientation }
    }

    /// Gram matrix `Lᵀ g L`.
    pub fn gram(&self, g: &Matrix<S>) -> Matrix<S> {
        self.l.transpose().mul(g).mul(&self.l)
    }

    /// Pullback `j*B` of a two-form given by its component matrix.
    pub fn pullback_matrix(&self, b: &Matrix<S>) -> Matrix<S> {
        self.l.transpose().mul(b).mul(&self.l)
    }

    /// `F₀ = p_L* F` as a form on `T`.
    pub fn extended_f(&self, g: &Matrix<S>) -> Result<Form<S>> {
        let n = self.n();
        let k = self.k();
        if k == 0 {
            return Ok(Form::zero(n));
        }
        let gram = self.gram(g);
        let lambda = gram.inverse(1e-14).map_err(|_| CoreError::DegenerateSubspace)?.mul(&self.l.transpose()).mul(g);
        let covectors: Vec<Form<S>> = (0..k).map(|a| Form::one_form(&lambda.row(a))).collect();
        let mut out = Form::zero(n);
        for a in 0..k {
            for b in a + 1..k {
                let c = &self.f[(a, b)];
                if c.is_zero() {
                    continue;
                }
                out = out.try_add(&covectors[a].wedge(&covectors[b])?.scale(c))?;
            }
        }
        Ok(out)
    }

    /// `(τ̃, s)` with `τ_{L,F} = √s · τ̃`, where
    /// `τ̃ = ± e^{F₀} ∧ hat(ι_{l_k} ⋯ ι_{l_1} e^{1…n})` and
    /// `s = det g / det(Lᵀ g L)`. Everything here is rational in the inputs.
    pub fn tau_unscaled(&self, g: &Matrix<S>) -> Result<(Form<S>, S)> {
        let n = self.n();
        let gram_det = self.gram(g).determinant();
        if gram_det.is_negligible(if S::EXACT { 0.0 } else { 1e-14 }) {
            return Err(CoreError::DegenerateSubspace);
        }
        let mut normal = Form::top_basis(n);
        for a in 0..self.k() {
            normal = normal.interior(&self.l.column(a))?;
        }
        let tau = self.extended_f(g)?.exp_two_form()?.wedge(&normal.hat())?;
        let tau = if self.orientation < 0 { -tau } else { tau };
        Ok((tau, g.determinant() / gram_det))
    }

    /// Same pair with `L` in reduced column echelon form: the basis is the
    /// nonzero rows of the reduced row echelon form of `Lᵀ`, so two pairs
    /// with the same plane, form and orientation compare equal.
    pub fn canonical(&self) -> Result<Self> {
        let k = self.k();
        let n = self.n();
        let tol = if S::EXACT { 0.0 } else { RANK_TOL };
        let (r, pivots, _) = self.l.transpose().hstack(&Matrix::identity(k)).rref(tol);
        if pivots.iter().take(k).any(|&c| c >= n) || pivots.len() < k {
            return Err(CoreError::DegenerateSubspace);
        }
        let rows: Vec<usize> = (0..k).collect();
        let a = r.submatrix(&rows, &(n..n + k).collect::<Vec<_>>());
        let l = r.submatrix(&rows, &(0..n).collect::<Vec<_>>()).transpose();
        let f = a.mul(&self.f).mul(&a.transpose());
        let det = a.determinant();
        let flip = det < S::zero();
        let orientation = if flip { -self.orientation } else { self.orientation };
        IsotropicPair::new(l, f, orientation)
    }

    /// `Lᵀ (g + B) L − F` and its determinant over `det(Lᵀ g L)`: the square
    /// of the calibration bound.
    pub fn bound_sq(&self, g: &Matrix<S>, b: &Matrix<S>) -> Result<S> {
        if self.k() == 0 {
            return Ok(S::one());
        }
        let gram_det = self.gram(g).determinant();
        if gram_det.is_negligible(if S::EXACT { 0.0 } else { 1e-14 }) {
            return Err(CoreError::DegenerateSubspace);
        }
        let m = self.gram(g).add(&self.pullback_matrix(b)).sub(&self.f);
        Ok(m.determinant() / gram_det)
    }
}

impl IsotropicPair<f64> {
    /// `g`-orthonormal oriented basis `U` of `L` and `R` with `L = U R`.
    pub fn orthonormal_frame(&self, g: &Matrix<f64>) -> Result<(Matrix<f64>, Matrix<f64>)> {
        let k = self.k();
        let mut u = self.l.orthonormalize(g, 1e-12)?;
        let mut r = u.transpose().mul(g).mul(&self.l);
        if self.orientation < 0 && k > 0 {
            for i in 0..self.n() {
                u[(i, k - 1)] = -u[(i, k - 1)];
            }
            for j in 0..k {
                r[(k - 1, j)] = -r[(k - 1, j)];
            }
        }
        Ok((u, r))
    }

    /// `F` in the orthonormal frame: `R^{-T} F R^{-1}`.
    pub fn f_orthonormal(&self, g: &Matrix<f64>) -> Result<Matrix<f64>> {
        let (_, r) = self.orthonormal_frame(g)?;
        if self.k() == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let ri = r.inverse(1e-300)?;
        Ok(ri.transpose().mul(&self.f).mul(&ri))
    }

    /// `ϖ_L = g(u_1, ·) ∧ ⋯ ∧ g(u_k, ·)`.
    pub fn varpi(&self, g: &Matrix<f64>) -> Result<Form<f64>> {
        let (u, _) = self.orthonormal_frame(g)?;
        let mut out = Form::one(self.n());
        for a in 0..self.k() {
            out = out.wedge(&Form::one_form(&g.mul_vec(&u.column(a))))?;
        }
        if self.k() == 0 && self.orientation < 0 {
            out = -out;
        }
        Ok(out)
    }

    /// Same pair with a `g`-orthonormal basis of `L`.
    pub fn normalized(&self, g: &Matrix<f64>) -> Result<Self> {
        let (u, _) = self.orthonormal_frame(g)?;
        let f = self.f_orthonormal(g)?;
        Ok(IsotropicPair { l: u, f, orientation: 1 })
    }

    /// `g`-orthonormal basis whose first `k` columns span `L`, positively
    /// oriented on `L`.
    pub fn adapted_frame(&self, g: &Matrix<f64>) -> Result<Matrix<f64>> {
        let n = self.n();
        let (u, _) = self.orthonormal_frame(g)?;
        let mut cols: Vec<Vec<f64>> = (0..self.k()).map(|a| u.column(a)).collect();
        for i in 0..n {
            if cols.len() == n {
                break;
            }
            let mut e = alloc::vec![0.0; n];
            e[i] = 1.0;
            let mut trial = cols.clone();
            trial.push(e);
            if let Ok(q) = Matrix::from_columns(n, &trial).orthonormalize(g, 1e-8) {
                cols = (0..trial.len()).map(|j| q.column(j)).collect();
            }
        }
        Ok(Matrix::from_columns(n, &cols))
    }
}

/// `τ_{L,F} = e^{F₀} ∧ hat(⋆ϖ_L)`.
pub fn tau_from_pair(p: &IsotropicPair<f64>, g: &Matrix<f64>) -> Result<Form<f64>> {
    let (t, s) = p.tau_unscaled(g)?;
    Ok(t.scale(&libm::sqrt(s)))
}

/// Same spinor assembled through the Hodge star; used as a cross-check.
pub fn tau_via_star(p: &IsotropicPair<f64>, g: &Matrix<f64>) -> Result<Form<f64>> {
    let star = crate::exterior::HodgeStar::new(g)?;
    let body = star.star(&p.varpi(g)?)?.hat();
    p.extended_f(g)?.exp_two_form()?.wedge(&body)
}

/// Kernel of `v ↦ v • τ` on `T ⊕ T*`, as `2n`-row columns `(X; ξ)`.
pub fn annihilator<S: Scalar>(tau: &Form<S>, tol: f64) -> Result<(Matrix<S>, PivotReport)> {
    let n = tau.dim();
    let rows = 1usize << n;
    let mut m = Matrix::zeros(rows, 2 * n);
    for j in 0..2 * n {
        let mut v = GenVector::zero(n);
        if j < n {
            v.vector[j] = S::one();
        } else {
            v.covector[j - n] = S::one();
        }
        let image = v.act(tau)?;
        for (r, c) in image.coeffs().iter().enumerate() {
            m[(r, j)] = c.clone();
        }
    }
    let scaled_tol = tol * f64::max(1.0, tau.max_abs()) / f64::max(1.0, m.max_abs());
    Ok(m.kernel(scaled_tol))
}

/// Largest `|(w, w')|` over pairs of annihilator basis columns.
pub fn isotropy_defect(w: &Matrix<f64>) -> f64 {
    let n = w.rows() / 2;
    let mut worst: f64 = 0.0;
    for a in 0..w.cols() {
        for b in a..w.cols() {
            let va = GenVector::from_stacked(&w.column(a));
            let vb = GenVector::from_stacked(&w.column(b));
            worst = worst.max(va.pairing(&vb).map(|x| x.abs()).unwrap_or(f64::INFINITY));
        }
    }
    let _ = n;
    worst
}

#[derive(Clone, Debug)]
pub struct PureSpinor {
    tau: Form<f64>,
    annihilator: Matrix<f64>,
    report: PivotReport,
    rank: usize,
}

impl PureSpinor {
    pub fn new(tau: Form<f64>, tol: f64) -> Result<Self> {
        if tau.is_negligible(tol) {
            return Err(CoreError::ZeroSpinor);
        }
        let n = tau.dim();
        let (w, report) = annihilator(&tau, tol)?;
        if w.cols() != n {
            return Err(CoreError::NotPure { annihilator_dim: w.cols() });
        }
        let top: Vec<usize> = (0..n).collect();
        let all: Vec<usize> = (0..n).collect();
        let rank = w.submatrix(&top, &all).rank(1e-7);
        Ok(PureSpinor { tau, annihilator: w, report, rank })
    }

    pub fn tau(&self) -> &Form<f64> {
        &self.tau
    }

    pub fn annihilator(&self) -> &Matrix<f64> {
        &self.annihilator
    }

    pub fn pivot_report(&self) -> PivotReport {
        self.report
    }

    /// `n − dim(W ∩ T*)`.
    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// `rank` of a form, failing if it is not pure.
pub fn rank(tau: &Form<f64>, tol: f64) -> Result<usize> {
    Ok(PureSpinor::new(tau.clone(), tol)?.rank())
}

/// Writes a pure spinor as `c · τ_{L,F}` with `c > 0`, `L` returned with a
/// `g`-orthonormal basis.
pub fn factorize(tau: &Form<f64>, g: &Matrix<f64>, tol: f64) -> Result<(f64, IsotropicPair<f64>)> {
    let n = tau.dim();
    let pure = PureSpinor::new(tau.clone(), tol)?;
    let w = pure.annihilator();
    let top: Vec<usize> = (0..n).collect();
    let all: Vec<usize> = (0..w.cols()).collect();
    let wt = w.submatrix(&top, &all);
    let (_, pivots, _) = wt.rref(1e-7);
    let k = pivots.len();
    let l = Matrix::from_fn(n, k, |i, a| w[(i, pivots[a])]);
    let mut f = Matrix::zeros(k, k);
    for a in 0..k {
        let eta: Vec<f64> = (n..2 * n).map(|r| w[(r, pivots[a])]).collect();
        for b in 0..k {
            f[(a, b)] = (0..n).map(|i| eta[i] * l[(i, b)]).sum();
        }
    }
    let f = f.sub(&f.transpose()).scale(&0.5);
    let raw = IsotropicPair::new(l, f, 1)?.normalized(g)?;
    let candidate = tau_from_pair(&raw, g)?;
    let denom = candidate.dot(&candidate)?;
    let c = candidate.dot(tau)? / denom;
    if c.abs() < tol {
        return Err(CoreError::ZeroSpinor);
    }
    if c > 0.0 {
        Ok((c, raw))
    } else {
        Ok((-c, raw.flipped()))
    }
}

/// Orthogonal map `R_{L,F}` from the block formula in an adapted
/// orthonormal basis: `(I − A)(I + A)⁻¹` on `L` with `A = j*B − F`
/// (orthonormal components) and `−Id` on `L^⊥`.
pub fn gluing_matrix(gm: &GeneralisedMetric<f64>, p: &IsotropicPair<f64>) -> Result<Matrix<f64>> {
    let n = p.n();
    let k = p.k();
    let g = gm.g();
    let q = p.adapted_frame(g)?;
    let mut block = Matrix::zeros(n, n);
    if k > 0 {
        let (u, _) = p.orthonormal_frame(g)?;
        let a = u.transpose().mul(gm.b()).mul(&u).sub(&p.f_orthonormal(g)?);
        let id = Matrix::identity(k);
        let rl = id.sub(&a).mul(&id.add(&a).inverse(1e-14)?);
        for i in 0..k {
            for j in 0..k {
                block[(i, j)] = rl[(i, j)];
            }
        }
    }
    for i in k..n {
        block[(i, i)] = -1.0;
    }
    let q_inv = q.transpose().mul(g);
    Ok(q.mul(&block).mul(&q_inv))
}

/// Same map read off as the graph of `W_τ` over `V⁺ → V⁻`:
/// `lift_plus(X) + lift_minus(R X) ∈ W_τ`.
pub fn gluing_matrix_graph(gm: &GeneralisedMetric<f64>, p: &IsotropicPair<f64>) -> Result<Matrix<f64>> {
    let n = p.n();
    let tau = tau_from_pair(p, gm.g())?;
    let (w, _) = annihilator(&tau, RANK_TOL)?;
    if w.cols() != n {
        return Err(CoreError::NotPure { annihilator_dim: w.cols() });
    }
    let system = w.hstack(&gm.vminus_basis().neg());
    let rhs = gm.vplus_basis();
    let sol = system.solve(&rhs, 1e-12)?;
    let rows: Vec<usize> = (n..2 * n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(sol.submatrix(&rows, &cols))
}

/// `J⁻¹(e^{−B} ∧ τ_{L,F} / ‖τ‖)` in the `g`-orthonormal frame.
pub fn pin_lift(gm: &GeneralisedMetric<f64>, p: &IsotropicPair<f64>) -> Result<CliffordElement<f64>> {
    let g = gm.g();
    let bf = gm.b_form();
    let tau = tau_from_pair(p, g)?;
    let nrm = gm.qnorm(&tau)?;
    let untwisted = (-&bf).exp_two_form()?.wedge(&tau)?.scale(&(1.0 / nrm));
    CliffordElement::from_form(Frame::new(g)?, &untwisted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_taus() {
        let g = Matrix::identity(2);
        let f = Matrix::from_row_major(2, 2, alloc::vec![0.0, 0.5, -0.5, 0.0]).unwrap();
        let p = IsotropicPair::new(Matrix::identity(2), f, 1).unwrap();
        let tau = tau_from_pair(&p, &g).unwrap();
        assert!((tau.coeff(0) - 1.0).abs() < 1e-12 && (tau.coeff(3) - 0.5).abs() < 1e-12);
        let point = tau_from_pair(&IsotropicPair::point(2), &g).unwrap();
        assert_eq!(point, -Form::<f64>::top_basis(2));
    }

    #[test]
    fn line_in_three_space() {
        let g = Matrix::identity(3);
        let p = IsotropicPair::<f64>::coordinate(3, &[0]).unwrap();
        let tau = tau_from_pair(&p, &g).unwrap();
        assert_eq!(tau, -Form::<f64>::basis(3, 0b110));
        assert!(tau.approx_eq(&tau_via_star(&p, &g).unwrap(), 1e-12));
    }

    #[test]
    fn annihilator_examples() {
        let (w, _) = annihilator(&Form::<f64>::one(2), RANK_TOL).unwrap();
        assert_eq!(w.cols(), 2);
        assert!((0..2).all(|j| w[(2, j)] == 0.0 && w[(3, j)] == 0.0));
        assert_eq!(rank(&Form::one(2), RANK_TOL).unwrap(), 2);
        assert_eq!(rank(&Form::top_basis(2), RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn rotation_block() {
        let fval = 0.8;
        let f = Matrix::from_row_major(2, 2, alloc::vec![0.0, fval, -fval, 0.0]).unwrap();
        let p = IsotropicPair::new(Matrix::identity(2), f, 1).unwrap();
        let gm = GeneralisedMetric::standard(2);
        let r = gluing_matrix(&gm, &p).unwrap();
        let d = 1.0 + fval * fval;
        let expected =
            Matrix::from_row_major(2, 2, alloc::vec![(1.0 - fval * fval) / d, 2.0 * fval / d, -2.0 * fval / d, (1.0 - fval * fval) / d])
                .unwrap();
        assert!(r.approx_eq(&expected, 1e-12));
        assert!(gluing_matrix_graph(&gm, &p).unwrap().approx_eq(&expected, 1e-10));
        let lifted = pin_lift(&gm, &p).unwrap().pin_project(1e-10).unwrap();
        assert!(lifted.approx_eq(&expected, 1e-10));
    }
}
