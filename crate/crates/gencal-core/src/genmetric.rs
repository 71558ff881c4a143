//! Generalised metrics `(g, B)` on `T ⊕ T*` and their action on form spinors.
//!
//! `B` is kept as its component matrix `B_ij` (the coefficient of `e^{ij}`
//! for `i < j`). As a map `T → T*` it is `X ↦ X⌟B`, whose matrix is `Bᵀ`;
//! that map is what enters the graphs `V± = {X ⊕ (±g + Bᵀ)X}` and the
//! involution `G`. On forms the same `B` acts by `e^B ∧ ·`.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::exterior::{Form, GenVector, HodgeStar};
use crate::linalg::Matrix;
use crate::scalar::{Complex64, RealScalar, Scalar};

#[derive(Clone, Debug)]
pub struct GeneralisedMetric<S> {
    g: Matrix<S>,
    b: Matrix<S>,
    star: HodgeStar,
}

/// Sign `σ` in `G̃ = σ · ⋆ ∘ hat` (`n` even) or `σ · ⋆ ∘ hat ∘ tilde`
/// (`n` odd), chosen so that `Q(1, 1) > 0` for the flat metric.
pub fn gtilde_sign(n: usize) -> i64 {
    let one = Form::<f64>::one(n);
    let base = if n % 2 == 0 { one.hat().euclidean_star() } else { one.tilde().hat().euclidean_star() };
    let m = n / 2;
    let q = one.mukai(&base).expect("same dimension");
    let q = if m % 2 == 1 { -q } else { q };
    if q > 0.0 {
        1
    } else {
        -1
    }
}

impl<S: RealScalar> GeneralisedMetric<S> {
    pub fn build(g: Matrix<S>, b: Matrix<S>) -> Result<Self> {
        if !g.is_square() || !b.is_square() {
            return Err(CoreError::DimensionMismatch { expected: g.rows(), found: g.cols() });
        }
        if g.rows() != b.rows() {
            return Err(CoreError::DimensionMismatch { expected: g.rows(), found: b.rows() });
        }
        let tol = if S::EXACT { 0.0 } else { 1e-9 };
        if !b.is_skew(tol * f64::max(1.0, b.max_abs())) {
            return Err(CoreError::NotSkew);
        }
        if !g.is_spd(tol * f64::max(1.0, g.max_abs())) {
            return Err(CoreError::NotSymmetricPositiveDefinite);
        }
        let star = HodgeStar::new(&g.map(|v| v.as_f64()))?;
        Ok(GeneralisedMetric { g, b, star })
    }

    pub fn standard(n: usize) -> Self {
        Self::build(Matrix::identity(n), Matrix::zeros(n, n)).expect("flat metric is valid")
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &Matrix<S> {
        &self.g
    }

    /// Component matrix `B_ij`.
    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    /// Matrix of `X ↦ X⌟B`.
    pub fn b_map(&self) -> Matrix<S> {
        self.b.transpose()
    }

    pub fn b_form(&self) -> Form<S> {
        Form::two_form_from_matrix(&self.b)
    }

    pub fn hodge(&self) -> &HodgeStar {
        &self.star
    }

    pub fn to_f64(&self) -> GeneralisedMetric<f64> {
        GeneralisedMetric { g: self.g.map(|v| v.as_f64()), b: self.b.map(|v| v.as_f64()), star: self.star.clone() }
    }

    fn inverse_g(&self) -> Matrix<S> {
        self.g.inverse(1e-14).expect("positive definite metric is invertible")
    }

    /// `G = [[−g⁻¹b, g⁻¹], [g − b g⁻¹ b, b g⁻¹]]` with `b = Bᵀ`.
    pub fn involution(&self) -> Matrix<S> {
        let gi = self.inverse_g();
        let bm = self.b_map();
        let tl = gi.mul(&bm).neg();
        let bl = self.g.sub(&bm.mul(&gi).mul(&bm));
        let br = bm.mul(&gi);
        tl.hstack(&gi).vstack(&bl.hstack(&br))
    }

    fn graph(&self, sign: i64) -> Matrix<S> {
        let p = self.g.scale(&S::from_i64(sign)).add(&self.b_map());
        Matrix::identity(self.dim()).vstack(&p)
    }

    /// Columns `e_i ⊕ (g + Bᵀ)e_i` spanning `V⁺`.
    pub fn vplus_basis(&self) -> Matrix<S> {
        self.graph(1)
    }

    /// Columns `e_i ⊕ (−g + Bᵀ)e_i` spanning `V⁻`.
    pub fn vminus_basis(&self) -> Matrix<S> {
        self.graph(-1)
    }

    fn lift(&self, x: &[S], sign: i64) -> GenVector<S> {
        let p = self.g.scale(&S::from_i64(sign)).add(&self.b_map());
        GenVector { vector: x.to_vec(), covector: p.mul_vec(x) }
    }

    pub fn lift_plus(&self, x: &[S]) -> GenVector<S> {
        self.lift(x, 1)
    }

    pub fn lift_minus(&self, x: &[S]) -> GenVector<S> {
        self.lift(x, -1)
    }

    /// Recovers `(g, B)` from any basis `(A; C)` of a positive maximal
    /// subspace: `C A⁻¹ = g + Bᵀ`.
    pub fn from_splitting(basis: &Matrix<S>) -> Result<Self> {
        let n = basis.cols();
        if basis.rows() != 2 * n {
            return Err(CoreError::DimensionMismatch { expected: 2 * n, found: basis.rows() });
        }
        let top: Vec<usize> = (0..n).collect();
        let bottom: Vec<usize> = (n..2 * n).collect();
        let a = basis.submatrix(&top, &top);
        let c = basis.submatrix(&bottom, &top);
        let p = c.mul(&a.inverse(1e-12)?);
        let half = S::one() / S::from_i64(2);
        let pt = p.transpose();
        let g = p.add(&pt).scale(&half);
        let b_map = p.sub(&pt).scale(&half);
        Self::build(g, b_map.transpose())
    }
}

impl GeneralisedMetric<f64> {
    /// `G̃` without the B-field conjugation.
    pub fn gtilde_untwisted<T: Scalar>(&self, rho: &Form<T>) -> Result<Form<T>> {
        let n = self.dim();
        let pre = if n % 2 == 0 { rho.hat() } else { rho.tilde().hat() };
        let out = self.star.star(&pre)?;
        Ok(if gtilde_sign(n) < 0 { -out } else { out })
    }

    /// `G̃ = e^B ∘ G̃₀ ∘ e^{−B}`, the action of the volume element of `V⁻`.
    pub fn gtilde<T: Scalar>(&self, rho: &Form<T>) -> Result<Form<T>> {
        if rho.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch { expected: self.dim(), found: rho.dim() });
        }
        let b = self.b_form().map(|c| T::from_f64(*c));
        let e_plus = b.exp_two_form()?;
        let e_minus = (-&b).exp_two_form()?;
        let inner = self.gtilde_untwisted(&e_minus.wedge(rho)?)?;
        e_plus.wedge(&inner)
    }

    /// Applies `v_1 • v_2 • … • v_n •` for `v_k = lift_minus(f_k)` over a
    /// `g`-orthonormal oriented frame. Independent of [`Self::gtilde`].
    pub fn volume_minus_action(&self, rho: &Form<f64>) -> Result<Form<f64>> {
        let n = self.dim();
        let l = self.g.cholesky()?;
        let frame = l.inverse(1e-300)?.transpose();
        let mut out = rho.clone();
        for k in (0..n).rev() {
            let v = self.lift_minus(&frame.column(k));
            out = v.act(&out)?;
        }
        Ok(out)
    }

    /// `Q(ρ, τ) = (−1)^m ⟨ρ_ev, G̃τ_ev⟩ − (−1)^m ⟨ρ_od, G̃τ_od⟩`, measured
    /// against the Riemannian volume form.
    pub fn q_pairing<T: Scalar>(&self, rho: &Form<T>, tau: &Form<T>) -> Result<T> {
        let m = self.dim() / 2;
        let even = rho.even_part().mukai(&self.gtilde(&tau.even_part())?)?;
        let odd = rho.odd_part().mukai(&self.gtilde(&tau.odd_part())?)?;
        let q = (even - odd) * T::from_f64(1.0 / self.star.volume_factor());
        Ok(if m % 2 == 1 { -q } else { q })
    }

    pub fn qnorm_sq(&self, rho: &Form<f64>) -> Result<f64> {
        self.q_pairing(rho, rho)
    }

    /// `√Q(ρ, ρ)`; a negative square beyond round-off is an error.
    pub fn qnorm(&self, rho: &Form<f64>) -> Result<f64> {
        let q = self.qnorm_sq(rho)?;
        if q < -1e-9 * f64::max(1.0, rho.max_abs() * rho.max_abs()) {
            return Err(CoreError::NegativeNorm(q));
        }
        Ok(libm::sqrt(q.max(0.0)))
    }

    /// Hermitian extension: `‖Re ρ‖² + ‖Im ρ‖²`, square-rooted.
    pub fn qnorm_complex(&self, rho: &Form<Complex64>) -> Result<f64> {
        let re = self.qnorm(&rho.real_part())?;
        let im = self.qnorm(&rho.imag_part())?;
        Ok(libm::hypot(re, im))
    }

    /// Induced inner product of forms after untwisting by `e^{−B}`.
    pub fn twisted_form_inner(&self, rho: &Form<f64>, tau: &Form<f64>) -> Result<f64> {
        let e_minus = (-&self.b_form()).exp_two_form()?;
        self.star.inner(&e_minus.wedge(rho)?, &e_minus.wedge(tau)?)
    }
}
