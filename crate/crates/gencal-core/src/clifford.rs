//! `Cliff(T, g)` for positive definite `g`, stored in a `g`-orthonormal frame.
//!
//! Generators satisfy `f_i · f_i = +1` and anticommute, so the product of
//! two basis monomials is a bitmask xor with the same reordering sign as the
//! wedge product. The identification with forms (`J`) is the identity on
//! frame coefficients; [`CliffordElement::from_form`] and
//! [`CliffordElement::to_form`] convert to and from the standard coframe.

use alloc::sync::Arc;

use crate::error::{CoreError, Result};
use crate::exterior::{wedge_sign_odd, Form, HodgeStar};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Orthonormal frame `f = L^{-T} e` for `g = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Frame {
    g: Matrix<f64>,
    chol: Matrix<f64>,
    chol_inv: Matrix<f64>,
    star: HodgeStar,
}

impl Frame {
    pub fn new(g: &Matrix<f64>) -> Result<Arc<Self>> {
        let chol = g.cholesky()?;
        let chol_inv = chol.inverse(1e-300)?;
        let star = HodgeStar::new(g)?;
        Ok(Arc::new(Frame { g: g.clone(), chol, chol_inv, star }))
    }

    pub fn standard(n: usize) -> Arc<Self> {
        Self::new(&Matrix::identity(n)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn metric(&self) -> &Matrix<f64> {
        &self.g
    }

    /// Frame coordinates `Lᵀ X` of a vector given in the standard basis.
    pub fn vector_to_frame(&self, x: &[f64]) -> alloc::vec::Vec<f64> {
        self.chol.transpose().mul_vec(x)
    }

    /// Standard coordinates of a vector given in the frame.
    pub fn vector_from_frame(&self, y: &[f64]) -> alloc::vec::Vec<f64> {
        self.chol_inv.transpose().mul_vec(y)
    }

    /// Converts an endomorphism written in the frame to the standard basis.
    pub fn matrix_from_frame(&self, r: &Matrix<f64>) -> Matrix<f64> {
        self.chol_inv.transpose().mul(r).mul(&self.chol.transpose())
    }

    pub fn hodge(&self) -> &HodgeStar {
        &self.star
    }
}

#[derive(Clone, Debug)]
pub struct CliffordElement<S> {
    frame: Arc<Frame>,
    coeffs: Form<S>,
}

/// Product of basis monomials `f_A · f_B = ± f_{A xor B}`.
#[inline]
pub fn monomial_product_odd(a: usize, b: usize) -> bool {
    wedge_sign_odd(a, b)
}

impl<S: Scalar> CliffordElement<S> {
    /// Element with the given frame coefficients.
    pub fn new(frame: Arc<Frame>, coeffs: Form<S>) -> Result<Self> {
        if coeffs.dim() != frame.dim() {
            return Err(CoreError::DimensionMismatch { expected: frame.dim(), found: coeffs.dim() });
        }
        Ok(CliffordElement { frame, coeffs })
    }

    pub fn scalar(frame: Arc<Frame>, value: S) -> Self {
        let n = frame.dim();
        CliffordElement { frame, coeffs: Form::scalar(n, value) }
    }

    pub fn one(frame: Arc<Frame>) -> Self {
        Self::scalar(frame, S::one())
    }

    /// Frame generator `f_{i+1}`.
    pub fn generator(frame: Arc<Frame>, i: usize) -> Self {
        let n = frame.dim();
        CliffordElement { frame, coeffs: Form::basis(n, 1 << i) }
    }

    pub fn monomial(frame: Arc<Frame>, mask: usize) -> Self {
        let n = frame.dim();
        CliffordElement { frame, coeffs: Form::basis(n, mask) }
    }

    /// `J⁻¹`: reads a form given on the standard coframe in the frame.
    pub fn from_form(frame: Arc<Frame>, form: &Form<S>) -> Result<Self> {
        let coeffs = frame.hodge().to_frame(form)?;
        Ok(CliffordElement { frame, coeffs })
    }

    /// `J`: the form with the same frame coefficients, on the standard coframe.
    pub fn to_form(&self) -> Result<Form<S>> {
        self.frame.hodge().from_frame(&self.coeffs)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn coeffs(&self) -> &Form<S> {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame.g == other.frame.g {
            Ok(())
        } else {
            Err(CoreError::FrameMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let n = self.dim();
        let mut out = Form::zero(n);
        for (a_mask, a) in self.coeffs.terms() {
            for (b_mask, b) in other.coeffs.terms() {
                let prod = a.clone() * b.clone();
                let prod = if monomial_product_odd(a_mask, b_mask) { -prod } else { prod };
                out.add_to_coeff(a_mask ^ b_mask, prod);
            }
        }
        Ok(CliffordElement { frame: self.frame.clone(), coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        Ok(CliffordElement { frame: self.frame.clone(), coeffs: self.coeffs.try_add(&other.coeffs)? })
    }

    pub fn scale(&self, s: &S) -> Self {
        CliffordElement { frame: self.frame.clone(), coeffs: self.coeffs.scale(s) }
    }

    /// Reversal `f_{i1}…f_{ip} ↦ f_{ip}…f_{i1}`, sign `(-1)^{p(p-1)/2}`.
    pub fn reverse(&self) -> Self {
        let coeffs = self.coeffs.map_with_mask(|k, c| {
            let p = k.count_ones() as usize;
            if (p * p.saturating_sub(1) / 2) % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        });
        CliffordElement { frame: self.frame.clone(), coeffs }
    }

    /// Grade involution `α`, sign `(-1)^p`.
    pub fn grade_involution(&self) -> Self {
        CliffordElement { frame: self.frame.clone(), coeffs: self.coeffs.tilde() }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_frame(other).is_ok() && self.coeffs.approx_eq(&other.coeffs, tol)
    }

    /// Power series `Σ aᵏ/k!` with scaling and squaring.
    pub fn exp(&self) -> Result<Self> {
        let norm = self.coeffs.coeff_norm();
        if !norm.is_finite() {
            return Err(CoreError::SeriesDiverged);
        }
        let mut squarings = 0u32;
        while norm / f64::from(1u32 << squarings.min(30)) > 0.5 && squarings < 60 {
            squarings += 1;
        }
        let scaled = self.scale(&S::from_f64(libm::ldexp(1.0, -(squarings as i32))));
        let mut sum = Self::one(self.frame.clone());
        let mut term = Self::one(self.frame.clone());
        let mut converged = false;
        for k in 1..=60 {
            term = term.mul(&scaled)?.scale(&(S::one() / S::from_i64(k)));
            sum = sum.add(&term)?;
            if term.coeffs.max_abs() < 1e-18 * f64::max(1.0, sum.coeffs.max_abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(CoreError::SeriesDiverged);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum)?;
        }
        Ok(sum)
    }
}

impl CliffordElement<f64> {
    /// Twisted adjoint `x ↦ a · x · α(a)⁻¹` as a matrix on the standard basis.
    pub fn pin_project(&self, tol: f64) -> Result<Matrix<f64>> {
        let n = self.dim();
        let norm = self.mul(&self.reverse())?;
        let scale_ref = f64::max(1.0, norm.coeffs.max_abs());
        let n0 = *norm.coeffs.coeff(0);
        if norm.coeffs.terms().any(|(k, c)| k != 0 && c.abs() > tol * scale_ref) || n0.abs() <= tol * scale_ref {
            return Err(CoreError::NotInPin);
        }
        let alpha_inv = self.grade_involution().reverse().scale(&(1.0 / n0));
        let mut r = Matrix::zeros(n, n);
        for i in 0..n {
            let gen = Self::generator(self.frame.clone(), i);
            let image = self.mul(&gen)?.mul(&alpha_inv)?;
            let leak = image
                .coeffs
                .terms()
                .filter(|(k, _)| k.count_ones() != 1)
                .map(|(_, c)| c.abs())
                .fold(0.0, f64::max);
            if leak > tol * f64::max(1.0, image.coeffs.max_abs()) {
                return Err(CoreError::NotInPin);
            }
            for j in 0..n {
                r[(j, i)] = *image.coeffs.coeff(1 << j);
            }
        }
        Ok(self.frame.matrix_from_frame(&r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        let fr = Frame::standard(3);
        let e1 = CliffordElement::<f64>::generator(fr.clone(), 0);
        let e2 = CliffordElement::<f64>::generator(fr.clone(), 1);
        assert!(e1.mul(&e1).unwrap().approx_eq(&CliffordElement::one(fr.clone()), 0.0));
        let e12 = e1.mul(&e2).unwrap();
        assert!(e12.approx_eq(&CliffordElement::monomial(fr.clone(), 0b11), 0.0));
        assert!(e12.mul(&e12).unwrap().approx_eq(&CliffordElement::scalar(fr, -1.0), 0.0));
    }

    #[test]
    fn reflection_and_rotation() {
        let fr = Frame::standard(3);
        let e1 = CliffordElement::<f64>::generator(fr.clone(), 0);
        let r = e1.pin_project(1e-12).unwrap();
        assert!(r.approx_eq(&Matrix::diagonal(&[-1.0, 1.0, 1.0]), 1e-12));
        let t = 0.7;
        let rot = CliffordElement::monomial(fr, 0b011).scale(&(t / 2.0)).exp().unwrap();
        let m = rot.pin_project(1e-12).unwrap();
        let (c, s) = (libm::cos(t), libm::sin(t));
        let gen = Matrix::from_row_major(3, 3, alloc::vec![0.0, -t, 0.0, t, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(m.approx_eq(&gen.expm(), 1e-10) || m.approx_eq(&gen.neg().expm(), 1e-10));
        assert!((m[(0, 0)] - c).abs() < 1e-10 && (m[(1, 0)].abs() - s).abs() < 1e-10);
    }

    #[test]
    fn frame_mismatch_is_reported() {
        let a = CliffordElement::<f64>::one(Frame::standard(2));
        let b = CliffordElement::<f64>::one(Frame::new(&Matrix::diagonal(&[1.0, 2.0])).unwrap());
        assert_eq!(a.mul(&b).unwrap_err(), CoreError::FrameMismatch);
    }
}
