//! Dense mixed-degree forms on `ℝⁿ` and the `T ⊕ T*` action on them.
//!
//! A form stores one coefficient per subset of `{1..n}`; bit `i` of the
//! subset mask stands for the covector `e^{i+1}`. All sign bookkeeping goes
//! through [`wedge_sign_odd`], which counts the transpositions needed to
//! sort the concatenation of two index sets.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use crate::error::{CoreError, Result};
use crate::linalg::Matrix;
use crate::scalar::{Complex64, Scalar};

/// Largest supported dimension; coefficient arrays have `2^n` entries.
pub const MAX_DIM: usize = 12;

/// `true` when `e^A ∧ e^B = -e^{A∪B}` for disjoint `A`, `B`: the number of
/// pairs `(a, b)` with `a ∈ A`, `b ∈ B`, `a > b` is odd.
#[inline]
pub fn wedge_sign_odd(a: usize, b: usize) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    count % 2 == 1
}

/// Sign exponent of `hat` on degree `p`: `p(p+1)/2`.
#[inline]
pub fn hat_odd(p: usize) -> bool {
    (p * (p + 1) / 2) % 2 == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    dim: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    fn check_dim(n: usize) -> Result<()> {
        if n > MAX_DIM {
            return Err(CoreError::DimensionOutOfRange { n, min: 0, max: MAX_DIM });
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "form dimension {n} exceeds {MAX_DIM}");
        Form { dim: n, coeffs: vec![S::zero(); 1 << n] }
    }

    pub fn scalar(n: usize, value: S) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[0] = value;
        f
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn basis(n: usize, mask: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[mask] = S::one();
        f
    }

    /// `e^{1…n}`, the fixed trivialisation of the top degree.
    pub fn top_basis(n: usize) -> Self {
        Self::basis(n, (1 << n) - 1)
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<S>) -> Result<Self> {
        Self::check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(CoreError::DimensionMismatch { expected: 1 << n, found: coeffs.len() });
        }
        Ok(Form { dim: n, coeffs })
    }

    pub fn one_form(components: &[S]) -> Self {
        let mut f = Self::zero(components.len());
        for (i, c) in components.iter().enumerate() {
            f.coeffs[1 << i] = c.clone();
        }
        f
    }

    /// Two-form `Σ_{i<j} m_ij e^{ij}` from the upper triangle of `m`.
    pub fn two_form_from_matrix(m: &Matrix<S>) -> Self {
        let n = m.rows();
        let mut f = Self::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                f.coeffs[(1 << i) | (1 << j)] = m[(i, j)].clone();
            }
        }
        f
    }

    /// Skew component matrix of the degree-two part.
    pub fn two_form_matrix(&self) -> Matrix<S> {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.coeffs[(1 << i) | (1 << j)].clone();
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &S {
        &self.coeffs[mask]
    }

    pub fn set_coeff(&mut self, mask: usize, value: S) {
        self.coeffs[mask] = value;
    }

    pub fn add_to_coeff(&mut self, mask: usize, value: S) {
        let cur = core::mem::replace(&mut self.coeffs[mask], S::zero());
        self.coeffs[mask] = cur + value;
    }

    /// Coefficient of `e^{1…n}`.
    pub fn top(&self) -> &S {
        &self.coeffs[(1 << self.dim) - 1]
    }

    /// Nonzero terms as `(mask, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|c| c.magnitude() * c.magnitude()).sum())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form { dim: self.dim, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn map_with_mask(&self, f: impl Fn(usize, &S) -> S) -> Self {
        Form { dim: self.dim, coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect() }
    }

    pub fn degree_part(&self, p: usize) -> Self {
        self.map_with_mask(|k, c| if k.count_ones() as usize == p { c.clone() } else { S::zero() })
    }

    pub fn even_part(&self) -> Self {
        self.map_with_mask(|k, c| if k.count_ones() % 2 == 0 { c.clone() } else { S::zero() })
    }

    pub fn odd_part(&self) -> Self {
        self.map_with_mask(|k, c| if k.count_ones() % 2 == 1 { c.clone() } else { S::zero() })
    }

    /// Parity of the nonzero terms; the zero form counts as even.
    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (k, _) in self.terms() {
            if k.count_ones() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Degree if all nonzero terms share one; `None` for mixed forms. The
    /// zero form reports `None` as well.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (k, _) in self.terms() {
            let d = k.count_ones() as usize;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Degrees that carry a coefficient above `tol`.
    pub fn degree_support(&self, tol: f64) -> Vec<usize> {
        let mut seen = vec![false; self.dim + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_negligible(tol) {
                seen[k.count_ones() as usize] = true;
            }
        }
        (0..=self.dim).filter(|&d| seen[d]).collect()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Form {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let full = (1usize << n) - 1;
        let mut out = Self::zero(n);
        for (a_mask, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let comp = full & !a_mask;
            let mut b_mask = comp;
            loop {
                let b = &other.coeffs[b_mask];
                if !b.is_zero() {
                    let prod = a.clone() * b.clone();
                    let prod = if wedge_sign_odd(a_mask, b_mask) { -prod } else { prod };
                    out.add_to_coeff(a_mask | b_mask, prod);
                }
                if b_mask == 0 {
                    break;
                }
                b_mask = (b_mask - 1) & comp;
            }
        }
        Ok(out)
    }

    /// Contraction `X ⌟ self`; an antiderivation of degree −1.
    pub fn interior(&self, x: &[S]) -> Result<Self> {
        if x.len() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut out = Self::zero(self.dim);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut rest = k;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if x[i].is_zero() {
                    continue;
                }
                let below = (k & ((1 << i) - 1)).count_ones();
                let v = x[i].clone() * c.clone();
                out.add_to_coeff(k ^ (1 << i), if below % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Multiplies the degree-`p` part by `(-1)^{p(p+1)/2}`.
    pub fn hat(&self) -> Self {
        self.map_with_mask(|k, c| if hat_odd(k.count_ones() as usize) { -c.clone() } else { c.clone() })
    }

    /// Multiplies the degree-`p` part by `(-1)^p`.
    pub fn tilde(&self) -> Self {
        self.map_with_mask(|k, c| if k.count_ones() % 2 == 1 { -c.clone() } else { c.clone() })
    }

    /// Top coefficient of `self ∧ hat(other)`.
    pub fn mukai(&self, other: &Self) -> Result<S> {
        self.same_dim(other)?;
        let full = (1usize << self.dim) - 1;
        let mut acc = S::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            let comp = full ^ k;
            let b = &other.coeffs[comp];
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let odd = wedge_sign_odd(k, comp) ^ hat_odd(comp.count_ones() as usize);
            let prod = a.clone() * b.clone();
            acc = if odd { acc - prod } else { acc + prod };
        }
        Ok(acc)
    }

    /// Coefficient-wise sum of products, i.e. the Euclidean inner product for
    /// the standard metric (bilinear, no conjugation).
    pub fn dot(&self, other: &Self) -> Result<S> {
        self.same_dim(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// `exp(B) = 1 + B + B∧B/2 + …` for a degree-two form.
    pub fn exp_two_form(&self) -> Result<Self> {
        if self.terms().any(|(k, _)| k.count_ones() != 2) {
            return Err(CoreError::NotDegreeTwo);
        }
        let mut sum = Self::one(self.dim);
        let mut term = Self::one(self.dim);
        for j in 1..=self.dim / 2 {
            term = term.wedge(self)?.scale(&(S::one() / S::from_i64(j as i64)));
            if term.is_zero() {
                break;
            }
            sum = sum.try_add(&term)?;
        }
        Ok(sum)
    }

    /// Orthonormal Hodge star for the standard metric and orientation:
    /// `⋆e^K = sign(K, Kᶜ) e^{Kᶜ}`.
    pub fn euclidean_star(&self) -> Self {
        let full = (1usize << self.dim) - 1;
        let mut out = Self::zero(self.dim);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let comp = full ^ k;
            out.coeffs[comp] = if wedge_sign_odd(k, comp) { -c.clone() } else { c.clone() };
        }
        out
    }
}

impl Form<f64> {
    pub fn to_complex(&self) -> Form<Complex64> {
        self.map(|c| Complex64::new(*c, 0.0))
    }
}

impl Form<Complex64> {
    pub fn real_part(&self) -> Form<f64> {
        self.map(|c| c.re)
    }

    pub fn imag_part(&self) -> Form<f64> {
        self.map(|c| c.im)
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("form dimensions differ")
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Self) -> Form<S> {
        self.try_add(rhs).expect("form dimensions differ")
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Self) -> Form<S> {
        assert_eq!(self.dim, rhs.dim, "form dimensions differ");
        Form {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|c| -c.clone())
    }
}

/// An element `X ⊕ ξ` of `T ⊕ T*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenVector<S> {
    pub vector: Vec<S>,
    pub covector: Vec<S>,
}

impl<S: Scalar> GenVector<S> {
    pub fn new(vector: Vec<S>, covector: Vec<S>) -> Result<Self> {
        if vector.len() != covector.len() {
            return Err(CoreError::DimensionMismatch { expected: vector.len(), found: covector.len() });
        }
        Ok(GenVector { vector, covector })
    }

    pub fn zero(n: usize) -> Self {
        GenVector { vector: vec![S::zero(); n], covector: vec![S::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// Stacked coordinates `(X, ξ)` of length `2n`.
    pub fn to_stacked(&self) -> Vec<S> {
        self.vector.iter().chain(&self.covector).cloned().collect()
    }

    pub fn from_stacked(v: &[S]) -> Self {
        let n = v.len() / 2;
        GenVector { vector: v[..n].to_vec(), covector: v[n..].to_vec() }
    }

    /// `(X⊕ξ, Y⊕η) = ½(ξ(Y) + η(X))`, so that `(v, v) = ξ(X)`.
    pub fn pairing(&self, other: &Self) -> Result<S> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut acc = S::zero();
        for i in 0..self.dim() {
            acc = acc + self.covector[i].clone() * other.vector[i].clone();
            acc = acc + other.covector[i].clone() * self.vector[i].clone();
        }
        Ok(acc / S::from_i64(2))
    }

    /// `(X⊕ξ) • ρ = −X⌟ρ + ξ∧ρ`.
    pub fn act(&self, form: &Form<S>) -> Result<Form<S>> {
        if self.dim() != form.dim() {
            return Err(CoreError::DimensionMismatch { expected: form.dim(), found: self.dim() });
        }
        let contraction = form.interior(&self.vector)?;
        let xi = Form::one_form(&self.covector);
        let wedge = xi.wedge(form)?;
        Ok(&wedge - &contraction)
    }
}

/// Free-function spelling of [`GenVector::act`].
pub fn spinor_action<S: Scalar>(v: &GenVector<S>, form: &Form<S>) -> Result<Form<S>> {
    v.act(form)
}

/// Indexing of the subsets of `{0..n}` grouped by size.
#[derive(Clone, Debug)]
pub struct SubsetIndex {
    pub n: usize,
    /// `by_degree[p]` lists masks of popcount `p` in increasing order.
    pub by_degree: Vec<Vec<usize>>,
    /// Position of each mask inside its degree list.
    pub position: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(n: usize) -> Self {
        let mut by_degree = vec![Vec::new(); n + 1];
        let mut position = vec![0; 1 << n];
        for (mask, slot) in position.iter_mut().enumerate() {
            let p = mask.count_ones() as usize;
            *slot = by_degree[p].len();
            by_degree[p].push(mask);
        }
        SubsetIndex { n, by_degree, position }
    }
}

/// The map induced on forms by a linear map of covectors.
///
/// Built from a `target × source` matrix `M` with the convention
/// `e^j ↦ Σ_i M[i][j] f^i`; the induced map sends `e^K` to
/// `Σ_I det(M[I, K]) f^I`. The minors are tabulated once per degree with a
/// first-row Laplace expansion, so applying the map is a block
/// matrix-vector product.
#[derive(Clone, Debug)]
pub struct FormTransform {
    target: SubsetIndex,
    source: SubsetIndex,
    /// `blocks[p][(I, K)]` = `det(M[I, K])` over positions in degree `p`.
    blocks: Vec<Matrix<f64>>,
}

impl FormTransform {
    pub fn new(m: &Matrix<f64>) -> Self {
        let target = SubsetIndex::new(m.rows());
        let source = SubsetIndex::new(m.cols());
        let top = m.rows().min(m.cols());
        let mut blocks: Vec<Matrix<f64>> = Vec::with_capacity(top + 1);
        blocks.push(Matrix::identity(1));
        for p in 1..=top {
            let rows = &target.by_degree[p];
            let cols = &source.by_degree[p];
            let prev = &blocks[p - 1];
            let mut block = Matrix::zeros(rows.len(), cols.len());
            for (ri, &imask) in rows.iter().enumerate() {
                let first = imask.trailing_zeros() as usize;
                let irest = target.position[imask & (imask - 1)];
                for (ci, &kmask) in cols.iter().enumerate() {
                    let mut acc = 0.0;
                    let mut rest = kmask;
                    let mut t = 0;
                    while rest != 0 {
                        let j = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        let entry = m[(first, j)];
                        if entry != 0.0 {
                            let minor = prev[(irest, source.position[kmask ^ (1 << j)])];
                            acc += if t % 2 == 0 { entry * minor } else { -entry * minor };
                        }
                        t += 1;
                    }
                    block[(ri, ci)] = acc;
                }
            }
            blocks.push(block);
        }
        FormTransform { target, source, blocks }
    }

    pub fn source_dim(&self) -> usize {
        self.source.n
    }

    pub fn target_dim(&self) -> usize {
        self.target.n
    }

    pub fn apply<S: Scalar>(&self, form: &Form<S>) -> Result<Form<S>> {
        if form.dim() != self.source.n {
            return Err(CoreError::DimensionMismatch { expected: self.source.n, found: form.dim() });
        }
        let mut out = Form::zero(self.target.n);
        for (p, block) in self.blocks.iter().enumerate() {
            let cols = &self.source.by_degree[p];
            let rows = &self.target.by_degree[p];
            for (ci, &kmask) in cols.iter().enumerate() {
                let c = form.coeff(kmask);
                if c.is_zero() {
                    continue;
                }
                for (ri, &imask) in rows.iter().enumerate() {
                    let d = block[(ri, ci)];
                    if d != 0.0 {
                        out.add_to_coeff(imask, c.clone() * S::from_f64(d));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Hodge star and form inner product of an SPD metric `g`, oriented by the
/// standard basis.
///
/// With `g = L Lᵀ` (Cholesky) the coframe `θ = Lᵀ e` is `g`-orthonormal and
/// `θ^1∧…∧θ^n = √det g · e^{1…n}`.
#[derive(Clone, Debug)]
pub struct HodgeStar {
    n: usize,
    to_frame: FormTransform,
    from_frame: FormTransform,
    sqrt_det: f64,
}

impl HodgeStar {
    pub fn new(g: &Matrix<f64>) -> Result<Self> {
        let l = g.cholesky()?;
        let l_inv = l.inverse(1e-300)?;
        let sqrt_det = (0..g.rows()).map(|i| l[(i, i)]).product();
        Ok(HodgeStar {
            n: g.rows(),
            to_frame: FormTransform::new(&l_inv),
            from_frame: FormTransform::new(&l),
            sqrt_det,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `√det g`, the coefficient of the volume form on `e^{1…n}`.
    pub fn volume_factor(&self) -> f64 {
        self.sqrt_det
    }

    pub fn volume_form<S: Scalar>(&self) -> Form<S> {
        Form::top_basis(self.n).scale(&S::from_f64(self.sqrt_det))
    }

    /// Coefficients of `form` in the orthonormal coframe.
    pub fn to_frame<S: Scalar>(&self, form: &Form<S>) -> Result<Form<S>> {
        self.to_frame.apply(form)
    }

    pub fn from_frame<S: Scalar>(&self, form: &Form<S>) -> Result<Form<S>> {
        self.from_frame.apply(form)
    }

    pub fn star<S: Scalar>(&self, form: &Form<S>) -> Result<Form<S>> {
        let framed = self.to_frame(form)?;
        self.from_frame(&framed.euclidean_star())
    }

    /// Induced bilinear inner product `g(a, b)`.
    pub fn inner<S: Scalar>(&self, a: &Form<S>, b: &Form<S>) -> Result<S> {
        self.to_frame(a)?.dot(&self.to_frame(b)?)
    }
}

/// Convenience wrapper building a [`HodgeStar`] for a single application.
pub fn hodge_star<S: Scalar>(g: &Matrix<f64>, form: &Form<S>) -> Result<Form<S>> {
    HodgeStar::new(g)?.star(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, terms: &[(usize, f64)]) -> Form<f64> {
        let mut out = Form::zero(n);
        for &(m, c) in terms {
            out.add_to_coeff(m, c);
        }
        out
    }

    #[test]
    fn basis_products() {
        let e1 = Form::<f64>::basis(2, 0b01);
        let e2 = Form::<f64>::basis(2, 0b10);
        assert_eq!(e1.wedge(&e2).unwrap(), Form::basis(2, 0b11));
        assert_eq!(e2.wedge(&e1).unwrap(), -Form::<f64>::basis(2, 0b11));
        assert!(Form::<f64>::basis(2, 0b11).wedge(&e1).unwrap().is_zero());
    }

    #[test]
    fn contraction_signs() {
        let e12 = Form::<f64>::basis(2, 0b11);
        assert_eq!(e12.interior(&[1.0, 0.0]).unwrap(), Form::basis(2, 0b10));
        assert_eq!(e12.interior(&[0.0, 1.0]).unwrap(), -Form::<f64>::basis(2, 0b01));
    }

    #[test]
    fn mukai_small_cases() {
        let one = Form::<f64>::one(2);
        let e12 = Form::<f64>::basis(2, 0b11);
        assert_eq!(one.mukai(&e12).unwrap(), -1.0);
        let e1 = Form::<f64>::basis(2, 0b01);
        let e2 = Form::<f64>::basis(2, 0b10);
        assert_eq!(e1.mukai(&e2).unwrap(), -1.0);
    }

    #[test]
    fn hat_signs() {
        assert_eq!(Form::<f64>::basis(3, 0b001).hat(), -Form::<f64>::basis(3, 0b001));
        assert_eq!(Form::<f64>::basis(3, 0b011).hat(), -Form::<f64>::basis(3, 0b011));
        assert_eq!(Form::<f64>::basis(3, 0b111).hat(), Form::<f64>::basis(3, 0b111));
    }

    #[test]
    fn star_examples() {
        let id2 = Matrix::<f64>::identity(2);
        assert_eq!(hodge_star(&id2, &Form::<f64>::basis(2, 1)).unwrap(), Form::basis(2, 2));
        let id3 = Matrix::<f64>::identity(3);
        assert_eq!(hodge_star(&id3, &Form::<f64>::basis(3, 0b011)).unwrap(), Form::basis(3, 0b100));
        let g = Matrix::diagonal(&[1.0, 4.0]);
        let s = hodge_star(&g, &Form::<f64>::basis(2, 1)).unwrap();
        assert!(s.approx_eq(&f(2, &[(2, 2.0)]), 1e-12));
    }

    #[test]
    fn exp_of_symplectic_pair() {
        let b = f(4, &[(0b0011, 1.0), (0b1100, 1.0)]);
        let e = b.exp_two_form().unwrap();
        let expected = f(4, &[(0, 1.0), (0b0011, 1.0), (0b1100, 1.0), (0b1111, 1.0)]);
        assert!(e.approx_eq(&expected, 1e-12));
        assert_eq!(Form::<f64>::basis(4, 1).exp_two_form(), Err(CoreError::NotDegreeTwo));
    }

    #[test]
    fn transform_minors_match_wedge_of_images() {
        let m = Matrix::from_row_major(3, 3, vec![1.0, 2.0, 0.5, -1.0, 3.0, 0.0, 0.25, 1.0, 2.0]).unwrap();
        let t = FormTransform::new(&m);
        let img = |j: usize| Form::one_form(&m.column(j));
        let expected = img(0).wedge(&img(2)).unwrap();
        assert!(t.apply(&Form::<f64>::basis(3, 0b101)).unwrap().approx_eq(&expected, 1e-12));
        let top = t.apply(&Form::<f64>::top_basis(3)).unwrap();
        assert!((top.top() - m.determinant()).abs() < 1e-12);
    }
}
