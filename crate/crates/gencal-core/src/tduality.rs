//! T-duality along a direction `X` with complement `ker θ`, `θ(X) = 1`.
//!
//! The Pin element is `X ⊕ −θ`; on forms it acts by `ρ ↦ −X⌟ρ − θ∧ρ` and on
//! `T ⊕ T*` by the involution `M`. Metrics transform either through the
//! Buscher formulas in an adapted basis or by transporting `V⁺`.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::exterior::{Form, GenVector};
use crate::genmetric::GeneralisedMetric;
use crate::linalg::Matrix;
use crate::purespinor::{factorize, tau_from_pair, IsotropicPair, RANK_TOL};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct DualityContext<S> {
    direction: Vec<S>,
    theta: Vec<S>,
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl<S: RealScalar> DualityContext<S> {
    pub fn new(direction: Vec<S>, theta: Vec<S>) -> Result<Self> {
        if direction.len() != theta.len() {
            return Err(CoreError::DimensionMismatch { expected: direction.len(), found: theta.len() });
        }
        let tol = if S::EXACT { 0.0 } else { 1e-12 };
        if !(dot(&theta, &direction) - S::one()).is_negligible(tol) {
            return Err(CoreError::InvalidDualityContext);
        }
        Ok(DualityContext { direction, theta })
    }

    /// `X = ∂_{axis}`, `θ = dx^{axis}` (zero-based axis).
    pub fn coordinate(n: usize, axis: usize) -> Result<Self> {
        if axis >= n {
            return Err(CoreError::InvalidDualityContext);
        }
        let unit: Vec<S> = (0..n).map(|i| if i == axis { S::one() } else { S::zero() }).collect();
        Self::new(unit.clone(), unit)
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[S] {
        &self.direction
    }

    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    /// The Pin generator `X ⊕ −θ`.
    pub fn generator(&self) -> GenVector<S> {
        GenVector { vector: self.direction.clone(), covector: self.theta.iter().map(|t| -t.clone()).collect() }
    }

    /// `M(Y ⊕ η) = (Y − θ(Y)X + η(X)X) ⊕ (η − η(X)θ + θ(Y)θ)`.
    pub fn matrix(&self) -> Matrix<S> {
        let n = self.dim();
        let x = &self.direction;
        let t = &self.theta;
        let id = Matrix::<S>::identity(n);
        let outer = |u: &[S], v: &[S]| Matrix::from_fn(n, n, |i, j| u[i].clone() * v[j].clone());
        let a = id.sub(&outer(x, t));
        let b = outer(x, x);
        let c = outer(t, t);
        let d = id.sub(&outer(t, x));
        a.hstack(&b).vstack(&c.hstack(&d))
    }

    /// Basis `x_1, …, x_{n−1}, x_n = X` with `x_i ∈ ker θ` for `i < n`.
    pub fn adapted_basis(&self) -> Matrix<S> {
        let n = self.dim();
        let row = Matrix::from_row_major(1, n, self.theta.clone()).expect("row shape");
        let (kernel, _) = row.kernel(if S::EXACT { 0.0 } else { 1e-12 });
        let mut cols: Vec<Vec<S>> = (0..kernel.cols()).map(|j| kernel.column(j)).collect();
        cols.push(self.direction.clone());
        Matrix::from_columns(n, &cols)
    }

    /// `g(X, X)`.
    pub fn direction_norm_sq(&self, g: &Matrix<S>) -> S {
        g.bilinear(&self.direction, &self.direction)
    }
}

/// Buscher rules in an adapted basis, where the last basis vector is the
/// duality direction and the others span `ker θ`. `b` is the matrix of the
/// map `X ↦ X⌟B` in that basis (the transpose of the component matrix), and
/// the returned pair uses the same convention.
pub fn buscher_adapted<S: RealScalar>(g: &Matrix<S>, b: &Matrix<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    let n = g.rows();
    if n == 0 {
        return Err(CoreError::InvalidDualityContext);
    }
    let last = n - 1;
    let q = g[(last, last)].clone();
    if q.is_negligible(0.0) {
        return Err(CoreError::NotSymmetricPositiveDefinite);
    }
    let gt = Matrix::from_fn(n, n, |k, l| match (k == last, l == last) {
        (true, true) => S::one() / q.clone(),
        (false, true) => b[(k, last)].clone() / q.clone(),
        (true, false) => b[(l, last)].clone() / q.clone(),
        (false, false) => {
            g[(k, l)].clone()
                - (g[(k, last)].clone() * g[(last, l)].clone() - b[(k, last)].clone() * b[(l, last)].clone()) / q.clone()
        }
    });
    let bt = Matrix::from_fn(n, n, |k, l| match (k == last, l == last) {
        (true, true) => S::zero(),
        (false, true) => g[(k, last)].clone() / q.clone(),
        (true, false) => -(g[(l, last)].clone() / q.clone()),
        (false, false) => {
            b[(k, l)].clone()
                + (g[(k, last)].clone() * b[(l, last)].clone() - b[(k, last)].clone() * g[(l, last)].clone()) / q.clone()
        }
    });
    Ok((gt, bt))
}

/// Dual metric through the Buscher formulas, after moving to the adapted
/// basis and back.
pub fn tdualize_metric<S: RealScalar>(
    gm: &GeneralisedMetric<S>,
    ctx: &DualityContext<S>,
) -> Result<GeneralisedMetric<S>> {
    if ctx.dim() != gm.dim() {
        return Err(CoreError::DimensionMismatch { expected: gm.dim(), found: ctx.dim() });
    }
    let p = ctx.adapted_basis();
    let pt = p.transpose();
    let g_adapted = pt.mul(gm.g()).mul(&p);
    let b_adapted = pt.mul(&gm.b_map()).mul(&p);
    let (gt, bt) = buscher_adapted(&g_adapted, &b_adapted)?;
    let pi = p.inverse(1e-12)?;
    let pit = pi.transpose();
    GeneralisedMetric::build(pit.mul(&gt).mul(&pi), pit.mul(&bt).mul(&pi).transpose())
}

/// Dual metric read off from `M(V⁺)`.
pub fn tdualize_metric_eigenspace<S: RealScalar>(
    gm: &GeneralisedMetric<S>,
    ctx: &DualityContext<S>,
) -> Result<GeneralisedMetric<S>> {
    if ctx.dim() != gm.dim() {
        return Err(CoreError::DimensionMismatch { expected: gm.dim(), found: ctx.dim() });
    }
    GeneralisedMetric::from_splitting(&ctx.matrix().mul(&gm.vplus_basis()))
}

/// `ρ ↦ −X⌟ρ − θ∧ρ`.
pub fn tdualize_spinor<S: RealScalar>(rho: &Form<S>, ctx: &DualityContext<S>) -> Result<Form<S>> {
    ctx.generator().act(rho)
}

/// `φ − ln ‖X‖_g`.
pub fn tdualize_dilaton(phi: f64, g: &Matrix<f64>, ctx: &DualityContext<f64>) -> f64 {
    phi - 0.5 * libm::log(ctx.direction_norm_sq(g))
}

/// Exact form of the dilaton rule on the weight `w = e^{−2φ}`:
/// `w ↦ w · g(X, X)`.
pub fn tdualize_dilaton_weight<S: RealScalar>(weight: &S, g: &Matrix<S>, ctx: &DualityContext<S>) -> S {
    weight.clone() * ctx.direction_norm_sq(g)
}

/// Where the duality direction sits relative to a plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionPosition {
    Tangent,
    Transverse,
}

/// Classifies `X` against `L` by its `g`-distance to `L` relative to `‖X‖`.
pub fn direction_position(
    p: &IsotropicPair<f64>,
    g: &Matrix<f64>,
    ctx: &DualityContext<f64>,
) -> Result<DirectionPosition> {
    let x = ctx.direction();
    let norm_sq = g.bilinear(x, x);
    if p.k() == 0 {
        return Ok(DirectionPosition::Transverse);
    }
    let (u, _) = p.orthonormal_frame(g)?;
    let mut residual = x.to_vec();
    for a in 0..p.k() {
        let col = u.column(a);
        let c = g.bilinear(&col, x);
        for (r, v) in residual.iter_mut().zip(&col) {
            *r -= c * v;
        }
    }
    let rel = libm::sqrt(g.bilinear(&residual, &residual).max(0.0) / norm_sq);
    if rel < 1e-9 {
        Ok(DirectionPosition::Tangent)
    } else if rel > 1e-6 {
        Ok(DirectionPosition::Transverse)
    } else {
        Err(CoreError::RankInconclusive { expected: p.k(), found: p.k() })
    }
}

/// Dual pair of `(L, F)`: factorises `(X ⊕ −θ) • τ_{L,F}` against the dual
/// metric and checks that the dimension moved by one in the expected
/// direction. Returns the positive scale `c` with `τ^⊤ = c · τ_{p^⊤}`.
pub fn tdualize_pair(
    p: &IsotropicPair<f64>,
    gm: &GeneralisedMetric<f64>,
    ctx: &DualityContext<f64>,
) -> Result<(f64, IsotropicPair<f64>)> {
    let position = direction_position(p, gm.g(), ctx)?;
    let expected = match position {
        DirectionPosition::Tangent => p.k() - 1,
        DirectionPosition::Transverse => p.k() + 1,
    };
    let dual = tdualize_metric(gm, ctx)?;
    let tau = tdualize_spinor(&tau_from_pair(p, gm.g())?, ctx)?;
    let (c, pair) = factorize(&tau, dual.g(), RANK_TOL)?;
    if pair.k() != expected {
        return Err(CoreError::RankInconclusive { expected, found: pair.k() });
    }
    Ok((c, pair))
}

/// Dual pair by transporting the annihilator: `W^⊤ = M(W_{L,F})`, with
/// `L^⊤` its projection to `T` (returned in reduced echelon form) and
/// `F^⊤(y_a, y_b) = ζ_a(y_b)` for `y_a ⊕ ζ_a ∈ W^⊤`. The orientation is the
/// one for which `(X ⊕ −θ) • τ_{L,F}` is a positive multiple of
/// `τ_{L^⊤,F^⊤}`. Uses only field operations, so it is exact over the
/// rationals.
pub fn tdualize_pair_transport<S: RealScalar>(p: &IsotropicPair<S>, ctx: &DualityContext<S>) -> Result<IsotropicPair<S>> {
    let n = p.n();
    let k = p.k();
    if ctx.dim() != n {
        return Err(CoreError::DimensionMismatch { expected: n, found: ctx.dim() });
    }
    let tol = if S::EXACT { 0.0 } else { crate::purespinor::RANK_TOL };
    let l = p.l();
    let lt = l.transpose();
    let lambda = lt.mul(l).inverse(tol).map_err(|_| CoreError::DegenerateSubspace)?.mul(&lt);
    let eta = p.f().mul(&lambda);
    let (normal, _) = lt.kernel(tol);
    let top = l.hstack(&Matrix::zeros(n, n - k));
    let bottom = eta.transpose().hstack(&normal);
    let w = ctx.matrix().mul(&top.vstack(&bottom));

    let rows_t: Vec<usize> = (0..n).collect();
    let rows_b: Vec<usize> = (n..2 * n).collect();
    let w_top = w.submatrix(&rows_t, &rows_t);
    let (r, pivots, _) = w_top.transpose().hstack(&Matrix::identity(n)).rref(tol);
    let dual_k = pivots.iter().take_while(|&&c| c < n).count();
    let y = Matrix::from_fn(n, dual_k, |i, a| r[(a, i)].clone());
    let coeffs = Matrix::from_fn(n, dual_k, |j, a| r[(a, n + j)].clone());
    let zeta = w.submatrix(&rows_b, &(0..n).collect::<Vec<_>>()).mul(&coeffs);
    let f = zeta.transpose().mul(&y);
    let f = if S::EXACT {
        f
    } else {
        let half = S::from_f64(0.5);
        f.sub(&f.transpose()).scale(&half)
    };
    let pair = IsotropicPair::new(y, f, 1)?;

    let id = Matrix::identity(n);
    let target = tdualize_spinor(&p.tau_unscaled(&id)?.0, ctx)?;
    let (candidate, _) = pair.tau_unscaled(&id)?;
    let mask = (0..candidate.coeffs().len())
        .max_by(|&a, &b| candidate.coeff(a).magnitude().partial_cmp(&candidate.coeff(b).magnitude()).expect("finite"))
        .ok_or(CoreError::ZeroSpinor)?;
    let ratio = target.coeff(mask).clone() / candidate.coeff(mask).clone();
    let residual = &target - &candidate.scale(&ratio);
    let scale = if S::EXACT { 0.0 } else { 1e-9 * target.max_abs().max(1.0) };
    if !residual.is_negligible(scale) {
        return Err(CoreError::NotPure { annihilator_dim: dual_k });
    }
    Ok(if ratio < S::zero() { pair.flipped() } else { pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn weighted_deficit_transport() {
        use crate::calibration::weighted_deficit;
        let mut rng = sample::seeded(9);
        for n in 2..=6 {
            for k in 0..=n {
                let gm = GeneralisedMetric::build(sample::spd(&mut rng, n), sample::skew(&mut rng, n, 0.5)).unwrap();
                let p = sample::pair(&mut rng, n, k, 0.5);
                let ctx = DualityContext::<f64>::coordinate(n, n - 1).unwrap();
                let rho = sample::form(&mut rng, n);
                let rho = if k % 2 == 0 { rho.even_part() } else { rho.odd_part() };
                let phi = 0.3;
                let dual = tdualize_metric(&gm, &ctx).unwrap();
                let phi_t = tdualize_dilaton(phi, gm.g(), &ctx);
                let tau = tau_from_pair(&p, gm.g()).unwrap();
                let before = weighted_deficit(&rho, &tau, &gm, phi).unwrap();
                let rho_t = tdualize_spinor(&rho, &ctx).unwrap();
                let rho_t = if n % 2 == 1 { -rho_t } else { rho_t };
                let after = weighted_deficit(&rho_t, &tdualize_spinor(&tau, &ctx).unwrap(), &dual, phi_t).unwrap();
                assert!((before - after).abs() < 1e-9 * f64::max(1.0, before.abs()), "n = {n}, k = {k}");
                let (_, pt) = tdualize_pair(&p, &gm, &ctx).unwrap();
                assert_eq!(pt.k(), if k == n { n - 1 } else { k + 1 });
            }
        }
    }

    #[test]
    fn torus_radius_inverts() {
        let gm = GeneralisedMetric::build(Matrix::diagonal(&[1.0, 4.0]), Matrix::zeros(2, 2)).unwrap();
        let ctx = DualityContext::coordinate(2, 1).unwrap();
        let dual = tdualize_metric(&gm, &ctx).unwrap();
        assert!(dual.g().approx_eq(&Matrix::diagonal(&[1.0, 0.25]), 1e-14));
        assert!(dual.b().max_abs() < 1e-14);
        assert!((tdualize_dilaton(0.3, gm.g(), &ctx) - (0.3 - libm::log(2.0))).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_context() {
        assert_eq!(DualityContext::new(alloc::vec![1.0, 0.0], alloc::vec![0.5, 0.0]), Err(CoreError::InvalidDualityContext));
    }

    #[test]
    fn spinor_examples() {
        let ctx = DualityContext::<f64>::coordinate(3, 2).unwrap();
        assert_eq!(tdualize_spinor(&Form::one(3), &ctx).unwrap(), -Form::<f64>::basis(3, 0b100));
        assert_eq!(tdualize_spinor(&Form::basis(3, 0b100), &ctx).unwrap(), -Form::<f64>::one(3));
        let rho = sample::form(&mut sample::seeded(3), 3);
        let twice = tdualize_spinor(&tdualize_spinor(&rho, &ctx).unwrap(), &ctx).unwrap();
        assert!(twice.approx_eq(&rho, 1e-12));
    }

    #[test]
    fn routes_agree_and_involute() {
        let mut rng = sample::seeded(5);
        for n in 2..=6 {
            let gm = GeneralisedMetric::build(sample::spd(&mut rng, n), sample::skew(&mut rng, n, 1.0)).unwrap();
            let x = sample::normal_vec(&mut rng, n);
            let mut theta = sample::normal_vec(&mut rng, n);
            let s = dot(&theta, &x);
            theta.iter_mut().for_each(|t| *t /= s);
            let ctx = DualityContext::new(x, theta).unwrap();
            assert!(ctx.matrix().mul(&ctx.matrix()).approx_eq(&Matrix::identity(2 * n), 1e-9));
            let b = tdualize_metric_eigenspace(&gm, &ctx).unwrap();
            let a = tdualize_metric(&gm, &ctx).unwrap();
            assert!(a.g().approx_eq(b.g(), 1e-9), "n = {n}");
            assert!(a.b().approx_eq(b.b(), 1e-9), "n = {n}");
            let back = tdualize_metric(&a, &ctx).unwrap();
            assert!(back.g().approx_eq(gm.g(), 1e-8) && back.b().approx_eq(gm.b(), 1e-8));
        }
    }

    #[test]
    fn transport_matches_factorisation_and_involutes() {
        use crate::scalar::Rational;
        let mut rng = sample::seeded(17);
        for n in 2..=6 {
            for k in 0..=n {
                let gm = GeneralisedMetric::build(sample::spd(&mut rng, n), sample::skew(&mut rng, n, 0.5)).unwrap();
                let p = sample::pair(&mut rng, n, k, 0.7);
                let ctx = DualityContext::<f64>::coordinate(n, n - 1).unwrap();
                let via_transport = tdualize_pair_transport(&p, &ctx).unwrap();
                let (_, via_factor) = tdualize_pair(&p, &gm, &ctx).unwrap();
                let dual = tdualize_metric(&gm, &ctx).unwrap();
                let a = tau_from_pair(&via_transport, dual.g()).unwrap();
                let b = tau_from_pair(&via_factor, dual.g()).unwrap();
                assert!(a.approx_eq(&b, 1e-8), "n = {n}, k = {k}");
            }
        }
        let mut rng = sample::seeded(18);
        for n in 2..=5 {
            for k in 0..=n {
                let l = Matrix::from_fn(n, k, |_, _| sample::small_rational(&mut rng, 3, 2));
                let Ok(p) = IsotropicPair::new(l, sample::rational_skew(&mut rng, k), 1) else { continue };
                let p = p.canonical().unwrap();
                let ctx = DualityContext::<Rational>::coordinate(n, 0).unwrap();
                let once = tdualize_pair_transport(&p, &ctx).unwrap();
                let with_x = p.l().hstack(&Matrix::from_columns(n, &[ctx.direction().to_vec()]));
                assert_eq!(once.k(), if with_x.rank(0.0) == k { k - 1 } else { k + 1 });
                let twice = tdualize_pair_transport(&once, &ctx).unwrap();
                assert_eq!(twice, p, "n = {n}, k = {k}");
            }
        }
    }
}

