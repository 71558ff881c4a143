//! Generators shared by the suites, in both arithmetic modes.

use gencal_core::fieldforms::{IntertwineData, PolyForm};
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::poly::{Exponents, Poly, MAX_VARS};
use gencal_core::purespinor::IsotropicPair;
use gencal_core::sample;
use gencal_core::scalar::RealScalar;
use gencal_core::{Form, GenVector, Matrix, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::CaseResult;

/// Random data in one scalar type. Rational draws use small numerators and
/// denominators so that exact arithmetic stays cheap.
pub trait Sample: RealScalar {
    fn form(rng: &mut ChaCha8Rng, n: usize) -> Form<Self>;
    fn gen_vector(rng: &mut ChaCha8Rng, n: usize) -> GenVector<Self>;
    fn spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Self>;
    fn skew(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Self>;
    fn entry(rng: &mut ChaCha8Rng) -> Self;
}

impl Sample for f64 {
    fn form(rng: &mut ChaCha8Rng, n: usize) -> Form<f64> {
        sample::form(rng, n)
    }
    fn gen_vector(rng: &mut ChaCha8Rng, n: usize) -> GenVector<f64> {
        sample::gen_vector(rng, n)
    }
    fn spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
        sample::spd(rng, n)
    }
    fn skew(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
        sample::skew(rng, n, 0.7)
    }
    fn entry(rng: &mut ChaCha8Rng) -> f64 {
        sample::normal(rng)
    }
}

impl Sample for Rational {
    fn form(rng: &mut ChaCha8Rng, n: usize) -> Form<Rational> {
        sample::rational_form(rng, n)
    }
    fn gen_vector(rng: &mut ChaCha8Rng, n: usize) -> GenVector<Rational> {
        sample::rational_gen_vector(rng, n)
    }
    fn spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
        sample::rational_spd(rng, n)
    }
    fn skew(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
        sample::rational_skew(rng, n)
    }
    fn entry(rng: &mut ChaCha8Rng) -> Rational {
        sample::small_rational(rng, 2, 3)
    }
}

pub fn metric<S: Sample>(rng: &mut ChaCha8Rng, n: usize) -> GeneralisedMetric<S> {
    GeneralisedMetric::build(S::spd(rng, n), S::skew(rng, n)).expect("random metric is valid")
}

/// Random pair of dimension `k`; retries the (rare) rank-deficient draws.
pub fn pair<S: Sample>(rng: &mut ChaCha8Rng, n: usize, k: usize) -> IsotropicPair<S> {
    loop {
        let l = Matrix::from_fn(n, k, |_, _| S::entry(rng));
        let orientation = if rng.gen::<bool>() { 1 } else { -1 };
        if let Ok(p) = IsotropicPair::new(l, S::skew(rng, k), orientation) {
            return p;
        }
    }
}

/// Equality in exact mode, relative closeness in float mode.
pub fn same<S: RealScalar>(a: &Form<S>, b: &Form<S>, tol: f64, what: &str) -> CaseResult {
    if S::EXACT {
        return super::ensure(a == b, || format!("{what}: forms differ"));
    }
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    let diff = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x.as_f64() - y.as_f64()).abs()).fold(0.0, f64::max);
    super::ensure(diff <= tol * scale, || format!("{what}: forms differ by {diff:e}"))
}

pub fn same_scalar<S: RealScalar>(a: &S, b: &S, tol: f64, what: &str) -> CaseResult {
    if S::EXACT {
        return super::ensure(a == b, || format!("{what}: {} vs {}", a.as_f64(), b.as_f64()));
    }
    super::close(a.as_f64(), b.as_f64(), tol, what)
}

pub fn same_matrix<S: RealScalar>(a: &Matrix<S>, b: &Matrix<S>, tol: f64, what: &str) -> CaseResult {
    if S::EXACT {
        return super::ensure(a == b, || format!("{what}: matrices differ"));
    }
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    let diff = a.sub(b).max_abs();
    super::ensure(diff <= tol * scale, || format!("{what}: matrices differ by {diff:e}"))
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = sample::small_rational(rng, 2, 2);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

/// Polynomial with up to `terms` monomials of total degree at most
/// `max_degree`, in the variables `x1..xn` except `skip`.
pub fn poly(rng: &mut ChaCha8Rng, n: usize, skip: Option<usize>, terms: usize, max_degree: u32) -> Poly {
    let vars: Vec<usize> = (0..n).filter(|v| Some(*v) != skip).collect();
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(0..=terms) {
        let mut exps: Exponents = [0; MAX_VARS];
        let degree = rng.gen_range(0..=max_degree);
        for _ in 0..degree {
            if vars.is_empty() {
                break;
            }
            exps[vars[rng.gen_range(0..vars.len())]] += 1;
        }
        p = p.add(&Poly::monomial(exps, small(rng)));
    }
    p
}

/// Form with polynomial coefficients on a few random masks.
pub fn poly_form(rng: &mut ChaCha8Rng, n: usize, skip: Option<usize>, basic_axis: Option<usize>, max_degree: u32) -> PolyForm {
    let mut out = PolyForm::zero(n).expect("dimension in range");
    let masks: Vec<usize> = (0..1usize << n).filter(|m| basic_axis.is_none_or(|a| m & (1 << a) == 0)).collect();
    for _ in 0..rng.gen_range(1..=4) {
        let mask = masks[rng.gen_range(0..masks.len())];
        let term = PolyForm::term(n, mask, poly(rng, n, skip, 2, max_degree)).expect("mask in range");
        out = out.add(&term).expect("same dimension");
    }
    out
}

/// Invariant data for the intertwining check: basic components and a
/// connection form `θ = dx_axis + a` with `a` basic and invariant.
pub fn intertwine_data(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> IntertwineData {
    let axis = rng.gen_range(0..n);
    let mut theta_coeffs: Vec<Poly> = (0..n).map(|_| Poly::zero()).collect();
    theta_coeffs[axis] = Poly::one();
    if rng.gen_range(0..4) != 0 {
        for (i, c) in theta_coeffs.iter_mut().enumerate() {
            if i != axis && rng.gen::<bool>() {
                *c = poly(rng, n, Some(axis), 2, 2);
            }
        }
    }
    let theta = PolyForm::one_form(&theta_coeffs).expect("dimension in range");
    let mut field = || poly_form(rng, n, Some(axis), Some(axis), max_degree);
    let (rho0, rho1, phi0, phi1) = (field(), field(), field(), field());
    let dilaton = poly(rng, n, Some(axis), 2, 2);
    IntertwineData { rho0, rho1, phi0, phi1, dilaton, theta, axis }
}
