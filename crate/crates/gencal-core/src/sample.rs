//! Random inputs for property checks, identity suites and optimizer restarts.
//! All generators take any `rand::Rng`; callers seed a `ChaCha8Rng` for
//! reproducibility.

use alloc::vec::Vec;

use rand::Rng;

use crate::exterior::{Form, GenVector};
use crate::linalg::Matrix;
use crate::purespinor::IsotropicPair;
use crate::scalar::{rational, Complex64, Rational};

pub use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)
}

/// Standard normal variate (Box–Muller).
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        if u > 1e-300 {
            return libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * core::f64::consts::PI * v);
        }
    }
}

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| normal(rng))
}

/// Haar-like orthogonal matrix from Gram–Schmidt of a Gaussian matrix.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<f64> {
    loop {
        if let Ok(q) = matrix(rng, n, n).orthonormalize(&Matrix::identity(n), 1e-6) {
            return q;
        }
    }
}

/// `AᵀA/n + c·Id`, well conditioned for moderate `c`.
pub fn spd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<f64> {
    let a = matrix(rng, n, n);
    a.transpose().mul(&a).scale(&(1.0 / n as f64)).add(&Matrix::identity(n).scale(&0.5))
}

pub fn skew<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Matrix<f64> {
    let a = matrix(rng, n, n);
    a.sub(&a.transpose()).scale(&(scale / 2.0))
}

pub fn form<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Form<f64> {
    Form::from_coeffs(n, normal_vec(rng, 1 << n)).expect("length matches")
}

pub fn gen_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GenVector<f64> {
    GenVector { vector: normal_vec(rng, n), covector: normal_vec(rng, n) }
}

pub fn complex_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(normal(rng), normal(rng))).collect()
}

/// Random pair of dimension `k` with `F` scaled by `f_scale`.
pub fn pair<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, f_scale: f64) -> IsotropicPair<f64> {
    loop {
        let l = matrix(rng, n, k);
        let orientation = if rng.gen::<bool>() { 1 } else { -1 };
        if let Ok(p) = IsotropicPair::new(l, skew(rng, k, f_scale), orientation) {
            return p;
        }
    }
}

/// Small rational in `[-bound, bound]` with denominator up to `den`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, den: i64) -> Rational {
    let d = rng.gen_range(1..=den);
    let num = rng.gen_range(-bound * d..=bound * d);
    rational(num, d)
}

pub fn rational_form<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Form<Rational> {
    Form::from_coeffs(n, (0..1 << n).map(|_| small_rational(rng, 3, 4)).collect()).expect("length matches")
}

pub fn rational_gen_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GenVector<Rational> {
    GenVector {
        vector: (0..n).map(|_| small_rational(rng, 3, 4)).collect(),
        covector: (0..n).map(|_| small_rational(rng, 3, 4)).collect(),
    }
}

/// Rational SPD matrix: `AᵀA + Id` with small rational `A`.
pub fn rational_spd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<Rational> {
    let a = Matrix::from_fn(n, n, |_, _| small_rational(rng, 2, 3));
    a.transpose().mul(&a).add(&Matrix::identity(n))
}

pub fn rational_skew<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<Rational> {
    let upper: Vec<Rational> = (0..n * n.saturating_sub(1) / 2).map(|_| small_rational(rng, 2, 3)).collect();
    Matrix::skew_from_upper(n, &upper).expect("length matches")
}
