//! Cross-checks of the in-house linear algebra and group maps against nalgebra.

use gencal_core::clifford::{CliffordElement, Frame};
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::{sample, Matrix};
use nalgebra::DMatrix;
use rand::Rng;

fn to_na(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn close(a: &Matrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    (to_na(a) - b).amax() <= tol * (1.0 + b.amax())
}

#[test]
fn determinant_and_inverse() {
    let mut rng = sample::seeded(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=7);
        let m = sample::matrix(&mut rng, n, n);
        let reference = to_na(&m);
        let det = reference.determinant();
        assert!((m.determinant() - det).abs() <= 1e-10 * (1.0 + det.abs()));
        if det.abs() > 1e-3 {
            assert!(close(&m.inverse(1e-12).unwrap(), &reference.try_inverse().unwrap(), 1e-8));
        }
    }
}

#[test]
fn symmetric_eigenvalues_and_cholesky() {
    let mut rng = sample::seeded(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let g = sample::spd(&mut rng, n);
        let (mut ours, _) = g.symmetric_eigen();
        ours.sort_by(f64::total_cmp);
        let mut theirs: Vec<f64> = to_na(&g).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
        }
        let l = g.cholesky().unwrap();
        let na_l = to_na(&g).cholesky().unwrap().l();
        assert!(close(&l, &na_l, 1e-9));
    }
}

#[test]
fn matrix_exponential() {
    let mut rng = sample::seeded(13);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let a = sample::matrix(&mut rng, n, n);
        assert!(close(&a.expm(), &to_na(&a).exp(), 1e-9));
    }
}

#[test]
fn generalised_metric_has_balanced_spectrum() {
    let mut rng = sample::seeded(14);
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let gm = GeneralisedMetric::build(sample::spd(&mut rng, n), sample::skew(&mut rng, n, 1.0)).unwrap();
        let g = to_na(&gm.involution());
        let id = DMatrix::<f64>::identity(2 * n, 2 * n);
        assert!((&g * &g - &id).amax() < 1e-9);
        assert!(g.trace().abs() < 1e-9);
        let plus = (&g + &id).rank(1e-8);
        let minus = (&g - &id).rank(1e-8);
        assert_eq!((plus, minus), (n, n));
        let mut pairing = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            pairing[(i, n + i)] = 0.5;
            pairing[(n + i, i)] = 0.5;
        }
        let metric = &pairing * &g;
        assert!((&metric - metric.transpose()).amax() < 1e-9);
        let eig = metric.symmetric_eigen().eigenvalues;
        assert!(eig.iter().all(|v| *v > 0.0));
    }
}

#[test]
fn pin_projection_of_a_rotor_is_the_rotation_exponential() {
    let mut rng = sample::seeded(15);
    for _ in 0..40 {
        let n = rng.gen_range(2..=6);
        let fr = Frame::standard(n);
        let b = sample::skew(&mut rng, n, 0.8);
        let mut bivector = CliffordElement::<f64>::scalar(fr.clone(), 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let term = CliffordElement::monomial(fr.clone(), (1 << i) | (1 << j)).scale(&(b[(i, j)] / 2.0));
                bivector = bivector.add(&term).unwrap();
            }
        }
        let projected = bivector.exp().unwrap().pin_project(1e-9).unwrap();
        let generator = to_na(&b);
        assert!(close(&projected, &generator.exp(), 1e-8), "n = {n}");
        let det = to_na(&projected).determinant();
        assert!((det - 1.0).abs() < 1e-9);
    }
}
