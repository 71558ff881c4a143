use std::f64::consts::FRAC_PI_4;

use approx::assert_abs_diff_eq;
use gencal_core::calibration::{bound_value, energy_density, find_maximizer, is_calibrated, pairing_value, SearchOptions};
use gencal_core::clifford::{CliffordElement, Frame};
use gencal_core::dirac::{Chirality, GammaRep, StructureKind};
use gencal_core::exterior::HodgeStar;
use gencal_core::fieldforms::{coordinate_field, courant, parse_poly_form, PolyGenVector, PolyForm};
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::literal::parse_form;
use gencal_core::poly::Poly;
use gencal_core::purespinor::{annihilator, factorize, rank, tau_from_pair, IsotropicPair};
use gencal_core::tduality::{tdualize_dilaton, tdualize_metric, tdualize_metric_eigenspace, tdualize_pair, tdualize_spinor, DualityContext};
use gencal_core::{Complex64, Form, GenVector, Matrix, Rational};

fn q(text: &str, n: usize) -> Form<Rational> {
    parse_form(text, n).unwrap()
}

fn f(text: &str, n: usize) -> Form<f64> {
    parse_form(text, n).unwrap()
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()
}

mod exterior {
    use super::*;

    #[test]
    fn wedge_of_simple_forms() {
        assert_eq!(q("e1", 2).wedge(&q("e2", 2)).unwrap(), q("e12", 2));
        assert_eq!(q("e2", 2).wedge(&q("e1", 2)).unwrap(), q("-e12", 2));
        assert!(q("e12", 2).wedge(&q("e1", 2)).unwrap().is_zero());
        assert_eq!(q("1 + e1", 2).wedge(&q("1 + e2", 2)).unwrap(), q("1 + e1 + e2 + e12", 2));
    }

    #[test]
    fn contraction_with_basis_vectors() {
        let r = |v: i64| Rational::from_integer(v.into());
        assert_eq!(q("e12", 2).interior(&[r(1), r(0)]).unwrap(), q("e2", 2));
        assert_eq!(q("e12", 2).interior(&[r(0), r(1)]).unwrap(), q("-e1", 2));
        assert_eq!(q("e123", 3).interior(&[r(1), r(0), r(0)]).unwrap(), q("e23", 3));
        assert_eq!(q("e123", 3).interior(&[r(0), r(1), r(0)]).unwrap(), q("-e13", 3));
    }

    #[test]
    fn null_generalised_vector_squares_to_minus_its_pairing() {
        let one = || Rational::from_integer(1.into());
        let zero = || Rational::from_integer(0.into());
        let v = GenVector::new(vec![one(), zero(), zero()], vec![one(), zero(), zero()]).unwrap();
        let a = q("2 + e2 - 3*e13 + e23", 3);
        assert_eq!(v.act(&v.act(&a).unwrap()).unwrap(), -&a);
        let x = GenVector::new(vec![one(), zero()], vec![zero(), zero()]).unwrap();
        assert_eq!(x.act(&q("e1", 2)).unwrap(), q("-1", 2));
        let xi = GenVector::new(vec![zero(), zero()], vec![one(), zero()]).unwrap();
        assert_eq!(xi.act(&q("1", 2)).unwrap(), q("e1", 2));
    }

    #[test]
    fn hat_signs_by_degree() {
        assert_eq!(q("1 + e1 + e12 + e123 + e1234", 4).hat(), q("1 - e1 - e12 + e123 + e1234", 4));
        assert_eq!(q("1 + e1 + e12 + e123", 3).tilde(), q("1 - e1 + e12 - e123", 3));
    }

    #[test]
    fn mukai_pairing_in_the_plane() {
        assert_eq!(q("1", 2).mukai(&q("e12", 2)).unwrap(), Rational::from_integer((-1).into()));
        assert_eq!(q("e1", 2).mukai(&q("e2", 2)).unwrap(), Rational::from_integer((-1).into()));
        assert_eq!(q("e12", 2).mukai(&q("1", 2)).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn hodge_star_examples() {
        let id2 = Matrix::<f64>::identity(2);
        let star = HodgeStar::new(&id2).unwrap();
        assert!(star.star(&f("e1", 2)).unwrap().approx_eq(&f("e2", 2), 1e-14));
        assert!(star.star(&f("e2", 2)).unwrap().approx_eq(&f("-e1", 2), 1e-14));
        assert!(star.star(&f("1", 2)).unwrap().approx_eq(&f("e12", 2), 1e-14));
        let star3 = HodgeStar::new(&Matrix::identity(3)).unwrap();
        assert!(star3.star(&f("e12", 3)).unwrap().approx_eq(&f("e3", 3), 1e-14));
        let stretched = HodgeStar::new(&Matrix::diagonal(&[1.0, 4.0])).unwrap();
        assert!(stretched.star(&f("e1", 2)).unwrap().approx_eq(&f("2*e2", 2), 1e-14));
        assert_abs_diff_eq!(stretched.volume_factor(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn exponential_of_a_symplectic_pair() {
        assert_eq!(q("e12 + e34", 4).exp_two_form().unwrap(), q("1 + e12 + e34 + e1234", 4));
        assert_eq!(q("1/2*e12", 2).exp_two_form().unwrap(), q("1 + 1/2*e12", 2));
    }
}

mod clifford {
    use super::*;

    #[test]
    fn generator_products() {
        let fr = Frame::standard(3);
        let e1 = CliffordElement::<f64>::generator(fr.clone(), 0);
        let e2 = CliffordElement::<f64>::generator(fr.clone(), 1);
        assert!(e1.mul(&e1).unwrap().approx_eq(&CliffordElement::one(fr.clone()), 1e-15));
        let e12 = e1.mul(&e2).unwrap();
        assert!(e12.approx_eq(&CliffordElement::monomial(fr.clone(), 0b011), 1e-15));
        assert!(e2.mul(&e1).unwrap().approx_eq(&e12.scale(&-1.0), 1e-15));
        assert!(e12.mul(&e12).unwrap().approx_eq(&CliffordElement::scalar(fr, -1.0), 1e-15));
    }

    #[test]
    fn exponential_of_a_bivector_is_a_rotor() {
        let fr = Frame::standard(2);
        let b = CliffordElement::<f64>::monomial(fr.clone(), 0b11).scale(&FRAC_PI_4);
        let expected = CliffordElement::from_form(fr.clone(), &f("1 + e12", 2).scale(&(0.5f64).sqrt())).unwrap();
        assert!(b.exp().unwrap().approx_eq(&expected, 1e-13));
        let id = CliffordElement::<f64>::one(fr.clone()).pin_project(1e-9).unwrap();
        assert!(id.approx_eq(&Matrix::identity(2), 1e-15));
    }

    #[test]
    fn reflection_projects_to_a_coordinate_flip() {
        let fr = Frame::standard(3);
        let m = CliffordElement::<f64>::generator(fr, 0).pin_project(1e-9).unwrap();
        assert!(m.approx_eq(&Matrix::diagonal(&[-1.0, 1.0, 1.0]), 1e-14));
    }

    #[test]
    fn reversal_and_grade_involution() {
        let fr = Frame::standard(3);
        let a = CliffordElement::from_form(fr, &f("1 + e1 + e12 + e123", 3)).unwrap();
        assert!(a.reverse().to_form().unwrap().approx_eq(&f("1 + e1 - e12 - e123", 3), 1e-15));
        assert!(a.grade_involution().to_form().unwrap().approx_eq(&f("1 - e1 + e12 - e123", 3), 1e-15));
    }
}

mod genmetric {
    use super::*;

    #[test]
    fn standard_metric_swaps_vectors_and_covectors() {
        let gm = GeneralisedMetric::<f64>::standard(3);
        let id = Matrix::identity(3);
        let zero = Matrix::zeros(3, 3);
        let expected = zero.hstack(&id).vstack(&id.hstack(&zero));
        assert!(gm.involution().approx_eq(&expected, 0.0));
    }

    #[test]
    fn lifts_into_the_eigenbundles() {
        let gm = GeneralisedMetric::build(Matrix::diagonal(&[1.0, 4.0]), Matrix::zeros(2, 2)).unwrap();
        let plus = gm.lift_plus(&unit(2, 1));
        let minus = gm.lift_minus(&unit(2, 1));
        assert_eq!(plus.covector, vec![0.0, 4.0]);
        assert_eq!(minus.covector, vec![0.0, -4.0]);
        assert_abs_diff_eq!(plus.pairing(&minus).unwrap(), 0.0);
        assert_abs_diff_eq!(plus.pairing(&plus).unwrap(), 4.0);
        let g = gm.involution();
        assert_eq!(g.mul_vec(&plus.to_stacked()), plus.to_stacked());
        let neg: Vec<f64> = minus.to_stacked().iter().map(|v| -v).collect();
        assert_eq!(g.mul_vec(&minus.to_stacked()), neg);
    }

    #[test]
    fn b_field_lifts_carry_the_two_form() {
        let b = Matrix::skew_from_upper(2, &[0.5]).unwrap();
        let gm = GeneralisedMetric::build(Matrix::identity(2), b).unwrap();
        let plus = gm.lift_plus(&unit(2, 0));
        let g = gm.involution();
        assert!(g.mul_vec(&plus.to_stacked()).iter().zip(plus.to_stacked()).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!(gm.b_form().approx_eq(&f("1/2*e12", 2), 1e-15));
    }

    #[test]
    fn q_norm_examples() {
        let gm = GeneralisedMetric::<f64>::standard(3);
        assert_abs_diff_eq!(gm.qnorm(&f("1", 3)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gm.qnorm(&f("e1 + e23", 3)).unwrap(), 2f64.sqrt(), epsilon = 1e-14);
        let b = Matrix::skew_from_upper(3, &[0.3, -0.2, 0.7]).unwrap();
        let twisted = GeneralisedMetric::build(Matrix::identity(3), b).unwrap();
        let rho = f("1 + e2 - e13", 3);
        let moved = twisted.b_form().exp_two_form().unwrap().wedge(&rho).unwrap();
        assert_abs_diff_eq!(twisted.qnorm(&moved).unwrap(), gm.qnorm(&rho).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn gtilde_routes_agree_and_square_to_the_observed_sign() {
        for n in 2..=5 {
            let gm = GeneralisedMetric::<f64>::standard(n);
            let rho = Form::from_coeffs(n, (0..1usize << n).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
            let g1 = gm.gtilde(&rho).unwrap();
            assert!(g1.approx_eq(&gm.volume_minus_action(&rho).unwrap(), 1e-12), "n = {n}");
            let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!(gm.gtilde(&g1).unwrap().approx_eq(&rho.scale(&sign), 1e-12), "n = {n}");
        }
    }
}

mod dirac {
    use super::*;

    #[test]
    fn generators_square_to_minus_one_and_anticommute() {
        let rep = GammaRep::new(5).unwrap();
        let d = rep.spinor_dim();
        let minus = gencal_core::dirac::MonomialMatrix::identity(d).scale(Complex64::new(-1.0, 0.0));
        for i in 0..5 {
            assert!(rep.generator(i).mul(rep.generator(i)).approx_eq(&minus));
            for j in 0..i {
                let ab = rep.generator(i).mul(rep.generator(j));
                let ba = rep.generator(j).mul(rep.generator(i)).scale(Complex64::new(-1.0, 0.0));
                assert!(ab.approx_eq(&ba));
            }
        }
    }

    #[test]
    fn form_action_matches_iterated_vector_action() {
        let rep = GammaRep::new(4).unwrap();
        let amps: Vec<Complex64> = (0..rep.spinor_dim()).map(|i| Complex64::new(i as f64 + 1.0, -(i as f64))).collect();
        let psi = rep.spinor(amps).unwrap();
        let one = rep.clifford_act(&f("1", 4).to_complex(), &psi).unwrap();
        assert_eq!(one.amplitudes, psi.amplitudes);
        let via_form = rep.clifford_act(&f("e12", 4).to_complex(), &psi).unwrap();
        let via_vectors = rep.vector_act(&unit(4, 0), &rep.vector_act(&unit(4, 1), &psi).unwrap()).unwrap();
        for (a, b) in via_form.amplitudes.iter().zip(&via_vectors.amplitudes) {
            assert!((a - b).norm() < 1e-13);
        }
        let twice = rep.vector_act(&unit(4, 2), &rep.vector_act(&unit(4, 2), &psi).unwrap()).unwrap();
        for (a, b) in twice.amplitudes.iter().zip(&psi.amplitudes) {
            assert!((a + b).norm() < 1e-13);
        }
    }

    #[test]
    fn g2_bilinears_are_one_minus_phi_minus_dual_plus_volume() {
        let rep = GammaRep::new(7).unwrap();
        let psi = rep.canonical_spinor(StructureKind::G2).unwrap();
        let fierz = rep.fierz(&psi, &psi).unwrap();
        assert!(fierz.imag_part().max_abs() < 1e-12);
        let rho = fierz.real_part();
        assert_eq!(rho.degree_support(1e-10), vec![0, 3, 4, 7]);
        assert_abs_diff_eq!(*rho.coeff(0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(*rho.top(), 1.0, epsilon = 1e-12);
        let phi = -rho.degree_part(3);
        let psi4 = -rho.degree_part(4);
        assert!(phi.euclidean_star().approx_eq(&psi4, 1e-12));
        assert_eq!(phi.terms().filter(|(_, c)| c.abs() > 1e-12).count(), 7);
        for (_, c) in phi.terms().filter(|(_, c)| c.abs() > 1e-12) {
            assert_abs_diff_eq!(c.abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spin7_bilinears_have_degrees_zero_four_eight() {
        let rep = GammaRep::new(8).unwrap();
        let psi = rep.canonical_spinor(StructureKind::Spin7).unwrap();
        let rho = rep.fierz(&psi, &psi).unwrap().real_part();
        assert_eq!(rho.degree_support(1e-10), vec![0, 4, 8]);
        assert_abs_diff_eq!(*rho.coeff(0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(*rho.top(), 1.0, epsilon = 1e-12);
        assert_eq!(rho.degree_part(4).terms().filter(|(_, c)| c.abs() > 1e-12).count(), 14);
    }

    #[test]
    fn opposite_chirality_spinors_give_odd_bilinears() {
        let rep = GammaRep::new(8).unwrap();
        let psi = rep.canonical_spinor(StructureKind::Spin7).unwrap();
        let amps: Vec<Complex64> = (0..rep.spinor_dim()).map(|i| Complex64::new((i as f64).cos(), (2.0 * i as f64).sin())).collect();
        let chi = rep.project_chiral(&amps, psi.chirality.unwrap().flip()).unwrap().normalized().unwrap();
        let rho = rep.fierz(&psi, &chi).unwrap();
        assert!(rho.even_part().max_abs() < 1e-12);
        assert!(rho.odd_part().max_abs() > 1e-3);
        assert_ne!(Chirality::Plus, Chirality::Minus);
    }
}

mod purespinor {
    use super::*;

    fn plane_with_f(value: f64) -> IsotropicPair<f64> {
        IsotropicPair::new(Matrix::identity(2), Matrix::skew_from_upper(2, &[value]).unwrap(), 1).unwrap()
    }

    #[test]
    fn tau_examples() {
        let id = Matrix::identity(2);
        let tau = tau_from_pair(&plane_with_f(0.75), &id).unwrap();
        assert!(tau.approx_eq(&f("1 + 3/4*e12", 2), 1e-14));
        let point = tau_from_pair(&IsotropicPair::point(2), &id).unwrap();
        assert!(point.approx_eq(&f("-e12", 2), 1e-14));
        let line = tau_from_pair(&IsotropicPair::coordinate(3, &[0]).unwrap(), &Matrix::identity(3)).unwrap();
        assert!(line.approx_eq(&f("-e23", 3), 1e-14));
    }

    #[test]
    fn annihilator_of_a_twisted_plane() {
        let tau = f("1 + 2*e12", 2);
        let (basis, _) = annihilator(&tau, 1e-10).unwrap();
        assert_eq!(basis.cols(), 2);
        for v in [GenVector::new(vec![1.0, 0.0], vec![0.0, 2.0]).unwrap(), GenVector::new(vec![0.0, 1.0], vec![-2.0, 0.0]).unwrap()] {
            assert!(v.act(&tau).unwrap().is_negligible(1e-14));
        }
        assert_eq!(rank(&tau, 1e-10).unwrap(), 2);
        assert_eq!(rank(&f("e12", 2), 1e-10).unwrap(), 0);
        assert_eq!(rank(&f("e1", 2), 1e-10).unwrap(), 1);
    }

    #[test]
    fn factorize_recovers_scale_plane_and_field() {
        let id = Matrix::identity(2);
        let (c, p) = factorize(&f("3 + 3*e12", 2), &id, 1e-9).unwrap();
        assert_eq!(p.k(), 2);
        let rebuilt = tau_from_pair(&p, &id).unwrap().scale(&c);
        assert!(rebuilt.approx_eq(&f("3 + 3*e12", 2), 1e-12));
        assert_abs_diff_eq!(c.abs(), 3.0, epsilon = 1e-12);
        let (c1, line) = factorize(&f("e1", 2), &id, 1e-9).unwrap();
        assert_eq!(line.k(), 1);
        assert_abs_diff_eq!(c1.abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(line.l()[(0, 0)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bound_of_an_orthonormal_untwisted_plane_is_one() {
        let gm = GeneralisedMetric::<f64>::standard(4);
        let p = IsotropicPair::coordinate(4, &[1, 3]).unwrap();
        assert_abs_diff_eq!(bound_value(&gm, &p).unwrap(), 1.0, epsilon = 1e-14);
        let twisted = plane_with_f(2.0);
        assert_abs_diff_eq!(bound_value(&GeneralisedMetric::standard(2), &twisted).unwrap(), 5f64.sqrt(), epsilon = 1e-14);
    }
}

mod calibration {
    use super::*;

    #[test]
    fn pairing_examples() {
        let id = Matrix::identity(2);
        let plane = IsotropicPair::coordinate(2, &[0, 1]).unwrap();
        assert_abs_diff_eq!(pairing_value(&f("e12", 2), &plane, &id).unwrap(), 1.0, epsilon = 1e-14);
        let twisted = plane.with_f(Matrix::skew_from_upper(2, &[0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(pairing_value(&f("1", 2), &twisted, &id).unwrap(), -0.5, epsilon = 1e-14);
        assert!(pairing_value(&f("e1", 2), &plane, &id).is_err());
    }

    #[test]
    fn volume_form_calibrates_the_whole_space() {
        let gm = GeneralisedMetric::<f64>::standard(3);
        let p = IsotropicPair::coordinate(3, &[0, 1, 2]).unwrap();
        let report = is_calibrated(&f("e123", 3), &gm, &p, 1e-12).unwrap();
        assert!(report.calibrated);
        assert_eq!(report.orientation, 1);
        let flipped = is_calibrated(&f("e123", 3), &gm, &p.flipped(), 1e-12).unwrap();
        assert_eq!(flipped.orientation, -1);
    }

    #[test]
    fn energy_density_scales_with_the_dilaton() {
        let gm = GeneralisedMetric::<f64>::standard(2);
        let p = IsotropicPair::coordinate(2, &[0, 1]).unwrap();
        let (dbi, wz) = energy_density(&gm, 0.0, &Form::zero(2), &p).unwrap();
        assert_abs_diff_eq!(dbi, 1.0, epsilon = 1e-14);
        assert_eq!(wz, 0.0);
        let (half, _) = energy_density(&gm, 2f64.ln(), &Form::zero(2), &p).unwrap();
        assert_abs_diff_eq!(half, 0.5, epsilon = 1e-14);
        let (dbi, wz) = energy_density(&gm, 0.3, &f("e12", 2), &p).unwrap();
        assert_abs_diff_eq!(dbi, wz, epsilon = 1e-14);
    }

    #[test]
    fn maximizer_edge_cases() {
        let gm = GeneralisedMetric::<f64>::standard(3);
        let (_, report) = find_maximizer(&Form::zero(3), &gm, 2, SearchOptions::default()).unwrap();
        assert!(!report.tight);
        assert_abs_diff_eq!(report.deficit, report.bound_value, epsilon = 1e-12);
        let (p, report) = find_maximizer(&f("1", 3), &gm, 0, SearchOptions::default()).unwrap();
        assert_eq!(p.k(), 0);
        assert_abs_diff_eq!(report.deficit, 0.0, epsilon = 1e-12);
    }
}

mod tduality {
    use super::*;

    #[test]
    fn spinor_map_on_a_circle() {
        let ctx = DualityContext::<Rational>::coordinate(2, 1).unwrap();
        assert_eq!(tdualize_spinor(&q("1", 2), &ctx).unwrap(), q("-e2", 2));
        assert_eq!(tdualize_spinor(&q("e2", 2), &ctx).unwrap(), q("-1", 2));
        assert_eq!(tdualize_spinor(&q("e1 + e12", 2), &ctx).unwrap(), q("e1 + e12", 2));
    }

    #[test]
    fn radius_inversion_and_dilaton_shift() {
        let one = Rational::from_integer(1.into());
        let four = Rational::from_integer(4.into());
        let gm = GeneralisedMetric::build(Matrix::diagonal(&[one.clone(), four]), Matrix::zeros(2, 2)).unwrap();
        let ctx = DualityContext::coordinate(2, 1).unwrap();
        let dual = tdualize_metric(&gm, &ctx).unwrap();
        assert_eq!(dual.g(), &Matrix::diagonal(&[one, Rational::new(1.into(), 4.into())]));
        let back = tdualize_metric(&dual, &ctx).unwrap();
        assert_eq!((back.g(), back.b()), (gm.g(), gm.b()));
        let fctx = DualityContext::<f64>::coordinate(2, 1).unwrap();
        let g = Matrix::diagonal(&[1.0, 4.0]);
        assert_abs_diff_eq!(tdualize_dilaton(0.25, &g, &fctx), 0.25 - 2f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(tdualize_dilaton(0.25, &Matrix::identity(2), &fctx), 0.25);
    }

    #[test]
    fn b_field_mixes_with_the_circle_metric() {
        let b = Matrix::skew_from_upper(2, &[Rational::new(1.into(), 2.into())]).unwrap();
        let gm = GeneralisedMetric::build(Matrix::identity(2), b).unwrap();
        let ctx = DualityContext::coordinate(2, 1).unwrap();
        let dual = tdualize_metric(&gm, &ctx).unwrap();
        let back = tdualize_metric(&dual, &ctx).unwrap();
        assert_eq!((back.g(), back.b()), (gm.g(), gm.b()));
        assert_eq!(dual.b(), &Matrix::zeros(2, 2));
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        let expected = Matrix::from_row_major(2, 2, vec![r(5, 4), r(-1, 2), r(-1, 2), r(1, 1)]).unwrap();
        assert_eq!(dual.g(), &expected);
        let via_eigenspace = tdualize_metric_eigenspace(&gm, &ctx).unwrap();
        assert_eq!((via_eigenspace.g(), via_eigenspace.b()), (dual.g(), dual.b()));
    }

    #[test]
    fn pair_dimension_changes_by_one() {
        let gm = GeneralisedMetric::<f64>::standard(7);
        let ctx = DualityContext::coordinate(7, 0).unwrap();
        let along = IsotropicPair::coordinate(7, &[0, 1, 2, 3]).unwrap();
        let across = IsotropicPair::coordinate(7, &[1, 2, 3, 4]).unwrap();
        assert_eq!(tdualize_pair(&along, &gm, &ctx).unwrap().1.k(), 3);
        assert_eq!(tdualize_pair(&across, &gm, &ctx).unwrap().1.k(), 5);
        let ctx7 = DualityContext::coordinate(7, 6).unwrap();
        assert_eq!(tdualize_pair(&along, &gm, &ctx7).unwrap().1.k(), 5);
    }
}

mod fieldforms {
    use super::*;

    fn pf(text: &str, n: usize) -> PolyForm {
        parse_poly_form(text, n).unwrap()
    }

    #[test]
    fn exterior_derivative_examples() {
        assert_eq!(pf("x1*e2", 2).d(), pf("e12", 2));
        assert_eq!(pf("x1*x2", 2).d(), pf("x2*e1 + x1*e2", 2));
        assert!(pf("x1*e1", 2).d().is_zero());
        let h = pf("e123", 3);
        assert_eq!(pf("1", 3).d_h(&h).unwrap(), h);
        let omega = pf("x1*e2 + x3", 3);
        let twice = omega.d_h(&h).unwrap().d_h(&h).unwrap();
        assert!(twice.is_zero());
    }

    #[test]
    fn lie_derivative_along_a_coordinate_field() {
        let dn = coordinate_field(2, 1);
        assert_eq!(pf("x2*e1", 2).lie_derivative(&dn).unwrap(), pf("e1", 2));
        assert_eq!(pf("x2*e1", 2).cartan_lie(&dn).unwrap(), pf("e1", 2));
        assert!(pf("x1*e12", 2).lie_derivative(&dn).unwrap().is_zero());
    }

    #[test]
    fn courant_bracket_examples() {
        let n = 2;
        let zero = PolyForm::zero(n).unwrap();
        let d1 = PolyGenVector::new(coordinate_field(n, 0), zero.clone()).unwrap();
        let d2 = PolyGenVector::new(coordinate_field(n, 1), zero.clone()).unwrap();
        let br = courant(&d1, &d2).unwrap();
        assert!(br.vector.iter().all(Poly::is_zero) && br.covector.is_zero());
        let form = PolyGenVector::new(vec![Poly::zero(); n], pf("x1*e2", n)).unwrap();
        let br = courant(&d1, &form).unwrap();
        assert!(br.vector.iter().all(Poly::is_zero));
        assert_eq!(br.covector, pf("e2", n));
    }
}
