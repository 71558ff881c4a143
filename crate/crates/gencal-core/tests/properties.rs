use gencal_core::clifford::{CliffordElement, Frame};
use gencal_core::exterior::HodgeStar;
use gencal_core::fieldforms::{format_poly_form, parse_poly_form};
use gencal_core::literal::{format_form, parse_form};
use gencal_core::{sample, Form, GenVector, Matrix, Rational};
use proptest::prelude::*;

fn rational_form(n: usize) -> impl Strategy<Value = Form<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 1usize << n)
        .prop_map(move |cs| Form::from_coeffs(n, cs.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect()).unwrap())
}

fn dim_and_forms(count: usize) -> impl Strategy<Value = (usize, Vec<Form<Rational>>)> {
    (1usize..=4).prop_flat_map(move |n| (Just(n), prop::collection::vec(rational_form(n), count)))
}

fn rational_two_form(n: usize) -> impl Strategy<Value = Form<Rational>> {
    rational_form(n).prop_map(|f| f.degree_part(2))
}

fn rational_gen_vector(n: usize) -> impl Strategy<Value = GenVector<Rational>> {
    prop::collection::vec(-4i64..=4, 2 * n).prop_map(move |v| {
        let r: Vec<Rational> = v.into_iter().map(|a| Rational::from_integer(a.into())).collect();
        GenVector::new(r[..n].to_vec(), r[n..].to_vec()).unwrap()
    })
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative((_, fs) in dim_and_forms(3)) {
        let left = fs[0].wedge(&fs[1]).unwrap().wedge(&fs[2]).unwrap();
        let right = fs[0].wedge(&fs[1].wedge(&fs[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn literals_round_trip_exactly((n, fs) in dim_and_forms(1)) {
        let text = format_form(&fs[0]);
        let back: Form<Rational> = parse_form(&text, n).unwrap();
        prop_assert_eq!(&back, &fs[0]);
        prop_assert_eq!(format_form(&back), text);
    }

    #[test]
    fn mukai_symmetry_sign((n, fs) in dim_and_forms(2)) {
        let s = Rational::from_integer(sign((n * (n + 1) / 2) % 2 == 1).into());
        prop_assert_eq!(fs[0].mukai(&fs[1]).unwrap(), s * fs[1].mukai(&fs[0]).unwrap());
    }

    #[test]
    fn two_form_exponential_inverts((n, b) in (2usize..=5).prop_flat_map(|n| (Just(n), rational_two_form(n)))) {
        let prod = b.exp_two_form().unwrap().wedge(&(-&b).exp_two_form().unwrap()).unwrap();
        prop_assert_eq!(prod, Form::one(n));
    }

    #[test]
    fn clifford_relation_on_forms(
        (v, rho) in (1usize..=4).prop_flat_map(|n| (rational_gen_vector(n), rational_form(n)))
    ) {
        let twice = v.act(&v.act(&rho).unwrap()).unwrap();
        let pairing = v.pairing(&v).unwrap();
        prop_assert_eq!(twice, rho.scale(&-pairing));
    }

    #[test]
    fn hat_then_tilde_is_clifford_reversal(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::seeded(seed);
        let a = sample::form(&mut rng, n);
        let reversed = CliffordElement::from_form(Frame::standard(n), &a).unwrap().reverse().to_form().unwrap();
        prop_assert!(a.hat().tilde().approx_eq(&reversed, 1e-14));
    }

    #[test]
    fn double_star_sign(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::seeded(seed);
        let g = sample::spd(&mut rng, n);
        let star = HodgeStar::new(&g).unwrap();
        let a = sample::form(&mut rng, n);
        for p in 0..=n {
            let part = a.degree_part(p);
            let twice = star.star(&star.star(&part).unwrap()).unwrap();
            let s = sign((p * (n - p)) % 2 == 1) as f64;
            prop_assert!(twice.approx_eq(&part.scale(&s), 1e-9 * (1.0 + part.max_abs())));
        }
    }

    #[test]
    fn inner_product_is_star_wedge(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::seeded(seed);
        let g = sample::spd(&mut rng, n);
        let star = HodgeStar::new(&g).unwrap();
        let a = sample::form(&mut rng, n);
        let b = sample::form(&mut rng, n);
        for p in 0..=n {
            let (ap, bp) = (a.degree_part(p), b.degree_part(p));
            let top = *ap.wedge(&star.star(&bp).unwrap()).unwrap().top() / star.volume_factor();
            let inner = star.inner(&ap, &bp).unwrap();
            prop_assert!((top - inner).abs() < 1e-9 * (1.0 + inner.abs()));
        }
    }

    #[test]
    fn poly_form_literals_round_trip(terms in prop::collection::vec((-3i64..=3, 0u8..=2, 0u8..=2, 1usize..8), 1..5)) {
        let text: Vec<String> = terms
            .iter()
            .filter(|t| t.0 != 0)
            .map(|(c, a, b, mask)| {
                let basis: String = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| char::from(b'1' + i as u8)).collect();
                format!("{c}*x1^{a}*x2^{b}*e{basis}")
            })
            .collect();
        let text = if text.is_empty() { "0".to_owned() } else { text.join(" + ") };
        let parsed = parse_poly_form(&text, 3).unwrap();
        let formatted = format_poly_form(&parsed);
        prop_assert_eq!(parse_poly_form(&formatted, 3).unwrap(), parsed);
    }

    #[test]
    fn exact_determinant_is_multiplicative(
        (a, b) in (1usize..=4).prop_flat_map(|n| {
            let m = prop::collection::vec(-4i64..=4, n * n);
            (m.clone(), m).prop_map(move |(x, y)| {
                let to = |v: Vec<i64>| Matrix::from_row_major(n, n, v.into_iter().map(|a| Rational::from_integer(a.into())).collect()).unwrap();
                (to(x), to(y))
            })
        })
    ) {
        prop_assert_eq!(a.mul(&b).determinant(), a.determinant() * b.determinant());
    }
}
