use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::sample;
use gencal_core::{Matrix, Rational};

use super::exterior::dispatch;
use super::random::{metric, same_matrix, same_scalar, Sample};
use super::{core, ensure, forms_close, sign, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "involution_squares", cases: 35, check: |c| dispatch(c, involution_squares::<f64>, involution_squares::<Rational>) },
        Property { name: "gtilde_square_sign", cases: 35, check: gtilde_square_sign },
        Property { name: "qnorm_positive", cases: 35, check: qnorm_positive },
        Property { name: "b_conjugation", cases: 35, check: b_conjugation },
        Property { name: "volume_element_action", cases: 28, check: volume_element_action },
        Property { name: "eigenframe_reconstruction", cases: 35, check: |c| dispatch(c, eigenframe::<f64>, eigenframe::<Rational>) },
        Property { name: "parity_behaviour", cases: 35, check: parity_behaviour },
        Property { name: "isometry", cases: 35, check: isometry },
        Property { name: "lifts", cases: 35, check: |c| dispatch(c, lifts::<f64>, lifts::<Rational>) },
    ]
}

fn involution_squares<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<S>(&mut case.rng, n);
    let g = gm.involution();
    same_matrix(&g.mul(&g), &Matrix::identity(2 * n), case.tol, "G squared")
}

fn gtilde_square_sign(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let rho = sample::form(&mut case.rng, n);
    let twice = core(gm.gtilde(&core(gm.gtilde(&rho))?))?;
    let expected = rho.scale(&sign(n * (n + 1) / 2));
    forms_close(&twice, &expected, case.tol, &format!("G~ squared against (-1)^(n(n+1)/2) at n = {n}"))
}

fn qnorm_positive(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let rho = sample::form(&mut case.rng, n);
    let q = core(gm.qnorm_sq(&rho))?;
    ensure(q >= -case.tol * rho.max_abs().powi(2).max(1.0), || format!("Q(rho, rho) = {q} < 0 at n = {n}"))
}

fn b_conjugation(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let flat_b = core(GeneralisedMetric::build(gm.g().clone(), Matrix::zeros(n, n)))?;
    let rho = sample::form(&mut case.rng, n);
    let b = gm.b_form();
    let inner = core(flat_b.gtilde(&core(core((-&b).exp_two_form())?.wedge(&rho))?))?;
    let conjugated = core(core(b.exp_two_form())?.wedge(&inner))?;
    forms_close(&core(gm.gtilde(&rho))?, &conjugated, case.tol, "G~_B against e^B G~_0 e^-B")
}

fn volume_element_action(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let rho = sample::form(&mut case.rng, n);
    forms_close(&core(gm.gtilde(&rho))?, &core(gm.volume_minus_action(&rho))?, case.tol, "G~ against the V- volume element")
}

fn eigenframe<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<S>(&mut case.rng, n);
    let mix = loop {
        let a = S::spd(&mut case.rng, n).add(&S::skew(&mut case.rng, n));
        if !a.determinant().is_negligible(1e-9) {
            break a;
        }
    };
    let rebuilt = core(GeneralisedMetric::from_splitting(&gm.vplus_basis().mul(&mix)))?;
    same_matrix(rebuilt.g(), gm.g(), case.tol, "reconstructed g")?;
    same_matrix(rebuilt.b(), gm.b(), case.tol, "reconstructed B")
}

fn parity_behaviour(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let rho = sample::form(&mut case.rng, n);
    let tol = 1e-12 * rho.max_abs().max(1.0);
    let even = core(gm.gtilde(&rho.even_part()))?;
    let odd = core(gm.gtilde(&rho.odd_part()))?;
    let (even_leak, odd_leak) = if n.is_multiple_of(2) { (even.odd_part(), odd.even_part()) } else { (even.even_part(), odd.odd_part()) };
    ensure(even_leak.is_negligible(tol) && odd_leak.is_negligible(tol), || format!("G~ has the wrong parity behaviour at n = {n}"))
}

fn isometry(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let rho = sample::form(&mut case.rng, n);
    let tau = sample::form(&mut case.rng, n);
    let lhs = core(core(gm.gtilde(&rho))?.mukai(&tau))?;
    let rhs = sign(n * (n + 1) / 2) * core(rho.mukai(&core(gm.gtilde(&tau))?))?;
    same_scalar(&lhs, &rhs, case.tol, "<G~rho,tau> against <rho,G~tau>")
}

fn lifts<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<S>(&mut case.rng, n);
    let x: Vec<S> = (0..n).map(|_| S::entry(&mut case.rng)).collect();
    let y: Vec<S> = (0..n).map(|_| S::entry(&mut case.rng)).collect();
    let (xp, ym) = (gm.lift_plus(&x), gm.lift_minus(&y));
    let gxx = gm.g().bilinear(&x, &x);
    same_scalar(&core(xp.pairing(&xp))?, &gxx, case.tol, "(X+, X+) against g(X, X)")?;
    same_scalar(&core(ym.pairing(&ym))?, &-gm.g().bilinear(&y, &y), case.tol, "(Y-, Y-) against -g(Y, Y)")?;
    same_scalar(&core(xp.pairing(&ym))?, &S::zero(), case.tol, "(X+, Y-)")?;
    let image = gm.involution().mul_vec(&xp.to_stacked());
    let column = |v: Vec<S>| Matrix::from_columns(2 * n, &[v]);
    same_matrix(&column(image), &column(xp.to_stacked()), case.tol, "G fixes X+")
}
