use gencal_core::exterior::Parity;
use gencal_core::{Form, Rational};

use super::random::{same, same_scalar, Sample};
use super::{core, ensure, Case, CaseResult, Property};
use crate::numeric::Mode;

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "mukai_symmetry", cases: 64, check: |c| dispatch(c, mukai_symmetry::<f64>, mukai_symmetry::<Rational>) },
        Property { name: "adjointness", cases: 64, check: |c| dispatch(c, adjointness::<f64>, adjointness::<Rational>) },
        Property { name: "clifford_relation", cases: 64, check: |c| dispatch(c, clifford_relation::<f64>, clifford_relation::<Rational>) },
        Property { name: "chirality", cases: 64, check: |c| dispatch(c, chirality::<f64>, chirality::<Rational>) },
        Property { name: "b_fields_commute", cases: 48, check: |c| dispatch(c, b_fields_commute::<f64>, b_fields_commute::<Rational>) },
        Property { name: "exp_inverse", cases: 48, check: |c| dispatch(c, exp_inverse::<f64>, exp_inverse::<Rational>) },
    ]
}

pub(super) fn dispatch(case: &mut Case, float: fn(&mut Case) -> CaseResult, exact: fn(&mut Case) -> CaseResult) -> CaseResult {
    match case.mode {
        Mode::Float => float(case),
        Mode::Exact => exact(case),
    }
}

fn sign<S: Sample>(odd: bool) -> S {
    if odd {
        -S::one()
    } else {
        S::one()
    }
}

fn mukai_symmetry<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 9);
    let rho = S::form(&mut case.rng, n);
    let tau = S::form(&mut case.rng, n);
    let lhs = core(rho.mukai(&tau))?;
    let rhs = sign::<S>((n * (n + 1) / 2) % 2 == 1) * core(tau.mukai(&rho))?;
    same_scalar(&lhs, &rhs, case.tol, "<rho,tau> against <tau,rho>")
}

fn adjointness<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 9);
    let rho = S::form(&mut case.rng, n);
    let tau = S::form(&mut case.rng, n);
    let v = S::gen_vector(&mut case.rng, n);
    let lhs = core(core(v.act(&rho))?.mukai(&tau))?;
    let rhs = sign::<S>(n % 2 == 1) * core(rho.mukai(&core(v.act(&tau))?))?;
    same_scalar(&lhs, &rhs, case.tol, "<v.rho,tau> against <rho,v.tau>")
}

fn clifford_relation<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let a = S::form(&mut case.rng, n);
    let v = S::gen_vector(&mut case.rng, n);
    let w = S::gen_vector(&mut case.rng, n);
    let vw = core(v.act(&core(w.act(&a))?))?;
    let wv = core(w.act(&core(v.act(&a))?))?;
    let expected = a.scale(&(S::from_i64(-2) * core(v.pairing(&w))?));
    same(&(&vw + &wv), &expected, case.tol, "anticommutator")
}

fn chirality<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 9);
    let a = S::form(&mut case.rng, n).even_part();
    let b = S::form(&mut case.rng, n).even_part();
    let c = S::form(&mut case.rng, n).odd_part();
    let v = S::gen_vector(&mut case.rng, n);
    let parity_of = |f: &Form<S>| if f.is_zero() { None } else { Some(f.parity()) };
    let ab = core(a.wedge(&b))?;
    ensure(ab.odd_part().is_zero(), || "even wedge even has an odd part".into())?;
    ensure(core(a.wedge(&c))?.even_part().is_zero(), || "even wedge odd has an even part".into())?;
    let va = core(v.act(&a))?;
    let vc = core(v.act(&c))?;
    ensure(matches!(parity_of(&va), Some(Parity::Odd) | None), || "action on an even form is not odd".into())?;
    ensure(matches!(parity_of(&vc), Some(Parity::Even) | None), || "action on an odd form is not even".into())
}

fn b_fields_commute<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let b1 = Form::two_form_from_matrix(&S::skew(&mut case.rng, n));
    let b2 = Form::two_form_from_matrix(&S::skew(&mut case.rng, n));
    let rho = S::form(&mut case.rng, n);
    let e1 = core(b1.exp_two_form())?;
    let e2 = core(b2.exp_two_form())?;
    let one = core(e1.wedge(&core(e2.wedge(&rho))?))?;
    let two = core(e2.wedge(&core(e1.wedge(&rho))?))?;
    same(&one, &two, case.tol, "e^B e^B' against e^B' e^B")?;
    let sum = core(core(b1.try_add(&b2))?.exp_two_form())?;
    same(&core(sum.wedge(&rho))?, &one, case.tol, "e^(B+B') against e^B e^B'")
}

fn exp_inverse<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 9);
    let b = Form::two_form_from_matrix(&S::skew(&mut case.rng, n));
    let product = core(core(b.exp_two_form())?.wedge(&core((-&b).exp_two_form())?))?;
    same(&product, &Form::one(n), case.tol, "e^B e^-B")
}
