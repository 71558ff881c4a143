use std::sync::Arc;

use gencal_core::clifford::{CliffordElement, Frame};
use gencal_core::sample;
use gencal_core::{Form, Matrix};
use rand::Rng;

use super::random::{same_matrix, Sample};
use super::{core, forms_close, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "double_cover", cases: 48, check: double_cover },
        Property { name: "homomorphism", cases: 48, check: homomorphism },
        Property { name: "orthogonality", cases: 48, check: orthogonality },
        Property { name: "volume_element", cases: 30, check: volume_element },
        Property { name: "hodge_via_clifford", cases: 48, check: hodge_via_clifford },
    ]
}

fn frame(case: &mut Case, lo: usize, hi: usize) -> Result<Arc<Frame>, String> {
    let n = case.dim(lo, hi);
    core(Frame::new(&f64::spd(&mut case.rng, n)))
}

/// Product of one to four random non-null vectors.
fn pin_element(case: &mut Case, fr: &Arc<Frame>) -> Result<CliffordElement<f64>, String> {
    let n = fr.dim();
    let count = case.rng.gen_range(1..=4);
    let mut out = CliffordElement::one(fr.clone());
    for _ in 0..count {
        let x = sample::normal_vec(&mut case.rng, n);
        let v = core(CliffordElement::from_form(fr.clone(), &Form::one_form(&x)))?;
        out = core(out.mul(&v))?;
    }
    Ok(out)
}

fn double_cover(case: &mut Case) -> CaseResult {
    let fr = frame(case, 2, 6)?;
    let a = pin_element(case, &fr)?;
    let plus = core(a.pin_project(1e-9))?;
    let minus = core(a.scale(&-1.0).pin_project(1e-9))?;
    same_matrix(&plus, &minus, case.tol, "pin_project(a) against pin_project(-a)")
}

fn homomorphism(case: &mut Case) -> CaseResult {
    let fr = frame(case, 2, 6)?;
    let a = pin_element(case, &fr)?;
    let b = pin_element(case, &fr)?;
    let ab = core(core(a.mul(&b))?.pin_project(1e-9))?;
    let product = core(a.pin_project(1e-9))?.mul(&core(b.pin_project(1e-9))?);
    same_matrix(&ab, &product, case.tol, "pin_project(ab) against pin_project(a) pin_project(b)")
}

fn orthogonality(case: &mut Case) -> CaseResult {
    let fr = frame(case, 2, 6)?;
    let a = pin_element(case, &fr)?;
    let r = core(a.pin_project(1e-9))?;
    let g = fr.metric();
    same_matrix(&r.transpose().mul(g).mul(&r), g, case.tol, "R^T g R against g")
}

fn volume_element(case: &mut Case) -> CaseResult {
    let fr = frame(case, 2, 7)?;
    let n = fr.dim();
    let volume = CliffordElement::<f64>::monomial(fr.clone(), (1 << n) - 1);
    let r = core(volume.pin_project(1e-9))?;
    same_matrix(&r, &Matrix::identity(n).neg(), case.tol, "projection of the volume element")
}

fn hodge_via_clifford(case: &mut Case) -> CaseResult {
    let fr = frame(case, 2, 7)?;
    let n = fr.dim();
    let a = sample::form(&mut case.rng, n);
    let star = fr.hodge();
    let lhs = core(star.star(&a))?;
    let hat = core(CliffordElement::from_form(fr.clone(), &a.hat().tilde()))?;
    let rhs = core(core(hat.mul(&CliffordElement::monomial(fr.clone(), (1 << n) - 1)))?.to_form())?;
    forms_close(&lhs, &rhs, case.tol, "star(a) against the reversal of a times the volume element")
}
