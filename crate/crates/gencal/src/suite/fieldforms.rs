use gencal_core::fieldforms::{
    basic_split, courant, solve_for_phi, tdual_intertwine_check, PolyForm, PolyGenVector, PolyVector,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::random::{intertwine_data, poly, poly_form};
use super::{core, ensure, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "d_squared_zero", cases: 40, check: d_squared_zero },
        Property { name: "dh_squared_zero_for_exact_h", cases: 40, check: dh_squared_zero },
        Property { name: "cartan_formula", cases: 40, check: cartan_formula },
        Property { name: "courant_closed_b", cases: 30, check: courant_closed_b },
        Property { name: "basic_split_round_trip", cases: 40, check: basic_split_round_trip },
        Property { name: "tint_equivalence", cases: 50, check: tint_equivalence },
    ]
}

fn vector_field(rng: &mut ChaCha8Rng, n: usize) -> PolyVector {
    (0..n).map(|_| poly(rng, n, None, 2, 2)).collect()
}

fn d_squared_zero(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 5);
    let form = poly_form(&mut case.rng, n, None, None, 4);
    ensure(form.d().d().is_zero(), || "d d is not zero".into())
}

fn dh_squared_zero(case: &mut Case) -> CaseResult {
    let n = case.dim(3, 5);
    let b = poly_form(&mut case.rng, n, None, None, 3).degree_part(2);
    let h = b.d();
    let rho = poly_form(&mut case.rng, n, None, None, 3);
    let twice = core(core(rho.d_h(&h))?.d_h(&h))?;
    ensure(twice.is_zero(), || "d_H d_H is not zero for H = dB".into())
}

fn cartan_formula(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 5);
    let form = poly_form(&mut case.rng, n, None, None, 3);
    let axis = case.rng.gen_range(0..n);
    let x = gencal_core::fieldforms::coordinate_field(n, axis);
    ensure(core(form.cartan_lie(&x))? == core(form.lie_derivative(&x))?, || "d i + i d differs from the coordinate Lie derivative".into())
}

/// `⟦e^B v, e^B w⟧ = e^B ⟦v, w⟧` for closed `B`.
fn courant_closed_b(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 4);
    let b = poly_form(&mut case.rng, n, None, None, 2).degree_part(1).d();
    let section = |rng: &mut ChaCha8Rng| -> Result<PolyGenVector, String> {
        let covector = poly_form(rng, n, None, None, 2).degree_part(1);
        core(PolyGenVector::new(vector_field(rng, n), covector))
    };
    let v = section(&mut case.rng)?;
    let w = section(&mut case.rng)?;
    let lhs = core(courant(&core(v.b_transform(&b))?, &core(w.b_transform(&b))?))?;
    let rhs = core(core(courant(&v, &w))?.b_transform(&b))?;
    ensure(lhs == rhs, || "Courant bracket does not commute with a closed B-transform".into())
}

fn basic_split_round_trip(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 5);
    let data = intertwine_data(&mut case.rng, n, 3);
    let rho = poly_form(&mut case.rng, n, None, None, 3);
    let (rho0, rho1) = core(basic_split(&rho, &data.theta, data.axis))?;
    ensure(rho0.is_basic(data.axis) && rho1.is_basic(data.axis), || "split parts are not basic".into())?;
    let rebuilt = core(rho0.add(&core(data.theta.wedge(&rho1))?))?;
    ensure(rebuilt == rho, || "rho0 + theta wedge rho1 does not rebuild rho".into())
}

/// Whether the basic-form equations hold must not change under duality.
fn tint_equivalence(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 5);
    let mut data = intertwine_data(&mut case.rng, n, 4);
    if case.rng.gen_range(0..3) != 0 {
        let (phi0, phi1) = core(solve_for_phi(&data.rho0, &data.rho1, &data.dilaton, &data.theta))?;
        (data.phi0, data.phi1) = (phi0, phi1);
    }
    let (before, after) = core(tdual_intertwine_check(&data))?;
    let d_theta: PolyForm = data.theta.d();
    ensure(before == after, || {
        format!("equations hold before: {before}, after: {after} (n = {n}, d theta zero: {})", d_theta.is_zero())
    })
}
