use gencal_core::calibration::{
    bound_value, calibration_form, energy_density, exact_verdict, is_calibrated, pairing_value, pairing_value_metric,
    pairing_value_pullback, spinor_criterion, EQUALITY_TOL,
};
use gencal_core::dirac::{GammaRep, StructureKind};
use gencal_core::exterior::HodgeStar;
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::purespinor::{tau_from_pair, IsotropicPair};
use gencal_core::scalar::RealScalar;
use gencal_core::{sample, Form, Matrix, Rational};
use rand::Rng;

use super::random::{metric, pair};
use super::{close, core, ensure, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "pairing_routes_agree", cases: 60, check: pairing_routes_agree },
        Property { name: "bound_is_qnorm", cases: 60, check: bound_is_qnorm },
        Property { name: "lemma_det_both_signs", cases: 60, check: lemma_det_both_signs },
        Property { name: "bound_at_least_one", cases: 60, check: bound_at_least_one },
        Property { name: "b_equivariance", cases: 60, check: b_equivariance },
        Property { name: "classical_reduction", cases: 60, check: classical_reduction },
        Property { name: "spinor_criterion_equivalence", cases: 60, check: spinor_criterion_equivalence },
        Property { name: "fierz_forms_bound_pairs", cases: 60, check: fierz_forms_bound_pairs },
        Property { name: "exact_verdict_matches_float", cases: 40, check: exact_verdict_matches_float },
    ]
}

fn parity_form(case: &mut Case, n: usize, k: usize) -> Form<f64> {
    let rho = sample::form(&mut case.rng, n);
    if k.is_multiple_of(2) {
        rho.even_part()
    } else {
        rho.odd_part()
    }
}

fn setup(case: &mut Case, lo: usize, hi: usize) -> (GeneralisedMetric<f64>, IsotropicPair<f64>) {
    let n = case.dim(lo, hi);
    let k = case.rng.gen_range(0..=n);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    (gm, p)
}

fn pairing_routes_agree(case: &mut Case) -> CaseResult {
    let (gm, p) = setup(case, 2, 7);
    let rho = parity_form(case, p.n(), p.k());
    let a = core(pairing_value(&rho, &p, gm.g()))?;
    close(a, core(pairing_value_metric(&rho, &p, gm.g()))?, case.tol, "Mukai route against metric route")?;
    close(a, core(pairing_value_pullback(&rho, &p, gm.g()))?, case.tol, "Mukai route against pullback route")
}

fn bound_is_qnorm(case: &mut Case) -> CaseResult {
    let (gm, p) = setup(case, 2, 7);
    let tau = core(tau_from_pair(&p, gm.g()))?;
    close(core(bound_value(&gm, &p))?, core(gm.qnorm(&tau))?, case.tol, "determinant bound against qnorm")
}

/// `‖e^α ∧ ⋆ϖ_L‖_g = √det(j*(g+α)) = √det(j*(g−α))` for a unit `ϖ_L`.
fn lemma_det_both_signs(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 7);
    let k = case.rng.gen_range(1..=n);
    let g = sample::spd(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k).with_f(Matrix::zeros(k, k)).map_err(|e| e.to_string())?;
    let alpha = sample::skew(&mut case.rng, n, 1.0);
    let star = core(HodgeStar::new(&g))?;
    let form = core(core(Form::two_form_from_matrix(&alpha).exp_two_form())?.wedge(&core(star.star(&core(p.varpi(&g))?))?))?;
    let norm = core(star.inner(&form, &form))?.sqrt();
    let plus = core(p.bound_sq(&g, &alpha))?.sqrt();
    let minus = core(p.bound_sq(&g, &alpha.neg()))?.sqrt();
    close(norm, plus, case.tol, "norm against det(j*(g + alpha))")?;
    close(plus, minus, case.tol, "det(j*(g + alpha)) against det(j*(g - alpha))")
}

fn bound_at_least_one(case: &mut Case) -> CaseResult {
    let (gm, p) = setup(case, 2, 8);
    let b = core(bound_value(&gm, &p))?;
    ensure(b >= 1.0 - case.tol, || format!("bound {b} < 1"))
}

/// Shifting `B` by `B'` while sending `ρ ↦ e^{B'}ρ` and `F ↦ F + j*B'`
/// leaves pairing and bound unchanged.
fn b_equivariance(case: &mut Case) -> CaseResult {
    let (gm, p) = setup(case, 2, 7);
    let n = p.n();
    let rho = parity_form(case, n, p.k());
    let shift = sample::skew(&mut case.rng, n, 1.0);
    let moved = core(GeneralisedMetric::build(gm.g().clone(), gm.b().add(&shift)))?;
    let rho2 = core(core(Form::two_form_from_matrix(&shift).exp_two_form())?.wedge(&rho))?;
    let p2 = core(p.with_f(p.f().add(&p.pullback_matrix(&shift))))?;
    let before = core(is_calibrated(&rho, &gm, &p, EQUALITY_TOL))?;
    let after = core(is_calibrated(&rho2, &moved, &p2, EQUALITY_TOL))?;
    close(before.pairing_value, after.pairing_value, case.tol, "pairing after a B-transform")?;
    close(before.bound_value, after.bound_value, case.tol, "bound after a B-transform")?;
    ensure(before.calibrated == after.calibrated, || "calibration verdict changed under a B-transform".into())
}

fn classical_reduction(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 7);
    let k = case.rng.gen_range(1..=n);
    let g = sample::spd(&mut case.rng, n);
    let gm = core(GeneralisedMetric::build(g.clone(), Matrix::zeros(n, n)))?;
    let p = pair::<f64>(&mut case.rng, n, k).with_f(Matrix::zeros(k, k)).map_err(|e| e.to_string())?;
    let rho = sample::form(&mut case.rng, n).degree_part(k);
    let classical = core(core(HodgeStar::new(&g))?.inner(&rho, &core(p.varpi(&g))?))?;
    close(core(pairing_value(&rho, &p, &g))?, classical, case.tol, "pairing against g(rho, varpi_L)")?;
    close(core(bound_value(&gm, &p))?, 1.0, case.tol, "bound with F = 0 and B = 0")
}

fn structure(case: &Case) -> (StructureKind, usize) {
    match case.index % 3 {
        0 => (StructureKind::SU3, 6),
        1 => (StructureKind::G2, 7),
        _ => (StructureKind::Spin7, 8),
    }
}

/// Spinor residual squared equals `2(1 − pairing/bound)`, so the two
/// equality tests agree.
fn spinor_criterion_equivalence(case: &mut Case) -> CaseResult {
    let (kind, n) = structure(case);
    let rep = core(GammaRep::new(n))?;
    let psi = core(rep.canonical_spinor(kind))?;
    let left = if kind == StructureKind::SU3 { rep.charge_conj(&psi) } else { psi.clone() };
    let k = case.rng.gen_range(0..=n);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let rho = core(calibration_form(&rep, &left, &psi, &gm, k))?;
    let report = core(is_calibrated(&rho, &gm, &p, EQUALITY_TOL))?;
    let oriented = if report.orientation < 0 { p.flipped() } else { p };
    let residual = core(spinor_criterion(&rep, &left, &psi, &gm, &oriented))?;
    let ratio = report.pairing_value / report.bound_value;
    close(residual * residual, 2.0 * (1.0 - ratio), case.tol, "residual squared against 2(1 - pairing/bound)")?;
    ensure((report.deficit < EQUALITY_TOL) == (residual < EQUALITY_TOL), || "bound equality and spinor criterion disagree".into())
}

fn fierz_forms_bound_pairs(case: &mut Case) -> CaseResult {
    let (kind, n) = structure(case);
    let rep = core(GammaRep::new(n))?;
    let psi = core(rep.canonical_spinor(kind))?;
    let left = if kind == StructureKind::SU3 { rep.charge_conj(&psi) } else { psi.clone() };
    let k = case.rng.gen_range(0..=n);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let rho = core(calibration_form(&rep, &left, &psi, &gm, k))?;
    let report = core(is_calibrated(&rho, &gm, &p, EQUALITY_TOL))?;
    ensure(report.deficit >= -case.tol * report.bound_value, || format!("deficit {} below zero", report.deficit))?;
    let phi = sample::normal(&mut case.rng);
    let (dbi, wz) = core(energy_density(&gm, phi, &rho, &p))?;
    ensure(wz.abs() <= dbi * (1.0 + case.tol), || format!("Wess-Zumino term {wz} exceeds the DBI term {dbi}"))
}

fn exact_verdict_matches_float(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 5);
    let k = case.rng.gen_range(0..=n);
    let gm = metric::<Rational>(&mut case.rng, n);
    let p = pair::<Rational>(&mut case.rng, n, k);
    let rho = sample::rational_form(&mut case.rng, n);
    let rho = if k % 2 == 0 { rho.even_part() } else { rho.odd_part() };
    let v = core(exact_verdict(&rho, gm.g(), gm.b(), &p))?;
    let float = core(is_calibrated(&rho.map(|c| c.as_f64()), &gm.to_f64(), &p.to_f64(), EQUALITY_TOL))?;
    let p_val = v.scaled_pairing.as_f64() * v.scale_sq.as_f64().sqrt();
    close(p_val.abs(), float.pairing_value, case.tol, "exact pairing against float pairing")?;
    close(v.bound_sq.as_f64().sqrt(), float.bound_value, case.tol, "exact bound against float bound")
}
