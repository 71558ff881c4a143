use gencal_core::purespinor::{
    annihilator, factorize, gluing_matrix, gluing_matrix_graph, isotropy_defect, pin_lift, rank, tau_from_pair, tau_via_star,
    RANK_TOL,
};
use gencal_core::{Form, GenVector};
use rand::Rng;

use super::random::{metric, pair, same_matrix};
use super::{core, ensure, forms_close, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "tau_routes_agree", cases: 48, check: tau_routes_agree },
        Property { name: "rank_is_dimension", cases: 48, check: rank_is_dimension },
        Property { name: "isotropy", cases: 48, check: isotropy },
        Property { name: "purity_preserved_by_b", cases: 48, check: purity_preserved_by_b },
        Property { name: "factorize_round_trip", cases: 48, check: factorize_round_trip },
        Property { name: "gluing_routes_agree", cases: 48, check: gluing_routes_agree },
        Property { name: "gluing_orthogonal", cases: 48, check: gluing_orthogonal },
        Property { name: "pin_lift_projects_to_gluing", cases: 48, check: pin_lift_projects_to_gluing },
    ]
}

fn draw(case: &mut Case, lo: usize, hi: usize) -> (usize, usize) {
    let n = case.dim(lo, hi);
    let k = case.rng.gen_range(0..=n);
    (n, k)
}

fn tau_routes_agree(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let g = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k).with_f(gencal_core::Matrix::zeros(k, k)).map_err(|e| e.to_string())?;
    forms_close(&core(tau_from_pair(&p, g.g()))?, &core(tau_via_star(&p, g.g()))?, case.tol, "tau against hat(star varpi)")
}

fn rank_is_dimension(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let r = core(rank(&core(tau_from_pair(&p, gm.g()))?, RANK_TOL))?;
    ensure(r == k, || format!("rank {r} for a {k}-plane in dimension {n}"))
}

fn isotropy(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 8);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let (w, _) = core(annihilator(&core(tau_from_pair(&p, gm.g()))?, RANK_TOL))?;
    ensure(w.cols() == n, || format!("annihilator has dimension {} in dimension {n}", w.cols()))?;
    let defect = isotropy_defect(&w);
    ensure(defect <= case.tol, || format!("isotropy defect {defect:e}"))
}

/// `e^B τ` is annihilated by `X ⊕ (ξ + X⌟B)` for every `X ⊕ ξ ∈ W_τ`.
fn purity_preserved_by_b(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let tau = core(tau_from_pair(&p, gm.g()))?;
    let b = gencal_core::sample::skew(&mut case.rng, n, 1.0);
    let shifted = core(core(Form::two_form_from_matrix(&b).exp_two_form())?.wedge(&tau))?;
    let r = core(rank(&shifted, RANK_TOL))?;
    ensure(r == k, || format!("rank changed from {k} to {r} under a B-field"))?;
    let (w, _) = core(annihilator(&tau, RANK_TOL))?;
    let bt = b.transpose();
    for j in 0..w.cols() {
        let col = w.column(j);
        let x = col[..n].to_vec();
        let xi: Vec<f64> = col[n..].iter().zip(bt.mul_vec(&x)).map(|(a, c)| a + c).collect();
        let image = core(GenVector { vector: x, covector: xi }.act(&shifted))?;
        let size = image.max_abs();
        ensure(size <= case.tol * shifted.max_abs().max(1.0), || format!("shifted annihilator misses e^B tau by {size:e}"))?;
    }
    Ok(())
}

fn factorize_round_trip(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let scale = 0.5 + case.rng.gen::<f64>() * 2.0;
    let tau = core(tau_from_pair(&p, gm.g()))?.scale(&scale);
    let (c, q) = core(factorize(&tau, gm.g(), RANK_TOL))?;
    ensure(c > 0.0 && q.k() == k, || format!("factorisation returned scale {c} and dimension {}", q.k()))?;
    super::close(c, scale, case.tol, "recovered scale")?;
    forms_close(&core(tau_from_pair(&q, gm.g()))?.scale(&c), &tau, case.tol, "c tau(factorize(tau)) against tau")
}

fn gluing_routes_agree(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    same_matrix(&core(gluing_matrix(&gm, &p))?, &core(gluing_matrix_graph(&gm, &p))?, case.tol, "block formula against graph of W")
}

fn gluing_orthogonal(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let r = core(gluing_matrix(&gm, &p))?;
    same_matrix(&r.transpose().mul(gm.g()).mul(&r), gm.g(), case.tol, "R^T g R against g")
}

fn pin_lift_projects_to_gluing(case: &mut Case) -> CaseResult {
    let (n, k) = draw(case, 2, 7);
    let gm = metric::<f64>(&mut case.rng, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let projected = core(core(pin_lift(&gm, &p))?.pin_project(1e-8))?;
    same_matrix(&projected, &core(gluing_matrix(&gm, &p))?, case.tol, "pin_project(pin_lift) against the gluing matrix")
}
