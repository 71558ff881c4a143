use gencal_core::calibration::weighted_deficit;
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::purespinor::{tau_from_pair, IsotropicPair};
use gencal_core::tduality::{
    tdualize_dilaton, tdualize_dilaton_weight, tdualize_metric, tdualize_metric_eigenspace, tdualize_pair,
    tdualize_pair_transport, tdualize_spinor, DualityContext,
};
use gencal_core::{sample, Matrix, Rational};
use rand::Rng;

use super::exterior::dispatch;
use super::random::{metric, pair, same, same_matrix, same_scalar, Sample};
use super::{close, core, ensure, forms_close, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "buscher_routes_agree", cases: 70, check: |c| dispatch(c, buscher_routes_agree::<f64>, buscher_routes_agree::<Rational>) },
        Property { name: "double_dual_restores", cases: 70, check: |c| dispatch(c, double_dual::<f64>, double_dual::<Rational>) },
        Property { name: "m_is_involutive_isometry", cases: 40, check: |c| dispatch(c, m_squared::<f64>, m_squared::<Rational>) },
        Property { name: "rank_shift", cases: 70, check: |c| dispatch(c, rank_shift::<f64>, rank_shift::<Rational>) },
        Property { name: "calibration_transport", cases: 60, check: calibration_transport },
        Property { name: "weighted_qnorm_preserved", cases: 60, check: weighted_qnorm_preserved },
        Property { name: "gtilde_transport", cases: 60, check: gtilde_transport },
        Property { name: "pair_transport_routes_agree", cases: 60, check: pair_transport_routes_agree },
    ]
}

fn context<S: Sample>(case: &mut Case, n: usize) -> DualityContext<S> {
    loop {
        let x: Vec<S> = (0..n).map(|_| S::entry(&mut case.rng)).collect();
        let theta: Vec<S> = (0..n).map(|_| S::entry(&mut case.rng)).collect();
        let s = x.iter().zip(&theta).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        if s.is_negligible(0.1) {
            continue;
        }
        let theta = theta.into_iter().map(|t| t / s.clone()).collect();
        if let Ok(ctx) = DualityContext::new(x, theta) {
            return ctx;
        }
    }
}

fn buscher_routes_agree<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<S>(&mut case.rng, n);
    let ctx = context::<S>(case, n);
    let a = core(tdualize_metric(&gm, &ctx))?;
    let b = core(tdualize_metric_eigenspace(&gm, &ctx))?;
    same_matrix(a.g(), b.g(), case.tol, "dual g: formulas against M(V+)")?;
    same_matrix(a.b(), b.b(), case.tol, "dual B: formulas against M(V+)")
}

fn double_dual<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let gm = metric::<S>(&mut case.rng, n);
    let ctx = context::<S>(case, n);
    let once = core(tdualize_metric(&gm, &ctx))?;
    let twice = core(tdualize_metric(&once, &ctx))?;
    same_matrix(twice.g(), gm.g(), case.tol, "g after two dualities")?;
    same_matrix(twice.b(), gm.b(), case.tol, "B after two dualities")?;
    let weight = S::one() + S::entry(&mut case.rng) * S::entry(&mut case.rng);
    let back = tdualize_dilaton_weight(&tdualize_dilaton_weight(&weight, gm.g(), &ctx), once.g(), &ctx);
    same_scalar(&back, &weight, case.tol, "dilaton weight after two dualities")?;
    let rho = S::form(&mut case.rng, n);
    same(&core(tdualize_spinor(&core(tdualize_spinor(&rho, &ctx))?, &ctx))?, &rho, case.tol, "spinor after two dualities")
}

fn m_squared<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 8);
    let ctx = context::<S>(case, n);
    let m = ctx.matrix();
    same_matrix(&m.mul(&m), &Matrix::identity(2 * n), case.tol, "M squared")?;
    let id = Matrix::<S>::identity(n);
    let zero = Matrix::<S>::zeros(n, n);
    let eta = zero.hstack(&id).vstack(&id.hstack(&zero));
    same_matrix(&m.transpose().mul(&eta).mul(&m), &eta, case.tol, "M preserves the pairing")
}

/// Pairs containing the direction lose a dimension, the others gain one.
fn rank_shift<S: Sample>(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 7);
    let ctx = context::<S>(case, n);
    let tangent = case.index.is_multiple_of(2);
    let k = if tangent { case.rng.gen_range(1..=n) } else { case.rng.gen_range(0..n) };
    let p = loop {
        let p = pair::<S>(&mut case.rng, n, k);
        let mut l = p.l().clone();
        if tangent {
            l.set_column(0, ctx.direction());
        }
        let with_x = l.hstack(&Matrix::from_columns(n, &[ctx.direction().to_vec()]));
        if with_x.rank(if S::EXACT { 0.0 } else { 1e-6 }) != if tangent { k } else { k + 1 } {
            continue;
        }
        if let Ok(q) = IsotropicPair::new(l, p.f().clone(), p.orientation()) {
            break q;
        }
    };
    let expected = if tangent { k - 1 } else { k + 1 };
    let dual_k = if S::EXACT {
        core(tdualize_pair_transport(&p, &ctx))?.k()
    } else {
        let gm = metric::<f64>(&mut case.rng, n);
        let ctx = DualityContext::new(
            ctx.direction().iter().map(|v| v.as_f64()).collect(),
            ctx.theta().iter().map(|v| v.as_f64()).collect(),
        )
        .map_err(|e| e.to_string())?;
        core(tdualize_pair(&p.to_f64(), &gm, &ctx))?.1.k()
    };
    ensure(dual_k == expected, || format!("k = {k} went to {dual_k}, expected {expected} (n = {n})"))
}

fn float_setup(case: &mut Case) -> (usize, GeneralisedMetric<f64>, DualityContext<f64>, IsotropicPair<f64>, f64) {
    let n = case.dim(2, 7);
    let k = case.rng.gen_range(0..=n);
    let gm = metric::<f64>(&mut case.rng, n);
    let ctx = context::<f64>(case, n);
    let p = pair::<f64>(&mut case.rng, n, k);
    let phi = sample::normal(&mut case.rng) * 0.5;
    (n, gm, ctx, p, phi)
}

/// `√det g · (e^{−φ}‖τ‖ − ⟨ρ, τ⟩)` is unchanged when `(g, B, φ, ρ, τ)` are
/// all dualised, with `ρ^⊤ = −X⌟ρ − θ∧ρ`.
fn calibration_transport(case: &mut Case) -> CaseResult {
    let (n, gm, ctx, p, phi) = float_setup(case);
    let rho = sample::form(&mut case.rng, n);
    let rho = if p.k() % 2 == 0 { rho.even_part() } else { rho.odd_part() };
    let tau = core(tau_from_pair(&p, gm.g()))?;
    let dual = core(tdualize_metric(&gm, &ctx))?;
    let before = core(weighted_deficit(&rho, &tau, &gm, phi))?;
    let rho_t = core(tdualize_spinor(&rho, &ctx))?;
    let tau_t = core(tdualize_spinor(&tau, &ctx))?;
    let after = core(weighted_deficit(&rho_t, &tau_t, &dual, tdualize_dilaton(phi, gm.g(), &ctx)))?;
    close(before, after, case.tol, &format!("weighted deficit before and after duality (n = {n})"))
}

fn weighted_qnorm_preserved(case: &mut Case) -> CaseResult {
    let (_, gm, ctx, p, phi) = float_setup(case);
    let tau = core(tau_from_pair(&p, gm.g()))?;
    let dual = core(tdualize_metric(&gm, &ctx))?;
    let phi_t = tdualize_dilaton(phi, gm.g(), &ctx);
    let weigh = |m: &GeneralisedMetric<f64>, phi: f64| m.hodge().volume_factor() * (-phi).exp();
    let before = weigh(&gm, phi) * core(gm.qnorm(&tau))?;
    let after = weigh(&dual, phi_t) * core(dual.qnorm(&core(tdualize_spinor(&tau, &ctx))?))?;
    close(before, after, case.tol, "weighted qnorm before and after duality")
}

/// `G̃^⊤ ρ^⊤ = (G̃ ρ)^⊤`.
fn gtilde_transport(case: &mut Case) -> CaseResult {
    let (n, gm, ctx, _, _) = float_setup(case);
    let rho = sample::form(&mut case.rng, n);
    let dual = core(tdualize_metric(&gm, &ctx))?;
    let lhs = core(dual.gtilde(&core(tdualize_spinor(&rho, &ctx))?))?;
    let rhs = core(tdualize_spinor(&core(gm.gtilde(&rho))?, &ctx))?;
    forms_close(&lhs, &rhs, case.tol, &format!("G~ of the dual against the dual of G~ (n = {n})"))
}

fn pair_transport_routes_agree(case: &mut Case) -> CaseResult {
    let (_, gm, ctx, p, _) = float_setup(case);
    let dual = core(tdualize_metric(&gm, &ctx))?;
    let via_transport = core(tdualize_pair_transport(&p, &ctx))?;
    let (_, via_factor) = core(tdualize_pair(&p, &gm, &ctx))?;
    forms_close(
        &core(tau_from_pair(&via_transport, dual.g()))?,
        &core(tau_from_pair(&via_factor, dual.g()))?,
        case.tol,
        "annihilator transport against factorisation",
    )
}
