//! The calibration inequality `⟨ρ, τ_{L,F}⟩ ≤ ‖τ_{L,F}‖_G`, its spinor
//! form, a numeric search for maximising pairs, and the pointwise brane
//! energy density.

use alloc::vec::Vec;

use crate::dirac::{DiracSpinor, GammaRep};
use crate::error::{CoreError, Result};
use crate::exterior::{Form, HodgeStar, Parity};
use crate::genmetric::GeneralisedMetric;
use crate::linalg::Matrix;
use crate::purespinor::{tau_from_pair, IsotropicPair};
use crate::sample;
use crate::scalar::{i_pow, Complex64, RealScalar, Scalar};

/// Default equality tolerance in floating point.
pub const EQUALITY_TOL: f64 = 1e-7;

fn check_parity<S: Scalar>(rho: &Form<S>, k: usize, tol: f64) -> Result<()> {
    let wrong = if k % 2 == 0 { rho.odd_part() } else { rho.even_part() };
    if !wrong.is_negligible(tol) {
        return Err(CoreError::ParityMismatch);
    }
    Ok(())
}

/// `⟨ρ, τ_{L,F}⟩`.
pub fn pairing_value(rho: &Form<f64>, p: &IsotropicPair<f64>, g: &Matrix<f64>) -> Result<f64> {
    check_parity(rho, p.k(), 1e-12 * f64::max(1.0, rho.max_abs()))?;
    Ok(rho.mukai(&tau_from_pair(p, g)?)? / libm::sqrt(g.determinant()))
}

/// `g(e^{−F₀} ∧ ρ, ϖ_L)`, an independent route to [`pairing_value`].
pub fn pairing_value_metric(rho: &Form<f64>, p: &IsotropicPair<f64>, g: &Matrix<f64>) -> Result<f64> {
    check_parity(rho, p.k(), 1e-12 * f64::max(1.0, rho.max_abs()))?;
    let e_minus = (-&p.extended_f(g)?).exp_two_form()?;
    HodgeStar::new(g)?.inner(&e_minus.wedge(rho)?, &p.varpi(g)?)
}

/// `[e^{−F} ∧ j*ρ]_k` on `L` with its orthonormal oriented coframe.
pub fn pairing_value_pullback(rho: &Form<f64>, p: &IsotropicPair<f64>, g: &Matrix<f64>) -> Result<f64> {
    check_parity(rho, p.k(), 1e-12 * f64::max(1.0, rho.max_abs()))?;
    let (u, _) = p.orthonormal_frame(g)?;
    let pulled = crate::exterior::FormTransform::new(&u.transpose()).apply(rho)?;
    let f = Form::two_form_from_matrix(&p.f_orthonormal(g)?);
    let top = (-&f).exp_two_form()?.wedge(&pulled)?;
    let value = *top.top();
    Ok(if p.k() == 0 && p.orientation() < 0 { -value } else { value })
}

/// `√det(j*(g+B) − F) / √det(j*g)`.
pub fn bound_value(gm: &GeneralisedMetric<f64>, p: &IsotropicPair<f64>) -> Result<f64> {
    let sq = p.bound_sq(gm.g(), gm.b())?;
    if sq < 0.0 {
        return Err(CoreError::NegativeNorm(sq));
    }
    Ok(libm::sqrt(sq))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationReport {
    pub pairing_value: f64,
    pub bound_value: f64,
    pub deficit: f64,
    pub calibrated: bool,
    /// Orientation (relative to the given one) that attains the larger pairing.
    pub orientation: i8,
    pub witness: Option<f64>,
}

/// Evaluates both orientations of `L` and reports the better one.
pub fn is_calibrated(
    rho: &Form<f64>,
    gm: &GeneralisedMetric<f64>,
    p: &IsotropicPair<f64>,
    tol: f64,
) -> Result<CalibrationReport> {
    let pairing = pairing_value(rho, p, gm.g())?;
    let bound = bound_value(gm, p)?;
    let (best, orientation) = if pairing >= 0.0 { (pairing, 1) } else { (-pairing, -1) };
    let deficit = bound - best;
    Ok(CalibrationReport {
        pairing_value: best,
        bound_value: bound,
        deficit,
        calibrated: deficit <= tol,
        orientation,
        witness: None,
    })
}

/// Exact evaluation for rational data. With `pairing = √s · P` and
/// `bound² = b`, equality holds iff `P ≥ 0` and `P² s = b`. Here `P` is the
/// top coefficient of `⟨ρ, τ̃⟩` and `s = 1 / det(Lᵀ g L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactVerdict<S> {
    pub scaled_pairing: S,
    pub scale_sq: S,
    pub bound_sq: S,
    pub within_bound: bool,
    pub calibrated: bool,
}

pub fn exact_verdict<S: RealScalar>(
    rho: &Form<S>,
    g: &Matrix<S>,
    b: &Matrix<S>,
    p: &IsotropicPair<S>,
) -> Result<ExactVerdict<S>> {
    check_parity(rho, p.k(), 0.0)?;
    let (tau, s) = p.tau_unscaled(g)?;
    let scale_sq = s / g.determinant();
    let scaled = rho.mukai(&tau)?;
    let bound_sq = p.bound_sq(g, b)?;
    let lhs = scaled.clone() * scaled.clone() * scale_sq.clone();
    let nonpositive = scaled <= S::zero();
    let within = nonpositive || lhs <= bound_sq;
    let calibrated = scaled >= S::zero() && lhs == bound_sq;
    Ok(ExactVerdict { scaled_pairing: scaled, scale_sq, bound_sq, within_bound: within, calibrated })
}

/// Phase in `𝒜(Ψ_L) = phase · lift · Ψ_R`.
pub fn spinor_phase(n: usize, k: usize, chirality_sign: i64) -> Complex64 {
    let m = n / 2;
    let base = if (m * (m + 1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    if n % 2 == 0 {
        let k_sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        i_pow(m) * (base * k_sign * chirality_sign as f64)
    } else {
        i_pow(m + 1) * base
    }
}

/// `e^B ∧ Re J[Ψ_L ⊗ Ψ_R]` restricted to the parity of `k`.
pub fn calibration_form(
    rep: &GammaRep,
    left: &DiracSpinor,
    right: &DiracSpinor,
    gm: &GeneralisedMetric<f64>,
    k: usize,
) -> Result<Form<f64>> {
    let f = rep.fierz(left, right)?.real_part();
    let f = gm.hodge().from_frame(&f)?;
    let f = if k % 2 == 0 { f.even_part() } else { f.odd_part() };
    gm.b_form().exp_two_form()?.wedge(&f)
}

/// `‖𝒜(Ψ_L) − phase · J⁻¹(e^{−B} τ / ‖τ‖) · Ψ_R‖`.
pub fn spinor_criterion(
    rep: &GammaRep,
    left: &DiracSpinor,
    right: &DiracSpinor,
    gm: &GeneralisedMetric<f64>,
    p: &IsotropicPair<f64>,
) -> Result<f64> {
    let n = rep.n();
    let chirality = if n % 2 == 0 {
        right.chirality.ok_or(CoreError::ChiralityMismatch)?.sign()
    } else {
        1
    };
    let tau = tau_from_pair(p, gm.g())?;
    let bound = bound_value(gm, p)?;
    let untwisted = (-&gm.b_form()).exp_two_form()?.wedge(&tau)?.scale(&(1.0 / bound));
    let lift_c = gm.hodge().to_frame(&untwisted)?.to_complex();
    let moved = rep.clifford_act(&lift_c, right)?;
    let phase = spinor_phase(n, p.k(), chirality);
    let target = rep.charge_conj(left);
    let diff: Vec<Complex64> = target.amplitudes.iter().zip(&moved.amplitudes).map(|(a, b)| a - phase * b).collect();
    Ok(crate::dirac::norm(&diff))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximizerReport {
    pub deficit: f64,
    pub pairing_value: f64,
    pub bound_value: f64,
    /// `true` when the best deficit is below the requested tolerance; this is
    /// "tight within budget", not a proof of existence.
    pub tight: bool,
    pub iterations: usize,
    pub restart: usize,
    pub budget_exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 400, restarts: 8, seed: 0, tol: 1e-6 }
    }
}

struct Objective<'a> {
    rho: &'a Form<f64>,
    gm: &'a GeneralisedMetric<f64>,
    frame: Matrix<f64>,
    k: usize,
    volume: f64,
}

impl Objective<'_> {
    fn pair(&self, q: &Matrix<f64>, f: &[f64]) -> Result<IsotropicPair<f64>> {
        let n = self.frame.rows();
        let cols: Vec<usize> = (0..self.k).collect();
        let rows: Vec<usize> = (0..n).collect();
        let u = self.frame.mul(&q.submatrix(&rows, &cols));
        let fm = Matrix::skew_from_upper(self.k, f)?;
        IsotropicPair::new(u, fm, 1)
    }

    /// `(bound − |pairing|, pairing, bound)`.
    fn eval(&self, q: &Matrix<f64>, f: &[f64]) -> Result<(f64, f64, f64)> {
        let p = self.pair(q, f)?;
        let pairing = self.rho.mukai(&tau_from_pair(&p, self.gm.g())?)? / self.volume;
        let bound = bound_value(self.gm, &p)?;
        Ok((bound - pairing.abs(), pairing, bound))
    }
}

fn cayley(omega: &Matrix<f64>) -> Matrix<f64> {
    let n = omega.rows();
    let half = omega.scale(&0.5);
    let id = Matrix::identity(n);
    id.sub(&half).inverse(1e-14).expect("Cayley transform of a skew matrix").mul(&id.add(&half))
}

/// Projected gradient search over oriented `k`-planes and `F` on them,
/// maximising `|⟨ρ, τ⟩| − ‖τ‖`. Deterministic for a fixed seed; the best
/// restart wins, ties going to the earlier restart.
pub fn find_maximizer(
    rho: &Form<f64>,
    gm: &GeneralisedMetric<f64>,
    k: usize,
    options: SearchOptions,
) -> Result<(IsotropicPair<f64>, MaximizerReport)> {
    let n = gm.dim();
    if k > n {
        return Err(CoreError::DimensionMismatch { expected: n, found: k });
    }
    check_parity(rho, k, 1e-12 * f64::max(1.0, rho.max_abs()))?;
    let frame = gm.g().cholesky()?.inverse(1e-300)?.transpose();
    let objective = Objective { rho, gm, frame, k, volume: libm::sqrt(gm.g().determinant()) };
    let nf = k * k.saturating_sub(1) / 2;
    let generators: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| i < k || j < k).collect();
    let mut best: Option<(IsotropicPair<f64>, MaximizerReport)> = None;
    for restart in 0..options.restarts.max(1) {
        let mut rng = sample::seeded(options.seed.wrapping_mul(0x9E37_79B9).wrapping_add(restart as u64));
        let mut q = sample::orthogonal(&mut rng, n);
        let mut f = alloc::vec![0.0; nf];
        let (mut value, mut pairing, mut bound) = objective.eval(&q, &f)?;
        let mut step = 0.5;
        let mut iterations = 0;
        let h = 1e-7;
        while iterations < options.budget && value > options.tol * 1e-3 && k > 0 {
            iterations += 1;
            let mut grad_q = Vec::with_capacity(generators.len());
            for &(i, j) in &generators {
                let mut omega = Matrix::zeros(n, n);
                omega[(i, j)] = h;
                omega[(j, i)] = -h;
                let (vp, _, _) = objective.eval(&q.mul(&cayley(&omega)), &f)?;
                omega[(i, j)] = -h;
                omega[(j, i)] = h;
                let (vm, _, _) = objective.eval(&q.mul(&cayley(&omega)), &f)?;
                grad_q.push((vp - vm) / (2.0 * h));
            }
            let mut grad_f = Vec::with_capacity(nf);
            for t in 0..nf {
                let mut fp = f.clone();
                fp[t] += h;
                let mut fm = f.clone();
                fm[t] -= h;
                grad_f.push((objective.eval(&q, &fp)?.0 - objective.eval(&q, &fm)?.0) / (2.0 * h));
            }
            let gnorm_sq: f64 = grad_q.iter().chain(&grad_f).map(|x| x * x).sum();
            if gnorm_sq < 1e-26 {
                break;
            }
            let mut accepted = false;
            for _ in 0..40 {
                let mut omega = Matrix::zeros(n, n);
                for (&(i, j), gq) in generators.iter().zip(&grad_q) {
                    omega[(i, j)] = -step * gq;
                    omega[(j, i)] = step * gq;
                }
                let q_new = q.mul(&cayley(&omega));
                let f_new: Vec<f64> = f.iter().zip(&grad_f).map(|(x, gx)| x - step * gx).collect();
                let (v_new, p_new, b_new) = objective.eval(&q_new, &f_new)?;
                if v_new <= value - 0.25 * step * gnorm_sq {
                    q = q_new;
                    f = f_new;
                    value = v_new;
                    pairing = p_new;
                    bound = b_new;
                    accepted = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let pair = objective.pair(&q, &f)?;
        let pair = if pairing < 0.0 { pair.flipped() } else { pair };
        let report = MaximizerReport {
            deficit: value,
            pairing_value: pairing.abs(),
            bound_value: bound,
            tight: value <= options.tol,
            iterations,
            restart,
            budget_exhausted: iterations >= options.budget,
        };
        let better = match &best {
            None => true,
            Some((_, r)) => report.deficit < r.deficit,
        };
        if better {
            best = Some((pair, report));
        }
        if k == 0 {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Pointwise brane energy density: `(e^{−φ} ‖τ‖, e^{−φ} ⟨C, τ⟩)`.
pub fn energy_density(
    gm: &GeneralisedMetric<f64>,
    dilaton: f64,
    potential: &Form<f64>,
    p: &IsotropicPair<f64>,
) -> Result<(f64, f64)> {
    let weight = libm::exp(-dilaton);
    let dbi = weight * bound_value(gm, p)?;
    let wz = if potential.is_zero() { 0.0 } else { weight * pairing_value(potential, p, gm.g())? };
    Ok((dbi, wz))
}

/// `√det g · (e^{−φ}‖τ‖_G − ⟨ρ, τ⟩)`: the bound defect measured against the
/// dilaton volume `e^{2φ} ν_g`, which T-duality leaves unchanged when `φ` is
/// transported along with `(g, B)`.
pub fn weighted_deficit(rho: &Form<f64>, tau: &Form<f64>, gm: &GeneralisedMetric<f64>, dilaton: f64) -> Result<f64> {
    let volume = gm.hodge().volume_factor();
    let norm = gm.qnorm(tau)?;
    let pairing = rho.mukai(tau)? / volume;
    Ok(volume * (libm::exp(-dilaton) * norm - pairing))
}

/// Parity required of a calibration form for `k`-dimensional pairs.
pub fn required_parity(k: usize) -> Parity {
    if k % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_pairings() {
        let g = Matrix::identity(2);
        let full = IsotropicPair::<f64>::coordinate(2, &[0, 1]).unwrap();
        assert!((pairing_value(&Form::basis(2, 0b11), &full, &g).unwrap() - 1.0).abs() < 1e-12);
        let f = Matrix::from_row_major(2, 2, alloc::vec![0.0, 0.3, -0.3, 0.0]).unwrap();
        let p = full.with_f(f).unwrap();
        assert!((pairing_value(&Form::one(2), &p, &g).unwrap() + 0.3).abs() < 1e-12);
        assert_eq!(pairing_value(&Form::basis(2, 1), &p, &g), Err(CoreError::ParityMismatch));
    }

    #[test]
    fn block_bound() {
        let gm = GeneralisedMetric::standard(3);
        let f = Matrix::from_row_major(2, 2, alloc::vec![0.0, 1.0, -1.0, 0.0]).unwrap();
        let p = IsotropicPair::new(Matrix::from_fn(3, 2, |i, j| if i == j { 1.0 } else { 0.0 }), f, 1).unwrap();
        assert!((bound_value(&gm, &p).unwrap() - libm::sqrt(2.0)).abs() < 1e-12);
    }

    fn random_setup(n: usize, k: usize, seed: u64) -> (GeneralisedMetric<f64>, IsotropicPair<f64>) {
        let mut rng = sample::seeded(seed);
        let g = sample::spd(&mut rng, n);
        let b = sample::skew(&mut rng, n, 0.7);
        (GeneralisedMetric::build(g, b).unwrap(), sample::pair(&mut rng, n, k, 0.8))
    }

    #[test]
    fn pairing_routes_agree() {
        for (n, k, seed) in [(3, 1, 1), (4, 2, 2), (4, 0, 3), (5, 3, 4), (5, 5, 5), (6, 4, 6)] {
            let (gm, p) = random_setup(n, k, seed);
            let mut rng = sample::seeded(seed + 100);
            let rho = sample::form(&mut rng, n);
            let rho = if k % 2 == 0 { rho.even_part() } else { rho.odd_part() };
            let a = pairing_value(&rho, &p, gm.g()).unwrap();
            let b = pairing_value_metric(&rho, &p, gm.g()).unwrap();
            let c = pairing_value_pullback(&rho, &p, gm.g()).unwrap();
            assert!((a - b).abs() < 1e-9 * f64::max(1.0, a.abs()), "{n} {k}: {a} {b}");
            assert!((a - c).abs() < 1e-9 * f64::max(1.0, a.abs()), "{n} {k}: {a} {c}");
            let tau = tau_from_pair(&p, gm.g()).unwrap();
            assert!((bound_value(&gm, &p).unwrap() - gm.qnorm(&tau).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn spinor_residual_tracks_deficit() {
        for (n, k, seed) in [(6, 2, 1), (6, 3, 2), (7, 3, 3), (7, 4, 4), (8, 4, 5)] {
            let (gm, p) = random_setup(n, k, seed);
            let rep = GammaRep::new(n).unwrap();
            let mut rng = sample::seeded(seed + 7);
            let left = rep.spinor(sample::complex_vec(&mut rng, rep.spinor_dim())).unwrap().normalized().unwrap();
            let raw = sample::complex_vec(&mut rng, rep.spinor_dim());
            let right = if n % 2 == 0 {
                rep.project_chiral(&raw, crate::dirac::Chirality::Minus).unwrap().normalized().unwrap()
            } else {
                rep.spinor(raw).unwrap().normalized().unwrap()
            };
            let rho = calibration_form(&rep, &left, &right, &gm, k).unwrap();
            let pairing = pairing_value(&rho, &p, gm.g()).unwrap();
            let bound = bound_value(&gm, &p).unwrap();
            let residual = spinor_criterion(&rep, &left, &right, &gm, &p).unwrap();
            assert!(pairing <= bound + 1e-9);
            assert!((residual * residual - 2.0 * (1.0 - pairing / bound)).abs() < 1e-8, "n = {n}, k = {k}");
        }
    }

    #[test]
    fn exact_verdict_on_rationals() {
        use crate::scalar::{rational, Rational};
        let g = Matrix::<Rational>::identity(2);
        let b = Matrix::<Rational>::zeros(2, 2);
        let p = IsotropicPair::<Rational>::coordinate(2, &[0, 1]).unwrap();
        let mut rho = Form::<Rational>::basis(2, 0b11);
        let v = exact_verdict(&rho, &g, &b, &p).unwrap();
        assert!(v.calibrated && v.within_bound);
        rho.set_coeff(0b11, rational(1, 2));
        let v = exact_verdict(&rho, &g, &b, &p).unwrap();
        assert!(!v.calibrated && v.within_bound);
    }

    #[test]
    fn maximizer_finds_volume_form_planes() {
        let gm = GeneralisedMetric::standard(3);
        let rho = Form::basis(3, 0b011);
        let opts = SearchOptions { budget: 300, restarts: 4, seed: 11, tol: 1e-6 };
        let (p, report) = find_maximizer(&rho, &gm, 2, opts).unwrap();
        assert!(report.tight, "{report:?}");
        let r = is_calibrated(&rho, &gm, &p, 1e-5).unwrap();
        assert!(r.calibrated && r.orientation == 1);
    }

    #[test]
    fn energy_scales_with_dilaton() {
        let gm = GeneralisedMetric::standard(2);
        let p = IsotropicPair::<f64>::coordinate(2, &[0, 1]).unwrap();
        let (dbi0, wz0) = energy_density(&gm, 0.0, &Form::zero(2), &p).unwrap();
        let (dbi1, _) = energy_density(&gm, libm::log(2.0), &Form::zero(2), &p).unwrap();
        assert_eq!(wz0, 0.0);
        assert!((dbi1 - dbi0 / 2.0).abs() < 1e-12);
    }
}
