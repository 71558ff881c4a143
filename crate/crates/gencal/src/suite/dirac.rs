use gencal_core::dirac::{norm, Chirality, DiracSpinor, GammaRep, StructureKind};
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::sample;
use gencal_core::scalar::i_pow;
use gencal_core::{Complex64, Form, GenVector};
use rand::Rng;

use super::{core, ensure, sign, Case, CaseResult, Property};

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "anticommutators", cases: 11, check: anticommutators },
        Property { name: "charge_conj_commutation", cases: 33, check: charge_conj_commutation },
        Property { name: "charge_conj_square", cases: 33, check: charge_conj_square },
        Property { name: "volume_eigenvalue", cases: 33, check: volume_eigenvalue },
        Property { name: "commutprop", cases: 60, check: commutprop },
        Property { name: "selfdual", cases: 60, check: selfdual },
        Property { name: "unit_normalisation", cases: 2, check: unit_normalisation },
    ]
}

fn spinor(case: &mut Case, rep: &GammaRep, chiral: bool) -> Result<DiracSpinor, String> {
    let v = sample::complex_vec(&mut case.rng, rep.spinor_dim());
    let psi = if chiral && rep.n().is_multiple_of(2) {
        let c = if case.rng.gen::<bool>() { Chirality::Plus } else { Chirality::Minus };
        core(rep.project_chiral(&v, c))?
    } else {
        core(rep.spinor(v))?
    };
    core(psi.normalized())
}

fn close_vec(a: &[Complex64], b: &[Complex64], tol: f64, what: &str) -> CaseResult {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = norm(a).max(norm(b)).max(1.0);
    let d = norm(&diff);
    ensure(d <= tol * scale, || format!("{what}: differ by {d:e}"))
}

fn close_forms(a: &Form<Complex64>, b: &Form<Complex64>, tol: f64, what: &str) -> CaseResult {
    let d = (a - b).max_abs();
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    ensure(d <= tol * scale, || format!("{what}: differ by {d:e}"))
}

fn anticommutators(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 12);
    let rep = core(GammaRep::new(n))?;
    for i in 0..n {
        for j in 0..n {
            let sum = rep.generator(i).mul(rep.generator(j)).to_dense();
            let other = rep.generator(j).mul(rep.generator(i)).to_dense();
            for (r, (x, y)) in sum.iter().zip(&other).enumerate() {
                for (c, (a, b)) in x.iter().zip(y).enumerate() {
                    let expected = if i == j && r == c { -2.0 } else { 0.0 };
                    ensure((a + b - Complex64::new(expected, 0.0)).norm() < 1e-12, || {
                        format!("c_{i} c_{j} + c_{j} c_{i} is not -2 delta at n = {n}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn charge_conj_commutation(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 12);
    let rep = core(GammaRep::new(n))?;
    let psi = spinor(case, &rep, false)?;
    let s = sign(rep.m() + 1);
    for i in 0..n {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        let lhs = rep.charge_conj(&core(rep.vector_act(&x, &psi))?);
        let rhs = core(rep.vector_act(&x, &rep.charge_conj(&psi)))?;
        let rhs: Vec<Complex64> = rhs.amplitudes.iter().map(|a| a * s).collect();
        close_vec(&lhs.amplitudes, &rhs, case.tol, &format!("A(c_{i} psi) against (-1)^(m+1) c_{i} A(psi)"))?;
    }
    Ok(())
}

fn charge_conj_square(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 12);
    let rep = core(GammaRep::new(n))?;
    let m = rep.m();
    let psi = spinor(case, &rep, false)?;
    let twice = rep.charge_conj(&rep.charge_conj(&psi));
    let expected: Vec<Complex64> = psi.amplitudes.iter().map(|a| a * sign(m * (m + 1) / 2)).collect();
    close_vec(&twice.amplitudes, &expected, case.tol, "A squared")
}

fn volume_eigenvalue(case: &mut Case) -> CaseResult {
    let n = case.dim(2, 12);
    let rep = core(GammaRep::new(n))?;
    let m = rep.m();
    let psi = spinor(case, &rep, true)?;
    let lambda = match psi.chirality {
        Some(c) => i_pow(m) * (sign(m * (m + 1) / 2) * c.sign() as f64),
        None if n % 2 == 1 => i_pow(m + 1) * sign(m * (m + 1) / 2),
        None => return Err("projected spinor lost its chirality".into()),
    };
    let expected: Vec<Complex64> = psi.amplitudes.iter().map(|a| a * lambda).collect();
    close_vec(&rep.volume().apply(&psi.amplitudes), &expected, case.tol, "volume element action")
}

/// `fierz(X·Ψ_L, Ψ_R) = (−1)^{n(n−1)/2} (−X⌟ + X♭∧) fierz(Ψ_L, Ψ_R)`.
fn commutprop(case: &mut Case) -> CaseResult {
    let n = case.dim(6, 8);
    let rep = core(GammaRep::new(n))?;
    let left = spinor(case, &rep, false)?;
    let right = spinor(case, &rep, false)?;
    let x = sample::normal_vec(&mut case.rng, n);
    let lhs = core(rep.fierz(&core(rep.vector_act(&x, &left))?, &right))?;
    let xc: Vec<Complex64> = x.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let v = GenVector { vector: xc.clone(), covector: xc };
    let rhs = core(v.act(&core(rep.fierz(&left, &right))?))?.scale(&Complex64::new(sign(n * (n - 1) / 2), 0.0));
    close_forms(&lhs, &rhs, case.tol, &format!("fierz(X psi_L, psi_R) at n = {n}"))
}

/// `G̃ fierz(Ψ_L, Ψ_R) = ± (−1)^{m(m−1)/2} iᵐ fierz(Ψ_L, Ψ_R)`; either sign
/// is accepted, but one of them must hold.
fn selfdual(case: &mut Case) -> CaseResult {
    let n = case.dim(6, 8);
    let m = n / 2;
    let rep = core(GammaRep::new(n))?;
    let left = spinor(case, &rep, true)?;
    let right = spinor(case, &rep, true)?;
    let f = core(rep.fierz(&left, &right))?;
    let gm = GeneralisedMetric::<f64>::standard(n);
    let image = core(gm.gtilde(&f))?;
    let factor = i_pow(m) * sign(m * (m - 1) / 2);
    let plus = f.scale(&factor);
    let minus = f.scale(&-factor);
    close_forms(&image, &plus, case.tol, "")
        .or_else(|_| close_forms(&image, &minus, case.tol, ""))
        .map_err(|_| format!("G~ fierz is not +-(-1)^(m(m-1)/2) i^m fierz at n = {n}"))
}

fn unit_normalisation(case: &mut Case) -> CaseResult {
    let kind = if case.index.is_multiple_of(2) { StructureKind::G2 } else { StructureKind::Spin7 };
    let rep = core(GammaRep::new(kind.dimension()))?;
    let psi = core(rep.canonical_spinor(kind))?;
    let f = core(rep.fierz(&psi, &psi))?;
    let c = f.coeff(0);
    ensure((c - Complex64::new(1.0, 0.0)).norm() < case.tol, || format!("{} degree-0 coefficient is {c}", kind.name()))
}
