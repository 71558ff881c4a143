//! Complex Dirac spinors `Δ_n ≅ ℂ^{2^⌊n/2⌋}` for the flat metric, with the
//! charge conjugation `𝒜`, bilinears and the fierzing map.
//!
//! Clifford generators act by `c_i = iΓ_i`, where the `Γ_i` are the
//! Jordan–Wigner matrices built from Pauli factors, so `c_i² = −1` and each
//! `c_i` is anti-hermitian. Every product of generators is a monomial
//! matrix (one nonzero entry per column, a power of `i`), stored as a
//! permutation plus phases.
//!
//! Spinors are expressed in an orthonormal frame. Forms produced here
//! (fierz outputs) carry frame coefficients; for a non-flat metric, convert
//! them with [`crate::exterior::HodgeStar::from_frame`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::exterior::Form;
use crate::scalar::{i_pow, Complex64};

/// A matrix with exactly one nonzero entry per column: column `j` maps to
/// row `perm[j]` with coefficient `phase[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    phase: Vec<Complex64>,
}

impl MonomialMatrix {
    pub fn identity(d: usize) -> Self {
        MonomialMatrix { perm: (0..d).collect(), phase: vec![Complex64::new(1.0, 0.0); d] }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.size();
        let mut perm = vec![0; d];
        let mut phase = vec![Complex64::new(0.0, 0.0); d];
        for j in 0..d {
            let mid = other.perm[j];
            perm[j] = self.perm[mid];
            phase[j] = self.phase[mid] * other.phase[j];
        }
        MonomialMatrix { perm, phase }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        MonomialMatrix { perm: self.perm.clone(), phase: self.phase.iter().map(|p| p * s).collect() }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        MonomialMatrix { perm: self.perm.clone(), phase: self.phase.iter().map(|p| p.conj()).collect() }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (j, x) in v.iter().enumerate() {
            out[self.perm[j]] += self.phase[j] * x;
        }
        out
    }

    /// `Some(λ)` if `self = λ · Id`.
    pub fn as_scalar(&self) -> Option<Complex64> {
        let first = *self.phase.first()?;
        let ok = self.perm.iter().enumerate().all(|(j, &p)| p == j)
            && self.phase.iter().all(|p| (p - first).norm() < 1e-12);
        ok.then_some(first)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.perm == other.perm && self.phase.iter().zip(&other.phase).all(|(a, b)| (a - b).norm() < 1e-12)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let d = self.size();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for j in 0..d {
            out[self.perm[j]][j] = self.phase[j];
        }
        out
    }
}

fn pauli_kron(factors: &[u8]) -> MonomialMatrix {
    // 0 = I, 1 = X, 2 = Y, 3 = Z; the first factor is the most significant.
    let d = 1usize << factors.len();
    let mut perm = vec![0; d];
    let mut phase = vec![Complex64::new(1.0, 0.0); d];
    for j in 0..d {
        let mut row = j;
        let mut ph = Complex64::new(1.0, 0.0);
        for (pos, &f) in factors.iter().enumerate() {
            let bit_index = factors.len() - 1 - pos;
            let bit = (j >> bit_index) & 1;
            match f {
                1 => row ^= 1 << bit_index,
                2 => {
                    row ^= 1 << bit_index;
                    ph *= if bit == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
                }
                3 if bit == 1 => ph = -ph,
                _ => {}
            }
        }
        perm[j] = row;
        phase[j] = ph;
    }
    MonomialMatrix { perm, phase }
}

/// Gamma matrices, chirality data and the charge conjugation matrix.
#[derive(Clone, Debug)]
pub struct GammaRep {
    n: usize,
    m: usize,
    /// `c_K` for every subset `K`, ordered product `c_{k1} c_{k2} …` with
    /// `k1 < k2 < …`.
    products: Vec<MonomialMatrix>,
    conj_matrix: MonomialMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiracSpinor {
    pub amplitudes: Vec<Complex64>,
    pub chirality: Option<Chirality>,
}

fn sign_of(odd: bool) -> f64 {
    if odd {
        -1.0
    } else {
        1.0
    }
}

impl GammaRep {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=12).contains(&n) {
            return Err(CoreError::DimensionOutOfRange { n, min: 2, max: 12 });
        }
        let m = n / 2;
        let i = Complex64::new(0.0, 1.0);
        let mut gens = Vec::with_capacity(n);
        for j in 0..m {
            for kind in [1u8, 2u8] {
                let mut factors = vec![0u8; m];
                for f in factors.iter_mut().take(j) {
                    *f = 3;
                }
                factors[j] = kind;
                gens.push(pauli_kron(&factors).scale(i));
            }
        }
        if n % 2 == 1 {
            let z = pauli_kron(&vec![3u8; m]).scale(i);
            let target = i_pow(m + 1) * sign_of((m * (m + 1) / 2) % 2 == 1);
            let mut vol = MonomialMatrix::identity(1 << m);
            for g in &gens {
                vol = vol.mul(g);
            }
            let with_plus = vol.mul(&z);
            let last = if with_plus.as_scalar().map(|s| (s - target).norm() < 1e-12).unwrap_or(false) {
                z
            } else {
                z.scale(Complex64::new(-1.0, 0.0))
            };
            gens.push(last);
        }
        let d = 1usize << m;
        let mut products = Vec::with_capacity(1 << n);
        products.push(MonomialMatrix::identity(d));
        for k in 1usize..1 << n {
            let low = k.trailing_zeros() as usize;
            let rest = &products[k & (k - 1)];
            products.push(gens[low].mul(rest));
        }
        let sign_c = sign_of((m + 1) % 2 == 1);
        let sign_cc = sign_of((m * (m + 1) / 2) % 2 == 1);
        let conj_matrix = products
            .iter()
            .find(|c| {
                let commutes = (0..n).all(|j| {
                    let lhs = c.mul(&products[1 << j].conj());
                    let rhs = products[1 << j].mul(c).scale(Complex64::new(sign_c, 0.0));
                    lhs.approx_eq(&rhs)
                });
                commutes
                    && c.mul(&c.conj())
                        .as_scalar()
                        .map(|s| (s - Complex64::new(sign_cc, 0.0)).norm() < 1e-12)
                        .unwrap_or(false)
            })
            .cloned()
            .expect("a charge conjugation monomial exists for every n");
        Ok(GammaRep { n, m, products, conj_matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `⌊n/2⌋`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m
    }

    /// Matrix of the generator `e_{i+1}`.
    pub fn generator(&self, i: usize) -> &MonomialMatrix {
        &self.products[1 << i]
    }

    pub fn monomial(&self, mask: usize) -> &MonomialMatrix {
        &self.products[mask]
    }

    /// Action of the volume element `e_1 ⋯ e_n`.
    pub fn volume(&self) -> &MonomialMatrix {
        &self.products[(1 << self.n) - 1]
    }

    pub fn conj_matrix(&self) -> &MonomialMatrix {
        &self.conj_matrix
    }

    /// Eigenvalue of the volume element on `Δ±` (`n` even), or its scalar
    /// value (`n` odd).
    pub fn volume_eigenvalue(&self, chirality: Chirality) -> Complex64 {
        let m = self.m;
        let base = sign_of((m * (m + 1) / 2) % 2 == 1);
        if self.n % 2 == 0 {
            i_pow(m) * base * chirality.sign() as f64
        } else {
            i_pow(m + 1) * base
        }
    }

    fn check(&self, psi: &DiracSpinor) -> Result<()> {
        if psi.amplitudes.len() != self.spinor_dim() {
            return Err(CoreError::DimensionMismatch { expected: self.spinor_dim(), found: psi.amplitudes.len() });
        }
        Ok(())
    }

    pub fn spinor(&self, amplitudes: Vec<Complex64>) -> Result<DiracSpinor> {
        let psi = DiracSpinor { amplitudes, chirality: None };
        self.check(&psi)?;
        Ok(DiracSpinor { chirality: self.detect_chirality(&psi.amplitudes, 1e-9), ..psi })
    }

    fn detect_chirality(&self, v: &[Complex64], tol: f64) -> Option<Chirality> {
        if self.n % 2 == 1 || norm(v) <= tol {
            return None;
        }
        let w = self.volume().apply(v);
        [Chirality::Plus, Chirality::Minus].into_iter().find(|&c| {
            let lam = self.volume_eigenvalue(c);
            w.iter().zip(v).all(|(a, b)| (a - lam * b).norm() <= tol * f64::max(1.0, norm(v)))
        })
    }

    /// Projection `(1 + ϖ/λ)/2` onto `Δ±` (`n` even only).
    pub fn project_chiral(&self, v: &[Complex64], chirality: Chirality) -> Result<DiracSpinor> {
        if self.n % 2 == 1 {
            return Err(CoreError::ChiralityMismatch);
        }
        let lam = self.volume_eigenvalue(chirality);
        let w = self.volume().apply(v);
        let amplitudes = v.iter().zip(&w).map(|(a, b)| (a + b / lam) * 0.5).collect();
        Ok(DiracSpinor { amplitudes, chirality: Some(chirality) })
    }

    /// Ordered Clifford action `Σ_K a_K c_K Ψ` of a form in frame coefficients.
    pub fn clifford_act(&self, form: &Form<Complex64>, psi: &DiracSpinor) -> Result<DiracSpinor> {
        if form.dim() != self.n {
            return Err(CoreError::DimensionMismatch { expected: self.n, found: form.dim() });
        }
        self.check(psi)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.spinor_dim()];
        for (mask, c) in form.terms() {
            for (o, x) in out.iter_mut().zip(self.products[mask].apply(&psi.amplitudes)) {
                *o += c * x;
            }
        }
        let parity_flip = form.parity() == crate::exterior::Parity::Odd;
        let chirality = match (psi.chirality, form.parity()) {
            (Some(c), crate::exterior::Parity::Even) => Some(c),
            (Some(c), crate::exterior::Parity::Odd) if parity_flip => Some(c.flip()),
            _ => None,
        };
        Ok(DiracSpinor { amplitudes: out, chirality: chirality.filter(|_| self.n % 2 == 0) })
    }

    /// Action of the vector `Σ x_i e_i`.
    pub fn vector_act(&self, x: &[f64], psi: &DiracSpinor) -> Result<DiracSpinor> {
        let form = Form::one_form(&x.iter().map(|v| Complex64::new(*v, 0.0)).collect::<Vec<_>>());
        self.clifford_act(&form, psi)
    }

    /// `𝒜(Ψ) = C · conj(Ψ)`.
    pub fn charge_conj(&self, psi: &DiracSpinor) -> DiracSpinor {
        let conj: Vec<Complex64> = psi.amplitudes.iter().map(|a| a.conj()).collect();
        let chirality = psi.chirality.map(|c| if self.m % 2 == 1 { c.flip() } else { c });
        DiracSpinor { amplitudes: self.conj_matrix.apply(&conj), chirality }
    }

    /// `𝒜(Ψ, Φ) = q(𝒜Ψ, Φ)`.
    pub fn bilinear_a(&self, psi: &DiracSpinor, phi: &DiracSpinor) -> Complex64 {
        hermitian(&self.charge_conj(psi).amplitudes, &phi.amplitudes)
    }

    /// Form with coefficients `𝒜(Ψ_L, e_K · Ψ_R)`, in frame coefficients.
    pub fn fierz(&self, left: &DiracSpinor, right: &DiracSpinor) -> Result<Form<Complex64>> {
        self.check(left)?;
        self.check(right)?;
        let a = self.charge_conj(left).amplitudes;
        let coeffs = self.products.iter().map(|c| hermitian(&a, &c.apply(&right.amplitudes))).collect();
        Form::from_coeffs(self.n, coeffs)
    }

    /// `(Ψ + 𝒜Ψ)/‖·‖`, a fixed point of `𝒜` when `𝒜² = 1` (`n ≡ 0, 7 mod 8`
    /// and neighbours with `m ≡ 0, 3 mod 4`).
    pub fn real_part_spinor(&self, v: &[Complex64]) -> Result<DiracSpinor> {
        let psi = DiracSpinor { amplitudes: v.to_vec(), chirality: None };
        self.check(&psi)?;
        let a = self.charge_conj(&psi).amplitudes;
        let sum: Vec<Complex64> = v.iter().zip(&a).map(|(x, y)| x + y).collect();
        let nrm = norm(&sum);
        if nrm < 1e-12 {
            return Err(CoreError::ZeroSpinor);
        }
        let amplitudes: Vec<Complex64> = sum.iter().map(|x| x / nrm).collect();
        let chirality = self.detect_chirality(&amplitudes, 1e-9);
        Ok(DiracSpinor { amplitudes, chirality })
    }

    pub fn is_real(&self, psi: &DiracSpinor, tol: f64) -> bool {
        let a = self.charge_conj(psi).amplitudes;
        a.iter().zip(&psi.amplitudes).all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Canonical unit spinor for the straight structure of each kind,
    /// built from the first basis vector.
    pub fn canonical_spinor(&self, kind: StructureKind) -> Result<DiracSpinor> {
        kind.check_dim(self.n)?;
        let mut e0 = vec![Complex64::new(0.0, 0.0); self.spinor_dim()];
        e0[0] = Complex64::new(1.0, 0.0);
        match kind {
            StructureKind::SU3 => {
                let p = self.project_chiral(&e0, Chirality::Plus)?;
                let p = if norm(&p.amplitudes) < 1e-12 { self.project_chiral(&e0, Chirality::Minus)? } else { p };
                normalized(p)
            }
            StructureKind::G2 => self
                .real_part_spinor(&e0)
                .or_else(|_| self.real_part_spinor(&e0.iter().map(|x| x * Complex64::new(0.0, 1.0)).collect::<Vec<_>>())),
            StructureKind::Spin7 => {
                let p = self.project_chiral(&e0, Chirality::Plus)?;
                let p = if norm(&p.amplitudes) < 1e-12 { self.project_chiral(&e0, Chirality::Minus)? } else { p };
                let r = self.real_part_spinor(&p.amplitudes)?;
                Ok(r)
            }
        }
    }

    /// Structure forms of a `G_L × G_R` pair of unit spinors.
    pub fn structure_forms(
        &self,
        kind: StructureKind,
        left: &DiracSpinor,
        right: &DiracSpinor,
    ) -> Result<StructureForms> {
        kind.check_dim(self.n)?;
        for psi in [left, right] {
            let nrm = norm(&psi.amplitudes);
            if (nrm - 1.0).abs() > 1e-9 {
                return Err(CoreError::NotUnit(nrm));
            }
        }
        let tol = 1e-9;
        let forms = match kind {
            StructureKind::G2 => {
                for psi in [left, right] {
                    if !self.is_real(psi, tol) {
                        return Err(CoreError::NotReal);
                    }
                }
                let f = self.fierz(left, right)?;
                vec![("rho_even", f.even_part()), ("rho_odd", f.odd_part())]
            }
            StructureKind::Spin7 => {
                for psi in [left, right] {
                    if !self.is_real(psi, tol) {
                        return Err(CoreError::NotReal);
                    }
                    if self.detect_chirality(&psi.amplitudes, tol).is_none() {
                        return Err(CoreError::ChiralityMismatch);
                    }
                }
                vec![("rho", self.fierz(left, right)?)]
            }
            StructureKind::SU3 => {
                for psi in [left, right] {
                    if self.detect_chirality(&psi.amplitudes, tol).is_none() {
                        return Err(CoreError::ChiralityMismatch);
                    }
                }
                let rho0 = self.fierz(&self.charge_conj(left), right)?;
                let rho1 = self.fierz(left, right)?;
                vec![("rho0", rho0), ("rho1", rho1)]
            }
        };
        let report = forms
            .iter()
            .map(|(name, f)| FormValidity {
                name,
                degree_support: f.degree_support(tol),
                max_imaginary: f.imag_part().max_abs(),
            })
            .collect();
        Ok(StructureForms { kind, forms, report })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    G2,
    Spin7,
    SU3,
}

impl StructureKind {
    pub fn dimension(self) -> usize {
        match self {
            StructureKind::G2 => 7,
            StructureKind::Spin7 => 8,
            StructureKind::SU3 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::G2 => "G2",
            StructureKind::Spin7 => "Spin7",
            StructureKind::SU3 => "SU3",
        }
    }

    fn check_dim(self, n: usize) -> Result<()> {
        if n != self.dimension() {
            return Err(CoreError::WrongDimensionForKind { kind: self.name(), n });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormValidity {
    pub name: &'static str,
    pub degree_support: Vec<usize>,
    pub max_imaginary: f64,
}

#[derive(Clone, Debug)]
pub struct StructureForms {
    pub kind: StructureKind,
    pub forms: Vec<(&'static str, Form<Complex64>)>,
    pub report: Vec<FormValidity>,
}

impl StructureForms {
    pub fn get(&self, name: &str) -> Option<&Form<Complex64>> {
        self.forms.iter().find(|(n, _)| *n == name).map(|(_, f)| f)
    }
}

/// `q(a, b) = Σ conj(a_i) b_i`.
pub fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum())
}

fn normalized(psi: DiracSpinor) -> Result<DiracSpinor> {
    let nrm = norm(&psi.amplitudes);
    if nrm < 1e-12 {
        return Err(CoreError::ZeroSpinor);
    }
    Ok(DiracSpinor { amplitudes: psi.amplitudes.iter().map(|x| x / nrm).collect(), chirality: psi.chirality })
}

impl DiracSpinor {
    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn normalized(&self) -> Result<Self> {
        normalized(self.clone())
    }

    /// Interleaved `[re₀, im₀, re₁, im₁, …]`.
    pub fn to_interleaved(&self) -> Vec<f64> {
        self.amplitudes.iter().flat_map(|a| [a.re, a.im]).collect()
    }

    pub fn from_interleaved(values: &[f64]) -> Result<Vec<Complex64>> {
        if values.len() % 2 != 0 {
            return Err(CoreError::DimensionMismatch { expected: values.len() + 1, found: values.len() });
        }
        Ok(values.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anticommutators() {
        for n in 2..=9 {
            let rep = GammaRep::new(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let ab = rep.generator(i).mul(rep.generator(j));
                    let ba = rep.generator(j).mul(rep.generator(i));
                    if i == j {
                        assert_eq!(ab.as_scalar(), Some(Complex64::new(-1.0, 0.0)));
                    } else {
                        assert!(ab.approx_eq(&ba.scale(Complex64::new(-1.0, 0.0))));
                    }
                }
            }
        }
    }

    #[test]
    fn volume_in_seven_dimensions_is_identity() {
        let rep = GammaRep::new(7).unwrap();
        assert_eq!(rep.volume().as_scalar(), Some(Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn conjugation_squares() {
        for n in 2..=10 {
            let rep = GammaRep::new(n).unwrap();
            let m = n / 2;
            let c = rep.conj_matrix();
            let expected = sign_of((m * (m + 1) / 2) % 2 == 1);
            assert_eq!(c.mul(&c.conj()).as_scalar(), Some(Complex64::new(expected, 0.0)));
        }
    }

    #[test]
    fn two_dimensional_chirality() {
        let rep = GammaRep::new(2).unwrap();
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.2)];
        for c in [Chirality::Plus, Chirality::Minus] {
            let p = rep.project_chiral(&v, c).unwrap();
            let w = rep.volume().apply(&p.amplitudes);
            let lam = Complex64::new(0.0, -(c.sign() as f64));
            for (a, b) in w.iter().zip(&p.amplitudes) {
                assert!((a - lam * b).norm() < 1e-12);
            }
        }
    }
}
