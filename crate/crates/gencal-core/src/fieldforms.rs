//! Differential forms on one chart of `ℝⁿ` (`n ≤ 6`) whose coefficients are
//! rational polynomials: `d`, `d_H`, Lie derivatives, the Courant bracket
//! and the basic-form equations behind T-duality of closed spinors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::exterior::{wedge_sign_odd, Form};
use crate::literal::{format_monomial, parse_monomial, split_terms};
use crate::poly::{format_exponents, parse_product, push_term, Poly, MAX_VARS};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    n: usize,
    coeffs: Vec<Poly>,
}

/// A polynomial vector field; component `i` multiplies `∂_{i+1}`.
pub type PolyVector = Vec<Poly>;

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(CoreError::DimensionOutOfRange { n, min: 0, max: MAX_VARS });
    }
    Ok(())
}

impl PolyForm {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(PolyForm { n, coeffs: alloc::vec![Poly::zero(); 1 << n] })
    }

    pub fn scalar(n: usize, p: Poly) -> Result<Self> {
        let mut f = Self::zero(n)?;
        f.coeffs[0] = p;
        Ok(f)
    }

    /// `p · e^{mask}`.
    pub fn term(n: usize, mask: usize, p: Poly) -> Result<Self> {
        let mut f = Self::zero(n)?;
        f.coeffs[mask] = p;
        Ok(f)
    }

    /// Constant-coefficient form.
    pub fn from_form(form: &Form<Rational>) -> Result<Self> {
        let mut f = Self::zero(form.dim())?;
        for (mask, c) in form.terms() {
            f.coeffs[mask] = Poly::constant(c.clone());
        }
        Ok(f)
    }

    pub fn one_form(components: &[Poly]) -> Result<Self> {
        let mut f = Self::zero(components.len())?;
        for (i, c) in components.iter().enumerate() {
            f.coeffs[1 << i] = c.clone();
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: usize) -> &Poly {
        &self.coeffs[mask]
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(PolyForm { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(PolyForm { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn neg(&self) -> Self {
        PolyForm { n: self.n, coeffs: self.coeffs.iter().map(Poly::neg).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        PolyForm { n: self.n, coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect() }
    }

    pub fn degree_part(&self, p: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if m.count_ones() as usize == p { c.clone() } else { Poly::zero() })
            .collect();
        PolyForm { n: self.n, coeffs }
    }

    /// `Some(p)` when every nonzero term has degree `p`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms().map(|(m, _)| m.count_ones() as usize);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = Self::zero(self.n)?;
        for (a, pa) in self.terms() {
            for (b, pb) in other.terms() {
                if a & b != 0 {
                    continue;
                }
                let prod = pa.mul(pb);
                let prod = if wedge_sign_odd(a, b) { prod.neg() } else { prod };
                out.coeffs[a | b] = out.coeffs[a | b].add(&prod);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = PolyForm { n: self.n, coeffs: alloc::vec![Poly::zero(); 1 << self.n] };
        for (mask, p) in self.terms() {
            for i in 0..self.n {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                let dp = if wedge_sign_odd(1 << i, mask) { dp.neg() } else { dp };
                let slot = mask | 1 << i;
                out.coeffs[slot] = out.coeffs[slot].add(&dp);
            }
        }
        out
    }

    /// `d_H = d + H∧` for a 3-form `H`.
    pub fn d_h(&self, h: &Self) -> Result<Self> {
        match h.homogeneous_degree() {
            Some(3) | None => {}
            found => return Err(CoreError::WrongDegree { expected: 3, found }),
        }
        self.d().add(&h.wedge(self)?)
    }

    /// Contraction with a polynomial vector field.
    pub fn interior(&self, x: &[Poly]) -> Result<Self> {
        if x.len() != self.n {
            return Err(CoreError::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let mut out = Self::zero(self.n)?;
        for (mask, p) in self.terms() {
            for (i, xi) in x.iter().enumerate() {
                if mask >> i & 1 == 0 || xi.is_zero() {
                    continue;
                }
                let below = (mask & ((1 << i) - 1)).count_ones();
                let v = xi.mul(p);
                let v = if below % 2 == 1 { v.neg() } else { v };
                let slot = mask ^ 1 << i;
                out.coeffs[slot] = out.coeffs[slot].add(&v);
            }
        }
        Ok(out)
    }

    /// `ℒ_X = d ι_X + ι_X d`, valid for any polynomial field.
    pub fn cartan_lie(&self, x: &[Poly]) -> Result<Self> {
        self.interior(x)?.d().add(&self.d().interior(x)?)
    }

    /// Lie derivative along a coordinate field `∂_{i+1}`, computed by
    /// differentiating coefficients. Any other field is rejected.
    pub fn lie_derivative(&self, x: &[Poly]) -> Result<Self> {
        let axis = coordinate_axis(x, self.n)?;
        Ok(PolyForm { n: self.n, coeffs: self.coeffs.iter().map(|p| p.derivative(axis)).collect() })
    }

    /// No term contains `e^{axis+1}`.
    pub fn is_basic(&self, axis: usize) -> bool {
        self.terms().all(|(m, _)| m >> axis & 1 == 0)
    }

    /// No coefficient depends on `x_{axis+1}`.
    pub fn is_invariant(&self, axis: usize) -> bool {
        self.coeffs.iter().all(|p| !p.depends_on(axis))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Form<Rational>> {
        Form::from_coeffs(self.n, self.coeffs.iter().map(|p| p.eval(point)).collect())
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Form<f64>> {
        Form::from_coeffs(self.n, self.coeffs.iter().map(|p| p.eval_f64(point)).collect())
    }
}

fn coordinate_axis(x: &[Poly], n: usize) -> Result<usize> {
    if x.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, found: x.len() });
    }
    let mut axis = None;
    for (i, p) in x.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        if axis.is_some() || p != &Poly::one() {
            return Err(CoreError::NonCoordinateField);
        }
        axis = Some(i);
    }
    axis.ok_or(CoreError::NonCoordinateField)
}

/// Coordinate field `∂_{axis+1}`.
pub fn coordinate_field(n: usize, axis: usize) -> PolyVector {
    (0..n).map(|i| if i == axis { Poly::one() } else { Poly::zero() }).collect()
}

/// Parses `x1^2*e23 - 3*x2*e1` over `ℝⁿ`.
pub fn parse_poly_form(text: &str, n: usize) -> Result<PolyForm> {
    let mut out = PolyForm::zero(n)?;
    for (negative, term) in split_terms(text)? {
        let t = parse_product(&term, n)?;
        let mask = match &t.basis {
            Some(b) => parse_monomial(b, n)?,
            None => 0,
        };
        let c = if negative { -t.coeff } else { t.coeff };
        let piece = Poly::monomial(t.exponents, c);
        out.coeffs[mask] = out.coeffs[mask].add(&piece);
    }
    Ok(out)
}

/// Canonical spelling; terms ordered by form degree and index set, then by
/// polynomial degree.
pub fn format_poly_form(form: &PolyForm) -> String {
    let mut masks: Vec<usize> = form.terms().map(|(m, _)| m).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let mut out = String::new();
    let mut first = true;
    for m in masks {
        for (e, c) in form.coeffs[m].ordered_terms() {
            let mono = format_exponents(e);
            let body = match (mono.is_empty(), m == 0) {
                (_, true) => mono,
                (true, false) => format_monomial(m),
                (false, false) => format!("{mono}*{}", format_monomial(m)),
            };
            push_term(&mut out, first, c, &body);
            first = false;
        }
    }
    if first {
        out.push('0');
    }
    out
}

/// Section `X ⊕ ξ` of `T ⊕ T*` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGenVector {
    pub vector: PolyVector,
    pub covector: PolyForm,
}

impl PolyGenVector {
    pub fn new(vector: PolyVector, covector: PolyForm) -> Result<Self> {
        if vector.len() != covector.dim() {
            return Err(CoreError::DimensionMismatch { expected: covector.dim(), found: vector.len() });
        }
        if !(covector.is_zero() || covector.homogeneous_degree() == Some(1)) {
            return Err(CoreError::WrongDegree { expected: 1, found: covector.homogeneous_degree() });
        }
        Ok(PolyGenVector { vector, covector })
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// `X ⊕ (ξ + X⌟B)`.
    pub fn b_transform(&self, b: &PolyForm) -> Result<Self> {
        let covector = self.covector.add(&b.interior(&self.vector)?)?;
        Ok(PolyGenVector { vector: self.vector.clone(), covector })
    }
}

/// `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn vector_bracket(x: &[Poly], y: &[Poly]) -> Result<PolyVector> {
    if x.len() != y.len() {
        return Err(CoreError::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let n = x.len();
    Ok((0..n)
        .map(|i| {
            (0..n).fold(Poly::zero(), |acc, j| acc.add(&x[j].mul(&y[i].derivative(j))).sub(&y[j].mul(&x[i].derivative(j))))
        })
        .collect())
}

/// `⟦X⊕ξ, Y⊕η⟧ = [X,Y] ⊕ (ℒ_X η − ℒ_Y ξ − ½ d(ι_X η − ι_Y ξ))`.
pub fn courant(v: &PolyGenVector, w: &PolyGenVector) -> Result<PolyGenVector> {
    if v.dim() != w.dim() {
        return Err(CoreError::DimensionMismatch { expected: v.dim(), found: w.dim() });
    }
    let bracket = vector_bracket(&v.vector, &w.vector)?;
    let lx_eta = w.covector.cartan_lie(&v.vector)?;
    let ly_xi = v.covector.cartan_lie(&w.vector)?;
    let contraction = w.covector.interior(&v.vector)?.sub(&v.covector.interior(&w.vector)?)?;
    let half = Poly::constant(crate::scalar::rational(1, 2));
    let covector = lx_eta.sub(&ly_xi)?.sub(&contraction.d().mul_poly(&half))?;
    Ok(PolyGenVector { vector: bracket, covector })
}

/// Basic decomposition `ρ = ρ₀ + θ∧ρ₁` relative to `X = ∂_{axis+1}`.
pub fn basic_split(rho: &PolyForm, theta: &PolyForm, axis: usize) -> Result<(PolyForm, PolyForm)> {
    let x = coordinate_field(rho.dim(), axis);
    let rho1 = rho.interior(&x)?;
    let rho0 = rho.sub(&theta.wedge(&rho1)?)?;
    Ok((rho0, rho1))
}

/// Dual spinor `−X⌟ρ − θ∧ρ` for `X = ∂_{axis+1}`.
pub fn tdualize_field(rho: &PolyForm, theta: &PolyForm, axis: usize) -> Result<PolyForm> {
    let x = coordinate_field(rho.dim(), axis);
    rho.interior(&x)?.neg().sub(&theta.wedge(rho)?)
}

/// The pair of basic-form equations for `d(e^{−φ̃}ρ) = e^{−φ̃}φ`:
/// `φ₀ = −dφ̃∧ρ₀ + dρ₀ + dθ∧ρ₁` and `φ₁ = dφ̃∧ρ₁ − dρ₁`.
fn basic_equations_hold(
    rho: (&PolyForm, &PolyForm),
    phi: (&PolyForm, &PolyForm),
    d_dilaton: &PolyForm,
    d_theta: &PolyForm,
) -> Result<bool> {
    let (rho0, rho1) = rho;
    let (phi0, phi1) = phi;
    let rhs0 = d_dilaton.wedge(rho0)?.neg().add(&rho0.d())?.add(&d_theta.wedge(rho1)?)?;
    let rhs1 = d_dilaton.wedge(rho1)?.sub(&rho1.d())?;
    Ok(phi0 == &rhs0 && phi1 == &rhs1)
}

/// Inputs of the intertwining check: basic components of `ρ` and `φ`, the
/// coordinate dilaton `φ̃`, the 1-form `θ`, and the duality axis.
#[derive(Clone, Debug)]
pub struct IntertwineData {
    pub rho0: PolyForm,
    pub rho1: PolyForm,
    pub phi0: PolyForm,
    pub phi1: PolyForm,
    pub dilaton: Poly,
    pub theta: PolyForm,
    pub axis: usize,
}

impl IntertwineData {
    fn validate(&self) -> Result<()> {
        let n = self.theta.dim();
        if self.axis >= n || self.theta.homogeneous_degree() != Some(1) {
            return Err(CoreError::InvalidDualityContext);
        }
        if self.theta.coeff(1 << self.axis) != &Poly::one() {
            return Err(CoreError::InvalidDualityContext);
        }
        for f in [&self.rho0, &self.rho1, &self.phi0, &self.phi1] {
            if f.dim() != n {
                return Err(CoreError::DimensionMismatch { expected: n, found: f.dim() });
            }
            if !f.is_basic(self.axis) {
                return Err(CoreError::NotBasic);
            }
        }
        let all_invariant = [&self.rho0, &self.rho1, &self.phi0, &self.phi1, &self.theta]
            .iter()
            .all(|f| f.is_invariant(self.axis))
            && !self.dilaton.depends_on(self.axis);
        if !all_invariant {
            return Err(CoreError::NotInvariant);
        }
        Ok(())
    }
}

/// Evaluates the basic-form equations for `(ρ, φ)` and for the T-dual pair
/// `(ρ^⊤, −φ^⊤)`, where `ρ^⊤ = −X⌟ρ − θ∧ρ` is decomposed again into basic
/// parts. Returns `(holds before, holds after)`.
pub fn tdual_intertwine_check(data: &IntertwineData) -> Result<(bool, bool)> {
    data.validate()?;
    let n = data.theta.dim();
    let d_dilaton = PolyForm::scalar(n, data.dilaton.clone())?.d();
    let d_theta = data.theta.d();
    let before = basic_equations_hold((&data.rho0, &data.rho1), (&data.phi0, &data.phi1), &d_dilaton, &d_theta)?;

    let rho = data.rho0.add(&data.theta.wedge(&data.rho1)?)?;
    let phi = data.phi0.add(&data.theta.wedge(&data.phi1)?)?;
    let rho_t = tdualize_field(&rho, &data.theta, data.axis)?;
    let phi_t = tdualize_field(&phi, &data.theta, data.axis)?.neg();
    let (rho_t0, rho_t1) = basic_split(&rho_t, &data.theta, data.axis)?;
    let (phi_t0, phi_t1) = basic_split(&phi_t, &data.theta, data.axis)?;
    let after = basic_equations_hold((&rho_t0, &rho_t1), (&phi_t0, &phi_t1), &d_dilaton, &d_theta)?;
    Ok((before, after))
}

/// Fills `φ₀, φ₁` from the first set of equations so that `holds before`
/// is true by construction.
pub fn solve_for_phi(
    rho0: &PolyForm,
    rho1: &PolyForm,
    dilaton: &Poly,
    theta: &PolyForm,
) -> Result<(PolyForm, PolyForm)> {
    let n = theta.dim();
    let d_dilaton = PolyForm::scalar(n, dilaton.clone())?.d();
    let phi0 = d_dilaton.wedge(rho0)?.neg().add(&rho0.d())?.add(&theta.d().wedge(rho1)?)?;
    let phi1 = d_dilaton.wedge(rho1)?.sub(&rho1.d())?;
    Ok((phi0, phi1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn pf(text: &str, n: usize) -> PolyForm {
        parse_poly_form(text, n).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(pf("x1*e2", 2).d(), pf("e12", 2));
        let h = pf("x1*e123", 3);
        assert_eq!(PolyForm::scalar(3, Poly::one()).unwrap().d_h(&h).unwrap(), h);
        assert!(PolyForm::zero(3).unwrap().d_h(&pf("e12", 3)).is_err());
        let w = pf("x1^2*x3*e2 - x2*e13 + 3*x3", 3);
        assert!(w.d().d().is_zero());
    }

    #[test]
    fn lie_examples() {
        let dn = coordinate_field(3, 2);
        assert_eq!(pf("x3*e1", 3).lie_derivative(&dn).unwrap(), pf("e1", 3));
        assert!(pf("x1*e2", 3).lie_derivative(&dn).unwrap().is_zero());
        let w = pf("x1*x3^2*e2 + x2*e13", 3);
        assert_eq!(w.lie_derivative(&dn).unwrap(), w.cartan_lie(&dn).unwrap());
        let bent = alloc::vec![Poly::var(0), Poly::zero(), Poly::zero()];
        assert_eq!(w.lie_derivative(&bent), Err(CoreError::NonCoordinateField));
    }

    #[test]
    fn courant_examples() {
        let e = |i: usize| PolyGenVector::new(coordinate_field(2, i), PolyForm::zero(2).unwrap()).unwrap();
        let c = courant(&e(0), &e(1)).unwrap();
        assert!(c.vector.iter().all(Poly::is_zero) && c.covector.is_zero());
        let w = PolyGenVector::new(alloc::vec![Poly::zero(), Poly::zero()], pf("x1*e2", 2)).unwrap();
        let c = courant(&e(0), &w).unwrap();
        assert_eq!(c.covector, pf("e2", 2));
    }

    #[test]
    fn literal_round_trip() {
        let f = pf("x1^2*e23 - 3*x2*e1", 3);
        assert_eq!(format_poly_form(&f), "-3*x2*e1 + x1^2*e23");
        assert_eq!(pf(&format_poly_form(&f), 3), f);
    }

    #[test]
    fn intertwine_degenerate_case() {
        let theta = pf("e3", 3);
        let rho0 = pf("x1*e2 + x2^2", 3);
        let rho1 = PolyForm::zero(3).unwrap();
        let dilaton = parse_poly("x1*x2", 3).unwrap();
        let (phi0, phi1) = solve_for_phi(&rho0, &rho1, &dilaton, &theta).unwrap();
        let data = IntertwineData { rho0, rho1, phi0, phi1, dilaton, theta, axis: 2 };
        assert_eq!(tdual_intertwine_check(&data).unwrap(), (true, true));
        let bad = IntertwineData { rho0: pf("x3*e1", 3), ..data.clone() };
        assert_eq!(tdual_intertwine_check(&bad), Err(CoreError::NotInvariant));
        let bad = IntertwineData { rho0: pf("e3", 3), ..data };
        assert_eq!(tdual_intertwine_check(&bad), Err(CoreError::NotBasic));
    }
}
