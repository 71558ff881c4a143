//! Multivariate polynomials with rational coefficients in `x1, …, x6`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::literal::{parse_rational, split_terms, LiteralScalar};
use crate::scalar::Rational;

pub const MAX_VARS: usize = 6;
/// Largest total degree accepted from literals.
pub const MAX_LITERAL_DEGREE: u32 = 6;

pub type Exponents = [u8; MAX_VARS];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

fn total_degree(e: &Exponents) -> u32 {
    e.iter().map(|&d| d as u32).sum()
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; MAX_VARS], c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// Coordinate `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Exponents, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(exponents, c);
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; MAX_VARS]).cloned(),
            _ => None,
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Highest variable index (plus one) that occurs.
    pub fn variables_used(&self) -> usize {
        self.terms.keys().map(|e| e.iter().rposition(|&d| d > 0).map_or(0, |i| i + 1)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Poly::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += *y;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `∂/∂x_{var+1}`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.add_term(d, c * Rational::from_integer(e[var].into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &d) in e.iter().enumerate() {
                for _ in 0..d {
                    term *= &point[i];
                }
            }
            total += term;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let base = <f64 as crate::scalar::Scalar>::from_rational(c);
                e.iter().enumerate().fold(base, |acc, (i, &d)| acc * libm::pow(point[i], d as f64))
            })
            .sum()
    }

    /// Terms in printing order: by total degree, then lexicographically
    /// descending exponents.
    pub(crate) fn ordered_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| total_degree(a.0).cmp(&total_degree(b.0)).then(b.0.cmp(a.0)));
        v
    }
}

pub(crate) fn format_exponents(e: &Exponents) -> String {
    let mut out = String::new();
    for (i, &d) in e.iter().enumerate() {
        if d == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        let _ = write!(out, "x{}", i + 1);
        if d > 1 {
            let _ = write!(out, "^{d}");
        }
    }
    out
}

/// One product term: coefficient, exponents, and an optional `e…` factor.
pub(crate) struct ParsedTerm {
    pub coeff: Rational,
    pub exponents: Exponents,
    pub basis: Option<String>,
}

/// Parses `c*x1^2*x3*e12`-style products (factors in any order).
pub(crate) fn parse_product(term: &str, nvars: usize) -> Result<ParsedTerm> {
    let mut coeff = Rational::one();
    let mut exponents = [0u8; MAX_VARS];
    let mut basis = None;
    for factor in term.split('*').map(str::trim) {
        if factor.is_empty() {
            return Err(CoreError::Parse(format!("empty factor in `{term}`")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, pow) = match rest.split_once('^') {
                Some((i, p)) => (i, p.trim().parse::<u8>().map_err(|_| CoreError::Parse(format!("bad power in `{factor}`")))?),
                None => (rest, 1),
            };
            let i: usize = idx.trim().parse().map_err(|_| CoreError::Parse(format!("bad variable `{factor}`")))?;
            if i == 0 || i > nvars {
                return Err(CoreError::Parse(format!("variable `{factor}` outside x1..x{nvars}")));
            }
            exponents[i - 1] = exponents[i - 1]
                .checked_add(pow)
                .ok_or_else(|| CoreError::Parse(format!("power overflow in `{term}`")))?;
        } else if factor.starts_with('e') {
            if basis.is_some() {
                return Err(CoreError::Parse(format!("two basis monomials in `{term}`")));
            }
            basis = Some(String::from(factor));
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    if total_degree(&exponents) > MAX_LITERAL_DEGREE {
        return Err(CoreError::Parse(format!("degree above {MAX_LITERAL_DEGREE} in `{term}`")));
    }
    Ok(ParsedTerm { coeff, exponents, basis })
}

/// Parses a polynomial literal such as `1/2*x1^2 - x2*x3 + 4`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    if nvars > MAX_VARS {
        return Err(CoreError::DimensionOutOfRange { n: nvars, min: 0, max: MAX_VARS });
    }
    let mut p = Poly::zero();
    for (negative, term) in split_terms(text)? {
        let t = parse_product(&term, nvars)?;
        if t.basis.is_some() {
            return Err(CoreError::Parse(format!("basis monomial in polynomial literal `{text}`")));
        }
        p.add_term(t.exponents, if negative { -t.coeff } else { t.coeff });
    }
    Ok(p)
}

pub(crate) fn push_term(out: &mut String, first: bool, c: &Rational, body: &str) {
    match (first, Signed::is_negative(c)) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if body.is_empty() {
        out.push_str(&c.format_abs());
    } else if c.abs().is_one() {
        out.push_str(body);
    } else {
        let _ = write!(out, "{}*{}", c.format_abs(), body);
    }
}

pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, (e, c)) in p.ordered_terms().into_iter().enumerate() {
        push_term(&mut out, i == 0, c, &format_exponents(e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn arithmetic_and_derivatives() {
        let p = parse_poly("x1^2*x2 - 3*x2 + 1/2", 2).unwrap();
        assert_eq!(format_poly(&p), "1/2 - 3*x2 + x1^2*x2");
        assert_eq!(format_poly(&p.derivative(0)), "2*x1*x2");
        assert_eq!(format_poly(&p.derivative(1)), "-3 + x1^2");
        let q = p.mul(&Poly::var(0)).sub(&p);
        assert_eq!(q.eval(&[rational(1, 1), rational(5, 1)]), rational(0, 1));
        assert_eq!(parse_poly(&format_poly(&q), 2).unwrap(), q);
    }

    #[test]
    fn literal_limits() {
        assert!(parse_poly("x7", 6).is_err());
        assert!(parse_poly("x1^7", 2).is_err());
        assert!(parse_poly("x1*e1", 2).is_err());
        assert_eq!(format_poly(&Poly::zero()), "0");
    }
}
