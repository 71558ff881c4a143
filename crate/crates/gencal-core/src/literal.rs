//! Text syntax for forms: `"1 + 2*e12 - 0.5*e134"`.
//!
//! A term is a coefficient, a basis monomial, or `coefficient*monomial`.
//! Monomials are `e` followed by ascending single-digit indices, or
//! `e{1,10,12}` when an index exceeds 9. Coefficients are integers,
//! decimals or fractions `a/b`. The printer orders terms by degree and then
//! by index set, so parsing its output reproduces the form exactly for
//! rational coefficients.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::exterior::Form;
use crate::scalar::{Rational, Scalar};

/// Coefficient types that have a literal spelling.
pub trait LiteralScalar: Scalar {
    fn parse_literal(text: &str) -> Result<Self>;
    fn is_negative(&self) -> bool;
    /// Spelling of the absolute value.
    fn format_abs(&self) -> String;
    fn is_unit_magnitude(&self) -> bool;
}

impl LiteralScalar for Rational {
    fn parse_literal(text: &str) -> Result<Self> {
        parse_rational(text)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn format_abs(&self) -> String {
        let a = self.abs();
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn is_unit_magnitude(&self) -> bool {
        self.abs().is_one()
    }
}

impl LiteralScalar for f64 {
    fn parse_literal(text: &str) -> Result<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let n: f64 = parse_decimal_f64(num)?;
            let d: f64 = parse_decimal_f64(den)?;
            if d == 0.0 {
                return Err(CoreError::Parse(format!("zero denominator in `{text}`")));
            }
            Ok(n / d)
        } else {
            parse_decimal_f64(text)
        }
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn format_abs(&self) -> String {
        format!("{}", libm::fabs(*self))
    }
    fn is_unit_magnitude(&self) -> bool {
        libm::fabs(*self) == 1.0
    }
}

fn check_decimal(text: &str) -> Result<()> {
    let mut dots = 0;
    let mut digits = 0;
    for ch in text.chars() {
        match ch {
            '0'..='9' => digits += 1,
            '.' => dots += 1,
            _ => return Err(CoreError::Parse(format!("invalid number `{text}`"))),
        }
    }
    if digits == 0 || dots > 1 {
        return Err(CoreError::Parse(format!("invalid number `{text}`")));
    }
    Ok(())
}

fn parse_decimal_f64(text: &str) -> Result<f64> {
    check_decimal(text)?;
    text.parse::<f64>().map_err(|_| CoreError::Parse(format!("invalid number `{text}`")))
}

fn parse_decimal_rational(text: &str) -> Result<Rational> {
    check_decimal(text)?;
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| CoreError::Parse(format!("invalid number `{text}`")))?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Ok(Rational::new(numer, denom))
}

/// Parses an unsigned integer, decimal or fraction exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    match text.split_once('/') {
        Some((n, d)) => {
            let num = parse_decimal_rational(n)?;
            let den = parse_decimal_rational(d)?;
            if Zero::is_zero(&den) {
                return Err(CoreError::Parse(format!("zero denominator in `{text}`")));
            }
            Ok(num / den)
        }
        None => parse_decimal_rational(text),
    }
}

/// Parses a signed rational such as `-3/4` or `0.25`.
pub fn parse_signed_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    match t.strip_prefix('-') {
        Some(rest) => Ok(-parse_rational(rest.trim())?),
        None => parse_rational(t.strip_prefix('+').unwrap_or(t).trim()),
    }
}

pub fn format_rational(r: &Rational) -> String {
    let abs = r.format_abs();
    if Signed::is_negative(r) {
        format!("-{abs}")
    } else {
        abs
    }
}

/// Parses `e…` into a bitmask, checking indices against `n`.
pub(crate) fn parse_monomial(text: &str, n: usize) -> Result<usize> {
    let body = text
        .strip_prefix('e')
        .ok_or_else(|| CoreError::Parse(format!("expected basis monomial, found `{text}`")))?;
    let indices: Vec<usize> = if let Some(inner) = body.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| CoreError::Parse(format!("unterminated brace in `{text}`")))?;
        inner
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| CoreError::Parse(format!("bad index in `{text}`"))))
            .collect::<Result<_>>()?
    } else {
        if body.is_empty() {
            return Err(CoreError::Parse(format!("monomial `{text}` has no indices")));
        }
        body.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| CoreError::Parse(format!("bad index in `{text}`"))))
            .collect::<Result<_>>()?
    };
    let mut mask = 0usize;
    let mut last = 0usize;
    for &i in &indices {
        if i == 0 || i > n {
            return Err(CoreError::Parse(format!("index {i} out of range 1..={n} in `{text}`")));
        }
        if i <= last {
            return Err(CoreError::Parse(format!("indices must be strictly ascending in `{text}`")));
        }
        last = i;
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

pub(crate) fn format_monomial(mask: usize) -> String {
    let idx: Vec<usize> = (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    if idx.iter().any(|&i| i > 9) {
        let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        format!("e{{{}}}", parts.join(","))
    } else {
        let mut s = String::from("e");
        for i in idx {
            let _ = write!(s, "{i}");
        }
        s
    }
}

/// Splits a sum into `(negative, term)` pieces at top-level `+`/`-` signs.
pub(crate) fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0;
    let mut expecting_term = true;
    for ch in text.chars() {
        match ch {
            '{' => {
                depth += 1;
                current.push(ch);
            }
            '}' => {
                depth -= 1;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if expecting_term {
                    if !current.trim().is_empty() {
                        return Err(CoreError::Parse(format!("unexpected sign in `{text}`")));
                    }
                    if ch == '-' {
                        negative = !negative;
                    }
                } else {
                    out.push((negative, core::mem::take(&mut current).trim().to_string()));
                    negative = ch == '-';
                    expecting_term = true;
                }
            }
            c if c.is_whitespace() => current.push(c),
            c => {
                current.push(c);
                expecting_term = false;
            }
        }
    }
    if expecting_term {
        return Err(CoreError::Parse(format!("expression `{text}` ends without a term")));
    }
    out.push((negative, current.trim().to_string()));
    Ok(out)
}

/// Parses a form literal over `ℝⁿ`.
pub fn parse_form<S: LiteralScalar>(text: &str, n: usize) -> Result<Form<S>> {
    if n > crate::exterior::MAX_DIM {
        return Err(CoreError::DimensionOutOfRange { n, min: 0, max: crate::exterior::MAX_DIM });
    }
    let mut form = Form::zero(n);
    for (negative, term) in split_terms(text)? {
        let (coef, mask) = match term.split_once('*') {
            Some((c, m)) => (S::parse_literal(c.trim())?, parse_monomial(m.trim(), n)?),
            None if term.starts_with('e') => (S::one(), parse_monomial(&term, n)?),
            None => (S::parse_literal(&term)?, 0),
        };
        form.add_to_coeff(mask, if negative { -coef } else { coef });
    }
    Ok(form)
}

/// Canonical spelling of a form; the zero form prints as `0`.
pub fn format_form<S: LiteralScalar>(form: &Form<S>) -> String {
    let mut masks: Vec<usize> = form.terms().map(|(m, _)| m).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    if masks.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, &m) in masks.iter().enumerate() {
        let c = form.coeff(m);
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m == 0 {
            out.push_str(&c.format_abs());
        } else if c.is_unit_magnitude() {
            out.push_str(&format_monomial(m));
        } else {
            let _ = write!(out, "{}*{}", c.format_abs(), format_monomial(m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn parses_spec_example() {
        let f: Form<Rational> = parse_form("1 + 2*e12 - 0.5*e134", 4).unwrap();
        assert_eq!(f.coeff(0), &rational(1, 1));
        assert_eq!(f.coeff(0b0011), &rational(2, 1));
        assert_eq!(f.coeff(0b1101), &rational(-1, 2));
        assert_eq!(format_form(&f), "1 + 2*e12 - 1/2*e134");
    }

    #[test]
    fn braces_for_large_indices() {
        let f: Form<Rational> = parse_form("-e{1,10,12} + 3/4*e2", 12).unwrap();
        assert_eq!(format_form(&f), "3/4*e2 - e{1,10,12}");
        assert_eq!(parse_form::<Rational>(&format_form(&f), 12).unwrap(), f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_form::<Rational>("e21", 3).is_err());
        assert!(parse_form::<Rational>("e14", 3).is_err());
        assert!(parse_form::<Rational>("1 +", 3).is_err());
        assert!(parse_form::<Rational>("2**e1", 3).is_err());
        assert!(parse_form::<Rational>("1e5", 3).is_err());
    }

    #[test]
    fn zero_and_float() {
        assert_eq!(format_form(&Form::<f64>::zero(3)), "0");
        let f: Form<f64> = parse_form("0.1*e1 - 2.5", 2).unwrap();
        assert_eq!(format_form(&f), "-2.5 + 0.1*e1");
    }
}
