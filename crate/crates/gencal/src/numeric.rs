//! Scalars as they appear in scenario files.
//!
//! Float mode reads JSON numbers (or numeric strings) into `f64` and writes
//! JSON numbers. Exact mode reads numbers and strings such as `"-3/4"` or
//! `"1e-3"` into rationals without rounding and always writes strings.

use gencal_core::literal::{format_rational, parse_signed_rational, LiteralScalar};
use gencal_core::scalar::RealScalar;
use gencal_core::Rational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Exact => "exact",
        }
    }
}

pub trait ModeScalar: RealScalar + LiteralScalar {
    const MODE: Mode;
    fn from_json(value: &Value) -> Result<Self, String>;
    fn to_json(&self) -> Value;
    /// Brings a floating-point result into this scalar type. Exact mode only
    /// accepts values that are, to `1e-12`, a fraction with a small
    /// denominator.
    fn from_computed(x: f64) -> Option<Self>;
}

fn number_text(value: &Value) -> Result<String, String> {
    match value {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.trim().to_string()),
        other => Err(format!("expected a number, found `{other}`")),
    }
}

/// Exact value of a decimal or fraction with an optional `e±k` exponent.
pub fn parse_exact(text: &str) -> Result<Rational, String> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) if !text.contains('/') => {
            let exp: i32 = text[i + 1..].parse().map_err(|_| format!("invalid exponent in `{text}`"))?;
            (&text[..i], exp)
        }
        _ => (text, 0),
    };
    let base = parse_signed_rational(mantissa).map_err(|e| e.to_string())?;
    let ten = Rational::from_integer(10.into());
    let scale = num_traits::pow(ten, exponent.unsigned_abs() as usize);
    Ok(if exponent >= 0 { base * scale } else { base / scale })
}

impl ModeScalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_json(value: &Value) -> Result<Self, String> {
        let x = match value {
            Value::Number(n) => n.as_f64().ok_or_else(|| format!("`{n}` is not representable"))?,
            _ => {
                let text = number_text(value)?;
                match text.parse::<f64>() {
                    Ok(x) => x,
                    Err(_) => {
                        let r = parse_exact(&text)?;
                        <f64 as gencal_core::Scalar>::from_rational(&r)
                    }
                }
            }
        };
        if !x.is_finite() {
            return Err(format!("non-finite value `{x}`"));
        }
        Ok(x)
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_computed(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
}

impl ModeScalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_json(value: &Value) -> Result<Self, String> {
        parse_exact(&number_text(value)?)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_computed(x: f64) -> Option<Self> {
        snap(x, 10_000, 1e-12)
    }
}

/// Best continued-fraction approximation with denominator at most
/// `max_den`, accepted when within `tol · max(1, |x|)`.
pub fn snap(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x.abs();
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        best = Some((h2, k2));
        if ((h2 as f64) / (k2 as f64) - x.abs()).abs() <= tol * x.abs().max(1.0) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    let (h, k) = best?;
    if ((h as f64) / (k as f64) - x.abs()).abs() > tol * x.abs().max(1.0) {
        return None;
    }
    let r = Rational::new((h as i64).into(), (k as i64).into());
    Some(if x < 0.0 { -r } else { r })
}

pub fn is_unit(r: &Rational) -> bool {
    r.is_one()
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gencal_core::scalar::rational;

    #[test]
    fn exact_numbers() {
        assert_eq!(parse_exact("1e-3").unwrap(), rational(1, 1000));
        assert_eq!(parse_exact("-3/4").unwrap(), rational(-3, 4));
        assert_eq!(parse_exact("2.5E1").unwrap(), rational(25, 1));
        assert_eq!(Rational::from_json(&serde_json::json!(0.1)).unwrap(), rational(1, 10));
        assert!(Rational::from_json(&serde_json::json!("x")).is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(snap(0.5, 100, 1e-12), Some(rational(1, 2)));
        assert_eq!(snap(-1.0 / 3.0, 100, 1e-12), Some(rational(-1, 3)));
        assert_eq!(snap(std::f64::consts::SQRT_2, 10_000, 1e-12), None);
        assert_eq!(snap(0.0, 10, 1e-12), Some(rational(0, 1)));
    }
}
