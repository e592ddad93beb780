//! Exact rational numbers and their text form.
//!
//! Every closed-form path in the crate runs on [`Q`], an arbitrary precision
//! rational. Rationals travel through JSON and the command line as strings
//! such as `"2/3"`, `"-5"` or `"0.25"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<Q, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let den: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !digits_ok(whole_digits) || !digits_ok(frac) || (whole_digits.is_empty() && frac.is_empty()) {
            return Err(invalid());
        }
        let whole_val: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| invalid())?
        };
        let frac_val: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| invalid())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Q::new(whole_val * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let value: BigInt = s.parse().map_err(|_| invalid())?;
    Ok(Q::from_integer(value))
}

/// Parses a comma separated list of rationals, e.g. `"1/3,1/3,1/3"`.
pub fn parse_vector(text: &str) -> Result<Vec<Q>, ParseRationalError> {
    text.split(',').map(parse_rational).collect()
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(value: &Q) -> String {
    value.to_string()
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact value of a finite float.
pub fn from_f64(value: f64) -> Option<Q> {
    Q::from_f64(value)
}

pub fn abs(value: &Q) -> Q {
    value.abs()
}

pub fn is_integer(value: &Q) -> bool {
    value.denom().is_one()
}

/// Serde adapter writing rationals as strings and accepting strings or
/// integers on input.
pub mod serde_text {
    use super::{format_rational, Q};
    use serde::de::{self, Deserializer};
    use serde::ser::Serializer;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        super::from_json_value(&raw).map_err(de::Error::custom)
    }
}

/// Accepts a JSON string (`"p/q"`, decimal) or a JSON integer.
pub fn from_json_value(value: &serde_json::Value) -> Result<Q, ParseRationalError> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                parse_rational(&n.to_string())
            }
        }
        other => Err(ParseRationalError::Invalid(other.to_string())),
    }
}

pub fn to_json_value(value: &Q) -> serde_json::Value {
    serde_json::Value::String(format_rational(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("2/3").unwrap(), q(2, 3));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn vector_and_format() {
        let v = parse_vector("1/3, 1/3,1/3").unwrap();
        assert_eq!(v, vec![q(1, 3); 3]);
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-3, 9)), "-1/3");
    }

    #[test]
    fn json_values() {
        assert_eq!(from_json_value(&serde_json::json!(3)).unwrap(), int(3));
        assert_eq!(from_json_value(&serde_json::json!("5/10")).unwrap(), q(1, 2));
        assert!(from_json_value(&serde_json::json!(null)).is_err());
    }
}
