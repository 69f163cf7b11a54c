//! Exact rationals: parsing, decimal rendering and JSON encoding.
//!
//! Fractions serialize as `[num, den]`, each entry a JSON integer when it fits
//! in an `i64` and a decimal string otherwise.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub fn ratio_to_json(r: &BigRational) -> Value {
    Value::Array(vec![int_to_json(r.numer()), int_to_json(r.denom())])
}

pub fn ratio_from_json(v: &Value) -> Option<BigRational> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let den = int_from_json(&arr[1])?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(int_from_json(&arr[0])?, den))
}

/// `"p/q"`, or `"p"` for integers.
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A fixed-precision decimal rendering for reports.
pub fn ratio_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.abs() * BigRational::from_integer(scale.clone())).round().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{}{frac}", "0".repeat(digits - frac.len()))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ser_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_some(&ratio_to_json(r))
}

pub fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let v = Value::deserialize(d)?;
    ratio_from_json(&v).ok_or_else(|| D::Error::custom("expected [num, den]"))
}

pub fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_round_trip() {
        let big = BigRational::new(BigInt::from(10u32).pow(30), BigInt::from(7));
        for r in [q(1, 4), q(-3, 5), big] {
            assert_eq!(ratio_from_json(&ratio_to_json(&r)).unwrap(), r);
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(ratio_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(ratio_decimal(&q(2, 3), 2), "0.67");
        assert_eq!(ratio_decimal(&q(-1, 40), 3), "-0.025");
        assert_eq!(ratio_decimal(&q(5, 1), 0), "5");
        assert_eq!(ratio_string(&q(6, 3)), "2");
    }
}
