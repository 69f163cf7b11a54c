use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dynamics::require_prime;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, ratio_string};

/// A point of `P^1(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalPoint {
    Finite(BigRational),
    Infinity,
}

impl RationalPoint {
    pub fn finite(num: i64, den: i64) -> Self {
        RationalPoint::Finite(BigRational::new(num.into(), den.into()))
    }
}

impl FromStr for RationalPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(RationalPoint::Infinity),
            other => parse_rational(other).map(RationalPoint::Finite),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Finite(r) => f.write_str(&ratio_string(r)),
            RationalPoint::Infinity => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// `ν_p(x)` for nonzero `x`.
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// The multiplicity with which `a` and `b` meet at `p`; 0 when they do not.
///
/// Points with nonnegative valuation are compared in the chart `x`, points
/// with negative valuation (and `∞`) in the chart `1/x`; points in different
/// charts never meet.
pub fn meets_at(a: &RationalPoint, b: &RationalPoint, p: u64) -> Result<u64> {
    require_prime(p)?;
    if a == b {
        return Err(Error::OutOfRange("the two points must differ".into()));
    }
    // reciprocal coordinate in the chart at infinity; None means the point is
    // integral at p and lies in the finite chart
    let chart = |x: &RationalPoint| -> Option<BigRational> {
        match x {
            RationalPoint::Infinity => Some(BigRational::zero()),
            RationalPoint::Finite(r) if !r.is_zero() && valuation(r, p).unwrap() < 0 => {
                Some(BigRational::one() / r)
            }
            RationalPoint::Finite(_) => None,
        }
    };
    let diff = match (chart(a), chart(b)) {
        (None, None) => match (a, b) {
            (RationalPoint::Finite(x), RationalPoint::Finite(y)) => x - y,
            _ => unreachable!(),
        },
        (Some(x), Some(y)) => x - y,
        _ => return Ok(0),
    };
    Ok(valuation(&diff, p).map_or(0, |v| v.max(0) as u64))
}
