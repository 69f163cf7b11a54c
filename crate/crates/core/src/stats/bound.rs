use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FewCyclesBound {
    pub n: u32,
    pub g: u32,
    #[serde(serialize_with = "crate::rational::ser_ratio")]
    pub gamma: BigRational,
    /// `Σ_{k<g} γ^{N−k} C(N, N−k)`.
    #[serde(serialize_with = "crate::rational::ser_ratio")]
    pub sum: BigRational,
    /// `(γ^{N/g − 1} · N)^g = γ^{N−g} N^g`.
    #[serde(serialize_with = "crate::rational::ser_ratio")]
    pub bound: BigRational,
    pub holds: bool,
    /// `g = N`: the sum runs over everything and no inequality is claimed.
    pub degenerate: bool,
}

/// The binomial tail and its closed-form bound for elements with fewer than
/// `g` cycles, each cycle through a fixed point surviving with probability `γ`.
pub fn few_cycles_bound(n: u32, g: u32, gamma: &BigRational) -> Result<FewCyclesBound> {
    if g < 1 || g > n {
        return Err(Error::OutOfRange(format!("need 1 ≤ g ≤ N, got g = {g}, N = {n}")));
    }
    if *gamma <= BigRational::zero() || *gamma >= BigRational::one() {
        return Err(Error::OutOfRange(format!("need 0 < γ < 1, got {gamma}")));
    }
    let nn = BigInt::from(n);
    let sum: BigRational = (0..g)
        .map(|k| {
            let c = binomial(nn.clone(), BigInt::from(n - k));
            gamma.pow((n - k) as i32) * BigRational::from_integer(c)
        })
        .sum();
    let bound = gamma.pow((n - g) as i32) * BigRational::from_integer(nn.pow(g));
    Ok(FewCyclesBound {
        n,
        g,
        gamma: gamma.clone(),
        holds: sum <= bound,
        degenerate: g == n,
        sum,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let b = few_cycles_bound(10, 1, &q(1, 2)).unwrap();
        assert_eq!(b.sum, q(1, 1024));
        assert_eq!(b.bound, q(10, 512));
        assert!(b.holds && !b.degenerate);

        let b = few_cycles_bound(20, 2, &q(3, 4)).unwrap();
        assert!(b.holds);

        let b = few_cycles_bound(6, 6, &q(1, 2)).unwrap();
        assert!(b.degenerate);
        assert_eq!(b.sum, q(665, 64));
    }

    #[test]
    fn range_errors() {
        assert!(few_cycles_bound(5, 0, &q(1, 2)).is_err());
        assert!(few_cycles_bound(5, 6, &q(1, 2)).is_err());
        assert!(few_cycles_bound(5, 1, &q(1, 1)).is_err());
        assert!(few_cycles_bound(5, 1, &q(0, 1)).is_err());
    }
}
