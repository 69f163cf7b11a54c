//! Orbits of integer polynomials over `Q` and `F_p`, prime scans and
//! Frobenius factor statistics.

mod frobenius;
mod poly;
mod primes;
mod scan;

pub use frobenius::{
    best_fitting_transitive_subgroup, compare_to_tower, frobenius_degrees_mod_p, frobenius_statistics,
    FrobeniusStatistics, SubgroupFit, FROBENIUS_DEGREE_CAP,
};
pub use poly::{factor_count_mod_p, factor_degrees_mod_p, reduce_rational, FpPoly};
pub use primes::{is_prime, primes_in_range, require_prime};
pub use scan::{
    c_stability_scan, density, hit_scan, scan, scan_primes, Density, Experiment, Outcome, PrimeRange,
    PrimeRecord, ScanMode, ScanReport, Summary, STABILITY_DEGREE_CAP,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::parse_rational;

/// Default bit-size cap on orbit values over `Q`.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// Largest prime handled by the `F_p` routines.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// `x ↦ f(x)` with a target `a` and a starting point `a0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicalSystem {
    f: Vec<BigInt>,
    a: BigRational,
    a0: BigRational,
}

impl DynamicalSystem {
    /// `f` is given low to high: `[c0, c1, …, cd]`.
    pub fn new(f: Vec<BigInt>, a: BigRational, a0: BigRational) -> Result<Self> {
        if f.last().is_none_or(Zero::is_zero) {
            return Err(Error::OutOfRange("leading coefficient of f must be nonzero".into()));
        }
        if f.len() < 3 {
            return Err(Error::OutOfRange(format!("f must have degree ≥ 2, got {}", f.len() - 1)));
        }
        Ok(DynamicalSystem { f, a, a0 })
    }

    /// Parses `"1,-1,1"`, `"0"`, `"2"`.
    pub fn parse(f: &str, a: &str, a0: &str) -> Result<Self> {
        let coeffs = f
            .split(',')
            .map(|c| {
                c.trim().parse::<BigInt>().map_err(|_| Error::Parse {
                    what: "polynomial coefficient",
                    input: c.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DynamicalSystem::new(coeffs, parse_rational(a)?, parse_rational(a0)?)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.f
    }

    pub fn target(&self) -> &BigRational {
        &self.a
    }

    pub fn seed(&self) -> &BigRational {
        &self.a0
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.f
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from(c.clone()))
    }

    /// `f` reduced mod `p`.
    pub fn reduce(&self, p: u64) -> FpPoly {
        FpPoly::from_ints(p, &self.f)
    }

    /// `f^{∘n}(x) − a` mod `p` for `n = 1..=n_max`, composed in `F_p[x]`;
    /// `Err(reason)` when `p` divides the leading coefficient or the
    /// denominator of `a`.
    pub fn iterate_polys_mod_p(&self, n_max: usize, p: u64) -> Result<std::result::Result<Vec<FpPoly>, String>> {
        check_prime(p)?;
        let f = self.reduce(p);
        if f.degree() != Some(self.degree()) {
            return Ok(Err(format!("{p} divides the leading coefficient")));
        }
        let Some(a) = reduce_rational(&self.a, p) else {
            return Ok(Err(format!("{p} divides the denominator of a")));
        };
        let a = FpPoly::constant(p, a);
        let mut out = Vec::with_capacity(n_max);
        let mut iterate = FpPoly::x(p);
        for _ in 0..n_max {
            iterate = f.compose(&iterate);
            out.push(iterate.sub(&a));
        }
        Ok(Ok(out))
    }
}

fn check_prime(p: u64) -> Result<()> {
    require_prime(p)?;
    if p > MAX_PRIME {
        return Err(Error::OutOfRange(format!("p = {p} exceeds {MAX_PRIME}")));
    }
    Ok(())
}

fn bits(x: &BigRational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// `a_0, …, a_n` exactly, failing once an iterate exceeds `bit_cap` bits.
pub fn orbit(sys: &DynamicalSystem, n: usize, bit_cap: u64) -> Result<Vec<BigRational>> {
    let mut out = vec![sys.a0.clone()];
    for k in 1..=n {
        let next = sys.eval(&out[k - 1]);
        if bits(&next) > bit_cap {
            return Err(Error::Overflow {
                iterate: k,
                cap: bit_cap,
            });
        }
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum HitOutcome {
    Hit { n: u64 },
    NoHit,
    Skipped { reason: String },
}

/// The least `n ≥ 1` with `a_n ≡ a (mod p)`.
///
/// The orbit is walked once with Brent's cycle detection: when the hare meets
/// the tortoise it has passed every index up to tail plus cycle length, so
/// every value of `a_1, a_2, …` has been compared against `a`.
pub fn orbit_hits_mod_p(sys: &DynamicalSystem, p: u64) -> Result<HitOutcome> {
    check_prime(p)?;
    let Some(x0) = reduce_rational(&sys.a0, p) else {
        return Ok(HitOutcome::Skipped {
            reason: format!("{p} divides the denominator of a0"),
        });
    };
    let Some(a) = reduce_rational(&sys.a, p) else {
        return Ok(HitOutcome::Skipped {
            reason: format!("{p} divides the denominator of a"),
        });
    };
    let f = sys.reduce(p);
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = f.eval(x0);
    let mut n = 1u64;
    loop {
        if hare == a {
            return Ok(HitOutcome::Hit { n });
        }
        if tortoise == hare {
            return Ok(HitOutcome::NoHit);
        }
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f.eval(hare);
        lam += 1;
        n += 1;
    }
}
