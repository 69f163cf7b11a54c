//! Ramification types, Riemann–Hurwitz, Shabat triples and the
//! dynamical-Belyi family.

mod generation;
mod meets;

pub use generation::{
    admissible_parameters, invariably_generates, random_of_type, triple_primitivity_oracle, OracleMode,
    Verdict, INVARIABLE_CAP,
};
pub use meets::{meets_at, valuation, RationalPoint};

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{CycleType, Perm};

/// One cycle type per branch point, all of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationType {
    degree: usize,
    branches: Vec<CycleType>,
}

impl RamificationType {
    pub fn new(branches: Vec<CycleType>) -> Result<Self> {
        let degree = branches
            .first()
            .map(CycleType::degree)
            .ok_or_else(|| Error::Inadmissible("no branch points".into()))?;
        if let Some(b) = branches.iter().find(|b| b.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: b.degree(),
            });
        }
        Ok(RamificationType { degree, branches })
    }

    /// Parses `"[5],[3,1,1],[2,2,1]"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut branches = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let end = rest.find(']').ok_or_else(|| Error::Parse {
                what: "ramification type",
                input: s.to_string(),
            })?;
            branches.push(rest[..=end].parse::<CycleType>()?);
            rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        RamificationType::new(branches)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn branches(&self) -> &[CycleType] {
        &self.branches
    }

    /// `Σ_P R_f(P)` with `R_f(P) = Σ (e − 1)`.
    pub fn total_contribution(&self) -> usize {
        self.branches.iter().map(CycleType::contribution).sum()
    }
}

impl fmt::Display for RamificationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.branches.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for RamificationType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RamificationType::parse(s)
    }
}

/// The genus `g` of the source from `2(g − 1) = 2d(g_0 − 1) + Σ R_f(P)`.
pub fn rh_genus(target_genus: u64, ram: &RamificationType) -> Result<u64> {
    let d = ram.degree as i128;
    let twice = 2 * d * (target_genus as i128 - 1) + ram.total_contribution() as i128;
    if twice.is_odd() {
        return Err(Error::Inadmissible(format!(
            "2(g−1) = {twice} is odd for {ram}"
        )));
    }
    let g = twice / 2 + 1;
    if g < 0 {
        return Err(Error::Inadmissible(format!("negative genus {g} for {ram}")));
    }
    Ok(g as u64)
}

/// Some branch point is totally ramified and the cover of the line has genus 0.
pub fn is_polynomial_type(ram: &RamificationType) -> bool {
    ram.branches.iter().any(|b| b.parts() == [ram.degree]) && rh_genus(0, ram) == Ok(0)
}

/// `τ` with `στ` a `d`-cycle.
///
/// The cycles of `σ`, fixed points included, are ordered by smallest point
/// and `τ = t_1 ⋯ t_{r−1}` with `t_i` joining the last point of cycle `i` to
/// the first point of cycle `i + 1`.
pub fn shabat_tau(sigma: &Perm) -> Perm {
    let d = sigma.degree();
    let cycles = sigma.cycles_with_fixed();
    cycles.windows(2).fold(Perm::identity(d), |tau, w| {
        let t = Perm::from_cycles(d, &[&[*w[0].last().unwrap(), w[1][0]]]).unwrap();
        tau.compose(&t).unwrap()
    })
}

/// Admissibility of `[d], [r, 1^p], [s^q, t]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BelyiReport {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub polynomial_type: bool,
    pub admissible: bool,
    pub violations: Vec<String>,
}

impl BelyiReport {
    /// The ramification type, when `p` and `q` exist.
    pub fn ramification(&self) -> Option<RamificationType> {
        let (p, q) = (self.p?, self.q?);
        let mut y = vec![self.r];
        y.extend(std::iter::repeat_n(1, p));
        let mut z = vec![self.s; q];
        z.push(self.t);
        RamificationType::new(vec![
            CycleType::from_parts(vec![self.d]),
            CycleType::from_parts(y),
            CycleType::from_parts(z),
        ])
        .ok()
    }
}

pub fn belyi_family_check(d: usize, r: usize, s: usize, t: usize) -> BelyiReport {
    let mut violations = Vec::new();
    if d == 0 || r == 0 || s == 0 || t == 0 {
        violations.push("parameters must be positive".to_string());
    }
    let p = (r <= d).then(|| d - r);
    if p.is_none() {
        violations.push(format!("r = {r} exceeds d = {d}"));
    }
    let q = if t <= d && s > 0 && (d - t).is_multiple_of(s) {
        Some((d - t) / s)
    } else {
        violations.push(format!("q = (d − t)/s = ({d} − {t})/{s} is not a nonnegative integer"));
        None
    };
    if let Some(q) = q {
        if r != q + 1 {
            violations.push(format!("r = {r} but q + 1 = {}", q + 1));
        }
    }
    if s.gcd(&t) != 1 {
        violations.push(format!("gcd(s, t) = {} ≠ 1", s.gcd(&t)));
    }
    if r <= 1 {
        violations.push("r > 1 fails".to_string());
    }
    if t <= 1 {
        violations.push("t > 1 fails".to_string());
    }
    let mut report = BelyiReport {
        d,
        r,
        s,
        t,
        p,
        q,
        polynomial_type: false,
        admissible: violations.is_empty(),
        violations,
    };
    report.polynomial_type = report
        .ramification()
        .is_some_and(|ram| is_polynomial_type(&ram));
    report
}
