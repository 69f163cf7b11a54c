//! Finite permutations on `{0, …, n−1}` and the groups they generate.
//!
//! Composition is right-to-left throughout the crate: `p.compose(&q)` applies
//! `q` first and then `p`.

mod blocks;
mod group;

pub use blocks::{brute_force_block_systems, BlockSystem};
pub(crate) use blocks::restrict_prefix;
pub use group::{PermGroup, ENUMERATION_CAP};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image table, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPerm(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(Error::InvalidPerm(format!("{cycles:?}")));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Parses disjoint-cycle notation such as `"(0 1 2)(3 4)"` in the given degree.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul(other))
    }

    /// Unchecked `self ∘ other`.
    #[inline]
    pub(crate) fn mul(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Perm) -> Perm {
        // x ↦ self(other(self⁻¹(x)))
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = self.images[other.images[x]];
        }
        Perm { images }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Nontrivial cycles only.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_parts(self.cycles_with_fixed().iter().map(|c| c.len()).collect())
    }

    pub fn num_cycles(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if !seen[start] {
                count += 1;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = self.images[x];
                }
            }
        }
        count
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .parts()
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
    }

    pub fn is_even(&self) -> bool {
        (self.degree() - self.num_cycles()).is_multiple_of(2)
    }

    /// Restriction to an invariant subset, relabelled by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Option<Perm> {
        let mut index = vec![usize::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let j = index[self.images[p]];
            if j == usize::MAX {
                return None;
            }
            images.push(j);
        }
        Some(Perm { images })
    }

    /// Embeds into a larger degree, fixing the new points.
    pub fn extend(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.degree()..degree);
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses a cycle string into its cycles without fixing a degree.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let err = || Error::Parse {
        what: "cycle notation",
        input: s.to_string(),
    };
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(err)?;
        let close = body.find(')').ok_or_else(err)?;
        let inner = &body[..close];
        let points: Vec<usize> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| err()))
            .collect::<Result<_>>()?;
        if !points.is_empty() {
            out.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// Largest point mentioned in a cycle string, plus one.
pub fn cycle_string_span(s: &str) -> Result<usize> {
    Ok(parse_cycles(s)?
        .iter()
        .flatten()
        .map(|&x| x + 1)
        .max()
        .unwrap_or(0))
}

/// A multiset of cycle lengths, sorted descending, fixed points included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.parts.len()
    }

    pub fn fixed_points(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    pub fn is_even(&self) -> bool {
        (self.degree() - self.num_cycles()).is_multiple_of(2)
    }

    /// Riemann–Hurwitz contribution `Σ (e − 1)`.
    pub fn contribution(&self) -> usize {
        self.degree() - self.num_cycles()
    }

    /// A representative permutation with consecutive cycles `(0 … l₁−1)(l₁ …)`.
    pub fn representative(&self) -> Perm {
        let n = self.degree();
        let mut images = vec![0; n];
        let mut start = 0;
        for &l in &self.parts {
            for i in 0..l {
                images[start + i] = start + (i + 1) % l;
            }
            start += l;
        }
        Perm { images }
    }

    /// Number of permutations of this cycle type in `S_n`.
    pub fn class_size(&self) -> num_bigint::BigUint {
        use num_bigint::BigUint;
        let n = self.degree();
        let mut denom = BigUint::from(1u32);
        let mut run = 1usize;
        for (i, &p) in self.parts.iter().enumerate() {
            denom *= BigUint::from(p);
            if i + 1 < self.parts.len() && self.parts[i + 1] == p {
                run += 1;
            } else {
                denom *= factorial(run);
                run = 1;
            }
        }
        factorial(n) / denom
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts `"[3,1,1]"` and exponent shorthand such as `"[3,1^2]"`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "cycle type",
            input: s.to_string(),
        };
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(err)?;
        let mut parts = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| err())?),
                None => (tok, 1),
            };
            let base = base.parse::<usize>().map_err(|_| err())?;
            if base == 0 {
                return Err(err());
            }
            parts.extend(std::iter::repeat_n(base, exp));
        }
        if parts.is_empty() {
            return Err(err());
        }
        Ok(CycleType::from_parts(parts))
    }
}

pub(crate) fn factorial(n: usize) -> num_bigint::BigUint {
    (1..=n).fold(num_bigint::BigUint::from(1u32), |acc, k| acc * k)
}

/// All partitions of `n` as descending part lists.
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if rem == 0 {
            out.push(CycleType { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The standard cycle `(0 1 … n−1)`.
pub fn long_cycle(n: usize) -> Perm {
    Perm {
        images: (0..n).map(|i| (i + 1) % n).collect(),
    }
}

/// Generators of `S_n`: the long cycle and `(0 1)`.
pub fn symmetric_generators(n: usize) -> Vec<Perm> {
    match n {
        0 | 1 => vec![],
        2 => vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()],
        _ => vec![long_cycle(n), Perm::from_cycles(n, &[&[0, 1]]).unwrap()],
    }
}

/// The standard generating pair of `A_n`: `(0 1 2)` with `(0 1 … n−1)` for odd
/// `n` or `(1 2 … n−1)` for even `n`.
pub fn alternating_generators(n: usize) -> Vec<Perm> {
    if n < 3 {
        return vec![];
    }
    let three = Perm::from_cycles(n, &[&[0, 1, 2]]).unwrap();
    if n == 3 {
        return vec![three];
    }
    let cycle: Vec<usize> = if n % 2 == 1 {
        (0..n).collect()
    } else {
        (1..n).collect()
    };
    vec![three, Perm::from_cycles(n, &[&cycle]).unwrap()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    #[test]
    fn compose_is_right_to_left() {
        let a = p("(0 1 2)(3 4)", 5);
        let b = p("(2 3)", 5);
        let c = a.compose(&b).unwrap();
        assert_eq!(c.images(), &[1, 2, 4, 0, 3]);
        for x in 0..5 {
            assert_eq!(c.apply(x), a.apply(b.apply(x)));
        }
        assert_eq!(c.cycle_type().parts(), &[5]);
    }

    #[test]
    fn compose_identity_and_involution() {
        let a = p("(0 1 2)", 3);
        assert_eq!(a.compose(&Perm::identity(3)).unwrap(), a);
        let t = p("(0 1)", 2);
        assert!(t.compose(&t).unwrap().is_identity());
        assert!(matches!(
            a.compose(&t),
            Err(Error::DegreeMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(5).cycle_type().parts(), &[1, 1, 1, 1, 1]);
        assert_eq!(p("(0 1 2)(3 4)", 5).cycle_type().parts(), &[3, 2]);
        assert_eq!(p("(0 1 2 3)", 6).cycle_type().parts(), &[4, 1, 1]);
    }

    #[test]
    fn display_round_trip() {
        assert_eq!(Perm::identity(4).to_string(), "()");
        assert_eq!(p("(3 4)(0 1 2)", 5).to_string(), "(0 1 2)(3 4)");
        assert_eq!(p("(0,2)", 3).to_string(), "(0 2)");
        assert!(Perm::parse("(0 1)(1 2)", 3).is_err());
        assert!(Perm::parse("(0 5)", 3).is_err());
        assert!(Perm::parse("0 1", 3).is_err());
    }

    #[test]
    fn cycle_type_parsing() {
        let c: CycleType = "[3,1^2]".parse().unwrap();
        assert_eq!(c.parts(), &[3, 1, 1]);
        assert_eq!(c.to_string(), "[3,1,1]");
        assert!("3,1".parse::<CycleType>().is_err());
        assert!("[0]".parse::<CycleType>().is_err());
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 1..=8 {
            let total: num_bigint::BigUint = partitions(n).iter().map(|c| c.class_size()).sum();
            assert_eq!(total, factorial(n));
        }
        let c: CycleType = "[2,1,1,1]".parse().unwrap();
        assert_eq!(c.class_size(), 10u32.into());
    }

    #[test]
    fn generators_have_expected_parity() {
        for n in 3..10 {
            assert!(alternating_generators(n).iter().all(Perm::is_even));
        }
        assert!(!symmetric_generators(5)[1].is_even());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
            Just((0..n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(v).unwrap())
        }

        proptest! {
            #[test]
            fn conjugation_preserves_cycle_type(
                (a, b) in (1usize..12).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n)))
            ) {
                let c = a.compose(&b).unwrap().compose(&a.inverse()).unwrap();
                prop_assert_eq!(c.cycle_type(), b.cycle_type());
                prop_assert_eq!(a.conjugate(&b), c);
            }

            #[test]
            fn display_parse_round_trip(a in (1usize..15).prop_flat_map(perm_strategy)) {
                let back = Perm::parse(&a.to_string(), a.degree()).unwrap();
                prop_assert_eq!(back, a);
            }
        }
    }
}
