//! Factor-degree statistics of `f^{∘n}(x) − a` across primes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{factor_degrees_mod_p, primes_in_range, DynamicalSystem};
use crate::error::{Error, Result};
use crate::perm::{CycleType, Perm, PermGroup};
use crate::stats::cycle_type_distribution;
use crate::wreath::WreathTower;

/// Largest `d^n` for Frobenius statistics.
pub const FROBENIUS_DEGREE_CAP: usize = 64;

/// Largest group searched by [`best_fitting_transitive_subgroup`].
const FIT_ORDER_CAP: u64 = 512;

/// Degrees of the distinct irreducible factors of `f^{∘n}(x) − a` mod `p`,
/// ascending; `Err(reason)` for skipped primes.
pub fn frobenius_degrees_mod_p(
    sys: &DynamicalSystem,
    n: usize,
    p: u64,
) -> Result<std::result::Result<Vec<usize>, String>> {
    let degree = (sys.degree() as u128).checked_pow(n as u32);
    if degree.is_none_or(|d| d > FROBENIUS_DEGREE_CAP as u128) {
        return Err(Error::OutOfRange(format!(
            "d^n exceeds the degree cap {FROBENIUS_DEGREE_CAP}"
        )));
    }
    if n == 0 {
        super::check_prime(p)?;
        return Ok(Ok(vec![1]));
    }
    match sys.iterate_polys_mod_p(n, p)? {
        Ok(polys) => Ok(Ok(factor_degrees_mod_p(polys.last().unwrap())?)),
        Err(reason) => Ok(Err(reason)),
    }
}

/// Counts of factor-degree multisets, as cycle types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusStatistics {
    pub n: usize,
    pub primes: (u64, u64),
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<CycleType, u64>,
    pub skipped: u64,
}

fn ser_counts<S: serde::Serializer>(
    counts: &BTreeMap<CycleType, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(counts.iter().map(|(k, v)| (k.to_string(), v)))
}

impl FrobeniusStatistics {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Empirical frequencies.
    pub fn distribution(&self) -> BTreeMap<CycleType, BigRational> {
        let total = BigInt::from(self.total());
        self.counts
            .iter()
            .map(|(k, &v)| (k.clone(), BigRational::new(v.into(), total.clone())))
            .collect()
    }

    pub fn frequency(&self, pattern: &[usize]) -> BigRational {
        let key = CycleType::from_parts(pattern.to_vec());
        self.distribution().remove(&key).unwrap_or_else(BigRational::zero)
    }
}

pub fn frobenius_statistics(sys: &DynamicalSystem, n: usize, from: u64, to: u64) -> Result<FrobeniusStatistics> {
    let primes = primes_in_range(from, to);
    let results = primes
        .par_iter()
        .map(|&p| frobenius_degrees_mod_p(sys, n, p))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(degrees) => *counts.entry(CycleType::from_parts(degrees)).or_insert(0) += 1,
            Err(_) => skipped += 1,
        }
    }
    Ok(FrobeniusStatistics {
        n,
        primes: (from, to),
        counts,
        skipped,
    })
}

fn total_variation(a: &BTreeMap<CycleType, BigRational>, b: &BTreeMap<CycleType, BigRational>) -> BigRational {
    let keys: BTreeSet<&CycleType> = a.keys().chain(b.keys()).collect();
    let zero = BigRational::zero();
    let sum = keys.into_iter().fold(BigRational::zero(), |acc, k| {
        acc + (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).abs()
    });
    sum / BigRational::from_integer(2.into())
}

/// Total-variation distance between a distribution of factor patterns and
/// the exact cycle-type distribution of the tower group.
pub fn compare_to_tower(dist: &BTreeMap<CycleType, BigRational>, tower: &WreathTower) -> Result<BigRational> {
    let group = tower.tower_group()?;
    let exact = cycle_type_distribution(&group, crate::perm::ENUMERATION_CAP)?;
    Ok(total_variation(dist, &exact))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupFit {
    pub label: String,
    pub order: u64,
    pub generators: Vec<Perm>,
    #[serde(serialize_with = "crate::rational::ser_ratio")]
    pub tv: BigRational,
}

fn label(group: &PermGroup, order: u64, ambient: u64, ambient_label: &str) -> String {
    if order == ambient {
        return ambient_label.to_string();
    }
    let elements = group.elements(FIT_ORDER_CAP).unwrap_or_default();
    if elements.iter().any(|g| g.order() == order) {
        format!("C{order}")
    } else if order == 4 {
        "V4".to_string()
    } else if elements.iter().all(|g| g.order() <= 2) {
        format!("elementary abelian of order {order}")
    } else if order == 8 && elements.iter().filter(|g| g.order() == 2).count() == 5 {
        "D4".to_string()
    } else {
        format!("order {order}")
    }
}

/// The transitive subgroup of `group` whose cycle-type distribution is
/// closest in total variation to `dist`, ties broken by larger order.
///
/// Candidates are the subgroups generated by at most two elements, which
/// covers every transitive subgroup of the small towers this is used on.
pub fn best_fitting_transitive_subgroup(
    dist: &BTreeMap<CycleType, BigRational>,
    group: &PermGroup,
    group_label: &str,
) -> Result<SubgroupFit> {
    let ambient = group.small_order().filter(|&o| o <= FIT_ORDER_CAP).ok_or_else(|| Error::TooLarge {
        order: group.order().to_string(),
        cap: FIT_ORDER_CAP,
    })?;
    let elements = group.elements(FIT_ORDER_CAP)?;
    let mut seen: HashSet<BTreeSet<Perm>> = HashSet::new();
    let mut best: Option<SubgroupFit> = None;
    for (i, x) in elements.iter().enumerate() {
        for y in &elements[i..] {
            let h = PermGroup::new(group.degree(), vec![x.clone(), y.clone()])?;
            if !h.is_transitive() {
                continue;
            }
            let set: BTreeSet<Perm> = h.elements(FIT_ORDER_CAP)?.into_iter().collect();
            if !seen.insert(set) {
                continue;
            }
            let order = h.small_order().unwrap();
            let tv = total_variation(dist, &cycle_type_distribution(&h, FIT_ORDER_CAP)?);
            let better = best
                .as_ref()
                .is_none_or(|b| tv < b.tv || (tv == b.tv && order > b.order));
            if better {
                best = Some(SubgroupFit {
                    label: label(&h, order, ambient, group_label),
                    order,
                    generators: vec![x.clone(), y.clone()],
                    tv,
                });
            }
        }
    }
    best.ok_or(Error::Intransitive)
}
