use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{factorial, partitions, CycleType, Perm, PermGroup};
use crate::rational::{int_to_json, ratio_to_json};
use crate::wreath::{LevelKind, TowerLevel, WreathTower};

/// Exact mode limits: level degree and depth.
pub const EXACT_MAX_DEGREE: usize = 12;
pub const EXACT_MAX_DEPTH: usize = 4;

/// Samples per Monte-Carlo shard. Shard `s` draws from ChaCha8 seeded with
/// the run seed on stream `s`, so results do not depend on the thread count.
pub const SHARD_SIZE: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// A probability distribution on counts `0..=degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountDistribution {
    pub degree: usize,
    pub probs: BTreeMap<usize, BigRational>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

pub type FixedPointDistribution = CountDistribution;

impl CountDistribution {
    fn exact(degree: usize, probs: BTreeMap<usize, BigRational>) -> Self {
        CountDistribution {
            degree,
            probs,
            samples: None,
            seed: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.samples.is_none()
    }

    pub fn prob(&self, k: usize) -> BigRational {
        self.probs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.probs
            .iter()
            .map(|(&k, p)| p * BigRational::from_integer(BigInt::from(k)))
            .sum()
    }

    pub fn total_variation(&self, other: &CountDistribution) -> BigRational {
        let keys: std::collections::BTreeSet<usize> =
            self.probs.keys().chain(other.probs.keys()).copied().collect();
        let sum: BigRational = keys
            .into_iter()
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .sum();
        sum / BigRational::from_integer(BigInt::from(2))
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("k,num,den\n");
        for (k, p) in &self.probs {
            out.push_str(&format!("{k},{},{}\n", p.numer(), p.denom()));
        }
        out
    }
}

impl Serialize for CountDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table: Vec<serde_json::Value> = self
            .probs
            .iter()
            .map(|(k, p)| serde_json::json!([k, int_to_json(p.numer()), int_to_json(p.denom())]))
            .collect();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("degree", &self.degree)?;
        m.serialize_entry("exact", &self.is_exact())?;
        m.serialize_entry("table", &table)?;
        m.serialize_entry("mean", &ratio_to_json(&self.mean()))?;
        if let Some(n) = self.samples {
            m.serialize_entry("samples", &n)?;
        }
        if let Some(seed) = self.seed {
            m.serialize_entry("seed", &seed)?;
        }
        m.end()
    }
}

/// Integer weights over a common denominator.
#[derive(Clone, Debug)]
struct Weights {
    counts: Vec<BigUint>,
    total: BigUint,
}

impl Weights {
    fn into_distribution(self, degree: usize) -> CountDistribution {
        let den = BigInt::from(self.total);
        let probs = self
            .counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, BigRational::new(BigInt::from(c), den.clone())))
            .collect();
        CountDistribution::exact(degree, probs)
    }
}

fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `outer` with each unit replaced by an independent draw from `inner`:
/// `Σ_j outer(j) · inner^{*j}`, scaled so all terms share a denominator.
fn compose(outer: &Weights, inner: &Weights) -> Weights {
    let max = outer.counts.len() - 1;
    let width = (inner.counts.len() - 1) * max + 1;
    let mut out = vec![BigUint::zero(); width];
    let mut power = vec![BigUint::one()];
    // inner.total^(max − j) pads the j-fold convolution to a common denominator.
    let pads: Vec<BigUint> = {
        let mut v = vec![BigUint::one(); max + 1];
        for j in (0..max).rev() {
            v[j] = &v[j + 1] * &inner.total;
        }
        v
    };
    for j in 0..=max {
        if j > 0 {
            power = convolve(&power, &inner.counts);
        }
        let w = &outer.counts[j];
        if w.is_zero() {
            continue;
        }
        let scale = w * &pads[j];
        for (k, c) in power.iter().enumerate() {
            if !c.is_zero() {
                out[k] += &scale * c;
            }
        }
    }
    Weights {
        counts: out,
        total: &outer.total * inner.total.pow(max as u32),
    }
}

fn check_exact(tower: &WreathTower) -> Result<()> {
    if !tower.is_full() {
        return Err(Error::InvalidTower("custom levels have no exact mode".into()));
    }
    if tower.depth() > EXACT_MAX_DEPTH {
        return Err(Error::OutOfRange(format!(
            "exact mode needs depth at most {EXACT_MAX_DEPTH}"
        )));
    }
    if let Some(l) = tower.levels().iter().find(|l| l.degree() > EXACT_MAX_DEGREE) {
        return Err(Error::OutOfRange(format!(
            "exact mode needs level degrees at most {EXACT_MAX_DEGREE}, got {}",
            l.degree()
        )));
    }
    Ok(())
}

/// Per-level weights by cycle-type class sums: `stat(λ)` for each class of
/// `A_d` or `S_d`.
fn level_weights(level: &TowerLevel, stat: impl Fn(&CycleType) -> usize) -> Weights {
    let d = level.degree();
    let alt = matches!(level.kind(), LevelKind::Alt);
    let mut counts = vec![BigUint::zero(); d + 1];
    for ct in partitions(d) {
        if alt && !ct.is_even() {
            continue;
        }
        counts[stat(&ct)] += ct.class_size();
    }
    let mut total = factorial(d);
    if alt {
        total /= BigUint::from(2u32);
    }
    Weights { counts, total }
}

fn exact_distribution(tower: &WreathTower, stat: impl Fn(&CycleType) -> usize + Copy) -> Result<CountDistribution> {
    check_exact(tower)?;
    let mut acc: Option<Weights> = None;
    for level in tower.levels() {
        let w = level_weights(level, stat);
        acc = Some(match acc {
            None => w,
            Some(prev) => compose(&prev, &w),
        });
    }
    let leaves = tower.degrees().iter().product();
    Ok(acc.expect("nonempty tower").into_distribution(leaves))
}

/// Exact fixed-point distribution of a full tower.
///
/// Fixed leaves lie over fixed nodes, and the labels at the fixed nodes of
/// the last level are independent and uniform, so the depth-`m` law is the
/// depth-`m−1` law with every fixed point replaced by a draw from the level
/// group's fixed-point law.
pub fn fixed_point_distribution(tower: &WreathTower) -> Result<FixedPointDistribution> {
    exact_distribution(tower, CycleType::fixed_points)
}

fn sample_distribution(
    tower: &WreathTower,
    samples: u64,
    seed: u64,
    stat: impl Fn(&Perm) -> usize + Sync,
) -> Result<CountDistribution> {
    let leaves = tower.leaf_count()?;
    let shards = samples.div_ceil(SHARD_SIZE);
    let counts = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let n = SHARD_SIZE.min(samples - s * SHARD_SIZE);
            let mut counts = vec![0u64; leaves + 1];
            for _ in 0..n {
                let x = tower.uniform_element(&mut rng)?;
                counts[stat(&x)] += 1;
            }
            Ok::<_, Error>(counts)
        })
        .try_reduce(
            || vec![0u64; leaves + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let probs = counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), BigInt::from(samples))))
        .collect();
    Ok(CountDistribution {
        degree: leaves,
        probs,
        samples: Some(samples),
        seed: Some(seed),
    })
}

/// Distribution of the number of cycles on the leaves.
///
/// In exact mode each cycle of the projection lifts to the cycles of its
/// cycle product, a uniform element of the level group independent across
/// cycles, so the law composes level by level like the fixed-point law.
pub fn cycle_count_distribution(tower: &WreathTower, mode: Mode) -> Result<CountDistribution> {
    match mode {
        Mode::Exact => exact_distribution(tower, CycleType::num_cycles),
        Mode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::OutOfRange("samples must be positive".into()));
            }
            sample_distribution(tower, samples, seed, Perm::num_cycles)
        }
    }
}

/// Monte-Carlo fixed-point distribution, for towers outside exact mode.
pub fn sampled_fixed_points(tower: &WreathTower, samples: u64, seed: u64) -> Result<CountDistribution> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive".into()));
    }
    sample_distribution(tower, samples, seed, Perm::fixed_points)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proportion {
    pub value: BigRational,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl Proportion {
    pub fn is_exact(&self) -> bool {
        self.samples.is_none()
    }
}

impl Serialize for Proportion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("value", &ratio_to_json(&self.value))?;
        m.serialize_entry("exact", &self.is_exact())?;
        if let Some(n) = self.samples {
            m.serialize_entry("samples", &n)?;
        }
        if let Some(seed) = self.seed {
            m.serialize_entry("seed", &seed)?;
        }
        m.end()
    }
}

/// Proportion of elements acting as a single cycle on the leaves.
///
/// Exact for full towers within the exact-mode caps, as the product over
/// levels of the proportion of `d_i`-cycles in `Γ_i`; sampled otherwise with
/// the given `(samples, seed)`.
pub fn full_cycle_proportion(tower: &WreathTower, samples: u64, seed: u64) -> Result<Proportion> {
    if check_exact(tower).is_ok() {
        let mut value = BigRational::one();
        for level in tower.levels() {
            let w = level_weights(level, CycleType::num_cycles);
            value *= BigRational::new(BigInt::from(w.counts[1].clone()), BigInt::from(w.total));
        }
        return Ok(Proportion {
            value,
            samples: None,
            seed: None,
        });
    }
    let dist = sample_distribution(tower, samples.max(1), seed, Perm::num_cycles)?;
    Ok(Proportion {
        value: dist.prob(1),
        samples: dist.samples,
        seed: dist.seed,
    })
}

/// Exact distribution of cycle types over a group, by enumeration.
pub fn cycle_type_distribution(group: &PermGroup, cap: u64) -> Result<BTreeMap<CycleType, BigRational>> {
    let counts = group.par_fold_elements(
        cap,
        BTreeMap::<CycleType, u64>::new,
        |acc, g| *acc.entry(g.cycle_type()).or_default() += 1,
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )?;
    let order = BigInt::from(group.order());
    Ok(counts
        .into_iter()
        .map(|(k, v)| (k, BigRational::new(BigInt::from(v), order.clone())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tower(s: &str) -> WreathTower {
        WreathTower::parse(s).unwrap()
    }

    #[test]
    fn s2_towers() {
        let d = fixed_point_distribution(&tower("S2")).unwrap();
        assert_eq!(d.probs, BTreeMap::from([(0, q(1, 2)), (2, q(1, 2))]));
        let d = fixed_point_distribution(&tower("S2^2")).unwrap();
        assert_eq!(
            d.probs,
            BTreeMap::from([(0, q(5, 8)), (2, q(2, 8)), (4, q(1, 8))])
        );
        let c = cycle_count_distribution(&tower("S2^2"), Mode::Exact).unwrap();
        assert_eq!(
            c.probs,
            BTreeMap::from([(1, q(1, 4)), (2, q(3, 8)), (3, q(1, 4)), (4, q(1, 8))])
        );
        let c = cycle_count_distribution(&tower("S2"), Mode::Exact).unwrap();
        assert_eq!(c.probs, BTreeMap::from([(1, q(1, 2)), (2, q(1, 2))]));
        assert_eq!(full_cycle_proportion(&tower("S2"), 1, 0).unwrap().value, q(1, 2));
        assert_eq!(full_cycle_proportion(&tower("S2^2"), 1, 0).unwrap().value, q(1, 4));
    }

    #[test]
    fn a5_matches_enumeration() {
        let d = fixed_point_distribution(&tower("A5")).unwrap();
        let mut counts = [0i64; 6];
        PermGroup::alternating(5)
            .for_each_element(100, |g| counts[g.fixed_points()] += 1)
            .unwrap();
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(d.prob(k), q(c, 60));
        }
        assert_eq!(d.prob(0), q(24, 60));
    }

    #[test]
    fn exact_mode_rejections() {
        let custom = tower("custom:#PSL3_2");
        assert!(fixed_point_distribution(&custom).is_err());
        assert!(fixed_point_distribution(&tower("S13")).is_err());
        assert!(fixed_point_distribution(&tower("S2^5")).is_err());
        let p = full_cycle_proportion(&custom, 20_000, 4).unwrap();
        assert!(!p.is_exact());
        // 48 of the 168 elements are 7-cycles
        let est = crate::rational::ratio_to_f64(&p.value);
        assert!((est - 48.0 / 168.0).abs() < 0.02, "{est}");
    }

    #[test]
    fn sampling_is_seeded_and_close() {
        let t = tower("S3^2");
        let a = cycle_count_distribution(&t, Mode::MonteCarlo { samples: 50_000, seed: 7 }).unwrap();
        let b = cycle_count_distribution(&t, Mode::MonteCarlo { samples: 50_000, seed: 7 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), q(1, 1));
        let exact = cycle_count_distribution(&t, Mode::Exact).unwrap();
        let tv = crate::rational::ratio_to_f64(&a.total_variation(&exact));
        assert!(tv < 0.02, "{tv}");
    }

    #[test]
    fn json_records_seed() {
        let t = tower("S2^2");
        let d = cycle_count_distribution(&t, Mode::MonteCarlo { samples: 100, seed: 5 }).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["seed"], 5);
        assert_eq!(v["samples"], 100);
        assert_eq!(v["exact"], false);
    }
}
