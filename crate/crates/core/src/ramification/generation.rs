use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::belyi_family_check;
use crate::error::{Error, Result};
use crate::perm::{long_cycle, CycleType, Perm, PermGroup};

/// Largest `|G|` for the conjugate sweep.
pub const INVARIABLE_CAP: u64 = 100_000;

/// Triples per sampled shard; shard `s` uses ChaCha8 stream `s` of the seed.
const ORACLE_SHARD: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    AllPrimitive { checked: u64 },
    Counterexample { x: Perm, y: Perm, z: Perm },
}

impl Verdict {
    pub fn is_all_primitive(&self) -> bool {
        matches!(self, Verdict::AllPrimitive { .. })
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::AllPrimitive { checked: a }, Verdict::AllPrimitive { checked: b }) => {
                Verdict::AllPrimitive { checked: a + b }
            }
            (c @ Verdict::Counterexample { .. }, _) | (_, c) => c,
        }
    }
}

/// A uniform element of the `S_d`-class with cycle type `ct`.
pub fn random_of_type<R: Rng + ?Sized>(ct: &CycleType, rng: &mut R) -> Perm {
    let d = ct.degree();
    let mut images: Vec<usize> = (0..d).collect();
    images.shuffle(rng);
    let pi = Perm::from_images(images).unwrap();
    pi.conjugate(&ct.representative())
}

fn all_of_type(ct: &CycleType) -> Vec<Perm> {
    let d = ct.degree();
    let mut a: Vec<usize> = (0..d).collect();
    let mut out = Vec::new();
    loop {
        let p = Perm::from_images(a.clone()).unwrap();
        if &p.cycle_type() == ct {
            out.push(p);
        }
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| a[i - 1] < a[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| a[j] > a[i - 1]).unwrap();
        a.swap(i - 1, j);
        a[i..].reverse();
    }
}

/// Every `(r, s, t)` passing [`belyi_family_check`] in degree `d`.
pub fn admissible_parameters(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for r in 2..=d {
        for s in 1..=d {
            for t in 2..=d {
                if belyi_family_check(d, r, s, t).admissible {
                    out.push((r, s, t));
                }
            }
        }
    }
    out
}

fn is_primitive_triple(x: &Perm, y: &Perm, z: &Perm) -> bool {
    let g = PermGroup::new(x.degree(), vec![x.clone(), y.clone(), z.clone()]).unwrap();
    g.is_primitive().unwrap_or(false)
}

/// Tests that `⟨x, y, z⟩` is primitive for `x = (0 1 … d−1)`, `y` of type
/// `[r, 1^{d−r}]` and `z` of type `[s^q, t]`, over all such `y, z`
/// (exhaustive, `d ≤ 7`) or over random pairs.
pub fn triple_primitivity_oracle(d: usize, r: usize, s: usize, t: usize, mode: OracleMode) -> Result<Verdict> {
    let report = belyi_family_check(d, r, s, t);
    if !report.admissible {
        return Err(Error::Inadmissible(report.violations.join("; ")));
    }
    let ram = report.ramification().expect("admissible parameters");
    let (ty, tz) = (ram.branches()[1].clone(), ram.branches()[2].clone());
    let x = long_cycle(d);
    match mode {
        OracleMode::Exhaustive => {
            if d > 7 {
                return Err(Error::OutOfRange(format!("exhaustive oracle needs d ≤ 7, got {d}")));
            }
            let ys = all_of_type(&ty);
            let zs = all_of_type(&tz);
            Ok(ys
                .par_iter()
                .map(|y| {
                    for z in &zs {
                        if !is_primitive_triple(&x, y, z) {
                            return Verdict::Counterexample {
                                x: x.clone(),
                                y: y.clone(),
                                z: z.clone(),
                            };
                        }
                    }
                    Verdict::AllPrimitive {
                        checked: zs.len() as u64,
                    }
                })
                .reduce(|| Verdict::AllPrimitive { checked: 0 }, Verdict::and))
        }
        OracleMode::Sampled { samples, seed } => {
            let shards = samples.div_ceil(ORACLE_SHARD);
            Ok((0..shards)
                .into_par_iter()
                .map(|shard| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(shard);
                    let n = ORACLE_SHARD.min(samples - shard * ORACLE_SHARD);
                    for _ in 0..n {
                        let y = random_of_type(&ty, &mut rng);
                        let z = random_of_type(&tz, &mut rng);
                        if !is_primitive_triple(&x, &y, &z) {
                            return Verdict::Counterexample { x: x.clone(), y, z };
                        }
                    }
                    Verdict::AllPrimitive { checked: n }
                })
                .reduce(|| Verdict::AllPrimitive { checked: 0 }, Verdict::and))
        }
    }
}

fn element_set(h: &PermGroup) -> Result<BTreeSet<Perm>> {
    Ok(h.elements(INVARIABLE_CAP)?.into_iter().collect())
}

/// The distinct conjugates of `h` in `g`, as generator lists.
fn conjugates(g: &PermGroup, h: &PermGroup) -> Result<Vec<Vec<Perm>>> {
    let mut seen: HashSet<BTreeSet<Perm>> = HashSet::new();
    seen.insert(element_set(h)?);
    let mut out = vec![h.generators().to_vec()];
    let mut i = 0;
    while i < out.len() {
        for x in g.generators() {
            let gens: Vec<Perm> = out[i].iter().map(|y| x.conjugate(y)).collect();
            let set = element_set(&PermGroup::new(g.degree(), gens.clone())?)?;
            if seen.insert(set) {
                out.push(gens);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `true` iff every choice of `G`-conjugates of the subgroups generates a
/// group containing `N`. The first subgroup is held fixed.
pub fn invariably_generates(group: &PermGroup, normal: &PermGroup, subgroups: &[PermGroup]) -> Result<bool> {
    let order = group.order();
    if order > INVARIABLE_CAP.into() {
        return Err(Error::TooLarge {
            order: order.to_string(),
            cap: INVARIABLE_CAP,
        });
    }
    if !normal.is_subgroup_of(group) || subgroups.iter().any(|h| !h.is_subgroup_of(group)) {
        return Err(Error::NotSubgroup);
    }
    let Some((first, rest)) = subgroups.split_first() else {
        return Ok(normal.is_trivial());
    };
    let choices = rest
        .iter()
        .map(|h| conjugates(group, h))
        .collect::<Result<Vec<_>>>()?;
    let mut index = vec![0usize; choices.len()];
    loop {
        let mut gens = first.generators().to_vec();
        for (c, &i) in choices.iter().zip(&index) {
            gens.extend_from_slice(&c[i]);
        }
        let h = PermGroup::new(group.degree(), gens)?;
        if !normal.generators().iter().all(|n| h.contains(n)) {
            return Ok(false);
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == index.len() {
                return Ok(true);
            }
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}
