//! `G = A_n^3 ⋊ S_3` with `S_3` acting on the 2-subsets `J` of `{0, 1, 2}`.
//!
//! `G` acts on `J × {0..n−1}^2`: a point is a 2-subset `j = {a < b}` with a
//! coordinate for each of `a, b`. Copy `c` of `A_n` acts on coordinate `c`
//! wherever it occurs, and `S_3` moves both the subset and the coordinates.
//! The socle of the block group is `A_n^2`, so the slots `(c, j)` with `c ∈ j`
//! carry two invariant partitions: `P_J` (by `j`) and the socle partition
//! `P` (slots on which one copy of `A_n` acts diagonally).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::{alternating_generators, BlockSystem, Perm, PermGroup};

const SUBSETS: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

#[derive(Clone, Debug)]
pub struct ConjugationCounterexample {
    pub n: usize,
    /// `G` on `3·n²` points.
    pub group: PermGroup,
    /// The three blocks indexed by `J`.
    pub blocks: BlockSystem,
    /// The slots `(c, j)`, in the order used by `slot_group`.
    pub slots: Vec<(usize, usize)>,
    /// `G` acting on the six slots.
    pub slot_group: PermGroup,
    /// The socle partition of the slots.
    pub p: BlockSystem,
    /// The slots grouped by `j`.
    pub p_j: BlockSystem,
}

fn point(n: usize, j: usize, coords: [usize; 2]) -> usize {
    j * n * n + coords[0] * n + coords[1]
}

fn unpoint(n: usize, x: usize) -> (usize, [usize; 2]) {
    (x / (n * n), [(x / n) % n, x % n])
}

fn subset_index(a: usize, b: usize) -> usize {
    let key = if a < b { [a, b] } else { [b, a] };
    SUBSETS.iter().position(|s| *s == key).unwrap()
}

/// `G` with `s` permuting the three copies.
fn top_element(n: usize, s: [usize; 3]) -> Perm {
    let images = (0..3 * n * n)
        .map(|x| {
            let (j, coords) = unpoint(n, x);
            let [a, b] = SUBSETS[j];
            let (sa, sb) = (s[a], s[b]);
            let target = subset_index(sa, sb);
            let new = if sa < sb {
                [coords[0], coords[1]]
            } else {
                [coords[1], coords[0]]
            };
            point(n, target, new)
        })
        .collect();
    Perm::from_images(images).unwrap()
}

fn copy_element(n: usize, c: usize, u: &Perm) -> Perm {
    let images = (0..3 * n * n)
        .map(|x| {
            let (j, mut coords) = unpoint(n, x);
            if let Some(pos) = SUBSETS[j].iter().position(|&a| a == c) {
                coords[pos] = u.apply(coords[pos]);
            }
            point(n, j, coords)
        })
        .collect();
    Perm::from_images(images).unwrap()
}

/// The slot `(c′, j′)` that `g` sends slot `(c, j)` to, read off from two
/// points of block `j` differing only in coordinate `c`.
fn slot_image(n: usize, g: &Perm, c: usize, j: usize) -> Option<(usize, usize)> {
    let pos = SUBSETS[j].iter().position(|&a| a == c)?;
    let base = point(n, j, [0, 0]);
    let mut moved = [0, 0];
    moved[pos] = 1;
    let (j0, c0) = unpoint(n, g.apply(base));
    let (j1, c1) = unpoint(n, g.apply(point(n, j, moved)));
    if j0 != j1 {
        return None;
    }
    let diff: Vec<usize> = (0..2).filter(|&k| c0[k] != c1[k]).collect();
    match diff.as_slice() {
        [k] => Some((SUBSETS[j0][*k], j0)),
        _ => None,
    }
}

/// Builds the example for `n ≥ 5`.
pub fn conjugation_counterexample(n: usize) -> Result<ConjugationCounterexample> {
    if n < 5 {
        return Err(Error::DegreeTooSmall(n));
    }
    let mut gens = Vec::new();
    for c in 0..3 {
        for u in alternating_generators(n) {
            gens.push(copy_element(n, c, &u));
        }
    }
    gens.push(top_element(n, [1, 0, 2]));
    gens.push(top_element(n, [1, 2, 0]));
    let group = PermGroup::new(3 * n * n, gens)?;
    let blocks = BlockSystem::contiguous(3 * n * n, n * n)?;

    let slots: Vec<(usize, usize)> = (0..3)
        .flat_map(|j| SUBSETS[j].iter().map(move |&c| (c, j)))
        .collect();
    let index: HashMap<(usize, usize), usize> =
        slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let slot_gens = group
        .generators()
        .iter()
        .map(|g| {
            let images = slots
                .iter()
                .map(|&(c, j)| {
                    slot_image(n, g, c, j)
                        .map(|s| index[&s])
                        .ok_or(Error::NotInvariant)
                })
                .collect::<Result<Vec<_>>>()?;
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let slot_group = PermGroup::new(slots.len(), slot_gens)?;

    // Socle partition of the slots: two slots share a part iff the block
    // kernel acts on the pair of coordinates with order |A_n|, not |A_n|^2.
    let kernel = group.block_kernel(&blocks)?;
    let coordinate_action = |slot: (usize, usize), k: &Perm| -> Perm {
        let (c, j) = slot;
        let pos = SUBSETS[j].iter().position(|&a| a == c).unwrap();
        let images = (0..n)
            .map(|v| {
                let mut coords = [0, 0];
                coords[pos] = v;
                unpoint(n, k.apply(point(n, j, coords))).1[pos]
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    let simple = crate::perm::PermGroup::alternating(n).order();
    let mut labels: Vec<usize> = (0..slots.len()).collect();
    for s in 0..slots.len() {
        for t in s + 1..slots.len() {
            let pair_gens: Vec<Perm> = kernel
                .generators()
                .iter()
                .map(|k| {
                    let a = coordinate_action(slots[s], k);
                    let b = coordinate_action(slots[t], k);
                    let mut images = a.images().to_vec();
                    images.extend(b.images().iter().map(|&y| y + n));
                    Perm::from_images(images).unwrap()
                })
                .collect();
            if PermGroup::new(2 * n, pair_gens)?.order() == simple {
                labels[t] = labels[s].min(labels[t]);
            }
        }
    }
    let p = BlockSystem::from_labels(&labels);
    let p_j = BlockSystem::from_labels(&slots.iter().map(|&(_, j)| j).collect::<Vec<_>>());
    Ok(ConjugationCounterexample {
        n,
        group,
        blocks,
        slots,
        slot_group,
        p,
        p_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::partitions_compatible;
    use num_bigint::BigUint;

    #[test]
    fn counterexample_at_five() {
        let ex = conjugation_counterexample(5).unwrap();
        assert_eq!(ex.group.order(), BigUint::from(60u64.pow(3) * 6));
        assert!(ex.blocks.is_invariant_under(&ex.group));
        assert_eq!(ex.slot_group.order(), BigUint::from(6u32));
        assert!(ex.slot_group.is_transitive());
        assert_eq!(ex.p.num_blocks(), 3);
        assert_eq!(ex.p.block_size(), 2);
        for b in ex.p.blocks() {
            assert_eq!(ex.slots[b[0]].0, ex.slots[b[1]].0);
        }
        assert!(!partitions_compatible(&ex.slot_group, &ex.p, &ex.p_j).unwrap());
        let singletons = BlockSystem::contiguous(6, 1).unwrap();
        assert!(partitions_compatible(&ex.slot_group, &singletons, &ex.p_j).unwrap());
    }
}
