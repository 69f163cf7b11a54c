use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{factorial, restrict_prefix, BlockSystem, CycleType, Perm, PermGroup};

fn check_invariant(group: &PermGroup, blocks: &BlockSystem) -> Result<()> {
    if blocks.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: blocks.degree(),
        });
    }
    if !blocks.is_invariant_under(group) {
        return Err(Error::NotInvariant);
    }
    Ok(())
}

fn alt_order(d: usize) -> BigUint {
    factorial(d) / BigUint::from(2u32)
}

/// The restrictions of `x` to each block, relabelled by position in the block.
pub fn block_components(x: &Perm, blocks: &BlockSystem) -> Result<Vec<Perm>> {
    blocks
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, pts)| x.restrict(pts).ok_or(Error::MovesBlock(b)))
        .collect()
}

/// `true` iff `G` contains `A_d` on every block, tested through the
/// consecutive 3-cycles of each block.
pub fn is_large_kernel(group: &PermGroup, blocks: &BlockSystem, socle_degree: usize) -> Result<bool> {
    if blocks.block_size() != socle_degree {
        return Err(Error::BlockSizeMismatch {
            expected: socle_degree,
            found: blocks.block_size(),
        });
    }
    if socle_degree < 5 {
        return Err(Error::NotApplicable(socle_degree));
    }
    check_invariant(group, blocks)?;
    let n = group.degree();
    Ok(blocks.blocks().iter().all(|pts| {
        pts.windows(3).all(|w| {
            let c = Perm::from_cycles(n, &[&[w[0], w[1], w[2]]]).unwrap();
            group.contains(&c)
        })
    }))
}

/// For every nontrivial block system `B′`, the blocks of `B` and `B′` through
/// a point share more than that point.
pub fn is_invariant_decomposition(group: &PermGroup, blocks: &BlockSystem) -> Result<bool> {
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    check_invariant(group, blocks)?;
    let ours = blocks.block_containing(0);
    Ok(group.all_block_systems()?.iter().all(|other| {
        let theirs = other.block_containing(0);
        ours.iter().filter(|x| theirs.contains(x)).count() > 1
    }))
}

/// The class map of the outer automorphism of `S_6` on cycle types.
pub fn sextic_twist(ct: &CycleType) -> CycleType {
    let swap: [(&[usize], &[usize]); 3] = [
        (&[2, 1, 1, 1, 1], &[2, 2, 2]),
        (&[3, 1, 1, 1], &[3, 3]),
        (&[6], &[3, 2, 1]),
    ];
    for (a, b) in swap {
        if ct.parts() == a {
            return CycleType::from_parts(b.to_vec());
        }
        if ct.parts() == b {
            return CycleType::from_parts(a.to_vec());
        }
    }
    ct.clone()
}

/// `true` iff the components are conjugate under `Aut(A_d)`: equal cycle
/// types, or for `d = 6` equal up to the outer twist.
pub fn is_diagonal_element(components: &[Perm], socle_degree: usize) -> Result<bool> {
    let first = components
        .first()
        .ok_or_else(|| Error::OutOfRange("empty component list".into()))?;
    if let Some(c) = components.iter().find(|c| c.degree() != first.degree()) {
        return Err(Error::DegreeMismatch {
            left: first.degree(),
            right: c.degree(),
        });
    }
    let ct = first.cycle_type();
    Ok(components.iter().all(|c| {
        let other = c.cycle_type();
        other == ct || (socle_degree == 6 && sextic_twist(&other) == ct)
    }))
}

/// `true` iff every block projection of `K` is injective.
pub fn is_diagonal_subgroup(kernel: &PermGroup, blocks: &BlockSystem) -> Result<bool> {
    for g in kernel.generators() {
        block_components(g, blocks)?;
    }
    let order = kernel.order();
    for pts in blocks.blocks() {
        if kernel.restrict(pts)?.order() != order {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `K ∩ ∏ A_d`: the elements of the block kernel that are even on every block.
fn even_part(kernel: &PermGroup, blocks: &BlockSystem) -> Result<PermGroup> {
    let n = kernel.degree();
    let m = blocks.num_blocks();
    let gens = kernel
        .generators()
        .iter()
        .map(|k| {
            let parts = block_components(k, blocks)?;
            let mut images = k.images().to_vec();
            for (b, part) in parts.iter().enumerate() {
                let (lo, hi) = (n + 2 * b, n + 2 * b + 1);
                if part.is_even() {
                    images.extend([lo, hi]);
                } else {
                    images.extend([hi, lo]);
                }
            }
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let combined = PermGroup::new(n + 2 * m, gens)?;
    let markers: Vec<usize> = (0..m).map(|b| n + 2 * b).collect();
    restrict_prefix(&combined.pointwise_stabilizer(&markers), n)
}

/// The partition of the blocks along which `N = K ∩ A_d^m` splits into
/// diagonal simple factors.
///
/// Blocks `j, j′` share a part iff `N` projects onto the pair with order
/// `|A_d|`. Parts are sorted lists of block indices, ordered by first entry.
pub fn socle_partition(
    group: &PermGroup,
    blocks: &BlockSystem,
    socle_degree: usize,
) -> Result<Vec<Vec<usize>>> {
    if blocks.block_size() != socle_degree {
        return Err(Error::BlockSizeMismatch {
            expected: socle_degree,
            found: blocks.block_size(),
        });
    }
    if socle_degree < 5 {
        return Err(Error::NotApplicable(socle_degree));
    }
    check_invariant(group, blocks)?;
    let kernel = group.block_kernel(blocks)?;
    if kernel.is_trivial() {
        return Err(Error::TrivialKernel);
    }
    let socle = even_part(&kernel, blocks)?;
    let simple = alt_order(socle_degree);
    let m = blocks.num_blocks();
    for pts in blocks.blocks() {
        if socle.restrict(pts)?.order() != simple {
            return Err(Error::NotSocleProduct);
        }
    }
    let mut part_of: Vec<usize> = (0..m).collect();
    for j in 0..m {
        if part_of[j] != j {
            continue;
        }
        for k in j + 1..m {
            if part_of[k] != k {
                continue;
            }
            let mut pts = blocks.blocks()[j].clone();
            pts.extend_from_slice(&blocks.blocks()[k]);
            let order = socle.restrict(&pts)?.order();
            if order == simple {
                part_of[k] = j;
            } else if order != &simple * &simple {
                return Err(Error::NotSocleProduct);
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for j in 0..m {
        if part_of[j] == j {
            parts.push((j..m).filter(|&k| part_of[k] == j).collect());
        }
    }
    let expected = (0..parts.len()).fold(BigUint::one(), |acc, _| acc * &simple);
    if socle.order() != expected {
        return Err(Error::NotSocleProduct);
    }
    Ok(parts)
}

/// Condition (1) of compatibility: the images of the parts of `P` in the
/// parts of `Q` are pairwise equal or disjoint.
pub fn partitions_compatible(group: &PermGroup, p: &BlockSystem, q: &BlockSystem) -> Result<bool> {
    check_invariant(group, p)?;
    check_invariant(group, q)?;
    let images: Vec<Vec<usize>> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut img: Vec<usize> = b.iter().map(|&x| q.block_of(x)).collect();
            img.sort_unstable();
            img.dedup();
            img
        })
        .collect();
    Ok(images.iter().enumerate().all(|(i, a)| {
        images[i + 1..]
            .iter()
            .all(|b| a == b || a.iter().all(|x| !b.contains(x)))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    /// 1-based, outermost first.
    pub level: usize,
    pub degree: usize,
    #[serde(serialize_with = "crate::rational::ser_biguint")]
    pub kernel_order: BigUint,
    pub galois_proper: bool,
    /// `None` where largeness is not defined (abelian or non-simple socle).
    pub large: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelProfile {
    pub levels: Vec<LevelRecord>,
    pub warnings: Vec<String>,
}

impl LevelProfile {
    /// `true` iff every level is large (and hence Galois-proper).
    pub fn all_large(&self) -> bool {
        self.levels.iter().all(|l| l.large == Some(true))
    }
}

/// Per-level kernel orders, Galois-properness and largeness for a group with
/// nested block systems `B_1 ⊃ … ⊃ B_{r−1}` (coarsest first) and socle
/// degrees `d_1, …, d_r`.
///
/// Level 1 is the action on the blocks of `B_1`; level `i` is the kernel of
/// the action on `B_i` (points for `i = r`) over the action on `B_{i−1}`.
pub fn largeness_profile(
    group: &PermGroup,
    systems: &[BlockSystem],
    socle_degrees: &[usize],
) -> Result<LevelProfile> {
    let r = systems.len() + 1;
    if socle_degrees.len() != r {
        return Err(Error::OutOfRange(format!(
            "{} socle degrees for {r} levels",
            socle_degrees.len()
        )));
    }
    for (i, s) in systems.iter().enumerate() {
        check_invariant(group, s)?;
        if i > 0 && !s.refines(&systems[i - 1]) {
            return Err(Error::NotNested);
        }
    }
    let n = group.degree();
    let mut actions = Vec::with_capacity(r);
    for s in systems {
        actions.push(group.block_action(s)?);
    }
    actions.push(group.clone());
    let counts: Vec<usize> = systems
        .iter()
        .map(BlockSystem::num_blocks)
        .chain(std::iter::once(n))
        .collect();

    let mut levels = Vec::with_capacity(r);
    let mut warnings = Vec::new();
    for i in 0..r {
        let d = socle_degrees[i];
        let outer = if i == 0 { 1 } else { counts[i - 1] };
        if counts[i] != outer * d {
            return Err(Error::BlockSizeMismatch {
                expected: d,
                found: counts[i] / outer,
            });
        }
        let action = &actions[i];
        let (kernel_order, large) = if i == 0 {
            let large = if d >= 5 { Some(action.contains_alternating()?) } else { None };
            (action.order(), large)
        } else {
            let labels: Vec<usize> = match systems.get(i) {
                Some(s) => s
                    .blocks()
                    .iter()
                    .map(|b| systems[i - 1].block_of(b[0]))
                    .collect(),
                None => (0..n).map(|x| systems[i - 1].block_of(x)).collect(),
            };
            let induced = BlockSystem::from_labels(&labels);
            let kernel = action.block_kernel(&induced)?;
            let large = if d >= 5 {
                Some(is_large_kernel(action, &induced, d)?)
            } else {
                None
            };
            (kernel.order(), large)
        };
        if large.is_none() {
            warnings.push(format!(
                "level {}: largeness not applicable for socle degree {d}",
                i + 1
            ));
        }
        levels.push(LevelRecord {
            level: i + 1,
            degree: d,
            galois_proper: kernel_order > BigUint::one(),
            kernel_order,
            large,
        });
    }
    Ok(LevelProfile { levels, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::WreathTower;

    fn blocks_of(n: usize, d: usize) -> BlockSystem {
        BlockSystem::contiguous(n, d).unwrap()
    }

    /// Generators of `A_5` placed on the given blocks simultaneously.
    fn diag(n: usize, d: usize, blocks: &[usize], gens: &[Perm]) -> Vec<Perm> {
        gens.iter()
            .map(|u| {
                let mut images: Vec<usize> = (0..n).collect();
                for &b in blocks {
                    for x in 0..d {
                        images[b * d + x] = b * d + u.apply(x);
                    }
                }
                Perm::from_images(images).unwrap()
            })
            .collect()
    }

    fn swap_blocks(n: usize, d: usize, a: usize, b: usize) -> Perm {
        let mut images: Vec<usize> = (0..n).collect();
        for x in 0..d {
            images[a * d + x] = b * d + x;
            images[b * d + x] = a * d + x;
        }
        Perm::from_images(images).unwrap()
    }

    #[test]
    fn large_kernel_examples() {
        let full = WreathTower::parse("A5*A5").unwrap().tower_group().unwrap();
        assert!(is_large_kernel(&full, &blocks_of(25, 5), 5).unwrap());

        let a5 = PermGroup::alternating(5);
        let mut gens = diag(10, 5, &[0, 1], a5.generators());
        gens.push(swap_blocks(10, 5, 0, 1));
        let diagonal = PermGroup::new(10, gens).unwrap();
        assert!(!is_large_kernel(&diagonal, &blocks_of(10, 5), 5).unwrap());
        assert_eq!(
            socle_partition(&diagonal, &blocks_of(10, 5), 5).unwrap(),
            vec![vec![0, 1]]
        );

        let s5s2 = WreathTower::parse("S2*S5").unwrap().tower_group().unwrap();
        assert!(is_large_kernel(&s5s2, &blocks_of(10, 5), 5).unwrap());
        assert_eq!(
            socle_partition(&s5s2, &blocks_of(10, 5), 5).unwrap(),
            vec![vec![0], vec![1]]
        );

        assert!(matches!(
            is_large_kernel(&full, &blocks_of(25, 5), 4),
            Err(Error::BlockSizeMismatch { .. })
        ));
    }

    #[test]
    fn three_block_partition() {
        let a5 = PermGroup::alternating(5);
        let mut gens = diag(15, 5, &[0], a5.generators());
        gens.extend(diag(15, 5, &[1, 2], a5.generators()));
        gens.push(swap_blocks(15, 5, 1, 2));
        let g = PermGroup::new(15, gens).unwrap();
        let b = blocks_of(15, 5);
        assert_eq!(socle_partition(&g, &b, 5).unwrap(), vec![vec![0], vec![1, 2]]);
        assert!(!is_large_kernel(&g, &b, 5).unwrap());
    }

    #[test]
    fn trivial_kernel_rejected() {
        let g = PermGroup::new(10, vec![swap_blocks(10, 5, 0, 1)]).unwrap();
        assert_eq!(
            socle_partition(&g, &blocks_of(10, 5), 5),
            Err(Error::TrivialKernel)
        );
    }

    #[test]
    fn invariance_examples() {
        let g = WreathTower::parse("S2^3").unwrap().tower_group().unwrap();
        assert!(is_invariant_decomposition(&g, &blocks_of(8, 2)).unwrap());
        let v4 = PermGroup::parse(4, &["(0 1)(2 3)", "(0 2)(1 3)"]).unwrap();
        let b = BlockSystem::from_blocks(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!is_invariant_decomposition(&v4, &b).unwrap());
        let a5a5 = WreathTower::parse("A5*A5").unwrap().tower_group().unwrap();
        assert!(is_invariant_decomposition(&a5a5, &blocks_of(25, 5)).unwrap());
    }

    #[test]
    fn diagonal_elements() {
        let p = |s: &str, n: usize| Perm::parse(s, n).unwrap();
        assert!(!is_diagonal_element(&[p("(0 1)", 3), p("(0 1 2)", 3)], 3).unwrap());
        assert!(is_diagonal_element(&[p("(0 1 2)", 4), p("(1 2 3)", 4)], 4).unwrap());
        assert!(is_diagonal_element(&[p("(0 1)(2 3)(4 5)", 6), p("(0 1)", 6)], 6).unwrap());
        assert!(!is_diagonal_element(&[p("(0 1)(2 3)(4 5)", 7), p("(0 1)", 7)], 7).unwrap());
        assert!(is_diagonal_element(&[], 5).is_err());
    }

    #[test]
    fn diagonal_subgroups() {
        let a5 = PermGroup::alternating(5);
        let b = blocks_of(10, 5);
        let d = PermGroup::new(10, diag(10, 5, &[0, 1], a5.generators())).unwrap();
        assert!(is_diagonal_subgroup(&d, &b).unwrap());
        let mut gens = diag(10, 5, &[0], a5.generators());
        gens.extend(diag(10, 5, &[1], a5.generators()));
        let prod = PermGroup::new(10, gens).unwrap();
        assert!(!is_diagonal_subgroup(&prod, &b).unwrap());
        assert!(is_diagonal_subgroup(&PermGroup::trivial(10), &b).unwrap());
        let moving = PermGroup::new(10, vec![swap_blocks(10, 5, 0, 1)]).unwrap();
        assert_eq!(is_diagonal_subgroup(&moving, &b), Err(Error::MovesBlock(0)));
    }

    #[test]
    fn compatibility_with_trivial_partitions() {
        let g = WreathTower::parse("S2*S3").unwrap().tower_group().unwrap();
        let q = blocks_of(6, 3);
        let singletons = blocks_of(6, 1);
        let whole = blocks_of(6, 6);
        assert!(partitions_compatible(&g, &singletons, &q).unwrap());
        assert!(partitions_compatible(&g, &q, &singletons).unwrap());
        assert!(partitions_compatible(&g, &whole, &q).unwrap());
        let bad = BlockSystem::from_blocks(6, vec![vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        assert_eq!(partitions_compatible(&g, &bad, &q), Err(Error::NotInvariant));
    }

    #[test]
    fn profiles() {
        let t = WreathTower::parse("A5*A5").unwrap();
        let g = t.tower_group().unwrap();
        let prof = largeness_profile(&g, &t.block_systems().unwrap(), &[5, 5]).unwrap();
        assert!(prof.all_large());
        assert_eq!(prof.levels[1].kernel_order, BigUint::from(60u32).pow(5));

        let a5 = PermGroup::alternating(5);
        let mut gens = diag(10, 5, &[0, 1], a5.generators());
        gens.push(swap_blocks(10, 5, 0, 1));
        let d = PermGroup::new(10, gens).unwrap();
        let prof = largeness_profile(&d, &[blocks_of(10, 5)], &[2, 5]).unwrap();
        assert_eq!(prof.levels[1].large, Some(false));
        assert!(prof.levels[1].galois_proper);
        assert_eq!(prof.levels[0].large, None);

        let t = WreathTower::parse("S2^3").unwrap();
        let g = t.tower_group().unwrap();
        let prof = largeness_profile(&g, &t.block_systems().unwrap(), &[2, 2, 2]).unwrap();
        assert!(prof.levels.iter().all(|l| l.galois_proper && l.large.is_none()));
        assert_eq!(prof.warnings.len(), 3);

        let systems = t.block_systems().unwrap();
        let reversed = vec![systems[1].clone(), systems[0].clone()];
        assert_eq!(
            largeness_profile(&g, &reversed, &[2, 2, 2]),
            Err(Error::NotNested)
        );
    }
}
