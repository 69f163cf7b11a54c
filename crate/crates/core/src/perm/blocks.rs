use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Perm, PermGroup};
use crate::error::{Error, Result};

/// A partition of `{0, …, n−1}` into blocks of equal size.
///
/// Blocks are kept in canonical form: each block sorted, blocks ordered by
/// their smallest point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn from_blocks(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut label = vec![usize::MAX; degree];
        let size = blocks.first().map(Vec::len).unwrap_or(0);
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() || b.len() != size {
                return Err(Error::InvalidPartition("blocks of unequal size".into()));
            }
            for &x in b {
                if x >= degree || label[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {x} repeated or out of range")));
                }
                label[x] = i;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("blocks do not cover all points".into()));
        }
        Ok(BlockSystem::from_labels(&label))
    }

    /// Builds the partition whose classes are the fibres of `labels`.
    pub(crate) fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut remap = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0; n];
        for x in 0..n {
            let idx = *remap.entry(labels[x]).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(x);
            block_of[x] = idx;
        }
        BlockSystem { blocks, block_of }
    }

    /// Contiguous blocks `{0..size}, {size..2·size}, …`.
    pub fn contiguous(degree: usize, size: usize) -> Result<Self> {
        if size == 0 || !degree.is_multiple_of(size) {
            return Err(Error::InvalidPartition(format!("{size} does not divide {degree}")));
        }
        let labels: Vec<usize> = (0..degree).map(|x| x / size).collect();
        Ok(BlockSystem::from_labels(&labels))
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn degree(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map(Vec::len).unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size() <= 1 || self.num_blocks() <= 1
    }

    /// Image of block `b` under `g`, if `g` maps it onto a block.
    pub fn image_of_block(&self, g: &Perm, b: usize) -> Option<usize> {
        let block = &self.blocks[b];
        let target = self.block_of[g.apply(block[0])];
        block
            .iter()
            .all(|&x| self.block_of[g.apply(x)] == target)
            .then_some(target)
    }

    /// The permutation of block indices induced by `g`.
    pub fn induced(&self, g: &Perm) -> Option<Perm> {
        let images = (0..self.num_blocks())
            .map(|b| self.image_of_block(g, b))
            .collect::<Option<Vec<_>>>()?;
        Perm::from_images(images).ok()
    }

    pub fn is_invariant_under(&self, group: &PermGroup) -> bool {
        self.degree() == group.degree() && group.generators().iter().all(|g| self.induced(g).is_some())
    }

    /// `self` is finer than or equal to `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.block_of[x] == other.block_of[b[0]]))
    }

    pub fn block_containing(&self, x: usize) -> &[usize] {
        &self.blocks[self.block_of[x]]
    }
}

impl Serialize for BlockSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let degree = blocks.iter().map(Vec::len).sum();
        BlockSystem::from_blocks(degree, blocks).map_err(serde::de::Error::custom)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        Some((lo, hi))
    }
}

impl PermGroup {
    /// The finest block system in which all `seed` points share a block.
    pub fn block_closure(&self, seed: &[usize]) -> BlockSystem {
        let n = self.degree();
        let mut uf = UnionFind::new(n);
        let mut queue = Vec::new();
        for w in seed.windows(2) {
            if let Some(p) = uf.union(w[0], w[1]) {
                queue.push(p);
            }
        }
        while let Some((a, b)) = queue.pop() {
            for g in self.generators() {
                if let Some(p) = uf.union(g.apply(a), g.apply(b)) {
                    queue.push(p);
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        BlockSystem::from_labels(&labels)
    }

    fn pair_systems(&self) -> Result<BTreeSet<BlockSystem>> {
        if !self.is_transitive() {
            return Err(Error::Intransitive);
        }
        Ok((1..self.degree())
            .map(|b| self.block_closure(&[0, b]))
            .filter(|s| !s.is_trivial())
            .collect())
    }

    /// Nontrivial block systems whose block through 0 is minimal.
    pub fn minimal_block_systems(&self) -> Result<Vec<BlockSystem>> {
        let systems: Vec<BlockSystem> = self.pair_systems()?.into_iter().collect();
        Ok(systems
            .iter()
            .filter(|s| {
                !systems
                    .iter()
                    .any(|t| t != *s && t.refines(s))
            })
            .cloned()
            .collect())
    }

    /// Every nontrivial block system: the pair-generated systems closed under joins.
    pub fn all_block_systems(&self) -> Result<Vec<BlockSystem>> {
        let mut found = self.pair_systems()?;
        let mut frontier: Vec<BlockSystem> = found.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            let current: Vec<BlockSystem> = found.iter().cloned().collect();
            for t in current {
                let mut seed: Vec<usize> = s.block_containing(0).to_vec();
                seed.extend_from_slice(t.block_containing(0));
                let joined = self.block_closure(&seed);
                if !joined.is_trivial() && found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.minimal_block_systems()?.is_empty())
    }

    /// Faithful action on the blocks of an invariant system.
    pub fn block_action(&self, blocks: &BlockSystem) -> Result<PermGroup> {
        let gens = self
            .generators()
            .iter()
            .map(|g| blocks.induced(g).ok_or(Error::NotInvariant))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(blocks.num_blocks(), gens)
    }

    /// The group acting on points followed by block indices, a faithful
    /// combined action used for kernels and block stabilizers.
    fn with_block_points(&self, blocks: &BlockSystem) -> Result<PermGroup> {
        let n = self.degree();
        let gens = self
            .generators()
            .iter()
            .map(|g| {
                let induced = blocks.induced(g).ok_or(Error::NotInvariant)?;
                let mut images = g.images().to_vec();
                images.extend(induced.images().iter().map(|&b| b + n));
                Ok(Perm::from_images_unchecked(images))
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(n + blocks.num_blocks(), gens)
    }

    /// Kernel of the action on blocks.
    pub fn block_kernel(&self, blocks: &BlockSystem) -> Result<PermGroup> {
        let n = self.degree();
        let combined = self.with_block_points(blocks)?;
        let block_points: Vec<usize> = (n..n + blocks.num_blocks()).collect();
        let stab = combined.pointwise_stabilizer(&block_points);
        restrict_prefix(&stab, n)
    }

    /// Setwise stabilizer of block `b`.
    pub fn block_stabilizer(&self, blocks: &BlockSystem, b: usize) -> Result<PermGroup> {
        let n = self.degree();
        let combined = self.with_block_points(blocks)?;
        let stab = combined.pointwise_stabilizer(&[n + b]);
        restrict_prefix(&stab, n)
    }
}

/// Restricts a group on `n + k` points, preserving the first `n`, to those points.
pub(crate) fn restrict_prefix(group: &PermGroup, n: usize) -> Result<PermGroup> {
    let gens: Vec<Perm> = group
        .generators()
        .iter()
        .map(|g| Perm::from_images_unchecked(g.images()[..n].to_vec()))
        .filter(|g| !g.is_identity())
        .collect();
    PermGroup::new(n, gens)
}

/// Every nontrivial invariant partition, by enumerating all set partitions.
/// Exponential; intended for degree ≤ 10.
pub fn brute_force_block_systems(group: &PermGroup) -> Vec<BlockSystem> {
    let n = group.degree();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, group: &PermGroup, out: &mut Vec<BlockSystem>) {
        let n = labels.len();
        if i == n {
            let mut sizes = vec![0usize; max];
            for &l in labels.iter() {
                sizes[l] += 1;
            }
            if sizes.iter().any(|&s| s != sizes[0]) || max == 1 || max == n {
                return;
            }
            let sys = BlockSystem::from_labels(labels);
            if sys.is_invariant_under(group) {
                out.push(sys);
            }
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, max.max(l + 1), labels, group, out);
        }
    }
    if n > 0 {
        labels[0] = 0;
        rec(1, 1, &mut labels, group, &mut out);
    }
    out.sort();
    out
}
