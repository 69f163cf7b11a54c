//! Iterated wreath products `Γ_1 ≀ Γ_2 ≀ … ≀ Γ_r` in their imprimitive action
//! on the leaves of a rooted tree, and the obstruction predicates on
//! imprimitive groups.
//!
//! Levels are listed outermost first. A leaf is a digit string
//! `(x_1, …, x_r)` with `0 ≤ x_i < d_i`, numbered in mixed radix with `x_1`
//! most significant, so the blocks of every level are contiguous ranges.

mod counterexample;
mod predicates;

pub use counterexample::{conjugation_counterexample, ConjugationCounterexample};
pub use predicates::{
    block_components, is_diagonal_element, is_diagonal_subgroup, is_invariant_decomposition,
    is_large_kernel, largeness_profile, partitions_compatible, sextic_twist, socle_partition,
    LevelProfile, LevelRecord,
};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::perm::{BlockSystem, Perm, PermGroup};

/// Largest leaf count for which generators or elements are materialised.
pub const MAX_LEAVES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelKind {
    Alt,
    Sym,
    /// A transitive group given by generators; `source` is how it was named.
    Custom { source: String, generators: Vec<Perm> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    degree: usize,
    kind: LevelKind,
}

impl TowerLevel {
    pub fn alt(degree: usize) -> Self {
        TowerLevel {
            degree,
            kind: LevelKind::Alt,
        }
    }

    pub fn sym(degree: usize) -> Self {
        TowerLevel {
            degree,
            kind: LevelKind::Sym,
        }
    }

    pub fn custom(source: impl Into<String>, group: &PermGroup) -> Self {
        TowerLevel {
            degree: group.degree(),
            kind: LevelKind::Custom {
                source: source.into(),
                generators: group.generators().to_vec(),
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> &LevelKind {
        &self.kind
    }

    pub fn group(&self) -> PermGroup {
        match &self.kind {
            LevelKind::Alt => PermGroup::alternating(self.degree),
            LevelKind::Sym => PermGroup::symmetric(self.degree),
            LevelKind::Custom { generators, .. } => {
                PermGroup::new(self.degree, generators.clone()).expect("validated on construction")
            }
        }
    }
}

impl fmt::Display for TowerLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            LevelKind::Alt => write!(f, "A{}", self.degree),
            LevelKind::Sym => write!(f, "S{}", self.degree),
            LevelKind::Custom { source, .. } => write!(f, "custom:{source}"),
        }
    }
}

/// An iterated wreath product, outermost level first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathTower {
    levels: Vec<TowerLevel>,
}

impl WreathTower {
    pub fn new(levels: Vec<TowerLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidTower("no levels".into()));
        }
        for level in &levels {
            if level.degree < 2 {
                return Err(Error::InvalidTower(format!("{level}: degree must be at least 2")));
            }
            if let LevelKind::Custom { generators, .. } = &level.kind {
                if let Some(g) = generators.iter().find(|g| g.degree() != level.degree) {
                    return Err(Error::DegreeMismatch {
                        left: level.degree,
                        right: g.degree(),
                    });
                }
            }
            if !level.group().is_transitive() {
                return Err(Error::InvalidTower(format!("{level} is not transitive")));
            }
        }
        Ok(WreathTower { levels })
    }

    /// `[Γ]^r` with every level the same.
    pub fn power(level: TowerLevel, depth: usize) -> Result<Self> {
        WreathTower::new(vec![level; depth])
    }

    /// Parses `"A5*A5"`, `"S2^3"`, `"A5^2*S3"` or `"custom:FILE#name"`.
    ///
    /// For custom levels an empty `FILE` (or `catalog`) means the active
    /// catalog, and `S<n>` / `A<n>` names are accepted there too.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "tower",
            input: s.to_string(),
        };
        let mut levels = Vec::new();
        for token in s.split('*').map(str::trim) {
            let (body, reps) = match token.rsplit_once('^') {
                Some((b, r)) if !r.is_empty() && r.bytes().all(|c| c.is_ascii_digit()) => {
                    (b, r.parse::<usize>().map_err(|_| bad())?)
                }
                _ => (token, 1),
            };
            if reps == 0 {
                return Err(bad());
            }
            let level = parse_level(body).map_err(|e| match e {
                Error::Parse { .. } => bad(),
                other => other,
            })?;
            levels.extend(std::iter::repeat_n(level, reps));
        }
        WreathTower::new(levels)
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.degree).collect()
    }

    /// `true` when no level is custom.
    pub fn is_full(&self) -> bool {
        self.levels
            .iter()
            .all(|l| !matches!(l.kind, LevelKind::Custom { .. }))
    }

    /// The tower truncated to its outermost `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        WreathTower::new(self.levels[..depth.min(self.levels.len())].to_vec())
    }

    /// `∏ d_i`, refusing anything above [`MAX_LEAVES`].
    pub fn leaf_count(&self) -> Result<usize> {
        let mut n: usize = 1;
        for l in &self.levels {
            n = n.checked_mul(l.degree).ok_or(Error::LeafOverflow)?;
            if n > MAX_LEAVES {
                return Err(Error::LeafOverflow);
            }
        }
        Ok(n)
    }

    /// `∏_i |Γ_i|^{d_1⋯d_{i−1}}`.
    pub fn order(&self) -> BigUint {
        let mut nodes = BigUint::one();
        let mut order = BigUint::one();
        for l in &self.levels {
            let exp: u32 = nodes.clone().try_into().unwrap_or(u32::MAX);
            order *= l.group().order().pow(exp);
            nodes *= BigUint::from(l.degree);
        }
        order
    }

    /// Number of leaves below one node of level `i` (0-based), i.e. the size
    /// of the blocks cut out by the first `i` digits.
    fn stride(&self, i: usize) -> usize {
        self.levels[i + 1..].iter().map(|l| l.degree).product()
    }

    /// Generators of the full tower group on the leaves: each level group
    /// acting on its digit below the all-zero prefix.
    pub fn tower_group(&self) -> Result<PermGroup> {
        let n = self.leaf_count()?;
        let mut gens = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            let stride = self.stride(i);
            let span = stride * level.degree;
            for g in level.group().generators() {
                let mut images: Vec<usize> = (0..n).collect();
                for (leaf, img) in images.iter_mut().enumerate().take(span) {
                    let digit = leaf / stride;
                    *img = g.apply(digit) * stride + leaf % stride;
                }
                gens.push(Perm::from_images(images)?);
            }
        }
        PermGroup::new(n, gens)
    }

    /// The nested block systems `B_1 ⊃ … ⊃ B_{r−1}`; `B_i` groups leaves by
    /// their first `i` digits.
    pub fn block_systems(&self) -> Result<Vec<BlockSystem>> {
        let n = self.leaf_count()?;
        (1..self.depth())
            .map(|i| BlockSystem::contiguous(n, self.stride(i - 1)))
            .collect()
    }

    /// A uniform element: an independent uniform label from `Γ_i` at every
    /// node of level `i`, read as a tree automorphism.
    pub fn uniform_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Perm> {
        let n = self.leaf_count()?;
        let groups: Vec<PermGroup> = self.levels.iter().map(TowerLevel::group).collect();
        let mut labels: Vec<Vec<Perm>> = Vec::with_capacity(self.depth());
        let mut nodes = 1;
        for (l, g) in self.levels.iter().zip(&groups) {
            labels.push((0..nodes).map(|_| g.random_element(rng)).collect());
            nodes *= l.degree;
        }
        let strides: Vec<usize> = (0..self.depth()).map(|i| self.stride(i)).collect();
        let mut images = vec![0; n];
        for (leaf, img) in images.iter_mut().enumerate() {
            let mut prefix = 0;
            let mut out = 0;
            for (i, l) in self.levels.iter().enumerate() {
                let digit = (leaf / strides[i]) % l.degree;
                out += labels[i][prefix].apply(digit) * strides[i];
                prefix = prefix * l.degree + digit;
            }
            *img = out;
        }
        Ok(Perm::from_images_unchecked(images))
    }
}

/// A uniform element drawn from a ChaCha8 stream seeded with `seed`.
pub fn uniform_element(tower: &WreathTower, seed: u64) -> Result<Perm> {
    tower.uniform_element(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn parse_level(body: &str) -> Result<TowerLevel> {
    let bad = || Error::Parse {
        what: "tower level",
        input: body.to_string(),
    };
    if let Some(rest) = body.strip_prefix("custom:") {
        let (file, name) = rest.rsplit_once('#').ok_or_else(bad)?;
        let catalog = if file.is_empty() || file == "catalog" {
            Catalog::from_env()?
        } else {
            Catalog::load(Path::new(file))?
        };
        let (group, _) = catalog.group_and_socle(name)?;
        return Ok(TowerLevel::custom(rest, &group));
    }
    let mut chars = body.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let degree: usize = chars.as_str().parse().map_err(|_| bad())?;
    match kind {
        'A' => Ok(TowerLevel::alt(degree)),
        'S' => Ok(TowerLevel::sym(degree)),
        _ => Err(bad()),
    }
}

impl fmt::Display for WreathTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for WreathTower {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WreathTower::parse(s)
    }
}

impl Serialize for WreathTower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WreathTower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        WreathTower::parse(&s).map_err(serde::de::Error::custom)
    }
}
