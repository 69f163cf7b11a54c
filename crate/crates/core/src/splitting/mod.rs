//! The `A_d`-invariant submodules of `F_2^d` and sections of surjections
//! `G → A_d` for `G ≤ C_2 ≀ A_d`.

mod presentation;

pub use presentation::{alternating_relators, coset_count, eval_word, presented_order, satisfies, Word};

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{alternating_generators, factorial, Perm, PermGroup};

/// Largest degree for the exhaustive submodule sweep.
pub const EXHAUSTIVE_MAX_DEGREE: usize = 8;

/// Largest kernel searched by [`find_section`].
pub const SECTION_KERNEL_CAP: usize = 1 << 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Trivial,
    Diagonal,
    Augmentation,
    Full,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::Trivial,
        KernelKind::Diagonal,
        KernelKind::Augmentation,
        KernelKind::Full,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trivial" | "1" => Ok(KernelKind::Trivial),
            "diagonal" | "d" => Ok(KernelKind::Diagonal),
            "augmentation" | "i" => Ok(KernelKind::Augmentation),
            "full" => Ok(KernelKind::Full),
            _ => Err(Error::Parse {
                what: "kernel",
                input: s.to_string(),
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Trivial => "trivial",
            KernelKind::Diagonal => "diagonal",
            KernelKind::Augmentation => "augmentation",
            KernelKind::Full => "full",
        }
    }
}

fn all_ones(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// A reduced echelon basis of a subspace of `F_2^d`, vectors as bitmasks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Span(Vec<u64>);

impl Span {
    fn reduce(&self, mut v: u64) -> u64 {
        for &b in &self.0 {
            let pivot = 63 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; `false` when it was already in the span.
    fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for b in &mut self.0 {
            if *b >> pivot & 1 == 1 {
                *b ^= v;
            }
        }
        self.0.push(v);
        self.0.sort_unstable_by(|a, b| b.cmp(a));
        true
    }
}

/// `σ` acting on coordinates: bit `i` moves to bit `σ(i)`.
fn act(sigma: &Perm, v: u64) -> u64 {
    (0..sigma.degree())
        .filter(|&i| v >> i & 1 == 1)
        .fold(0, |acc, i| acc | 1 << sigma.apply(i))
}

/// The smallest `A_d`-invariant subspace containing `seeds`.
fn module_closure(d: usize, seeds: &[u64]) -> Span {
    let gens = alternating_generators(d);
    let mut span = Span::default();
    let mut queue: VecDeque<u64> = VecDeque::new();
    for &v in seeds {
        if span.insert(v) {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = act(g, v);
            if span.insert(w) {
                queue.push_back(w);
            }
        }
    }
    span
}

/// An `A_d`-invariant subspace of `F_2^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mod2Submodule {
    pub kind: KernelKind,
    pub degree: usize,
    /// Reduced echelon basis as bitmasks; bit `i` is coordinate `i`.
    pub basis: Vec<u64>,
}

impl Mod2Submodule {
    /// The standard description of each of the four submodules.
    pub fn standard(d: usize, kind: KernelKind) -> Result<Self> {
        if d < 5 {
            return Err(Error::DegreeTooSmall(d));
        }
        if d > 64 {
            return Err(Error::OutOfRange(format!("degree {d} exceeds 64")));
        }
        let seeds: Vec<u64> = match kind {
            KernelKind::Trivial => vec![],
            KernelKind::Diagonal => vec![all_ones(d)],
            KernelKind::Augmentation => (1..d).map(|i| 1 | 1 << i).collect(),
            KernelKind::Full => (0..d).map(|i| 1 << i).collect(),
        };
        let mut span = Span::default();
        for v in seeds {
            span.insert(v);
        }
        Ok(Mod2Submodule {
            kind,
            degree: d,
            basis: span.0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: u64) -> bool {
        Span(self.basis.clone()).contains(v)
    }

    /// Every vector of the subspace.
    pub fn elements(&self) -> Vec<u64> {
        (0u64..1 << self.dimension())
            .map(|mask| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0, |acc, (_, &b)| acc ^ b)
            })
            .collect()
    }

    /// Closed under every generator of `A_d`.
    pub fn is_invariant(&self) -> bool {
        alternating_generators(self.degree)
            .iter()
            .all(|g| self.basis.iter().all(|&b| self.contains(act(g, b))))
    }

    /// A basis of a complement, from standard basis vectors.
    fn complement(&self) -> Vec<u64> {
        let mut span = Span(self.basis.clone());
        (0..self.degree).map(|i| 1u64 << i).filter(|&e| span.insert(e)).collect()
    }
}

fn classify(d: usize, span: &Span) -> Option<KernelKind> {
    KernelKind::ALL
        .into_iter()
        .find(|&k| Mod2Submodule::standard(d, k).is_ok_and(|m| m.basis == span.0))
}

/// The `A_d`-invariant subspaces of `F_2^d`, ordered by dimension.
///
/// For `d ≤ 8` every submodule is found as a sum of the cyclic submodules
/// generated by single vectors, and each must be one of the four standard
/// ones; larger `d` uses the standard description directly.
pub fn invariant_submodules(d: usize) -> Result<Vec<Mod2Submodule>> {
    if d < 5 {
        return Err(Error::DegreeTooSmall(d));
    }
    if d > EXHAUSTIVE_MAX_DEGREE {
        return KernelKind::ALL.into_iter().map(|k| Mod2Submodule::standard(d, k)).collect();
    }
    let cyclic: BTreeSet<Span> = (0u64..1 << d).map(|v| module_closure(d, &[v])).collect();
    let mut all = cyclic.clone();
    loop {
        let mut new = Vec::new();
        for a in &all {
            for b in &cyclic {
                let seeds: Vec<u64> = a.0.iter().chain(&b.0).copied().collect();
                let sum = module_closure(d, &seeds);
                if !all.contains(&sum) {
                    new.push(sum);
                }
            }
        }
        if new.is_empty() {
            break;
        }
        all.extend(new);
    }
    let mut out = all
        .iter()
        .map(|span| {
            let kind = classify(d, span).ok_or_else(|| {
                Error::InvalidPartition(format!("unexpected invariant subspace {:?} in degree {d}", span.0))
            })?;
            Ok(Mod2Submodule {
                kind,
                degree: d,
                basis: span.0.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|m| (m.dimension(), m.kind));
    Ok(out)
}

/// `C_2 ≀ A_d` acts on `2d` points, point `2i + s` being sheet `s` over `i`.
pub fn flip(d: usize, v: u64) -> Perm {
    Perm::from_images((0..2 * d).map(|x| if v >> (x / 2) & 1 == 1 { x ^ 1 } else { x }).collect()).unwrap()
}

/// `σ` acting on the base with sheets fixed.
pub fn top(sigma: &Perm) -> Perm {
    let d = sigma.degree();
    Perm::from_images((0..2 * d).map(|x| 2 * sigma.apply(x / 2) + x % 2).collect()).unwrap()
}

/// The image in `S_d`, or `None` if `g` does not preserve the pairs.
pub fn project(g: &Perm) -> Option<Perm> {
    let d = g.degree() / 2;
    if (0..d).any(|i| g.apply(2 * i) / 2 != g.apply(2 * i + 1) / 2) {
        return None;
    }
    Perm::from_images((0..d).map(|i| g.apply(2 * i) / 2).collect()).ok()
}

pub fn wreath_c2_alt(d: usize) -> PermGroup {
    let mut gens = vec![flip(d, 1)];
    gens.extend(alternating_generators(d).iter().map(top));
    PermGroup::new(2 * d, gens).unwrap()
}

fn alternating_order(d: usize) -> BigUint {
    factorial(d) / 2u32
}

/// The subgroups `G ≤ C_2 ≀ A_d` with `G ∩ C_2^d = K` projecting onto `A_d`,
/// by lifting the generating pair of `A_d` over coset representatives of
/// `K` in `C_2^d`.
pub fn groups_with_kernel(d: usize, kernel: &Mod2Submodule) -> Result<Vec<PermGroup>> {
    if !(5..=7).contains(&d) || kernel.degree != d {
        return Err(Error::OutOfRange(format!("groups_with_kernel supports d in 5..=7, got {d}")));
    }
    let complement = kernel.complement();
    let reps: Vec<u64> = (0u64..1 << complement.len())
        .map(|m| {
            complement
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(0, |acc, (_, &c)| acc ^ c)
        })
        .collect();
    let ab = alternating_generators(d);
    let (ta, tb) = (top(&ab[0]), top(&ab[1]));
    let kernel_gens: Vec<Perm> = kernel.basis.iter().map(|&v| flip(d, v)).collect();
    let target = BigUint::from(1u32 << kernel.dimension()) * alternating_order(d);
    let pairs: Vec<(u64, u64)> = reps.iter().flat_map(|&v| reps.iter().map(move |&w| (v, w))).collect();
    let found: Vec<PermGroup> = pairs
        .par_iter()
        .filter_map(|&(v, w)| {
            let mut gens = kernel_gens.clone();
            gens.push(flip(d, v).compose(&ta).unwrap());
            gens.push(flip(d, w).compose(&tb).unwrap());
            let g = PermGroup::new(2 * d, gens).unwrap();
            (g.order() == target).then_some(g)
        })
        .collect();
    let mut out: Vec<PermGroup> = Vec::new();
    for g in found {
        if !out.iter().any(|h| h.same_group(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Images `x, y` in `G` of the generators `a, b` of `A_d` satisfying the
/// relators, so that `a ↦ x, b ↦ y` is a section of the projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub x: Perm,
    pub y: Perm,
}

/// The kernel `G ∩ C_2^d` as a set of bitmasks, after checking that `G`
/// lies in `C_2 ≀ A_d` and projects onto `A_d`.
pub fn kernel_vectors(group: &PermGroup) -> Result<Vec<u64>> {
    if !group.degree().is_multiple_of(2) {
        return Err(Error::NotSubgroup);
    }
    let d = group.degree() / 2;
    if !(5..=12).contains(&d) {
        return Err(Error::OutOfRange(format!("section search supports 5 ≤ d ≤ 12, got {d}")));
    }
    let images = group
        .generators()
        .iter()
        .map(|g| project(g).ok_or(Error::NotSubgroup))
        .collect::<Result<Vec<_>>>()?;
    if images.iter().any(|p| !p.is_even()) {
        return Err(Error::NotSubgroup);
    }
    let image = PermGroup::new(d, images)?;
    if image.order() != alternating_order(d) {
        return Err(Error::OutOfRange("G does not project onto A_d".into()));
    }
    Ok((0u64..1 << d).filter(|&v| group.contains(&flip(d, v))).collect())
}

/// For each element of the projection, one preimage in `G`.
fn preimages(group: &PermGroup, wanted: &[Perm]) -> Vec<Perm> {
    let d = group.degree() / 2;
    let mut lift: HashMap<Perm, Perm> = HashMap::new();
    lift.insert(Perm::identity(d), Perm::identity(2 * d));
    let mut queue = VecDeque::from([Perm::identity(2 * d)]);
    while let Some(g) = queue.pop_front() {
        if wanted.iter().all(|w| lift.contains_key(w)) {
            break;
        }
        for s in group.generators() {
            let h = s.compose(&g).unwrap();
            let p = project(&h).unwrap();
            if let std::collections::hash_map::Entry::Vacant(e) = lift.entry(p) {
                e.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    wanted.iter().map(|w| lift[w].clone()).collect()
}

/// Searches the preimages of `A_d`'s generators for a pair satisfying the
/// defining relators.
pub fn find_section(group: &PermGroup) -> Result<Option<Section>> {
    let kernel = kernel_vectors(group)?;
    if kernel.len() > SECTION_KERNEL_CAP {
        return Err(Error::TooLarge {
            order: kernel.len().to_string(),
            cap: SECTION_KERNEL_CAP as u64,
        });
    }
    let d = group.degree() / 2;
    let ab = alternating_generators(d);
    let lifts = preimages(group, &ab);
    let relators = alternating_relators(d);
    let (ma, mb) = (ab[0].order(), ab[1].order());
    let candidates = |lift: &Perm, order: u64| -> Vec<Perm> {
        kernel
            .iter()
            .map(|&k| flip(d, k).compose(lift).unwrap())
            .filter(|x| x.order() == order)
            .collect()
    };
    let xs = candidates(&lifts[0], ma);
    let ys = candidates(&lifts[1], mb);
    for x in &xs {
        for y in &ys {
            if satisfies(&relators, &[x.clone(), y.clone()]) {
                return Ok(Some(Section {
                    x: x.clone(),
                    y: y.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// `true` iff `x, y ∈ G` project to `A_d`'s generators and satisfy its
/// relators.
pub fn verify_section(group: &PermGroup, section: &Section) -> bool {
    let d = group.degree() / 2;
    let ab = alternating_generators(d);
    group.contains(&section.x)
        && group.contains(&section.y)
        && project(&section.x).as_ref() == Some(&ab[0])
        && project(&section.y).as_ref() == Some(&ab[1])
        && satisfies(&alternating_relators(d), &[section.x.clone(), section.y.clone()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// Generators of `G` in cycle notation on `2d` points.
    pub group: Vec<String>,
    pub x: Option<String>,
    pub y: Option<String>,
}

/// A re-checkable record of the section search for one kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SplittingCertificate {
    pub d: usize,
    pub kernel: KernelKind,
    pub groups_found: usize,
    pub all_split: bool,
    pub witnesses: Vec<WitnessRecord>,
}

pub fn splitting_certificate(d: usize, kind: KernelKind) -> Result<SplittingCertificate> {
    let kernel = Mod2Submodule::standard(d, kind)?;
    let groups = groups_with_kernel(d, &kernel)?;
    let witnesses = groups
        .par_iter()
        .map(|g| {
            let section = find_section(g)?;
            Ok(WitnessRecord {
                group: g.generators().iter().map(ToString::to_string).collect(),
                x: section.as_ref().map(|s| s.x.to_string()),
                y: section.as_ref().map(|s| s.y.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplittingCertificate {
        d,
        kernel: kind,
        groups_found: groups.len(),
        all_split: !groups.is_empty() && witnesses.iter().all(|w| w.x.is_some()),
        witnesses,
    })
}

/// Re-checks a certificate from its own data: every group has the stated
/// kernel and full projection, and every witness is a section.
pub fn verify_certificate(cert: &SplittingCertificate) -> Result<bool> {
    let d = cert.d;
    let kernel = Mod2Submodule::standard(d, cert.kernel)?;
    let mut expected: Vec<u64> = kernel.elements();
    expected.sort_unstable();
    if cert.witnesses.len() != cert.groups_found {
        return Ok(false);
    }
    let mut all_split = !cert.witnesses.is_empty();
    for w in &cert.witnesses {
        let gens: Vec<&str> = w.group.iter().map(String::as_str).collect();
        let g = PermGroup::parse(2 * d, &gens)?;
        if kernel_vectors(&g)? != expected {
            return Ok(false);
        }
        match (&w.x, &w.y) {
            (Some(x), Some(y)) => {
                let section = Section {
                    x: Perm::parse(x, 2 * d)?,
                    y: Perm::parse(y, 2 * d)?,
                };
                if !verify_section(&g, &section) {
                    return Ok(false);
                }
            }
            _ => all_split = false,
        }
    }
    Ok(all_split == cert.all_split)
}
