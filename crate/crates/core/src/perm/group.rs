use std::collections::VecDeque;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use super::Perm;
use crate::error::{Error, Result};

/// Groups larger than this refuse element enumeration.
pub const ENUMERATION_CAP: u64 = 100_000_000;

/// A permutation group given by generators, with a lazily built stabilizer chain.
///
/// The chain is built on first use and never changes afterwards, so a group can
/// be shared freely between threads once constructed.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<Chain>,
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    // transversal[β] maps the base point to β
    transversal: Vec<Option<Perm>>,
}

#[derive(Clone, Debug, Default)]
struct Chain {
    levels: Vec<Level>,
}

impl Level {
    fn new(degree: usize, base: usize, gens: Vec<Perm>) -> Self {
        let mut level = Level {
            base,
            gens,
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Perm::identity(n));
        self.orbit = vec![self.base];
        let mut queue = VecDeque::from([self.base]);
        while let Some(b) = queue.pop_front() {
            let ub = self.transversal[b].clone().unwrap();
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(g.mul(&ub));
                    self.orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
    }
}

impl Chain {
    /// Sifts `g` through the levels starting at `start`; returns the residue and
    /// the level at which sifting stopped (`levels.len()` when it went through).
    fn strip(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = h.apply(level.base);
            match &level.transversal[beta] {
                None => return (h, i),
                Some(u) => h = u.inverse().mul(&h),
            }
        }
        let k = self.levels.len();
        (h, k)
    }

    /// Deterministic Schreier–Sims with an optional prescribed base prefix.
    fn build(degree: usize, gens: &[Perm], prefix: &[usize]) -> Chain {
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                let moved = (0..degree).find(|&x| g.apply(x) != x).unwrap();
                base.push(moved);
            }
        }
        let mut chain = Chain {
            levels: base
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let fixing: Vec<Perm> = gens
                        .iter()
                        .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                        .cloned()
                        .collect();
                    Level::new(degree, b, fixing)
                })
                .collect(),
        };

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut restart = None;
            'search: for bi in 0..chain.levels[iu].orbit.len() {
                let beta = chain.levels[iu].orbit[bi];
                for si in 0..chain.levels[iu].gens.len() {
                    let level = &chain.levels[iu];
                    let s = &level.gens[si];
                    let sb = s.apply(beta);
                    let u_beta = level.transversal[beta].as_ref().unwrap();
                    let u_sb = level.transversal[sb].as_ref().unwrap();
                    let schreier = u_sb.inverse().mul(&s.mul(u_beta));
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = chain.strip(&schreier, iu + 1);
                    if j < chain.levels.len() || !h.is_identity() {
                        if j == chain.levels.len() {
                            let moved = (0..degree).find(|&x| h.apply(x) != x).unwrap();
                            chain.levels.push(Level::new(degree, moved, Vec::new()));
                        }
                        for l in iu + 1..=j {
                            chain.levels[l].gens.push(h.clone());
                            chain.levels[l].rebuild_orbit();
                        }
                        restart = Some(j);
                        break 'search;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }
}

impl PermGroup {
    /// A group of the given degree; all generators must have that degree.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    /// A group whose degree is read off the generators.
    pub fn from_generators(generators: Vec<Perm>) -> Result<Self> {
        let degree = generators.first().ok_or(Error::EmptyGenerators)?.degree();
        PermGroup::new(degree, generators)
    }

    pub fn parse(degree: usize, cycles: &[&str]) -> Result<Self> {
        let gens = cycles
            .iter()
            .map(|s| Perm::parse(s, degree))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        PermGroup::new(n, super::symmetric_generators(n)).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        PermGroup::new(n, super::alternating_generators(n)).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        PermGroup::new(n, vec![super::long_cycle(n)]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    fn chain(&self) -> &Chain {
        self.chain
            .get_or_init(|| Chain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain()
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// The order when it fits in a `u64`.
    pub fn small_order(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, j) = self.chain().strip(p, 0);
        j == self.chain().levels.len() && h.is_identity()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.base).collect()
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality as subgroups of `Sym(degree)`.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// `self` is normalized by every generator of `ambient`.
    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        ambient.generators.iter().all(|g| {
            let gi = g.inverse();
            self.generators
                .iter()
                .all(|n| self.contains(&g.mul(n).mul(&gi)))
        })
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut out = vec![point];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let mut o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                o.sort_unstable();
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = Chain::build(self.degree, &self.generators, points);
        let rest: Vec<Level> = chain.levels[points.len()..].to_vec();
        let gens = rest.first().map(|l| l.gens.clone()).unwrap_or_default();
        let group = PermGroup::new(self.degree, gens).unwrap();
        let _ = group.chain.set(Chain { levels: rest });
        group
    }

    /// Restriction of the action to an invariant set, relabelled by position.
    pub fn restrict(&self, points: &[usize]) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.restrict(points).ok_or(Error::NotInvariant))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(points.len(), gens)
    }

    /// A uniformly random element (product of random transversal elements).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in &self.chain().levels {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.mul(level.transversal[beta].as_ref().unwrap());
        }
        g
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::TooLarge {
                order: order.to_string(),
                cap,
            });
        }
        Ok(())
    }

    /// Calls `f` on every element, refusing groups above `cap`.
    pub fn for_each_element<F: FnMut(&Perm)>(&self, cap: u64, mut f: F) -> Result<()> {
        self.check_cap(cap)?;
        let levels = &self.chain().levels;
        fn rec<F: FnMut(&Perm)>(levels: &[Level], prefix: &Perm, f: &mut F) {
            match levels.split_first() {
                None => f(prefix),
                Some((level, rest)) => {
                    for &beta in &level.orbit {
                        let next = prefix.mul(level.transversal[beta].as_ref().unwrap());
                        rec(rest, &next, f);
                    }
                }
            }
        }
        rec(levels, &Perm::identity(self.degree), &mut f);
        Ok(())
    }

    /// Parallel fold over all elements, sharded by the first chain level.
    pub fn par_fold_elements<T, I, F, R>(&self, cap: u64, init: I, fold: F, reduce: R) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &Perm) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        self.check_cap(cap)?;
        let levels = &self.chain().levels;
        fn rec<T, F: Fn(&mut T, &Perm)>(levels: &[Level], prefix: &Perm, acc: &mut T, f: &F) {
            match levels.split_first() {
                None => f(acc, prefix),
                Some((level, rest)) => {
                    for &beta in &level.orbit {
                        let next = prefix.mul(level.transversal[beta].as_ref().unwrap());
                        rec(rest, &next, acc, f);
                    }
                }
            }
        }
        let Some((top, rest)) = levels.split_first() else {
            let mut acc = init();
            fold(&mut acc, &Perm::identity(self.degree));
            return Ok(acc);
        };
        Ok(top
            .orbit
            .par_iter()
            .map(|&beta| {
                let mut acc = init();
                rec(rest, top.transversal[beta].as_ref().unwrap(), &mut acc, &fold);
                acc
            })
            .reduce(&init, &reduce))
    }

    pub fn elements(&self, cap: u64) -> Result<Vec<Perm>> {
        let mut out = Vec::new();
        self.for_each_element(cap, |g| out.push(g.clone()))?;
        Ok(out)
    }

    /// `true` iff every consecutive 3-cycle `(i i+1 i+2)` is a member.
    pub fn contains_alternating(&self) -> Result<bool> {
        let n = self.degree;
        if n < 3 {
            return Err(Error::DegreeTooSmall(n));
        }
        Ok((0..n - 2).all(|i| {
            let c = Perm::from_cycles(n, &[&[i, i + 1, i + 2]]).unwrap();
            self.contains(&c)
        }))
    }

    /// Right coset representatives of a normal subgroup, identity first.
    pub fn coset_representatives(&self, normal: &PermGroup) -> Result<Vec<Perm>> {
        if !normal.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        if !normal.is_normal_in(self) {
            return Err(Error::NotNormal);
        }
        let index = self.order() / normal.order();
        let mut reps = vec![Perm::identity(self.degree)];
        let mut i = 0;
        while BigUint::from(reps.len()) < index && i < reps.len() {
            for g in &self.generators {
                let c = g.mul(&reps[i]);
                let ci = c.inverse();
                if !reps.iter().any(|r| normal.contains(&ci.mul(r))) {
                    reps.push(c);
                }
            }
            i += 1;
        }
        Ok(reps)
    }
}
