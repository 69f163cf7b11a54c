//! Brute-force reference computations for integration tests. Nothing here
//! calls into the library's algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use rand::Rng;

/// A permutation as its image list.
pub type P = Vec<usize>;

pub fn identity(n: usize) -> P {
    (0..n).collect()
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &P, b: &P) -> P {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(a: &P) -> P {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// Parses `(0 1 2)(3 4)` on `n` points.
pub fn parse_cycles(s: &str, n: usize) -> P {
    let mut p = identity(n);
    for cycle in s.split(')').map(|c| c.trim().trim_start_matches('(')) {
        let pts: Vec<usize> = cycle
            .split([' ', ','])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().expect("point"))
            .collect();
        for i in 0..pts.len() {
            p[pts[i]] = pts[(i + 1) % pts.len()];
        }
    }
    p
}

pub fn cycle_lengths(p: &P) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn fixed_points(p: &P) -> usize {
    p.iter().enumerate().filter(|(i, &x)| *i == x).count()
}

pub fn is_even(p: &P) -> bool {
    cycle_lengths(p).iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
}

/// Every element of `⟨gens⟩`, by breadth-first closure.
pub fn closure(n: usize, gens: &[P]) -> Vec<P> {
    let mut seen: HashSet<P> = HashSet::new();
    let start = identity(n);
    seen.insert(start.clone());
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let h = compose(g, &out[i]);
            if seen.insert(h.clone()) {
                out.push(h);
            }
        }
        i += 1;
    }
    out
}

/// All permutations of `0..n`, by Heap's algorithm.
pub fn all_perms(n: usize) -> Vec<P> {
    let mut a = identity(n);
    let mut c = vec![0; n];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `(even, odd)` derangement counts of `S_n`.
pub fn derangements_by_parity(n: usize) -> (BigInt, BigInt) {
    if n <= 9 {
        let (mut e, mut o) = (0u64, 0u64);
        for p in all_perms(n) {
            if fixed_points(&p) == 0 {
                if is_even(&p) {
                    e += 1;
                } else {
                    o += 1;
                }
            }
        }
        return (e.into(), o.into());
    }
    // D_n = (n−1)(D_{n−1} + D_{n−2}) and even − odd = (−1)^{n−1}(n−1).
    let (mut d0, mut d1) = (BigInt::from(1), BigInt::from(0));
    for k in 2..=n {
        let next = BigInt::from(k - 1) * (&d0 + &d1);
        d0 = d1;
        d1 = next;
    }
    let diff = if n % 2 == 1 { BigInt::from(n - 1) } else { -BigInt::from(n - 1) };
    ((&d1 + &diff) / 2, (&d1 - &diff) / 2)
}

/// Fixed-point-free share of each coset of `normal` in `group`, as
/// `(count, coset size)` pairs.
pub fn coset_fpf_counts(group: &[P], normal: &[P]) -> Vec<(u64, u64)> {
    let normal_set: HashSet<&P> = normal.iter().collect();
    let mut assigned: HashSet<P> = HashSet::new();
    let mut out = Vec::new();
    for g in group {
        if assigned.contains(g) {
            continue;
        }
        let mut count = 0;
        for n in &normal_set {
            let x = compose(g, n);
            if fixed_points(&x) == 0 {
                count += 1;
            }
            assigned.insert(x);
        }
        out.push((count, normal.len() as u64));
    }
    out
}

/// Smallest `(num, den)` among the pairs, compared as fractions.
pub fn min_fraction(v: &[(u64, u64)]) -> (u64, u64) {
    *v.iter()
        .min_by(|a, b| (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128)))
        .expect("nonempty")
}

/// Elements of the iterated wreath product of the given level groups,
/// outermost first, acting on leaves numbered in mixed radix with the
/// outermost digit most significant. Each element is a labelling of the
/// internal nodes by level-group elements.
pub fn for_each_tower_element(levels: &[Vec<P>], mut f: impl FnMut(&P)) {
    let degrees: Vec<usize> = levels.iter().map(|l| l[0].len()).collect();
    let m = levels.len();
    let leaves: usize = degrees.iter().product();
    // nodes[i] = number of nodes at depth i.
    let nodes: Vec<usize> = (0..m).map(|i| degrees[..i].iter().product()).collect();
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..nodes[i]).map(move |j| (i, j))).collect();
    let mut choice = vec![0usize; slots.len()];
    let offset: Vec<usize> = (0..m).map(|i| nodes[..i].iter().sum()).collect();
    loop {
        let mut image = vec![0; leaves];
        for (leaf, slot) in image.iter_mut().enumerate() {
            let mut digits = vec![0; m];
            let mut rest = leaf;
            for i in (0..m).rev() {
                digits[i] = rest % degrees[i];
                rest /= degrees[i];
            }
            let mut node = 0;
            let mut out = 0;
            for i in 0..m {
                let label = &levels[i][choice[offset[i] + node]];
                out = out * degrees[i] + label[digits[i]];
                node = node * degrees[i] + digits[i];
            }
            *slot = out;
        }
        f(&image);
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < levels[slots[k].0].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Transitive and with no nontrivial blocks, via the smallest block through
/// `{0, b}` for every `b`.
pub fn is_primitive(n: usize, gens: &[P]) -> bool {
    let mut orbit = vec![false; n];
    orbit[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for g in gens {
            if !orbit[g[x]] {
                orbit[g[x]] = true;
                stack.push(g[x]);
            }
        }
    }
    if orbit.iter().any(|&o| !o) {
        return false;
    }
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for b in 1..n {
        let mut parent: Vec<usize> = (0..n).collect();
        parent[b] = 0;
        loop {
            let mut changed = false;
            for g in gens {
                for x in 0..n {
                    let r = find(&mut parent, x);
                    let (u, v) = (find(&mut parent, g[x]), find(&mut parent, g[r]));
                    if u != v {
                        parent[u] = v;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let root = find(&mut parent, 0);
        if (0..n).any(|x| find(&mut parent, x) != root) {
            return false;
        }
    }
    true
}

/// A uniform permutation with the given cycle lengths.
pub fn random_of_type<R: Rng>(lengths: &[usize], rng: &mut R) -> P {
    let n: usize = lengths.iter().sum();
    let mut pts: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        pts.swap(i, rng.gen_range(0..=i));
    }
    let mut p = identity(n);
    let mut at = 0;
    for &l in lengths {
        for i in 0..l {
            p[pts[at + i]] = pts[at + (i + 1) % l];
        }
        at += l;
    }
    p
}

// Polynomials over F_p, coefficients lowest degree first, no trailing zeros.

pub type Poly = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn powm(mut b: u64, mut e: u128, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, (p - 2) as u128, p)
}

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Poly) -> usize {
    a.len().saturating_sub(1)
}

pub fn pmul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn psub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn padd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn pdivrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut q = vec![0; r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulm(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulm(c, y, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(a: &Poly, p: u64) -> Poly {
    let inv = invm(*a.last().unwrap(), p);
    a.iter().map(|&x| mulm(x, inv, p)).collect()
}

pub fn pgcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = pdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

fn pderiv(a: &Poly, p: u64) -> Poly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect())
}

fn ppowmod(base: &Poly, mut e: u128, m: &Poly, p: u64) -> Poly {
    let mut r: Poly = vec![1];
    let mut b = pdivrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = pdivrem(&pmul(&r, &b, p), m, p).1;
        }
        b = pdivrem(&pmul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// `x^(p^k) mod m` by repeated `p`-th powers.
fn frobenius_power(k: usize, m: &Poly, p: u64) -> Poly {
    let mut x: Poly = vec![0, 1];
    for _ in 0..k {
        x = ppowmod(&x, p as u128, m, p);
    }
    x
}

/// Square-free parts `(g, multiplicity)` of a monic polynomial.
fn squarefree_parts(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let c = pgcd(f, &pderiv(f, p), p);
    let mut w = pdivrem(f, &c, p).0;
    let mut c = c;
    let mut i = 1;
    while deg(&w) > 0 {
        let y = pgcd(&w, &c, p);
        let fac = pdivrem(&w, &y, p).0;
        if deg(&fac) > 0 {
            out.push((monic(&fac, p), i));
        }
        w = y;
        c = pdivrem(&c, &w, p).0;
        i += 1;
    }
    if deg(&c) > 0 {
        // c is a polynomial in x^p; take the p-th root coefficientwise.
        let root: Poly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree_parts(&monic(&root, p), p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Splits a square-free product of degree-`k` irreducibles.
fn equal_degree<R: Rng>(g: &Poly, k: usize, p: u64, rng: &mut R, out: &mut Vec<Poly>) {
    if deg(g) == k {
        out.push(g.clone());
        return;
    }
    loop {
        let a: Poly = trim((0..deg(g)).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                t = pdivrem(&pmul(&t, &t, p), g, p).1;
                acc = padd(&acc, &t, p);
            }
            acc
        } else {
            let e = ((p as u128).pow(k as u32) - 1) / 2;
            psub(&ppowmod(&a, e, g, p), &vec![1], p)
        };
        let d = pgcd(g, &b, p);
        if deg(&d) > 0 && deg(&d) < deg(g) {
            let other = pdivrem(g, &d, p).0;
            equal_degree(&d, k, p, rng, out);
            equal_degree(&monic(&other, p), k, p, rng, out);
            return;
        }
    }
}

/// The complete factorization of `f` into monic irreducibles with
/// multiplicities.
pub fn factorize<R: Rng>(f: &Poly, p: u64, rng: &mut R) -> Vec<(Poly, usize)> {
    let f = monic(&trim(f.clone()), p);
    let mut out = Vec::new();
    for (g, mult) in squarefree_parts(&f, p) {
        let mut rest = g;
        let mut k = 1;
        while deg(&rest) >= 2 * k {
            let xk = frobenius_power(k, &rest, p);
            let h = pgcd(&rest, &psub(&xk, &vec![0, 1], p), p);
            if deg(&h) > 0 {
                let mut pieces = Vec::new();
                equal_degree(&h, k, p, rng, &mut pieces);
                out.extend(pieces.into_iter().map(|q| (q, mult)));
                rest = pdivrem(&rest, &h, p).0;
                rest = monic(&rest, p);
            }
            k += 1;
        }
        if deg(&rest) > 0 {
            out.push((rest, mult));
        }
    }
    out
}

/// Degrees of the distinct irreducible factors, descending.
pub fn distinct_factor_degrees<R: Rng>(f: &Poly, p: u64, rng: &mut R) -> Vec<usize> {
    let mut d: Vec<usize> = factorize(f, p, rng).iter().map(|(g, _)| deg(g)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// `f(g(x))` over `F_p`.
pub fn pcompose(f: &Poly, g: &Poly, p: u64) -> Poly {
    let mut out: Poly = vec![];
    for &c in f.iter().rev() {
        out = padd(&pmul(&out, g, p), &trim(vec![c]), p);
    }
    out
}

/// Integer coefficients reduced mod `p`.
pub fn reduce(coeffs: &[i64], p: u64) -> Poly {
    trim(coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

pub fn sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| is[i]).map(|i| i as u64).collect()
}

/// Multiplicative order of `a` mod the prime `p`, by factoring `p − 1`.
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    let mut order = p - 1;
    let mut m = p - 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            while order.is_multiple_of(q) && powm(a, (order / q) as u128, p) == 1 {
                order /= q;
            }
        }
        q += 1;
    }
    if m > 1 && powm(a, (order / m) as u128, p) == 1 {
        order /= m;
    }
    order
}

/// Whether the orbit of `x ↦ x² − x + 1` from 2 reaches 0 mod `p`.
pub fn sylvester_divides(p: u64) -> bool {
    let mut seen: HashSet<u64> = HashSet::new();
    let mut x = 2 % p;
    while seen.insert(x) {
        if x == 0 {
            return true;
        }
        x = (mulm(x, x, p) + p - x + 1) % p;
    }
    false
}

/// Legendre symbol of `a` mod an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if powm(a, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

/// Counts by key.
pub fn tally<K: std::hash::Hash + Eq, I: IntoIterator<Item = K>>(items: I) -> HashMap<K, u64> {
    let mut m = HashMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
