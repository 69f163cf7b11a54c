//! Relators for `A_d` on its standard generating pair, and coset enumeration
//! to confirm that they present a group of order `d!/2`.

use crate::error::{Error, Result};
use crate::perm::{alternating_generators, Perm};

/// A word in generators `0, 1, …`; letter `2i` is generator `i`, `2i + 1`
/// its inverse.
pub type Word = Vec<usize>;

fn power(letters: &[usize], e: u64) -> Word {
    letters.iter().copied().cycle().take(letters.len() * e as usize).collect()
}

fn inv_word(w: &[usize]) -> Word {
    w.iter().rev().map(|&l| l ^ 1).collect()
}

/// Evaluates a word on `[a, b]`, composing left to right as a product
/// `w_1 w_2 ⋯` in the group's own multiplication.
pub fn eval_word(word: &[usize], gens: &[Perm]) -> Perm {
    let degree = gens[0].degree();
    let inverses: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    word.iter().fold(Perm::identity(degree), |acc, &l| {
        let g = if l % 2 == 0 { &gens[l / 2] } else { &inverses[l / 2] };
        acc.compose(g).unwrap()
    })
}

/// Relators on `a = (0 1 2)` and `b` (the second generator of
/// `alternating_generators(d)`): the orders of `a`, `b`, each `a b^j` and each
/// commutator `[a, b^j]`.
pub fn alternating_relators(d: usize) -> Vec<Word> {
    let gens = alternating_generators(d);
    let m = gens[1].order();
    let mut out = vec![power(&[0], 3), power(&[2], m)];
    for j in 1..m {
        let bj = power(&[2], j);
        let mut ab = vec![0];
        ab.extend(&bj);
        out.push(power(&ab, eval_word(&ab, &gens).order()));
        let mut comm = vec![1];
        comm.extend(inv_word(&bj));
        comm.push(0);
        comm.extend(&bj);
        out.push(power(&comm, eval_word(&comm, &gens).order()));
    }
    out
}

/// Index of `⟨subgroup⟩` in `⟨gens | relators⟩` by Todd–Coxeter
/// enumeration, failing once `cap` cosets have been defined.
pub fn coset_count(num_gens: usize, relators: &[Word], subgroup: &[Word], cap: usize) -> Result<usize> {
    let cols = 2 * num_gens;
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; cols]];
    let mut parent: Vec<usize> = vec![0];

    fn rep(parent: &mut [usize], mut k: usize) -> usize {
        let mut root = k;
        while parent[root] != root {
            root = parent[root];
        }
        while parent[k] != root {
            let next = parent[k];
            parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(parent: &mut [usize], queue: &mut Vec<usize>, k: usize, l: usize) {
        let (k, l) = (rep(parent, k), rep(parent, l));
        if k == l {
            return;
        }
        let (k, l) = (k.min(l), k.max(l));
        parent[l] = k;
        queue.push(l);
    }

    fn coincidence(table: &mut [Vec<Option<usize>>], parent: &mut [usize], a: usize, b: usize) {
        let cols = table[0].len();
        let mut queue = Vec::new();
        merge(parent, &mut queue, a, b);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..cols {
                let Some(f) = table[e][x] else { continue };
                table[f][x ^ 1] = None;
                let (e1, f1) = (rep(parent, e), rep(parent, f));
                if let Some(t) = table[e1][x] {
                    merge(parent, &mut queue, f1, t);
                } else if let Some(t) = table[f1][x ^ 1] {
                    merge(parent, &mut queue, e1, t);
                } else {
                    table[e1][x] = Some(f1);
                    table[f1][x ^ 1] = Some(e1);
                }
            }
        }
    }

    let mut defined = 1usize;
    let mut define = |table: &mut Vec<Vec<Option<usize>>>, parent: &mut Vec<usize>, c: usize, x: usize| -> Result<()> {
        if defined >= cap {
            return Err(Error::TooLarge {
                order: format!("> {cap}"),
                cap: cap as u64,
            });
        }
        let n = table.len();
        table.push(vec![None; cols]);
        parent.push(n);
        table[c][x] = Some(n);
        table[n][x ^ 1] = Some(c);
        defined += 1;
        Ok(())
    };

    let mut c = 0;
    while c < table.len() {
        let words = if c == 0 { subgroup.iter().chain(relators) } else { [].iter().chain(relators) };
        for w in words {
            if parent[c] != c {
                break;
            }
            // scan and fill
            loop {
                let (mut f, mut i) = (c, 0);
                while i < w.len() {
                    match table[f][w[i]] {
                        Some(n) => {
                            f = n;
                            i += 1;
                        }
                        None => break,
                    }
                }
                if i == w.len() {
                    if f != c {
                        coincidence(&mut table, &mut parent, f, c);
                    }
                    break;
                }
                let (mut b, mut j) = (c, w.len());
                while j > i {
                    match table[b][w[j - 1] ^ 1] {
                        Some(n) => {
                            b = n;
                            j -= 1;
                        }
                        None => break,
                    }
                }
                if j == i {
                    if f != b {
                        coincidence(&mut table, &mut parent, f, b);
                    }
                    break;
                }
                if j == i + 1 {
                    table[f][w[i]] = Some(b);
                    table[b][w[i] ^ 1] = Some(f);
                    break;
                }
                define(&mut table, &mut parent, f, w[i])?;
            }
        }
        if parent[c] == c {
            for x in 0..cols {
                if parent[c] == c && table[c][x].is_none() {
                    define(&mut table, &mut parent, c, x)?;
                }
            }
        }
        c += 1;
    }
    Ok((0..table.len()).filter(|&k| parent[k] == k).count())
}

/// Order of `⟨gens | relators⟩`, enumerating cosets of the trivial subgroup.
pub fn presented_order(num_gens: usize, relators: &[Word], cap: usize) -> Result<usize> {
    coset_count(num_gens, relators, &[], cap)
}

/// `true` iff every relator evaluates to the identity on `gens`.
pub fn satisfies(relators: &[Word], gens: &[Perm]) -> bool {
    relators.iter().all(|w| eval_word(w, gens).is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::factorial;

    #[test]
    fn small_presentations() {
        // ⟨a | a^3⟩ and ⟨a, b | a^2, b^2, (ab)^3⟩ ≅ S_3
        assert_eq!(presented_order(1, &[vec![0, 0, 0]], 100), Ok(3));
        assert_eq!(
            presented_order(2, &[vec![0, 0], vec![2, 2], vec![0, 2, 0, 2, 0, 2]], 100),
            Ok(6)
        );
        assert!(presented_order(2, &[vec![0, 0]], 100).is_err());
        assert_eq!(
            coset_count(2, &[vec![0, 0], vec![2, 2], vec![0, 2, 0, 2, 0, 2]], &[vec![0]], 100),
            Ok(3)
        );
    }

    #[test]
    fn relators_hold() {
        for d in 5..=7 {
            let gens = alternating_generators(d);
            assert!(satisfies(&alternating_relators(d), &gens));
        }
    }

    #[test]
    fn relators_present_alternating_group() {
        for d in 5..=7 {
            // ⟨a⟩ has order at most 3 in the presented group, which maps
            // onto A_d, so index · 3 = d!/2 pins its order down
            let index = coset_count(2, &alternating_relators(d), &[vec![0]], 5_000_000).unwrap();
            assert_eq!(num_bigint::BigUint::from(3 * index), factorial(d) / 2u32, "d = {d}");
        }
    }
}
