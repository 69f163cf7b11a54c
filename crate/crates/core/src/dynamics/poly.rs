//! Dense polynomials over `F_p` for primes `p < 2^32`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// `n mod p` for a big integer.
pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        debug_assert!((2..1 << 32).contains(&p));
        for x in &mut c {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    /// Reduces integer coefficients (low to high) modulo `p`.
    pub fn from_ints(p: u64, coeffs: &[BigInt]) -> Self {
        FpPoly::new(p, coeffs.iter().map(|x| reduce_int(x, p)).collect())
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        FpPoly::new(p, coeffs.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![a])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, a: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&x| x * a % self.p).collect())
    }

    pub fn add(&self, other: &FpPoly) -> Self {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + other.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, other: &FpPoly) -> Self {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + self.p - other.c.get(i).unwrap_or(&0)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        FpPoly::new(p, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < divisor.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let dn = divisor.deg();
        let inv = inv_mod(divisor.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len() - dn];
        for i in (0..q.len()).rev() {
            let coef = r[i + dn] * inv % p;
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &d) in divisor.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - coef * d % p) % p;
            }
        }
        r.truncate(dn);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.divrem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| (i as u64 % p) * a % p)
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (acc * x + a) % self.p)
    }

    /// `self(g)` by Horner's rule.
    pub fn compose(&self, g: &FpPoly) -> FpPoly {
        self.c
            .iter()
            .rev()
            .fold(FpPoly::zero(self.p), |acc, &a| acc.mul(g).add(&FpPoly::constant(self.p, a)))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// The `p`-th root of a polynomial in `x^p`.
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    /// The product of the distinct monic irreducible factors.
    pub fn radical(&self) -> FpPoly {
        let f = self.monic();
        if f.deg() == 0 {
            return FpPoly::one(self.p);
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root().radical();
        }
        let mut c = f.gcd(&d);
        let w = f.divrem(&c).0;
        loop {
            let y = c.gcd(&w);
            if y.deg() == 0 {
                break;
            }
            c = c.divrem(&y).0;
        }
        if c.deg() == 0 {
            w
        } else {
            w.mul(&c.pth_root().radical())
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }
}

fn nullity(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][col], p);
        for x in &mut m[rank] {
            *x = *x * inv % p;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    n - rank
}

/// Number of distinct irreducible factors of a squarefree monic `g`: the
/// dimension of the kernel of `h ↦ h^p − h` on `F_p[x]/(g)`.
fn berlekamp_count(g: &FpPoly) -> usize {
    let n = g.deg();
    if n == 0 {
        return 0;
    }
    let p = g.p;
    let xp = FpPoly::x(p).pow_mod(p, g);
    let mut row = FpPoly::one(p);
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let mut r: Vec<u64> = (0..n).map(|j| *row.c.get(j).unwrap_or(&0)).collect();
        r[i] = (r[i] + p - 1) % p;
        m.push(r);
        row = row.mul(&xp).rem(g);
    }
    nullity(m, p)
}

/// Distinct irreducible factors of `g` over `F_p`, counted once each.
pub fn factor_count_mod_p(g: &FpPoly) -> Result<usize> {
    if g.is_zero() {
        return Err(Error::ZeroModP(g.p));
    }
    Ok(berlekamp_count(&g.radical()))
}

/// Degrees of the distinct irreducible factors of `g`, ascending, by
/// distinct-degree factorization of the radical.
pub fn factor_degrees_mod_p(g: &FpPoly) -> Result<Vec<usize>> {
    if g.is_zero() {
        return Err(Error::ZeroModP(g.p));
    }
    let p = g.p;
    let mut rest = g.radical();
    let mut out = Vec::new();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut i = 0;
    while rest.deg() > 0 {
        i += 1;
        if 2 * i > rest.deg() {
            out.push(rest.deg());
            break;
        }
        h = h.pow_mod(p, &rest);
        let factor = h.sub(&x).gcd(&rest);
        if factor.deg() > 0 {
            out.extend(std::iter::repeat_n(i, factor.deg() / i));
            rest = rest.divrem(&factor).0;
            h = h.rem(&rest);
        }
    }
    Ok(out)
}

/// `a/b mod p`, or `None` when `p` divides the denominator.
pub fn reduce_rational(x: &num_rational::BigRational, p: u64) -> Option<u64> {
    let den = reduce_int(x.denom(), p);
    if den == 0 {
        return None;
    }
    let num = reduce_int(&x.numer().abs(), p);
    let num = if x.numer().is_negative() { (p - num) % p } else { num };
    Some(num * inv_mod(den, p) % p)
}
