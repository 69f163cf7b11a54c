use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{factorial, partitions, Perm, PermGroup};
use crate::rational::{int_to_json, ratio_to_json};

/// Largest group traversed element by element. M23 (order 10 200 960) is the
/// largest catalog group.
pub const COSET_CAP: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRow {
    /// A representative of the coset, in cycle notation.
    pub label: String,
    pub fpf: BigRational,
}

/// Fixed-point-free proportions in the cosets of a normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetFpfTable {
    pub group: String,
    pub subgroup: String,
    pub rows: Vec<CosetRow>,
    pub alpha: BigRational,
    /// `"class-sums"` or `"enumeration"`.
    pub method: &'static str,
}

impl CosetFpfTable {
    fn from_rows(rows: Vec<CosetRow>, method: &'static str) -> Self {
        let alpha = rows
            .iter()
            .map(|r| r.fpf.clone())
            .min()
            .expect("at least one coset");
        CosetFpfTable {
            group: String::new(),
            subgroup: String::new(),
            rows,
            alpha,
            method,
        }
    }

    pub fn named(mut self, group: impl Into<String>, subgroup: impl Into<String>) -> Self {
        self.group = group.into();
        self.subgroup = subgroup.into();
        self
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("coset,num,den\n");
        for r in &self.rows {
            out.push_str(&format!("\"{}\",{},{}\n", r.label, r.fpf.numer(), r.fpf.denom()));
        }
        out
    }
}

impl Serialize for CosetFpfTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!([r.label, int_to_json(r.fpf.numer()), int_to_json(r.fpf.denom())])
            })
            .collect();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("group", &self.group)?;
        m.serialize_entry("subgroup", &self.subgroup)?;
        m.serialize_entry("table", &table)?;
        m.serialize_entry("alpha", &ratio_to_json(&self.alpha))?;
        m.serialize_entry("method", self.method)?;
        m.end()
    }
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `S_n / A_n` by cycle-type class sums.
pub fn symmetric_coset_table(n: usize) -> Result<CosetFpfTable> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let half = factorial(n) / BigUint::from(2u32);
    let (mut even, mut odd) = (BigUint::zero(), BigUint::zero());
    for ct in partitions(n) {
        if ct.fixed_points() == 0 {
            if ct.is_even() {
                even += ct.class_size();
            } else {
                odd += ct.class_size();
            }
        }
    }
    let transposition = Perm::from_cycles(n, &[&[0, 1]])?;
    Ok(CosetFpfTable::from_rows(
        vec![
            CosetRow {
                label: Perm::identity(n).to_string(),
                fpf: ratio(even, half.clone()),
            },
            CosetRow {
                label: transposition.to_string(),
                fpf: ratio(odd, half),
            },
        ],
        "class-sums",
    ))
}

/// The proportion of fixed-point-free elements in each coset `rN`.
///
/// `S_n ⊳ A_n` is recognised from the orders and handled by class sums;
/// everything else is enumerated as transversal × `N`, refusing `|G|` above
/// [`COSET_CAP`].
pub fn coset_fpf_table(group: &PermGroup, normal: &PermGroup) -> Result<CosetFpfTable> {
    let n = group.degree();
    if normal.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: normal.degree(),
        });
    }
    if !normal.is_subgroup_of(group) {
        return Err(Error::NotSubgroup);
    }
    if !normal.is_normal_in(group) {
        return Err(Error::NotNormal);
    }
    let order = group.order();
    if n >= 2 && order == factorial(n) && normal.order() * BigUint::from(2u32) == order {
        return symmetric_coset_table(n);
    }
    if order > BigUint::from(COSET_CAP) {
        return Err(Error::TooLarge {
            order: order.to_string(),
            cap: COSET_CAP,
        });
    }
    let reps = group.coset_representatives(normal)?;
    let inverses: Vec<Perm> = reps.iter().map(Perm::inverse).collect();
    let k = reps.len();
    let counts = normal.par_fold_elements(
        COSET_CAP,
        || vec![0u64; k],
        |acc, x| {
            for (c, r_inv) in acc.iter_mut().zip(&inverses) {
                // r·x fixes p iff x(p) = r⁻¹(p)
                if (0..n).all(|p| x.apply(p) != r_inv.apply(p)) {
                    *c += 1;
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )?;
    let size = normal.order();
    let rows = reps
        .iter()
        .zip(counts)
        .map(|(r, c)| CosetRow {
            label: r.to_string(),
            fpf: ratio(BigUint::from(c), size.clone()),
        })
        .collect();
    Ok(CosetFpfTable::from_rows(rows, "enumeration"))
}

/// Derangement proportions in the two cosets of `A_n` in `S_n`:
/// `Σ_{i≤n} (−1)^i/i! ± (n−1)/n!`, with `+` on `A_n` exactly when `n` is odd.
///
/// Returns `(A_n coset, odd coset)`.
pub fn olds_coset_formula(n: usize) -> Result<(BigRational, BigRational)> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..=n {
        if i > 0 {
            fact *= BigInt::from(i);
        }
        let term = BigRational::new(BigInt::one(), fact.clone());
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let correction = BigRational::new(BigInt::from(n - 1), fact);
    Ok(if n % 2 == 1 {
        (&sum + &correction, sum - correction)
    } else {
        (&sum - &correction, sum + correction)
    })
}

/// The fixed-point-free proportion of the whole group, for reports.
pub fn fpf_proportion(table: &CosetFpfTable) -> Option<f64> {
    let total: BigRational = table.rows.iter().map(|r| r.fpf.clone()).sum();
    (total / BigRational::from_integer(BigInt::from(table.rows.len()))).to_f64()
}
