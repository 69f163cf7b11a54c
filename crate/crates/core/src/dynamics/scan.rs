//! Prime-range scans, their reports, densities and merging.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    factor_count_mod_p, frobenius_degrees_mod_p, orbit_hits_mod_p, primes_in_range, DynamicalSystem, HitOutcome,
    FROBENIUS_DEGREE_CAP, MAX_PRIME,
};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, ratio_decimal, ratio_string};

/// Largest iterate degree `d^{n_max}` in a stability scan.
pub const STABILITY_DEGREE_CAP: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Hits,
    Stability,
    Frobenius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub from: u64,
    pub to: u64,
}

mod int_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = v.iter().map(crate::rational::int_to_json).collect();
        vals.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.iter()
            .map(|v| {
                let s = match v {
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::String(s) => s.clone(),
                    _ => return Err(serde::de::Error::custom("coefficient must be an integer")),
                };
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("bad coefficient {s}")))
            })
            .collect()
    }
}

mod ratio_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            _ => return Err(serde::de::Error::custom("rational must be a string or integer")),
        };
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// An experiment definition, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    #[serde(with = "int_list")]
    pub f: Vec<BigInt>,
    #[serde(with = "ratio_str")]
    pub a: BigRational,
    #[serde(with = "ratio_str")]
    pub a0: BigRational,
    pub mode: ScanMode,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub primes: PrimeRange,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Experiment {
    pub fn system(&self) -> Result<DynamicalSystem> {
        DynamicalSystem::new(self.f.clone(), self.a.clone(), self.a0.clone())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let e: Experiment = serde_json::from_str(s).map_err(|e| Error::OutOfRange(format!("experiment: {e}")))?;
        e.validate()?;
        Ok(e)
    }

    /// Checks that every field the mode needs is present and within caps.
    pub fn validate(&self) -> Result<()> {
        let sys = self.system()?;
        if self.primes.from > self.primes.to {
            return Err(Error::OutOfRange(format!(
                "empty prime range {}..{}",
                self.primes.from, self.primes.to
            )));
        }
        if self.primes.to > MAX_PRIME {
            return Err(Error::OutOfRange(format!("primes must not exceed {MAX_PRIME}")));
        }
        let degree_of = |n: usize| (sys.degree() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        match self.mode {
            ScanMode::Hits => {}
            ScanMode::Stability => {
                match self.c {
                    Some(c) if c >= 1 => {}
                    _ => return Err(Error::OutOfRange("stability scans need C ≥ 1".into())),
                }
                let n = self.horizon()?;
                if degree_of(n) > STABILITY_DEGREE_CAP as u128 {
                    return Err(Error::OutOfRange(format!(
                        "d^n_max exceeds the stability degree cap {STABILITY_DEGREE_CAP}"
                    )));
                }
            }
            ScanMode::Frobenius => {
                if self.n_max.is_none() {
                    return Err(Error::OutOfRange("frobenius scans need n_max".into()));
                }
                if degree_of(self.n_max.unwrap()) > FROBENIUS_DEGREE_CAP as u128 {
                    return Err(Error::OutOfRange(format!(
                        "d^n exceeds the degree cap {FROBENIUS_DEGREE_CAP}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn horizon(&self) -> Result<usize> {
        match self.n_max {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(Error::OutOfRange("stability scans need n_max ≥ 1".into())),
        }
    }

    /// Same experiment apart from the prime range.
    fn same_definition(&self, other: &Experiment) -> bool {
        Experiment {
            primes: other.primes,
            ..self.clone()
        } == *other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    Hit {
        n: u64,
    },
    NoHit,
    Skipped {
        reason: String,
    },
    /// `factor_counts[i]` belongs to iterate `i + 1`.
    Stability {
        factor_counts: Vec<usize>,
        c_stable_up_to: usize,
        non_squarefree: Vec<usize>,
    },
    Factors {
        degrees: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl PrimeRecord {
    pub fn is_skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped { .. })
    }

    fn detail(&self) -> (&'static str, String) {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        match &self.outcome {
            Outcome::Hit { n } => ("hit", format!("n={n}")),
            Outcome::NoHit => ("no-hit", String::new()),
            Outcome::Skipped { reason } => ("skipped", reason.clone()),
            Outcome::Stability {
                factor_counts,
                c_stable_up_to,
                non_squarefree,
            } => {
                let mut s = format!("counts={} stable_up_to={c_stable_up_to}", join(factor_counts));
                if !non_squarefree.is_empty() {
                    s.push_str(&format!(" non_squarefree={}", join(non_squarefree)));
                }
                ("stability", s)
            }
            Outcome::Factors { degrees } => ("factors", join(degrees)),
        }
    }
}

/// Matching count over unskipped primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub matching: u64,
    pub considered: u64,
    #[serde(serialize_with = "crate::rational::ser_ratio", deserialize_with = "crate::rational::de_ratio")]
    pub value: BigRational,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub scanned: u64,
    pub skipped: u64,
    pub matching: u64,
    /// What "matching" means for the mode.
    pub criterion: String,
    pub density: Option<Density>,
}

/// The outcome of scanning one or more disjoint prime ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub experiment: Experiment,
    /// Scanned intervals, sorted and with adjacent intervals joined.
    pub ranges: Vec<PrimeRange>,
    pub records: Vec<PrimeRecord>,
    pub summary: Summary,
    pub note: String,
}

fn normalize(mut ranges: Vec<PrimeRange>) -> Vec<PrimeRange> {
    ranges.sort_by_key(|r| r.from);
    let mut out: Vec<PrimeRange> = Vec::new();
    for r in ranges {
        match out.last_mut() {
            Some(last) if r.from <= last.to.saturating_add(1) => last.to = last.to.max(r.to),
            _ => out.push(r),
        }
    }
    out
}

fn matches(exp: &Experiment, rec: &PrimeRecord) -> bool {
    match &rec.outcome {
        Outcome::Hit { .. } => true,
        Outcome::Stability { c_stable_up_to, .. } => Some(*c_stable_up_to) == exp.n_max,
        Outcome::Factors { degrees } => degrees.iter().all(|&d| d == 1),
        _ => false,
    }
}

fn criterion(exp: &Experiment) -> String {
    match exp.mode {
        ScanMode::Hits => "some a_n ≡ a (mod p) with n ≥ 1".into(),
        ScanMode::Stability => format!(
            "at most C = {} factors for every n ≤ n_max = {}",
            exp.c.unwrap_or(0),
            exp.n_max.unwrap_or(0)
        ),
        ScanMode::Frobenius => "all factor degrees equal 1".into(),
    }
}

impl ScanReport {
    pub fn from_records(experiment: Experiment, ranges: Vec<PrimeRange>, mut records: Vec<PrimeRecord>) -> Self {
        records.sort_by_key(|r| r.p);
        let ranges = normalize(ranges);
        let mut experiment = experiment;
        if let (Some(first), Some(last)) = (ranges.first(), ranges.last()) {
            experiment.primes = PrimeRange {
                from: first.from,
                to: last.to,
            };
        }
        let scanned = records.len() as u64;
        let skipped = records.iter().filter(|r| r.is_skipped()).count() as u64;
        let matching = records.iter().filter(|r| matches(&experiment, r)).count() as u64;
        let considered = scanned - skipped;
        let density = (considered > 0).then(|| {
            let value = BigRational::new(matching.into(), considered.into());
            Density {
                matching,
                considered,
                decimal: ratio_decimal(&value, 6),
                value,
            }
        });
        let note = match experiment.mode {
            ScanMode::Stability => format!(
                "finite-range empirical evidence; stability is certified only up to n_max = {}",
                experiment.n_max.unwrap_or(0)
            ),
            _ => "finite-range empirical evidence".into(),
        };
        let summary = Summary {
            scanned,
            skipped,
            matching,
            criterion: criterion(&experiment),
            density,
        };
        ScanReport {
            experiment,
            ranges,
            records,
            summary,
            note,
        }
    }

    /// Joins reports of the same experiment over disjoint ranges.
    pub fn merge(&self, other: &ScanReport) -> Result<ScanReport> {
        if !self.experiment.same_definition(&other.experiment) {
            return Err(Error::OutOfRange("cannot merge reports of different experiments".into()));
        }
        for a in &self.ranges {
            for b in &other.ranges {
                if a.from <= b.to && b.from <= a.to {
                    return Err(Error::OutOfRange(format!(
                        "ranges {}..{} and {}..{} overlap",
                        a.from, a.to, b.from, b.to
                    )));
                }
            }
        }
        let ranges = self.ranges.iter().chain(&other.ranges).copied().collect();
        let records = self.records.iter().chain(&other.records).cloned().collect();
        Ok(ScanReport::from_records(self.experiment.clone(), ranges, records))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::OutOfRange(format!("report: {e}")))
    }

    /// Columns `p,outcome,detail`.
    pub fn csv(&self) -> String {
        let mut out = String::from("p,outcome,detail\n");
        for r in &self.records {
            let (kind, detail) = r.detail();
            out.push_str(&format!("{},{kind},\"{}\"\n", r.p, detail.replace('"', "\"\"")));
        }
        out
    }
}

/// `matching / (scanned − skipped)`.
pub fn density(report: &ScanReport) -> Result<Density> {
    report.summary.density.clone().ok_or(Error::AllSkipped)
}

fn stability_record(sys: &DynamicalSystem, c: usize, n_max: usize, p: u64) -> Result<Outcome> {
    let polys = match sys.iterate_polys_mod_p(n_max, p)? {
        Ok(polys) => polys,
        Err(reason) => return Ok(Outcome::Skipped { reason }),
    };
    let mut factor_counts = Vec::with_capacity(n_max);
    let mut non_squarefree = Vec::new();
    for (i, g) in polys.iter().enumerate() {
        factor_counts.push(factor_count_mod_p(g)?);
        if !g.is_squarefree() {
            non_squarefree.push(i + 1);
        }
    }
    let c_stable_up_to = factor_counts.iter().take_while(|&&k| k <= c).count();
    Ok(Outcome::Stability {
        factor_counts,
        c_stable_up_to,
        non_squarefree,
    })
}

fn record(exp: &Experiment, sys: &DynamicalSystem, p: u64) -> Result<PrimeRecord> {
    let outcome = match exp.mode {
        ScanMode::Hits => match orbit_hits_mod_p(sys, p)? {
            HitOutcome::Hit { n } => Outcome::Hit { n },
            HitOutcome::NoHit => Outcome::NoHit,
            HitOutcome::Skipped { reason } => Outcome::Skipped { reason },
        },
        ScanMode::Stability => stability_record(sys, exp.c.unwrap_or(1), exp.horizon()?, p)?,
        ScanMode::Frobenius => match frobenius_degrees_mod_p(sys, exp.n_max.unwrap_or(0), p)? {
            Ok(degrees) => Outcome::Factors { degrees },
            Err(reason) => Outcome::Skipped { reason },
        },
    };
    Ok(PrimeRecord { p, outcome })
}

/// Records for the given primes, computed in parallel, in input order.
pub fn scan_primes(exp: &Experiment, primes: &[u64]) -> Result<Vec<PrimeRecord>> {
    exp.validate()?;
    let sys = exp.system()?;
    primes.par_iter().map(|&p| record(exp, &sys, p)).collect()
}

/// Scans every prime in `exp.primes`.
pub fn scan(exp: &Experiment) -> Result<ScanReport> {
    exp.validate()?;
    let primes = primes_in_range(exp.primes.from, exp.primes.to);
    let records = scan_primes(exp, &primes)?;
    Ok(ScanReport::from_records(exp.clone(), vec![exp.primes], records))
}

/// Hit scan of `sys` over `[from, to]`.
pub fn hit_scan(sys: &DynamicalSystem, from: u64, to: u64) -> Result<ScanReport> {
    scan(&Experiment {
        f: sys.coefficients().to_vec(),
        a: sys.target().clone(),
        a0: sys.seed().clone(),
        mode: ScanMode::Hits,
        c: None,
        n_max: None,
        primes: PrimeRange { from, to },
        seed: None,
    })
}

/// Stability scan of `sys` over `[from, to]` up to iterate `n_max`.
pub fn c_stability_scan(sys: &DynamicalSystem, c: usize, n_max: usize, from: u64, to: u64) -> Result<ScanReport> {
    scan(&Experiment {
        f: sys.coefficients().to_vec(),
        a: sys.target().clone(),
        a0: sys.seed().clone(),
        mode: ScanMode::Stability,
        c: Some(c),
        n_max: Some(n_max),
        primes: PrimeRange { from, to },
        seed: None,
    })
}
