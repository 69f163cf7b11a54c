//! The shipped group catalog.
//!
//! Entries are plain JSON (`catalog/groups.json`) embedded at compile time.
//! Setting `ARBOREAL_CATALOG` to a file path replaces the embedded copy.
//! Names of the form `S<n>` and `A<n>` resolve to the natural actions without
//! a catalog entry.

use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

const EMBEDDED: &str = include_str!("../catalog/groups.json");

pub const CATALOG_ENV: &str = "ARBOREAL_CATALOG";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub socle_generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub socle_order: Option<u64>,
    #[serde(default = "default_true")]
    pub alpha_applicable: bool,
    #[serde(default)]
    pub provenance: String,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
struct CatalogFile {
    groups: Vec<CatalogEntry>,
}

impl CatalogEntry {
    fn parse_gens(&self, gens: &[String]) -> Result<Vec<Perm>> {
        gens.iter()
            .map(|s| Perm::parse(s, self.degree))
            .collect()
    }

    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::new(self.degree, self.parse_gens(&self.generators)?)
    }

    /// The designated socle; entries without socle generators are simple.
    pub fn socle(&self) -> Result<PermGroup> {
        match &self.socle_generators {
            Some(gens) => PermGroup::new(self.degree, self.parse_gens(gens)?),
            None => self.group(),
        }
    }

    pub fn inertia(&self) -> Result<Option<Vec<Perm>>> {
        self.inertia
            .as_ref()
            .map(|gens| self.parse_gens(gens))
            .transpose()
    }

    /// Parses every generator, recomputes the recorded orders and checks
    /// that the socle is a normal subgroup.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Error::Catalog(format!("{}: {msg}", self.name));
        let group = self.group().map_err(|e| bad(e.to_string()))?;
        if !group.is_transitive() {
            return Err(bad("group is not transitive".into()));
        }
        if let Some(order) = self.order {
            if group.order() != BigUint::from(order) {
                return Err(bad(format!("order {} but recorded {order}", group.order())));
            }
        }
        if self.socle_generators.is_some() {
            let socle = self.socle().map_err(|e| bad(e.to_string()))?;
            if !socle.is_subgroup_of(&group) || !socle.is_normal_in(&group) {
                return Err(bad("socle is not a normal subgroup".into()));
            }
            if let Some(order) = self.socle_order {
                if socle.order() != BigUint::from(order) {
                    return Err(bad(format!("socle order {} but recorded {order}", socle.order())));
                }
            }
        }
        if let Some(inertia) = self.inertia().map_err(|e| bad(e.to_string()))? {
            if !inertia.iter().all(|g| group.contains(g)) {
                return Err(bad("inertia element outside the group".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Parses and validates a catalog document.
    pub fn from_json(text: &str) -> Result<Catalog> {
        let file: CatalogFile = serde_json::from_str(text)?;
        for e in &file.groups {
            e.validate()?;
        }
        Ok(Catalog {
            entries: file.groups,
        })
    }

    pub fn embedded() -> Result<Catalog> {
        Catalog::from_json(EMBEDDED)
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        Catalog::from_json(&std::fs::read_to_string(path)?)
    }

    /// The catalog named by `ARBOREAL_CATALOG`, or the embedded one.
    pub fn from_env() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Catalog::load(Path::new(&path)),
            None => Catalog::embedded(),
        }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// Resolves a catalog name or `S<n>` / `A<n>` to `(group, socle)`.
    pub fn group_and_socle(&self, name: &str) -> Result<(PermGroup, PermGroup)> {
        if let Some((kind, n)) = natural_name(name) {
            let alt = PermGroup::alternating(n);
            return Ok(match kind {
                'S' => (PermGroup::symmetric(n), alt),
                _ => (alt.clone(), alt),
            });
        }
        let e = self.get(name)?;
        Ok((e.group()?, e.socle()?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CatalogFile {
            groups: self.entries.clone(),
        })
        .expect("catalog serializes")
    }
}

fn natural_name(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let kind = chars.next()?;
    if kind != 'S' && kind != 'A' {
        return None;
    }
    let n: usize = chars.as_str().parse().ok()?;
    (n >= 2).then_some((kind, n))
}
