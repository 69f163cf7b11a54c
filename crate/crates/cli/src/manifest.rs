//! Run manifests: enough to replay a command and compare its outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ARTIFACT: &str = "arboreal";

/// One primary output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Output {
    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Output {
        let mut bytes = serde_json::to_vec_pretty(value).expect("output serializes");
        bytes.push(b'\n');
        Output {
            name: name.into(),
            bytes,
        }
    }

    pub fn text(name: impl Into<String>, text: impl Into<String>) -> Output {
        Output {
            name: name.into(),
            bytes: text.into().into_bytes(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, without `--out` and `--jobs`, with
    /// the seed made explicit.
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub caps: BTreeMap<String, serde_json::Value>,
    /// File name to SHA-256 of its bytes.
    pub outputs: BTreeMap<String, String>,
    /// Hash over `outputs`; timestamps are not part of it.
    pub payload_sha256: String,
    pub timestamp: u64,
}

pub fn payload_hash(outputs: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    for (name, digest) in outputs {
        h.update(name.as_bytes());
        h.update([0]);
        h.update(digest.as_bytes());
        h.update(*b"\n");
    }
    hex::encode(h.finalize())
}

impl RunManifest {
    pub fn new(
        command: &str,
        argv: Vec<String>,
        seed: Option<u64>,
        caps: BTreeMap<String, serde_json::Value>,
        outputs: &[Output],
    ) -> Self {
        let outputs: BTreeMap<String, String> =
            outputs.iter().map(|o| (o.name.clone(), sha256_hex(&o.bytes))).collect();
        RunManifest {
            artifact: ARTIFACT.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv,
            seed,
            caps,
            payload_sha256: payload_hash(&outputs),
            outputs,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }

    pub fn file_name(command: &str) -> String {
        format!("{}.manifest.json", command.replace(' ', "-"))
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(RunManifest::file_name(&self.command));
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m: RunManifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        anyhow::ensure!(m.artifact == ARTIFACT, "not an {ARTIFACT} manifest");
        anyhow::ensure!(
            payload_hash(&m.outputs) == m.payload_sha256,
            "manifest payload hash does not match its output list"
        );
        Ok(m)
    }
}

/// Writes the outputs into `dir`, creating it as needed.
pub fn write_outputs(dir: &Path, outputs: &[Output]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for o in outputs {
        let path = dir.join(&o.name);
        fs::write(&path, &o.bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
