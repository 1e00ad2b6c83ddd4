use crate::Command;
use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// SHA-256 of every file a command read, keyed by the path as given.
#[derive(Debug, Default, Serialize)]
#[serde(transparent)]
pub struct InputHashes(BTreeMap<String, String>);

impl InputHashes {
    /// Read a file and record its hash.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.0.insert(path.display().to_string(), hex::encode(digest));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub tool_version: &'static str,
    pub input_hashes: InputHashes,
    /// seconds since the Unix epoch
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(cmd: &Command, seed: u64, input_hashes: InputHashes) -> Result<Self> {
        let parameters = serde_json::to_value(cmd)?;
        Ok(RunManifest {
            command: command_path(&parameters),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_hashes,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

// externally tagged enums nest as {"check": {"tail-cyclic": {...}}}
fn command_path(v: &serde_json::Value) -> String {
    let mut parts = Vec::new();
    let mut cur = v;
    while let Some(obj) = cur.as_object() {
        let Some((k, inner)) = obj.iter().next().filter(|_| obj.len() == 1) else {
            break;
        };
        parts.push(k.clone());
        cur = inner;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_command_names() {
        let v = json!({"check": {"tail-cyclic": {"tail": "2,3,4", "ks": [1, 2]}}});
        assert_eq!(command_path(&v), "check tail-cyclic");
        let v = json!({"polytope": {"vector": "K2", "n": 2}});
        assert_eq!(command_path(&v), "polytope");
    }

    #[test]
    fn hashes_are_recorded() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.json");
        std::fs::write(&p, "abc").unwrap();
        let mut h = InputHashes::default();
        assert_eq!(h.read(&p).unwrap(), "abc");
        assert_eq!(
            h.0[&p.display().to_string()],
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
