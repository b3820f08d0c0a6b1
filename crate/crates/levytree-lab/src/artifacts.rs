//! Artifact output: CSV tables, the summary JSON, and the hash manifest.
//!
//! One sink instance owns the output directory and is the only writer.
//! Every file is hashed as it is written; `finish` drops the manifest
//! (which carries the only timestamp — table bodies are byte-identical
//! across reruns of the same config).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Formats a float for CSV: shortest digit string that round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// A float as a JSON number with 17 significant digits; non-finite values
/// become strings since JSON has no tokens for them.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        let literal = format!("{x:.16e}");
        match literal.parse::<serde_json::Number>() {
            Ok(n) => Value::Number(n),
            Err(_) => Value::String(literal),
        }
    } else {
        Value::String(format!("{x}"))
    }
}

/// TOML → JSON for the config echo, floats through [`json_f64`].
pub fn toml_to_json(v: &toml::Value) -> Value {
    match v {
        toml::Value::String(s) => Value::String(s.clone()),
        toml::Value::Integer(i) => Value::Number((*i).into()),
        toml::Value::Float(x) => json_f64(*x),
        toml::Value::Boolean(b) => Value::Bool(*b),
        toml::Value::Datetime(d) => Value::String(d.to_string()),
        toml::Value::Array(a) => Value::Array(a.iter().map(toml_to_json).collect()),
        toml::Value::Table(t) => {
            let mut m = Map::new();
            for (k, val) in t {
                m.insert(k.clone(), toml_to_json(val));
            }
            Value::Object(m)
        }
    }
}

struct ManifestEntry {
    name: String,
    bytes: usize,
    sha256: String,
}

pub struct ArtifactSink {
    dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl ArtifactSink {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        fs::write(self.dir.join(name), bytes)?;
        self.entries.push(ManifestEntry {
            name: name.to_string(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    /// Writes one CSV table with the given header.
    pub fn write_csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        self.put(name, &bytes)
    }

    /// Writes a pretty-printed JSON document (keys keep insertion order).
    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.put(name, &bytes)
    }

    /// Emits `manifest.json` listing every artifact with its content hash,
    /// and returns its path. The manifest is the only place a timestamp
    /// appears.
    pub fn finish(self, experiment: &str) -> Result<PathBuf, CliError> {
        let created_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        let mut manifest = Map::new();
        manifest.insert(
            "tool".into(),
            serde_json::json!({
                "name": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
            }),
        );
        manifest.insert("experiment".into(), Value::String(experiment.to_string()));
        manifest.insert("created_unix_ms".into(), Value::Number(created_unix_ms.into()));
        let files: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "name": e.name,
                    "bytes": e.bytes,
                    "sha256": e.sha256,
                })
            })
            .collect();
        manifest.insert("files".into(), Value::Array(files));

        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&Value::Object(manifest))?;
        bytes.push(b'\n');
        fs::write(&path, bytes)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formats() {
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.3333333333333333");
        match json_f64(std::f64::consts::PI) {
            Value::Number(n) => assert_eq!(n.to_string(), "3.1415926535897931e+0"),
            other => panic!("expected a number, got {other}"),
        }
        assert_eq!(json_f64(f64::NAN), Value::String("NaN".into()));
        assert_eq!(json_f64(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn sink_hashes_every_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = ArtifactSink::create(dir.path()).unwrap();
        sink.write_csv("t.csv", &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        sink.write_json("s.json", &serde_json::json!({"k": 1})).unwrap();
        let manifest_path = sink.finish("demo").unwrap();
        let manifest: Value =
            serde_json::from_str(&fs::read_to_string(manifest_path).unwrap()).unwrap();
        let files = manifest["files"].as_array().unwrap();
        assert_eq!(files.len(), 2);
        for f in files {
            let body = fs::read(dir.path().join(f["name"].as_str().unwrap())).unwrap();
            assert_eq!(
                f["sha256"].as_str().unwrap(),
                hex::encode(Sha256::digest(&body)),
                "hash mismatch for {}",
                f["name"]
            );
            assert_eq!(f["bytes"].as_u64().unwrap() as usize, body.len());
        }
    }

    #[test]
    fn config_echo_preserves_types() {
        let t: toml::Table = "x = 3\ny = 0.25\n[sub]\nz = \"s\"".parse().unwrap();
        let j = toml_to_json(&toml::Value::Table(t));
        assert_eq!(j["x"], Value::Number(3.into()));
        assert_eq!(j["y"], json_f64(0.25));
        assert_eq!(j["sub"]["z"], Value::String("s".into()));
    }
}
