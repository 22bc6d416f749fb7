//! Atomic file output and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Writes `bytes` to a temporary file next to `path` and renames it into place,
/// so readers never see a partial file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// An input file and the hash of its contents at the time of the run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

impl InputRecord {
    pub fn read(path: impl AsRef<Path>) -> Result<(Self, Vec<u8>)> {
        let path = path.as_ref();
        let bytes = std::fs::read(path)?;
        let record = InputRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        };
        Ok((record, bytes))
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputRecord>,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

/// Collects a manifest while a command runs.
#[derive(Debug)]
pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        ManifestBuilder {
            manifest: RunManifest {
                command: command.to_string(),
                args,
                inputs: Vec::new(),
                seed: None,
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_s: 0.0,
                outputs: Vec::new(),
            },
            started: Instant::now(),
        }
    }

    /// Reads an input file, recording its hash.
    pub fn read_input(&mut self, path: impl AsRef<Path>) -> Result<Vec<u8>> {
        let (record, bytes) = InputRecord::read(path)?;
        self.manifest.inputs.push(record);
        Ok(bytes)
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    /// Writes an output atomically and records it.
    pub fn write_output(&mut self, path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
        write_atomic(path.as_ref(), bytes)?;
        self.manifest.outputs.push(path.as_ref().display().to_string());
        Ok(())
    }

    /// Stamps the wall time and writes the manifest to `path`.
    pub fn finish(mut self, path: impl AsRef<Path>) -> Result<RunManifest> {
        self.manifest.wall_time_s = self.started.elapsed().as_secs_f64();
        let text = serde_json::to_string_pretty(&self.manifest)?;
        write_atomic(path, text.as_bytes())?;
        Ok(self.manifest)
    }
}

/// `<output>.manifest.json`
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn atomic_write_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.json");
        std::fs::write(&input, b"{}").unwrap();
        let out = dir.path().join("out.csv");
        let mut m = ManifestBuilder::new("spectrum", vec!["spectrum".into()]);
        assert_eq!(m.read_input(&input).unwrap(), b"{}");
        m.seed(7);
        m.write_output(&out, b"a,b\n").unwrap();
        m.write_output(&out, b"c,d\n").unwrap();
        let mpath = manifest_path(&out);
        assert!(mpath.ends_with("out.csv.manifest.json"));
        let written = m.finish(&mpath).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), b"c,d\n");
        let back: RunManifest = serde_json::from_slice(&std::fs::read(&mpath).unwrap()).unwrap();
        assert_eq!(back, written);
        assert_eq!(back.inputs[0].sha256, sha256_hex(b"{}"));
        assert_eq!(back.seed, Some(7));
        let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 3);
    }
}
