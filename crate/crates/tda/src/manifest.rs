//! Run manifests. Every command writes one next to its outputs, recording
//! the command, full configuration, seed, RNG identity, library version
//! and input digests: enough to re-run the exact computation. Manifests
//! carry no timestamps or absolute output paths, so identical runs
//! produce identical manifests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{sha256_hex, write_json};

pub const MANIFEST_FILE: &str = "manifest.json";

/// An input file and the digest of its contents at run time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// The reproducibility record of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand that ran.
    pub command: String,
    /// Library version that produced the outputs.
    pub version: String,
    /// RNG algorithm identity; fixed per build, recorded so seeds stay
    /// meaningful across versions.
    pub rng: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Full effective configuration, defaults included.
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    /// Output file names, relative to the manifest's directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: tda_core::synth::RNG_ALGORITHM.to_string(),
            seed: None,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records an input file along with the digest of its current bytes.
    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(path)?,
        });
        Ok(())
    }

    /// Records an output by file name.
    pub fn add_output(&mut self, name: impl Into<String>) {
        self.outputs.push(name.into());
    }

    /// Writes `manifest.json` into `dir` and returns its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        write_json(&path, self)?;
        Ok(path)
    }
}
