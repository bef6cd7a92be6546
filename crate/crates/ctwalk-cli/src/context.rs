//! Shared run state: resolved defaults, artifact writing, input
//! hashing, and the run manifest.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use ctwalk::{Error, Result};

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Record of one invocation, written to `<out>/manifest.json` for every
/// run, including runs that end in a handled error.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: u64,
    pub version: &'static str,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    pub dry_run: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub struct Context {
    pub out_dir: PathBuf,
    pub config: Config,
    pub format: OutputFormat,
    pub dry_run: bool,
    inputs: RefCell<BTreeMap<String, String>>,
    outputs: RefCell<Vec<String>>,
}

impl Context {
    pub fn new(out_dir: PathBuf, config: Config, format: OutputFormat, dry_run: bool) -> Self {
        Context {
            out_dir,
            config,
            format,
            dry_run,
            inputs: RefCell::new(BTreeMap::new()),
            outputs: RefCell::new(Vec::new()),
        }
    }

    /// Reads an input file, recording its content hash in the manifest.
    pub fn read_input(&self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        let digest = Sha256::digest(text.as_bytes());
        self.inputs.borrow_mut().insert(
            path.display().to_string(),
            format!("sha256:{}", hex_string(&digest)),
        );
        Ok(text)
    }

    /// Writes an artifact into the output directory (skipped under
    /// `--dry-run`) and records it in the manifest.
    pub fn write_artifact(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        if !self.dry_run {
            fs::create_dir_all(&self.out_dir)?;
            fs::write(&path, bytes)?;
            self.outputs.borrow_mut().push(name.to_string());
        }
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_artifact(name, text.as_bytes())
    }

    pub fn finish(
        self,
        command: String,
        argv: Vec<String>,
        seed: u64,
        duration_seconds: f64,
        error: Option<String>,
    ) -> Result<()> {
        let manifest = RunManifest {
            command,
            argv,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            inputs: self.inputs.into_inner(),
            outputs: self.outputs.into_inner(),
            duration_seconds,
            dry_run: self.dry_run,
            error,
        };
        fs::create_dir_all(&self.out_dir)?;
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(self.out_dir.join("manifest.json"), text)?;
        Ok(())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
