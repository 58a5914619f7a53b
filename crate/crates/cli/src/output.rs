use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::CliError;

/// Single writer for an experiment's output directory. Every file goes
/// through [`Output::write`] so the manifest can list its checksum.
pub struct Output {
    dir: PathBuf,
    files: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub library_version: String,
    pub cli_version: String,
    pub config: String,
    /// File name to hex SHA-256.
    pub files: BTreeMap<String, String>,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Render into memory with `f`, then write the file and record its hash.
    pub fn write<F>(&mut self, name: &str, f: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let path = self.dir.join(name);
        let mut buf = Vec::new();
        f(&mut buf).map_err(|e| io_err(&path, e))?;
        fs::write(&path, &buf).map_err(|e| io_err(&path, e))?;
        self.files.insert(name.to_string(), hex::encode(Sha256::digest(&buf)));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.push(b'\n');
            Ok(())
        })
    }

    /// The embedded config leaves out the output directory so that the
    /// manifest depends only on what was computed.
    pub fn finish(self, config: &Config) -> Result<Manifest, CliError> {
        let resolved = Config {
            out: None,
            ..config.clone()
        };
        let manifest = Manifest {
            experiment: config.experiment.map(|e| e.name()).unwrap_or("none").to_string(),
            library_version: splitwalk::VERSION.to_string(),
            cli_version: env!("CARGO_PKG_VERSION").to_string(),
            config: resolved.to_toml(),
            files: self.files,
        };
        let path = self.dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        Ok(manifest)
    }
}
