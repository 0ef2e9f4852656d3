use std::fs;
use std::path::{Path, PathBuf};

use graphcode::{Error, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize)]
pub struct Verification {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub command: Vec<String>,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub artifacts: Vec<String>,
    pub wall_time_ms: u128,
    pub verification: Verification,
}

/// Artifact sink for one run.
pub struct Output {
    dir: PathBuf,
    pub artifacts: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path) -> Self {
        Output { dir: dir.to_path_buf(), artifacts: Vec::new() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        let mut text = contents.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        fs::write(&path, text)?;
        self.artifacts.push(name.to_string());
        Ok(path)
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(format!("{} does not exist", path.display())),
        _ => Error::from(e),
    })
}
