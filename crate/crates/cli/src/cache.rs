//! On-disk cache of task reports keyed by a content hash.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::report::{TaskReport, VERSION};

pub const CACHE_ENV: &str = "COURANT_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".courant-cache";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the code version and a serializable description of the work.
pub fn key<T: Serialize>(content: &T) -> String {
    let body = serde_json::to_string(content).expect("cache keys serialize");
    sha256_hex(format!("{VERSION}\n{body}").as_bytes())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<TaskReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, report: &TaskReport) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(report).expect("reports serialize"))?;
        fs::rename(tmp, self.path(key))
    }
}
