//! Report cache keyed by a digest of command, spec and options.
//! Writes go to a temporary file that is then renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::report::Report;

pub const ENV_VAR: &str = "NBORIENT_CACHE";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// The `--cache-dir` flag, else `NBORIENT_CACHE`, else no cache.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(material: &str) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update([0]);
        h.update(material.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        match serde_json::from_str(&text) {
            Ok(r) => Some(r),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {key}: {e}");
                None
            }
        }
    }

    pub fn put(&self, key: &str, report: &Report) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(report.to_json().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }
}
