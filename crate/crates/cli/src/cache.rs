//! Content-addressed result cache.
//!
//! Entries live in `<dir>/<sha256>.json` and carry a digest of their payload,
//! so truncated or edited files are detected, evicted and recomputed. Each
//! key has a sibling lock file held exclusively while the entry is read or
//! produced, so concurrent invocations compute a missing entry only once.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the layout of any cached document changes.
const CACHE_FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: String,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create cache directory {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    /// Digest of the operation name, the crate version and the inputs.
    pub fn key(op: &str, inputs: &serde_json::Value) -> String {
        let material = serde_json::json!({
            "format": CACHE_FORMAT,
            "version": env!("CARGO_PKG_VERSION"),
            "op": op,
            "inputs": inputs,
        });
        sha256_hex(material.to_string().as_bytes())
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached value for `key`, or `compute()` stored under it.
    pub fn get_or_compute<T, E>(&self, key: &str, compute: impl FnOnce() -> Result<T, E>) -> Result<Result<T, E>>
    where
        T: Serialize + DeserializeOwned,
    {
        let lock_path = self.dir.join(format!("{key}.lock"));
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .with_context(|| format!("cannot open {}", lock_path.display()))?;
        lock.lock().context("cannot lock cache entry")?;

        let path = self.entry_path(key);
        if path.exists() {
            match read_entry(&path, key) {
                Ok(value) => return Ok(Ok(value)),
                Err(reason) => {
                    eprintln!(
                        "warning: corrupt cache entry {} ({reason:#}); recomputing",
                        path.display()
                    );
                    fs::remove_file(&path).with_context(|| format!("cannot evict {}", path.display()))?;
                }
            }
        }
        let value = match compute() {
            Ok(v) => v,
            Err(e) => return Ok(Err(e)),
        };
        self.store(key, &value)?;
        Ok(Ok(value))
    }

    fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let payload = serde_json::to_string(value)?;
        let entry = Entry {
            key: key.to_string(),
            digest: sha256_hex(payload.as_bytes()),
            payload,
        };
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        {
            let mut file = File::create(&tmp).with_context(|| format!("cannot write {}", tmp.display()))?;
            file.write_all(serde_json::to_string(&entry)?.as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, self.entry_path(key)).context("cannot move cache entry into place")?;
        Ok(())
    }
}

fn read_entry<T: DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    let entry: Entry = serde_json::from_str(&text).context("unreadable entry")?;
    anyhow::ensure!(entry.key == key, "entry is filed under the wrong key");
    anyhow::ensure!(
        entry.digest == sha256_hex(entry.payload.as_bytes()),
        "payload digest mismatch"
    );
    serde_json::from_str(&entry.payload).context("payload does not match the expected document")
}
