//! Two-layer record cache: an in-memory map in front of an optional
//! directory of JSON files named by the SHA-256 of the normalized DOI.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use litscope_core::Doi;
use parking_lot::RwLock;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::record::SourceRecord;

pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 24 * 60 * 60);

/// Source of the current time in Unix seconds.
pub trait Clock: Send + Sync {
    fn now(&self) -> u64;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> u64 {
        SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
    }
}

/// A clock that only moves when told to.
#[derive(Debug, Default)]
pub struct ManualClock(AtomicU64);

impl ManualClock {
    pub fn new(now: u64) -> Self {
        ManualClock(AtomicU64::new(now))
    }

    pub fn advance(&self, by: Duration) {
        self.0.fetch_add(by.as_secs(), Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }
}

#[derive(Debug, Clone)]
pub struct CacheConfig {
    /// Without a directory the cache is memory-only.
    pub dir: Option<PathBuf>,
    pub ttl: Duration,
}

impl Default for CacheConfig {
    fn default() -> Self {
        CacheConfig { dir: None, ttl: DEFAULT_TTL }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lookup {
    pub record: SourceRecord,
    /// False once the entry is older than the TTL. Stale entries are only
    /// served when upstream fails, and then flagged.
    pub fresh: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub memory_entries: usize,
    pub disk_entries: usize,
    pub hits: u64,
    pub misses: u64,
}

pub struct RecordCache {
    memory: RwLock<HashMap<Doi, SourceRecord>>,
    dir: Option<PathBuf>,
    ttl: Duration,
    clock: Arc<dyn Clock>,
    hits: AtomicU64,
    misses: AtomicU64,
}

fn file_name(doi: &Doi) -> String {
    let digest = Sha256::digest(doi.as_str().as_bytes());
    let mut name = String::with_capacity(69);
    for byte in digest.iter() {
        let _ = write!(name, "{byte:02x}");
    }
    name.push_str(".json");
    name
}

fn json_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    match std::fs::read_dir(dir) {
        Ok(entries) => {
            for entry in entries {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    files.push(path);
                }
            }
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => {}
        Err(e) => return Err(e),
    }
    Ok(files)
}

impl RecordCache {
    pub fn new(config: CacheConfig, clock: Arc<dyn Clock>) -> Self {
        RecordCache {
            memory: RwLock::new(HashMap::new()),
            dir: config.dir,
            ttl: config.ttl,
            clock,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn in_memory() -> Self {
        Self::new(CacheConfig::default(), Arc::new(SystemClock))
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    fn path_for(&self, doi: &Doi) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(file_name(doi)))
    }

    fn read_disk(&self, doi: &Doi) -> Option<SourceRecord> {
        let path = self.path_for(doi)?;
        let bytes = std::fs::read(&path).ok()?;
        match serde_json::from_slice::<SourceRecord>(&bytes) {
            Ok(record) if record.doi == *doi => Some(record),
            Ok(_) => None,
            Err(e) => {
                tracing::warn!(path = %path.display(), error = %e, "ignoring unreadable cache file");
                None
            }
        }
    }

    pub fn get(&self, doi: &Doi) -> Option<Lookup> {
        let cached = self.memory.read().get(doi).cloned();
        let record = match cached {
            Some(r) => Some(r),
            None => {
                let r = self.read_disk(doi);
                if let Some(r) = &r {
                    self.memory.write().insert(doi.clone(), r.clone());
                }
                r
            }
        };
        let lookup = record.map(|record| Lookup {
            fresh: self.now().saturating_sub(record.fetched_at) < self.ttl.as_secs(),
            record,
        });
        let counter = if lookup.as_ref().is_some_and(|l| l.fresh) { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        lookup
    }

    /// Stores `record` in memory and, if configured, on disk. Disk failures
    /// are logged; the memory layer still holds the record.
    pub fn put(&self, record: SourceRecord) {
        if let Some(path) = self.path_for(&record.doi) {
            if let Err(e) = write_atomically(&path, &record) {
                tracing::warn!(path = %path.display(), error = %e, "could not persist cache entry");
            }
        }
        self.memory.write().insert(record.doi.clone(), record);
    }

    /// Drops every entry. Returns how many distinct entries were removed.
    pub fn clear(&self) -> io::Result<usize> {
        let mut removed: HashSet<String> = self.memory.write().drain().map(|(d, _)| file_name(&d)).collect();
        if let Some(dir) = &self.dir {
            for path in json_files(dir)? {
                std::fs::remove_file(&path)?;
                if let Some(name) = path.file_name() {
                    removed.insert(name.to_string_lossy().into_owned());
                }
            }
        }
        Ok(removed.len())
    }

    pub fn stats(&self) -> io::Result<CacheStats> {
        let disk_entries = match &self.dir {
            Some(dir) => json_files(dir)?.len(),
            None => 0,
        };
        Ok(CacheStats {
            memory_entries: self.memory.read().len(),
            disk_entries,
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        })
    }
}

fn write_atomically(path: &Path, record: &SourceRecord) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let bytes = serde_json::to_vec(record).map_err(io::Error::other)?;
    static NEXT: AtomicU64 = AtomicU64::new(0);
    let unique = NEXT.fetch_add(1, Ordering::Relaxed);
    let tmp = path.with_extension(format!("tmp{}-{unique}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, path)
}
