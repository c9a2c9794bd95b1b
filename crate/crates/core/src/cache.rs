//! On-disk cache of generated tables keyed by a content hash.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::generators::{GeneratedTables, TableFile};
use crate::poly::Sign;

/// Bumped whenever the table format or generation rules change.
pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(kmax: usize, eps: Sign) -> String {
        let mut h = Sha256::new();
        h.update(format!("tables:v{ARTIFACT_VERSION}:kmax={kmax}:eps={}", eps.value()));
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, kmax: usize, eps: Sign) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(kmax, eps)))
    }

    /// Loads from disk when present and valid; otherwise generates and stores.
    pub fn get_or_build(&self, kmax: usize, eps: Sign) -> Result<GeneratedTables> {
        let path = self.path(kmax, eps);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(file) = serde_json::from_str::<TableFile>(&text) {
                if let Ok(t) = GeneratedTables::from_file(&file) {
                    return Ok(t);
                }
            }
        }
        let tables = GeneratedTables::build(kmax, eps)?;
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&tables.to_file())?)?;
        fs::rename(tmp, path)?;
        Ok(tables)
    }

    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            if p.extension().is_some_and(|x| x == "json") {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes cached tables, returning how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_then_reload() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let a = cache.get_or_build(4, Sign::Minus).unwrap();
        assert_eq!(cache.entries().unwrap().len(), 1);
        let b = cache.get_or_build(4, Sign::Minus).unwrap();
        assert_eq!(a.to_file(), b.to_file());
        assert_ne!(TableCache::key(4, Sign::Plus), TableCache::key(4, Sign::Minus));
        assert_eq!(cache.clear().unwrap(), 1);
    }

    #[test]
    fn corrupt_entry_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        fs::write(cache.path(3, Sign::Plus), "{not json").unwrap();
        assert_eq!(cache.get_or_build(3, Sign::Plus).unwrap().kmax(), 3);
    }
}
