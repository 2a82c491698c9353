//! On-disk cache of normalized invariant polynomials in MPOLY v1 format.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sl213::invariants::{build_invariant_symbolic, InvariantContext, InvariantError, InvariantSpec, NORMALIZATION_VERSION};
use sl213::polyring::PolyError;
use sl213::MPoly;

const FAMILY: &str = "phi";
const EXTENSION: &str = "mpoly";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache directory {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.to_path_buf(), source }
}

/// (family, m, n, normalization version).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CacheKey {
    pub m: u32,
    pub n: u32,
    pub version: u32,
}

impl CacheKey {
    pub fn current(m: u32, n: u32) -> Self {
        CacheKey { m, n, version: NORMALIZATION_VERSION }
    }

    pub fn file_name(&self) -> String {
        format!("{FAMILY}-{}-{}-n{}.{EXTENSION}", self.m, self.n, self.version)
    }

    pub fn parse_file_name(name: &str) -> Option<Self> {
        let stem = name.strip_suffix(&format!(".{EXTENSION}"))?;
        let mut parts = stem.split('-');
        if parts.next()? != FAMILY {
            return None;
        }
        let m = parts.next()?.parse().ok()?;
        let n = parts.next()?.parse().ok()?;
        let version = parts.next()?.strip_prefix('n')?.parse().ok()?;
        parts.next().is_none().then_some(CacheKey { m, n, version })
    }

    pub fn degree(&self) -> u32 {
        4 * self.m + 6 * self.n
    }
}

#[derive(Debug)]
pub enum EntryState {
    Valid { terms: usize },
    Stale,
    Corrupt(String),
}

#[derive(Debug)]
pub struct Entry {
    pub key: CacheKey,
    pub path: PathBuf,
    pub bytes: u64,
    pub state: EntryState,
}

pub struct Cache {
    dir: PathBuf,
}

fn validate(key: &CacheKey, text: &str) -> Result<MPoly, String> {
    let p = MPoly::from_mpoly_text(text).map_err(|e: PolyError| e.to_string())?;
    if !p.is_zero() && (!p.is_homogeneous() || p.degree() != key.degree()) {
        return Err(format!("expected a form of degree {}, found degree {}", key.degree(), p.degree()));
    }
    Ok(p)
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Entries owned by the cache, sorted by key. A missing directory is empty.
    pub fn entries(&self) -> Result<Vec<Entry>, CacheError> {
        let read = match fs::read_dir(&self.dir) {
            Ok(r) => r,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&self.dir)(e)),
        };
        let mut out = Vec::new();
        for item in read {
            let item = item.map_err(io_err(&self.dir))?;
            let Some(key) = item.file_name().to_str().and_then(CacheKey::parse_file_name) else {
                continue;
            };
            let path = item.path();
            let bytes = item.metadata().map_err(io_err(&path))?.len();
            let state = if key.version != NORMALIZATION_VERSION {
                EntryState::Stale
            } else {
                match fs::read_to_string(&path) {
                    Ok(text) => match validate(&key, &text) {
                        Ok(p) => EntryState::Valid { terms: p.len() },
                        Err(e) => EntryState::Corrupt(e),
                    },
                    Err(e) => EntryState::Corrupt(e.to_string()),
                }
            };
            out.push(Entry { key, path, bytes, state });
        }
        out.sort_by_key(|e| e.key);
        Ok(out)
    }

    /// A valid cached polynomial, or `Err` with the reason it was skipped.
    pub fn load(&self, key: &CacheKey) -> Option<Result<MPoly, String>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        Some(validate(key, &text))
    }

    pub fn store(&self, key: &CacheKey, p: &MPoly) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, p.to_mpoly_text()).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    /// Removes every cache-owned file; other files are left alone.
    pub fn clear(&self) -> Result<usize, CacheError> {
        let entries = self.entries()?;
        for e in &entries {
            fs::remove_file(&e.path).map_err(io_err(&e.path))?;
        }
        Ok(entries.len())
    }

    /// The normalized polynomial, from the cache when a valid entry exists.
    /// Corrupt entries are reported through `warn` and rebuilt.
    pub fn get_or_build(
        &self,
        ctx: &InvariantContext,
        m: u32,
        n: u32,
        budget: u32,
        mut warn: impl FnMut(String),
    ) -> Result<(MPoly, bool), CacheError> {
        let key = CacheKey::current(m, n);
        match self.load(&key) {
            Some(Ok(p)) => return Ok((p, true)),
            Some(Err(why)) => warn(format!("skipping corrupt cache entry {}: {why}", key.file_name())),
            None => {}
        }
        let p = build_invariant_symbolic(ctx, &InvariantSpec::stated(m, n), budget)?;
        self.store(&key, &p)?;
        Ok((p, false))
    }
}

/// All (m, n) ≠ (0, 0) with 4m + 6n ≤ budget, by degree then m.
pub fn pairs_within(budget: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (0..=budget / 4)
        .flat_map(|m| (0..=budget / 6).map(move |n| (m, n)))
        .filter(|&(m, n)| (m, n) != (0, 0) && 4 * m + 6 * n <= budget)
        .collect();
    out.sort_by_key(|&(m, n)| (4 * m + 6 * n, m));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_roundtrip() {
        let k = CacheKey::current(3, 2);
        assert_eq!(CacheKey::parse_file_name(&k.file_name()), Some(k));
        assert_eq!(CacheKey::parse_file_name("phi-3-2.mpoly"), None);
        assert_eq!(CacheKey::parse_file_name("notes.txt"), None);
    }

    #[test]
    fn pair_enumeration() {
        assert_eq!(pairs_within(12), vec![(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)]);
        assert_eq!(pairs_within(3), vec![]);
    }
}
