//! On-disk cache of enumerated sets in the line format. Files are named
//! `{name}-n{n}-{hash}.txt`, where `hash` is a prefix of the SHA-256 of the
//! file contents; files whose contents do not match are ignored.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::transmap::{read_lines, write_lines, Transformation};
use crate::{Error, Result};

pub const CACHE_ENV: &str = "BIFIX_CACHE_DIR";
const HASH_CHARS: usize = 16;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))[..HASH_CHARS].to_string()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// `BIFIX_CACHE_DIR` if set, else `dir`, else no cache.
    pub fn resolve(dir: Option<&Path>) -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(env) if !env.is_empty() => Self::new(PathBuf::from(env)).map(Some),
            _ => dir.map(Self::new).transpose(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn prefix(name: &str, n: usize) -> String {
        format!("{name}-n{n}-")
    }

    /// A verified cached set, if any.
    pub fn load(&self, name: &str, n: usize) -> Result<Option<Vec<Transformation>>> {
        let prefix = Self::prefix(name, n);
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|f| f.to_str())
                    .is_some_and(|f| f.starts_with(&prefix) && f.ends_with(".txt"))
            })
            .collect();
        paths.sort();
        for path in paths {
            let fname = path.file_name().unwrap().to_str().unwrap();
            let hash = &fname[prefix.len()..fname.len() - 4];
            let bytes = fs::read(&path)?;
            if digest(&bytes) != hash {
                continue;
            }
            let (m, items) = read_lines(BufReader::new(bytes.as_slice()))?;
            if m == n {
                return Ok(Some(items));
            }
        }
        Ok(None)
    }

    pub fn store(&self, name: &str, n: usize, items: &[Transformation]) -> Result<PathBuf> {
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(Error::Domain(format!("bad cache name {name:?}")));
        }
        let mut buf = Vec::new();
        write_lines(&mut buf, n, items)?;
        let path = self
            .dir
            .join(format!("{}{}.txt", Self::prefix(name, n), digest(&buf)));
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &buf)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn get_or_compute<F>(&self, name: &str, n: usize, compute: F) -> Result<Vec<Transformation>>
    where
        F: FnOnce() -> Result<Vec<Transformation>>,
    {
        if let Some(items) = self.load(name, n)? {
            return Ok(items);
        }
        let items = compute()?;
        self.store(name, n, &items)?;
        Ok(items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroups::enumerate_wge6;

    #[test]
    fn roundtrip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        assert!(cache.load("wge6", 5).unwrap().is_none());
        let items = enumerate_wge6(5).unwrap().sorted();
        let path = cache.store("wge6", 5, &items).unwrap();
        assert!(path.file_name().unwrap().to_str().unwrap().starts_with("wge6-n5-"));
        assert_eq!(cache.load("wge6", 5).unwrap().unwrap(), items);
        assert!(cache.load("wge6", 6).unwrap().is_none());
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("0 4 4 4 4\n");
        fs::write(&path, text).unwrap();
        assert!(cache.load("wge6", 5).unwrap().is_none());
        let again = cache
            .get_or_compute("wge6", 5, || Ok(items.clone()))
            .unwrap();
        assert_eq!(again, items);
        assert!(cache.load("wge6", 5).unwrap().is_some());
    }
}
