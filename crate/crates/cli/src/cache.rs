//! Chamber cache: one JSON file per chamber, keyed by the SHA-256 of the
//! Gram matrix, the embedding and the Weyl vector.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use weylwalk::chambers::Chamber;
use weylwalk::exactalg::{fmt_rational, Rational, ZMatrix};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    content_sha256: String,
    chamber: Chamber,
}

fn matrix_text(m: &ZMatrix) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("{}x{}:{}", m.nrows(), m.ncols(), rows.join(";"))
}

/// The cache key of a chamber.
pub fn chamber_key(gram: &ZMatrix, embedding: &ZMatrix, weyl: &[Rational]) -> String {
    let mut h = Sha256::new();
    h.update(b"gram\n");
    h.update(matrix_text(gram));
    h.update(b"\nembedding\n");
    h.update(matrix_text(embedding));
    h.update(b"\nweyl\n");
    h.update(weyl.iter().map(fmt_rational).collect::<Vec<_>>().join(","));
    hex::encode(h.finalize())
}

fn content_hash(ch: &Chamber) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(ch)?)))
}

pub struct ChamberCache {
    dir: PathBuf,
}

impl ChamberCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ChamberCache { dir: dir.into() }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("chamber-{key}.json"))
    }

    /// The cached chamber, `None` on a miss; corrupt entries are errors.
    pub fn get(&self, key: &str) -> Result<Option<Chamber>> {
        let p = self.path(key);
        if !p.exists() {
            return Ok(None);
        }
        let bytes = fs::read(&p).with_context(|| format!("reading {}", p.display()))?;
        let e: Entry = serde_json::from_slice(&bytes).with_context(|| format!("cache entry {} is corrupt", p.display()))?;
        if e.key != key {
            bail!("cache entry {} has key {}", p.display(), e.key);
        }
        if content_hash(&e.chamber)? != e.content_sha256 {
            bail!("cache entry {} fails its content hash", p.display());
        }
        Ok(Some(e.chamber))
    }

    /// Stores a chamber by writing a temporary file and renaming it into place.
    pub fn put(&self, key: &str, ch: &Chamber) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let e = Entry {
            key: key.to_string(),
            content_sha256: content_hash(ch)?,
            chamber: ch.clone(),
        };
        write_atomic(&self.path(key), &serde_json::to_vec(&e)?)
    }

    pub fn get_or_compute(&self, key: &str, f: impl FnOnce() -> Result<Chamber>) -> Result<(Chamber, bool)> {
        if let Some(c) = self.get(key)? {
            return Ok((c, true));
        }
        let c = f()?;
        self.put(key, &c)?;
        Ok((c, false))
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use weylwalk::chambers::Wall;
    use weylwalk::exactalg::{rat, rat_int};

    fn sample() -> Chamber {
        Chamber {
            weyl: vec![rat_int(1), rat_int(0)],
            ws: vec![rat(1, 2), rat_int(3)],
            walls: vec![Wall {
                v: vec![rat_int(1), rat(-1, 4)],
                n: rat(-3, 4),
                a: rat_int(3),
            }],
        }
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = ChamberCache::new(dir.path());
        let key = chamber_key(&ZMatrix::identity(2), &ZMatrix::identity(2), &sample().weyl);
        assert!(c.get(&key).unwrap().is_none());
        c.put(&key, &sample()).unwrap();
        assert_eq!(c.get(&key).unwrap().unwrap(), sample());
        let text = fs::read_to_string(c.path(&key)).unwrap().replace("-3/4", "-5/4");
        fs::write(c.path(&key), text).unwrap();
        assert!(c.get(&key).is_err());
    }

    #[test]
    fn key_depends_on_every_input() {
        let w = sample().weyl;
        let i = ZMatrix::identity(2);
        let mut g = ZMatrix::identity(2);
        g[(0, 0)] = 2.into();
        let k = chamber_key(&i, &i, &w);
        assert_ne!(k, chamber_key(&g, &i, &w));
        assert_ne!(k, chamber_key(&i, &g, &w));
        assert_ne!(k, chamber_key(&i, &i, &[rat_int(1), rat_int(1)]));
        assert_eq!(k, chamber_key(&i, &i, &w));
    }
}
