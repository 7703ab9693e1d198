//! Content-addressed store of computed cones and interrupted runs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hemicone::analysis::ConeRecord;
use hemicone::cone::Family;
use hemicone::dd::{DdSnapshot, ENGINE_VERSION};
use hemicone::report::{from_json, to_json};
use hemicone::scalar::Scalar;
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    /// Hex digest of (family, m, n, engine version, scalar type).
    pub fn key<S: Scalar>(family: Family, m: usize, n: usize) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "cone|{family}|m={m}|n={n}|{ENGINE_VERSION}|{}",
            S::NAME
        ));
        hex::encode(h.finalize())
    }

    pub fn entry_path<S: Scalar>(&self, family: Family, m: usize, n: usize) -> PathBuf {
        self.dir
            .join(format!("{}.json", Self::key::<S>(family, m, n)))
    }

    pub fn snapshot_path<S: Scalar>(&self, family: Family, m: usize, n: usize) -> PathBuf {
        self.dir
            .join(format!("{}.snapshot.json", Self::key::<S>(family, m, n)))
    }

    pub fn load<S: Scalar>(
        &self,
        family: Family,
        m: usize,
        n: usize,
    ) -> Result<Option<ConeRecord<S>>> {
        let path = self.entry_path::<S>(family, m, n);
        if !path.exists() {
            return Ok(None);
        }
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let rec: ConeRecord<S> =
            from_json("cone", &text).with_context(|| format!("decoding {}", path.display()))?;
        if rec.family != family || rec.m != m || rec.n != n {
            anyhow::bail!(
                "cache entry {} does not describe {family} m={m} n={n}",
                path.display()
            );
        }
        Ok(Some(rec))
    }

    pub fn store<S: Scalar>(&self, rec: &ConeRecord<S>) -> Result<PathBuf> {
        let path = self.entry_path::<S>(rec.family, rec.m, rec.n);
        write_atomic(&path, to_json("cone", rec)?.as_bytes())?;
        Ok(path)
    }

    pub fn store_snapshot<S: Scalar>(
        &self,
        family: Family,
        m: usize,
        n: usize,
        snap: &DdSnapshot<S>,
    ) -> Result<PathBuf> {
        let path = self.snapshot_path::<S>(family, m, n);
        write_atomic(&path, to_json("dd-snapshot", snap)?.as_bytes())?;
        Ok(path)
    }
}

pub fn read_snapshot<S: Scalar>(path: &Path) -> Result<DdSnapshot<S>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(from_json("dd-snapshot", &text)?)
}

/// Writes next to the target and renames, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    {
        let mut f =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
