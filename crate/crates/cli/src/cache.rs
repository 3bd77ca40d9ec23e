//! On-disk cache of symbolic Artinian algebras, keyed by a SHA-256 of the
//! canonical input and the job parameters. Writes go through a temporary
//! file renamed into place, so concurrent jobs never see partial entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use facering::reduction::ArtinianAlgebra;
use facering::scalars::BaseField;
use facering::RationalFunction;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("artinian-{key}.json"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn load<C: BaseField>(&self, key: &str) -> Option<ArtinianAlgebra<RationalFunction<C>>> {
        let bytes = fs::read(self.path(key)).ok()?;
        let mut a: ArtinianAlgebra<RationalFunction<C>> = serde_json::from_slice(&bytes).ok()?;
        a.rebuild_indexes();
        Some(a)
    }

    pub fn store<C: BaseField>(&self, key: &str, a: &ArtinianAlgebra<RationalFunction<C>>) -> CliResult<()> {
        let bytes = serde_json::to_vec(a).map_err(|e| CliError::Cache(e.to_string()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(&bytes).map_err(|e| CliError::io(tmp.path(), e))?;
        let target = self.path(key);
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use facering::complex::{generators, SimplicialCycle};
    use facering::degree::DegreeFunctional;
    use facering::F2;

    #[test]
    fn round_trip_restores_indexes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let mu = SimplicialCycle::<F2>::fundamental(&generators::simplex_boundary(3)).unwrap();
        let df = DegreeFunctional::symbolic(&mu).unwrap();
        let a = ArtinianAlgebra::build(&mu.support(), df.lsop(), 3).unwrap();
        let key = Cache::key(&["tet", "2"]);
        assert!(cache.load::<F2>(&key).is_none());
        cache.store(&key, &a).unwrap();
        let b = cache.load::<F2>(&key).unwrap();
        assert_eq!(a.dims(), b.dims());
        let m = facering::reduction::vertex_monomial(&[(1, 2), (2, 1)]);
        assert_eq!(a.expand(&m).unwrap(), b.expand(&m).unwrap());
    }

    #[test]
    fn keys_separate_parts() {
        assert_ne!(Cache::key(&["ab", "c"]), Cache::key(&["a", "bc"]));
    }
}
