//! On-disk cache of scan records keyed by a group fingerprint.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::ScanRecord;
use crate::error::{Error, Result};
use crate::group::{canonical_table, invariants, Group};

/// Groups up to this order are fingerprinted by their canonical table.
pub const CANONICAL_MAX_ORDER: usize = 64;
pub const CANONICAL_BUDGET: usize = 20_000;

/// SHA-256 of an isomorphism-invariant description where one is available,
/// else of the invariants plus the raw table. Abelian groups are described
/// by their sorted element orders, which determine them; other groups by
/// the canonical table when it is found within budget.
pub fn fingerprint(g: &Group) -> String {
    let mut h = Sha256::new();
    if g.is_abelian() {
        let mut orders = g.element_orders();
        orders.sort_unstable();
        h.update(b"abelian");
        orders.iter().for_each(|&o| h.update((o as u64).to_le_bytes()));
        return hex::encode(h.finalize());
    }
    let canonical = (g.order() <= CANONICAL_MAX_ORDER).then(|| canonical_table(g, CANONICAL_BUDGET)).flatten();
    match canonical {
        Some(table) => {
            h.update(b"canonical");
            h.update((g.order() as u64).to_le_bytes());
            table.iter().for_each(|x| h.update(x.to_le_bytes()));
        }
        None => {
            h.update(b"invariants");
            h.update(serde_json::to_vec(&invariants(g)).expect("invariants serialize"));
            g.flat_table().iter().for_each(|x| h.update(x.to_le_bytes()));
        }
    }
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, fp: &str) -> PathBuf {
        self.dir.join(format!("{fp}.json"))
    }

    /// `Ok(None)` when absent; `CacheCorrupt` when present but unreadable.
    pub fn get(&self, fp: &str) -> Result<Option<ScanRecord>> {
        let path = self.path(fp);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        serde_json::from_str(&text).map(Some).map_err(|e| Error::CacheCorrupt(format!("{}: {e}", path.display())))
    }

    /// Writes through a temporary file so readers never see partial entries.
    pub fn put(&self, fp: &str, record: &ScanRecord) -> Result<()> {
        let tmp = self.dir.join(format!("{fp}.json.tmp"));
        std::fs::write(&tmp, serde_json::to_vec_pretty(record).expect("records serialize"))?;
        std::fs::rename(&tmp, self.path(fp))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_from_permutations, standard_group, PermutationGenSet};
    use crate::scan::scan_group;

    #[test]
    fn isomorphic_presentations_share_fingerprint() {
        let table = standard_group("dihedral:8".parse().unwrap()).unwrap();
        let gens = PermutationGenSet::new(4, vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap();
        let perm = group_from_permutations(&gens, "D8 on a square", 400).unwrap();
        assert_eq!(fingerprint(&table), fingerprint(&perm));
        let q8 = standard_group("quaternion8".parse().unwrap()).unwrap();
        assert_ne!(fingerprint(&table), fingerprint(&q8));
    }

    #[test]
    fn put_get_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let g = standard_group("dihedral:8".parse().unwrap()).unwrap();
        let fp = fingerprint(&g);
        assert_eq!(cache.get(&fp).unwrap(), None);
        let rec = scan_group(&g).unwrap();
        cache.put(&fp, &rec).unwrap();
        assert_eq!(cache.get(&fp).unwrap(), Some(rec));
        assert_eq!(cache.get("unknown").unwrap(), None);
    }

    #[test]
    fn corrupt_entry() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        std::fs::write(dir.path().join("bad.json"), "{ truncated").unwrap();
        assert!(matches!(cache.get("bad"), Err(Error::CacheCorrupt(_))));
    }
}
