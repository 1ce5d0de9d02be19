//! Report cache keyed by content hash. Entries are written to a temporary file
//! in the cache directory and renamed into place.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: PathBuf) -> std::io::Result<Cache> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    pub fn put(&self, key: &str, body: &str) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(body.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path().join("nested")).unwrap();
        assert_eq!(c.get("k"), None);
        c.put("k", "{}\n").unwrap();
        c.put("k", "{\"a\": 1}\n").unwrap();
        assert_eq!(c.get("k").as_deref(), Some("{\"a\": 1}\n"));
        // no temporary files left behind
        assert_eq!(fs::read_dir(dir.path().join("nested")).unwrap().count(), 1);
    }
}
