//! On-disk cache: one text file per memo entry.
//!
//! File `g_<n>_<a12>_<a13>_<a23>.txt` holds a header line
//! `<n> <a12> <a13> <a23> <degree>` followed by `degree + 1` decimal
//! coefficients, lowest degree first. The zero polynomial is degree 0 with a
//! single `0`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::edge::EdgeVector;
use crate::error::{MomentError, Result};
use crate::poly::IntPolynomial;
use crate::recursion::memo::{MemoKey, MemoTable};

pub fn file_name(key: &MemoKey) -> String {
    format!("g_{}_{}_{}_{}.txt", key.n, key.a.a12, key.a.a13, key.a.a23)
}

fn parse_file_name(name: &str) -> Option<MemoKey> {
    let stem = name.strip_prefix("g_")?.strip_suffix(".txt")?;
    let parts: Vec<u32> = stem.split('_').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    match parts.as_slice() {
        &[n, a12, a13, a23] => Some(MemoKey::new(n, EdgeVector::new(a12, a13, a23))),
        _ => None,
    }
}

pub fn encode(key: &MemoKey, poly: &IntPolynomial) -> String {
    let degree = poly.degree().unwrap_or(0);
    format!(
        "{} {} {} {} {}\n{}",
        key.n,
        key.a.a12,
        key.a.a13,
        key.a.a23,
        degree,
        poly.to_text()
    )
}

/// Parses a cache file body and checks it against the key its name claims.
pub fn decode(key: &MemoKey, text: &str) -> std::result::Result<IntPolynomial, String> {
    let (header, body) = text.split_once('\n').ok_or("missing header line")?;
    let fields: Vec<u32> = header
        .split(' ')
        .map(|f| f.parse::<u32>().map_err(|_| format!("bad header field {f:?}")))
        .collect::<std::result::Result<_, _>>()?;
    let &[n, a12, a13, a23, degree] = fields.as_slice() else {
        return Err(format!("header has {} fields, expected 5", fields.len()));
    };
    if MemoKey::new(n, EdgeVector::new(a12, a13, a23)) != *key {
        return Err(format!("header names g({n}, ({a12},{a13},{a23}))"));
    }
    if !body.ends_with('\n') {
        return Err("missing final newline".into());
    }
    let lines = body.lines().count();
    if lines != degree as usize + 1 {
        return Err(format!("expected {} coefficient lines, found {lines}", degree + 1));
    }
    let poly = IntPolynomial::from_text(body).map_err(|e| e.to_string())?;
    if poly.degree().unwrap_or(0) != degree as usize {
        return Err("leading coefficient is zero".into());
    }
    Ok(poly)
}

/// A directory of cache files.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    /// Opens `dir`, creating it if needed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &MemoKey) -> PathBuf {
        self.dir.join(file_name(key))
    }

    pub fn contains(&self, key: &MemoKey) -> bool {
        self.path_for(key).is_file()
    }

    pub fn load(&self, key: &MemoKey) -> Result<Option<IntPolynomial>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) if e.kind() == std::io::ErrorKind::InvalidData => {
                return Err(corrupt(key, path, "not valid UTF-8".into()))
            }
            Err(e) => return Err(e.into()),
        };
        decode(key, &text).map(Some).map_err(|reason| corrupt(key, path, reason))
    }

    /// Writes one entry atomically: a temporary file in the same directory
    /// is renamed over the final name.
    pub fn store(&self, key: &MemoKey, poly: &IntPolynomial) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(encode(key, poly).as_bytes())?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Total size in bytes of all cache files.
    pub fn size_bytes(&self) -> Result<u64> {
        let mut total = 0;
        for entry in fs::read_dir(&self.dir)? {
            let entry = entry?;
            if parse_file_name(&entry.file_name().to_string_lossy()).is_some() {
                total += entry.metadata()?.len();
            }
        }
        Ok(total)
    }
}

fn corrupt(key: &MemoKey, path: PathBuf, reason: String) -> MomentError {
    MomentError::CorruptCache { n: key.n, a: key.a, path, reason }
}

/// Writes every entry of `memo` into `dir`. Returns the number of files.
pub fn save_memo(memo: &MemoTable, dir: &Path) -> Result<usize> {
    let cache = DiskCache::open(dir)?;
    let entries = memo.entries();
    for (key, poly) in &entries {
        cache.store(key, poly)?;
    }
    Ok(entries.len())
}

/// Reads every cache file in `dir`. Files not following the naming scheme
/// are ignored; a malformed cache file fails the whole load.
pub fn load_memo(dir: &Path) -> Result<MemoTable> {
    let cache = DiskCache { dir: dir.to_path_buf() };
    let memo = MemoTable::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with('.') {
            continue;
        }
        let Some(key) = parse_file_name(&name) else {
            if name.starts_with("g_") && name.ends_with(".txt") {
                return Err(MomentError::UnreadableCacheFile {
                    path: entry.path(),
                    reason: "file name does not encode a key".into(),
                });
            }
            continue;
        };
        let poly = cache.load(&key)?.expect("file listed by read_dir");
        memo.insert(key, poly);
    }
    Ok(memo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: u32, a: (u32, u32, u32)) -> MemoKey {
        MemoKey::new(n, EdgeVector::new(a.0, a.1, a.2))
    }

    #[test]
    fn encode_layout() {
        let text = encode(&key(1, (0, 0, 0)), &IntPolynomial::from_i64s(&[0, 2, 2]));
        assert_eq!(text, "1 0 0 0 2\n0\n2\n2\n");
        let zero = encode(&key(3, (2, 0, 0)), &IntPolynomial::zero());
        assert_eq!(zero, "3 2 0 0 0\n0\n");
        assert_eq!(file_name(&key(40, (1, 2, 3))), "g_40_1_2_3.txt");
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let memo = MemoTable::new();
        memo.insert(key(1, (0, 0, 0)), IntPolynomial::from_i64s(&[0, 2, 2]));
        memo.insert(key(1, (1, 1, 1)), IntPolynomial::from_i64s(&[0, 16, 14, 2]));
        memo.insert(key(2, (2, 0, 0)), IntPolynomial::zero());
        assert_eq!(save_memo(&memo, dir.path()).unwrap(), 3);
        assert_eq!(load_memo(dir.path()).unwrap(), memo);
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_memo(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn corrupt_file_names_the_key() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("g_2_0_0_0.txt"), "2 0 0 0 1\nzero\n7\n").unwrap();
        let err = load_memo(dir.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("g(2, (0,0,0))"), "{msg}");
        assert!(msg.contains("g_2_0_0_0.txt"), "{msg}");
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let k = key(2, (0, 0, 0));
        assert!(decode(&k, "2 0 0 2 0\n5\n").is_err());
        assert!(decode(&k, "2 0 0 0 1\n5\n").is_err());
        assert!(decode(&k, "2 0 0 0 1\n5\n0\n").is_err());
        assert!(decode(&k, "2 0 0 0 0\n5").is_err());
        assert_eq!(decode(&k, "2 0 0 0 0\n5\n").unwrap(), IntPolynomial::from_i64s(&[5]));
    }
}
