//! Persistent slice cache.
//!
//! Layout under the cache directory:
//!
//! ```text
//! v1/<module hash>/module.txt      ring and module descriptor
//! v1/<module hash>/<key>.slice     one cohomology slice per file
//! ```
//!
//! The module hash is the first 16 hex digits of the SHA-256 of the module
//! id. Files are written to a temporary name and renamed into place, so a
//! reader never sees a partial entry; concurrent writers of one key write the
//! same bytes and the last rename wins.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use codepth::store::{SliceStore, StoredSlice};
use sha2::{Digest, Sha256};

use crate::error::CliError;

const VERSION_DIR: &str = "v1";

pub struct FileStore {
    root: PathBuf,
    counter: AtomicU64,
}

impl FileStore {
    /// Opens (creating if needed) the cache under `dir`.
    pub fn open(dir: &Path) -> Result<FileStore, CliError> {
        let root = dir.join(VERSION_DIR);
        fs::create_dir_all(&root).map_err(|e| CliError::Io(format!("cache directory {}: {e}", root.display())))?;
        let probe = root.join(format!(".probe.{}", std::process::id()));
        fs::write(&probe, b"")
            .and_then(|_| fs::remove_file(&probe))
            .map_err(|e| CliError::Io(format!("cache directory {} is not writable: {e}", root.display())))?;
        Ok(FileStore {
            root,
            counter: AtomicU64::new(0),
        })
    }

    fn module_dir(&self, module: &str) -> PathBuf {
        self.root.join(module_hash(module))
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        let dir = path.parent().expect("cache paths have a parent");
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".tmp.{}.{n}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }
}

impl SliceStore for FileStore {
    fn load(&self, module: &str, key: &str) -> Option<StoredSlice> {
        let path = self.module_dir(module).join(key_file(key));
        let text = fs::read_to_string(path).ok()?;
        let (m, k, slice) = decode_entry(&text)?;
        (m == module && k == key).then_some(slice)
    }

    fn save(&self, module: &str, key: &str, slice: &StoredSlice) {
        let dir = self.module_dir(module);
        if fs::create_dir_all(&dir).is_err() {
            return;
        }
        let tag = dir.join("module.txt");
        if !tag.exists() {
            let _ = self.write_atomic(&tag, format!("{module}\n").as_bytes());
        }
        let _ = self.write_atomic(&dir.join(key_file(key)), encode_entry(module, key, slice).as_bytes());
    }
}

pub fn module_hash(module: &str) -> String {
    let digest = Sha256::digest(module.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// `(-2,-3)@4` becomes `-2_-3_L4.slice`.
pub fn key_file(key: &str) -> String {
    let mut s = String::new();
    for c in key.chars() {
        match c {
            '(' | ')' | ' ' => {}
            ',' => s.push('_'),
            '@' => s.push_str("_L"),
            c if c.is_ascii_alphanumeric() || c == '-' => s.push(c),
            _ => s.push('_'),
        }
    }
    s.push_str(".slice");
    s
}

fn encode_row(row: &[(usize, String)]) -> String {
    if row.is_empty() {
        return "-".into();
    }
    row.iter().map(|(i, c)| format!("{i}:{c}")).collect::<Vec<_>>().join(" ")
}

fn decode_row(line: &str) -> Option<Vec<(usize, String)>> {
    if line == "-" {
        return Some(Vec::new());
    }
    line.split(' ')
        .map(|t| {
            let (i, c) = t.split_once(':')?;
            Some((i.parse().ok()?, c.to_string()))
        })
        .collect()
}

/// Entry format, shared by cache files and `cache export`.
pub fn encode_entry(module: &str, key: &str, slice: &StoredSlice) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "slice {module}");
    let _ = writeln!(s, "key {key}");
    let _ = writeln!(s, "ambient {}", slice.ambient);
    let _ = writeln!(s, "boundaries {}", slice.boundaries.len());
    for r in &slice.boundaries {
        let _ = writeln!(s, "{}", encode_row(r));
    }
    let _ = writeln!(s, "reps {}", slice.reps.len());
    for r in &slice.reps {
        let _ = writeln!(s, "{}", encode_row(r));
    }
    s.push_str("end\n");
    s
}

pub fn decode_entry(text: &str) -> Option<(String, String, StoredSlice)> {
    let mut lines = text.lines();
    let module = lines.next()?.strip_prefix("slice ")?.to_string();
    let key = lines.next()?.strip_prefix("key ")?.to_string();
    let ambient = lines.next()?.strip_prefix("ambient ")?.parse().ok()?;
    let nb: usize = lines.next()?.strip_prefix("boundaries ")?.parse().ok()?;
    let boundaries = (0..nb).map(|_| decode_row(lines.next()?)).collect::<Option<Vec<_>>>()?;
    let nr: usize = lines.next()?.strip_prefix("reps ")?.parse().ok()?;
    let reps = (0..nr).map(|_| decode_row(lines.next()?)).collect::<Option<Vec<_>>>()?;
    (lines.next()? == "end").then_some(())?;
    Some((module, key, StoredSlice { ambient, boundaries, reps }))
}

/// Entry files in deterministic order: by module id, then by file name.
fn entries(dir: &Path) -> Result<Vec<(String, PathBuf)>, CliError> {
    let root = dir.join(VERSION_DIR);
    let mut out = Vec::new();
    if !root.exists() {
        return Ok(out);
    }
    for m in fs::read_dir(&root)? {
        let m = m?.path();
        if !m.is_dir() {
            continue;
        }
        let module = fs::read_to_string(m.join("module.txt")).unwrap_or_default().trim_end().to_string();
        let mut files: Vec<PathBuf> = fs::read_dir(&m)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "slice"))
            .collect();
        files.sort();
        out.extend(files.into_iter().map(|f| (module.clone(), f)));
    }
    out.sort();
    Ok(out)
}

pub fn stats(dir: &Path) -> Result<String, CliError> {
    let es = entries(dir)?;
    let mut modules: Vec<&String> = es.iter().map(|e| &e.0).collect();
    modules.dedup();
    let bytes: u64 = es.iter().filter_map(|e| fs::metadata(&e.1).ok()).map(|m| m.len()).sum();
    Ok(format!(
        "cache {}\nmodules {}\nentries {}\nbytes {}\n",
        dir.display(),
        modules.len(),
        es.len(),
        bytes
    ))
}

pub fn clear(dir: &Path) -> Result<String, CliError> {
    let n = entries(dir)?.len();
    let root = dir.join(VERSION_DIR);
    if root.exists() {
        fs::remove_dir_all(&root)?;
    }
    Ok(format!("cleared {n} entries\n"))
}

/// Concatenated entries whose module id contains `module` and whose key equals
/// `key`, when given.
pub fn export(dir: &Path, module: Option<&str>, key: Option<&str>) -> Result<String, CliError> {
    let mut out = String::new();
    for (m, path) in entries(dir)? {
        if module.is_some_and(|f| !m.contains(f)) {
            continue;
        }
        let text = fs::read_to_string(&path)?;
        let Some((_, k, _)) = decode_entry(&text) else {
            return Err(CliError::Io(format!("malformed cache entry {}", path.display())));
        };
        if key.is_some_and(|f| f != k) {
            continue;
        }
        out.push_str(&text);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StoredSlice {
        StoredSlice {
            ambient: 3,
            boundaries: vec![vec![(0, "1".into()), (2, "-1/2".into())]],
            reps: vec![vec![(1, "1".into())], vec![]],
        }
    }

    #[test]
    fn entries_round_trip() {
        let text = encode_entry("Q[x] fine H^1_(x)", "(-1)@0", &sample());
        let (m, k, s) = decode_entry(&text).unwrap();
        assert_eq!(m, "Q[x] fine H^1_(x)");
        assert_eq!(k, "(-1)@0");
        assert_eq!(s, sample());
    }

    #[test]
    fn key_files_are_plain() {
        assert_eq!(key_file("(-2,-3)@4"), "-2_-3_L4.slice");
    }

    #[test]
    fn store_load_save_stats_clear() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        assert!(store.load("m", "(0)@0").is_none());
        store.save("m", "(0)@0", &sample());
        store.save("m", "(1)@0", &sample());
        assert_eq!(store.load("m", "(0)@0"), Some(sample()));
        // a different module id with the same key is a different entry
        assert!(store.load("m2", "(0)@0").is_none());
        let st = stats(dir.path()).unwrap();
        assert!(st.contains("entries 2"), "{st}");
        let ex = export(dir.path(), None, Some("(1)@0")).unwrap();
        assert_eq!(ex, encode_entry("m", "(1)@0", &sample()));
        clear(dir.path()).unwrap();
        assert!(stats(dir.path()).unwrap().contains("entries 0"));
    }
}
