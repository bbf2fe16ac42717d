//! Content-addressed report cache under `TROPTRACK_CACHE_DIR`.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::Failure;

pub const ENV: &str = "TROPTRACK_CACHE_DIR";

/// Hex SHA-256 of the parts, each length-prefixed so that boundaries count.
pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn dir() -> Option<PathBuf> {
    std::env::var_os(ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Returns the stored text for `key`, or computes, stores and returns it.
/// Without a cache directory this is just `compute`.
pub fn cached(key: &str, compute: impl FnOnce() -> Result<String, Failure>) -> Result<String, Failure> {
    let Some(dir) = dir() else { return compute() };
    let path = dir.join(format!("{key}.out"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        return Ok(text);
    }
    let text = compute()?;
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    // Write then rename so a concurrent reader never sees a partial entry.
    let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, &text).map_err(|e| Failure::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, &path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::key;

    #[test]
    fn key_separates_parts() {
        assert_ne!(key(&["ab", "c"]), key(&["a", "bc"]));
        assert_eq!(key(&["x"]).len(), 64);
    }
}
