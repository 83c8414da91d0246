//! On-disk crystal cache keyed by (geometry hash, degree).

use std::path::{Path, PathBuf};

use wallx_core::io;
use wallx_core::series::Series;
use wallx_core::toric::Geometry;

pub fn dir() -> Option<PathBuf> {
    std::env::var_os("WALLX_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn key(g: &Geometry, d: u32, naive: bool) -> String {
    format!("crystal-{}-{d}{}.json", g.hash_hex(), if naive { "-naive" } else { "" })
}

/// A cached series, or `None` if absent or unreadable.
pub fn load(dir: &Path, key: &str) -> Option<Series> {
    let text = std::fs::read_to_string(dir.join(key)).ok()?;
    io::parse_series_json(&text).ok()
}

/// Best effort: a cache that cannot be written is skipped.
pub fn store(dir: &Path, key: &str, s: &Series) {
    let Ok(text) = serde_json::to_string(&io::series_to_json(s)) else { return };
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
    if std::fs::write(&tmp, text).is_ok() {
        let _ = std::fs::rename(&tmp, dir.join(key));
    }
}
