//! On-disk cache of matching counts `f_k(2n)`.
//!
//! File layout: a header line `STACKDIST1 <k> <max_n>` followed by
//! `max_n + 1` lines holding `f_k(0), f_k(2), ..., f_k(2 max_n)` in decimal.
//! A file with any other shape is ignored and rebuilt; writes go through a
//! temporary file and a rename so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bigcombinat::BigCount;
use crate::error::{Error, Result};
use crate::matchings::PerfectMatchings;

pub const MAGIC: &str = "STACKDIST1";
/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "STACKDIST_CACHE";

const PREFIX: &str = "fk-";
const SUFFIX: &str = ".txt";

pub fn cache_path(dir: &Path, k: u32) -> PathBuf {
    dir.join(format!("{PREFIX}{k}{SUFFIX}"))
}

/// Serialized form of a matching table.
pub fn encode(table: &PerfectMatchings) -> String {
    let mut out = format!("{MAGIC} {} {}\n", table.k(), table.max_pairs());
    for c in table.counts() {
        out.push_str(&c.to_str_radix(10));
        out.push('\n');
    }
    out
}

/// Parses [`encode`] output; `None` if the text is not a complete table.
pub fn decode(text: &str) -> Option<PerfectMatchings> {
    let mut lines = text.lines();
    let mut header = lines.next()?.split_whitespace();
    if header.next()? != MAGIC {
        return None;
    }
    let k: u32 = header.next()?.parse().ok()?;
    let max_n: usize = header.next()?.parse().ok()?;
    if header.next().is_some() {
        return None;
    }
    let counts = lines
        .map(|l| BigCount::parse_bytes(l.trim().as_bytes(), 10))
        .collect::<Option<Vec<_>>>()?;
    if counts.len() != max_n + 1 {
        return None;
    }
    PerfectMatchings::from_counts(k, counts).ok()
}

/// Cached table for `k` if it exists, parses and covers `max_pairs`.
pub fn load(dir: &Path, k: u32, max_pairs: usize) -> Option<PerfectMatchings> {
    let text = fs::read_to_string(cache_path(dir, k)).ok()?;
    decode(&text).filter(|t| t.k() == k && t.max_pairs() >= max_pairs)
}

pub fn save(dir: &Path, table: &PerfectMatchings) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, table.k());
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(encode(table).as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(path)
}

/// Cached table if usable, otherwise computes and stores it.
pub fn load_or_compute(dir: &Path, k: u32, max_pairs: usize) -> Result<PerfectMatchings> {
    if let Some(table) = load(dir, k, max_pairs) {
        return Ok(table);
    }
    let table = PerfectMatchings::compute(k, max_pairs)?;
    save(dir, &table)?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub path: PathBuf,
    /// `None` when the file does not parse.
    pub k: Option<u32>,
    pub max_pairs: Option<usize>,
    pub bytes: u64,
}

fn cache_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with(PREFIX) && n.ends_with(SUFFIX))
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn info(dir: &Path) -> Result<Vec<CacheEntry>> {
    cache_files(dir)?
        .into_iter()
        .map(|path| {
            let bytes = fs::metadata(&path)?.len();
            let parsed = fs::read_to_string(&path).ok().as_deref().and_then(decode);
            Ok(CacheEntry {
                k: parsed.as_ref().map(PerfectMatchings::k),
                max_pairs: parsed.as_ref().map(PerfectMatchings::max_pairs),
                path,
                bytes,
            })
        })
        .collect()
}

/// Removes all cache files in `dir`, returning how many were deleted.
pub fn clear(dir: &Path) -> Result<usize> {
    let files = cache_files(dir)?;
    for f in &files {
        fs::remove_file(f)?;
    }
    Ok(files.len())
}
