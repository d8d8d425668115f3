//! Persistent value cache.
//!
//! Plain text, one entry per line:
//!
//! ```text
//! W:6:3:2 optimum=4 status=optimal witness=1,2,3;1,2,4;1,2,5;1,2,6
//! ```
//!
//! Keys are `mode:n:k:r`. Entries whose status is lower-bound-only are
//! kept for later upgrades but never served as exact values, and an
//! optimal entry is never replaced by a weaker one. The file format
//! assumes one writer per key; the engine only records what it computed
//! itself.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::family::KFamily;
use crate::search::{Mode, SearchStatus};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CacheKey {
    pub mode: Mode,
    pub n: u32,
    pub k: u32,
    pub r: u32,
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.mode, self.n, self.k, self.r)
    }
}

#[derive(Clone, Debug)]
pub struct CacheEntry {
    pub optimum: usize,
    pub status: SearchStatus,
    pub witness: KFamily,
}

#[derive(Default, Debug)]
pub struct ValueCache {
    entries: BTreeMap<CacheKey, CacheEntry>,
}

impl ValueCache {
    pub fn new() -> Self {
        ValueCache::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheEntry> {
        self.entries.get(key)
    }

    /// Only entries that finished their search count as exact.
    pub fn exact(&self, key: &CacheKey) -> Option<&CacheEntry> {
        self.entries
            .get(key)
            .filter(|e| e.status == SearchStatus::Optimal)
    }

    /// Records an entry, keeping the stronger of old and new: optimal
    /// beats lower-bound-only, and among lower bounds the larger wins.
    pub fn record(&mut self, key: CacheKey, entry: CacheEntry) {
        match self.entries.get(&key) {
            Some(old)
                if old.status == SearchStatus::Optimal
                    && entry.status != SearchStatus::Optimal => {}
            Some(old)
                if old.status == entry.status && entry.optimum <= old.optimum => {}
            _ => {
                self.entries.insert(key, entry);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CacheKey, &CacheEntry)> {
        self.entries.iter()
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut cache = ValueCache::new();
        for (i, raw) in src.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, entry) = parse_line(line).map_err(|msg| Error::Cache {
                line: line_no,
                msg,
            })?;
            cache.record(key, entry);
        }
        Ok(cache)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# setfam value cache\n");
        for (key, e) in &self.entries {
            let witness = e
                .witness
                .members()
                .iter()
                .map(|m| {
                    m.elements()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect::<Vec<_>>()
                .join(";");
            let _ = writeln!(
                out,
                "{key} optimum={} status={} witness={witness}",
                e.optimum, e.status
            );
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        ValueCache::parse(&src)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

fn parse_line(line: &str) -> std::result::Result<(CacheKey, CacheEntry), String> {
    let mut tokens = line.split_whitespace();
    let key_tok = tokens.next().ok_or("empty entry")?;
    let key = parse_key(key_tok)?;
    let mut optimum: Option<usize> = None;
    let mut status: Option<SearchStatus> = None;
    let mut witness: Option<&str> = None;
    for tok in tokens {
        let (field, value) = tok
            .split_once('=')
            .ok_or_else(|| format!("expected field=value, got {tok:?}"))?;
        match field {
            "optimum" => {
                optimum = Some(
                    value
                        .parse()
                        .map_err(|_| format!("bad optimum {value:?}"))?,
                )
            }
            "status" => {
                status = Some(match value {
                    "optimal" => SearchStatus::Optimal,
                    "lower-bound-only" => SearchStatus::LowerBoundOnly,
                    other => return Err(format!("bad status {other:?}")),
                })
            }
            "witness" => witness = Some(value),
            other => return Err(format!("unknown field {other:?}")),
        }
    }
    let optimum = optimum.ok_or("missing optimum")?;
    let status = status.ok_or("missing status")?;
    let witness = parse_witness(key.n, key.k, witness.unwrap_or(""))?;
    if witness.len() != optimum {
        return Err(format!(
            "witness has {} members but optimum is {optimum}",
            witness.len()
        ));
    }
    Ok((
        key,
        CacheEntry {
            optimum,
            status,
            witness,
        },
    ))
}

fn parse_key(tok: &str) -> std::result::Result<CacheKey, String> {
    let parts: Vec<&str> = tok.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("bad key {tok:?}, expected mode:n:k:r"));
    }
    let mode: Mode = parts[0].parse()?;
    let parse_num = |s: &str, what: &str| {
        s.parse::<u32>()
            .map_err(|_| format!("bad {what} in key {tok:?}"))
    };
    Ok(CacheKey {
        mode,
        n: parse_num(parts[1], "n")?,
        k: parse_num(parts[2], "k")?,
        r: parse_num(parts[3], "r")?,
    })
}

fn parse_witness(n: u32, k: u32, encoded: &str) -> std::result::Result<KFamily, String> {
    let mut lists: Vec<Vec<u32>> = Vec::new();
    if !encoded.is_empty() {
        for member in encoded.split(';') {
            let elems = member
                .split(',')
                .map(|e| e.parse::<u32>().map_err(|_| format!("bad element {e:?}")))
                .collect::<std::result::Result<Vec<u32>, String>>()?;
            lists.push(elems);
        }
    }
    KFamily::from_element_lists(n, k, &lists).map_err(|e| e.to_string())
}
