//! Memo of factorizations of q^m - 1, optionally persisted to a file.
//!
//! File format: one tab-separated record per line,
//! `q  m  unix-timestamp  tool-version  value = p1^e1 * ...`.
//! Records that fail to parse or recompose are ignored and recomputed.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;

use crate::error::Result;
use crate::intfact::{factor_q_power_minus_one, Budget, Factorization};

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "PNSIEVE_CACHE";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Default)]
pub struct FactorCache {
    memo: Mutex<HashMap<(u64, u64), Factorization>>,
    file: Option<PathBuf>,
    budget: Budget,
}

impl FactorCache {
    /// In-memory only.
    pub fn new(budget: Budget) -> Self {
        FactorCache { memo: Mutex::default(), file: None, budget }
    }

    /// Backed by `path`; valid records already in the file are loaded.
    pub fn with_file(path: impl AsRef<Path>, budget: Budget) -> Self {
        let path = path.as_ref().to_path_buf();
        let mut memo = HashMap::new();
        if let Ok(f) = std::fs::File::open(&path) {
            for line in BufReader::new(f).lines().map_while(std::result::Result::ok) {
                if let Some((key, fact)) = parse_record(&line) {
                    memo.insert(key, fact);
                }
            }
        }
        FactorCache { memo: Mutex::new(memo), file: Some(path), budget }
    }

    /// File from `PNSIEVE_CACHE` when set.
    pub fn from_env(budget: Budget) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::with_file(p, budget),
            _ => Self::new(budget),
        }
    }

    pub fn len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, q: u64, m: u64) -> bool {
        self.memo.lock().unwrap().contains_key(&(q, m))
    }

    pub fn get(&self, q: u64, m: u64) -> Result<Factorization> {
        if let Some(f) = self.memo.lock().unwrap().get(&(q, m)) {
            return Ok(f.clone());
        }
        let fact = factor_q_power_minus_one(q, m, self.budget)?;
        let mut memo = self.memo.lock().unwrap();
        if let std::collections::hash_map::Entry::Vacant(e) = memo.entry((q, m)) {
            e.insert(fact.clone());
            if let Some(path) = &self.file {
                // cache writes are best-effort; a failure only costs speed
                let _ = append_record(path, q, m, &fact);
            }
        }
        Ok(fact)
    }
}

fn append_record(path: &Path, q: u64, m: u64, fact: &Factorization) -> std::io::Result<()> {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{q}\t{m}\t{stamp}\t{TOOL_VERSION}\t{fact}")
}

fn parse_record(line: &str) -> Option<((u64, u64), Factorization)> {
    let mut parts = line.splitn(5, '\t');
    let q: u64 = parts.next()?.parse().ok()?;
    let m: u64 = parts.next()?.parse().ok()?;
    let _stamp: u64 = parts.next()?.parse().ok()?;
    let _version = parts.next()?;
    let fact: Factorization = parts.next()?.parse().ok()?;
    let m32 = u32::try_from(m).ok()?;
    (fact.value == BigUint::from(q).pow(m32) - 1u32 && fact.validate()).then_some(((q, m), fact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = std::env::temp_dir().join(format!("pnsieve-cache-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let c = FactorCache::with_file(&dir, Budget::default());
        let a = c.get(5, 15).unwrap();
        let again = FactorCache::with_file(&dir, Budget::default());
        assert!(again.contains(5, 15));
        assert_eq!(again.get(5, 15).unwrap(), a);
        // a record for the wrong value is dropped
        let text = std::fs::read_to_string(&dir).unwrap().replace("5\t15\t", "5\t16\t");
        std::fs::write(&dir, text).unwrap();
        let bad = FactorCache::with_file(&dir, Budget::default());
        assert!(!bad.contains(5, 16));
        assert_eq!(bad.get(5, 16).unwrap().value, BigUint::from(5u32).pow(16) - 1u32);
        std::fs::remove_file(&dir).unwrap();
    }
}
