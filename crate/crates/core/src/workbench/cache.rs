//! Append-only JSONL store of point counts and verification runs.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::claims::VerificationRun;
use crate::brutecount::{CountRecord, Method};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "DCOVER_CACHE";
pub const DEFAULT_CACHE_FILE: &str = "pointcounts.jsonl";

/// `$DCOVER_CACHE`, or `./pointcounts.jsonl`.
pub fn default_cache_path() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheLine {
    Count(CountRecord),
    Run(VerificationRun),
}

pub type CacheKey = (String, u32, Method);

pub struct Cache {
    path: PathBuf,
    counts: BTreeMap<CacheKey, CountRecord>,
    runs: Vec<VerificationRun>,
    file: File,
}

impl Cache {
    /// Open (creating if needed) and load every line; a line that does not
    /// parse, or two lines disagreeing on a count, is an error.
    pub fn open(path: impl AsRef<Path>) -> Result<Cache> {
        let path = path.as_ref().to_path_buf();
        let data_err = |reason: String| Error::Data {
            path: path.display().to_string(),
            reason,
        };
        let mut counts = BTreeMap::new();
        let mut runs = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: CacheLine = serde_json::from_str(&line)
                    .map_err(|e| data_err(format!("corrupt line {}: {e}", i + 1)))?;
                match parsed {
                    CacheLine::Count(rec) => {
                        let key = (rec.variety_id.clone(), rec.p, rec.method);
                        if let Some(old) = counts.get(&key) {
                            check_same(old, &rec)?;
                        } else {
                            counts.insert(key, rec);
                        }
                    }
                    CacheLine::Run(run) => runs.push(run),
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Cache {
            path,
            counts,
            runs,
            file,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, variety_id: &str, p: u32, method: Method) -> Option<&CountRecord> {
        self.counts.get(&(variety_id.to_string(), p, method))
    }

    pub fn counts(&self) -> impl Iterator<Item = &CountRecord> {
        self.counts.values()
    }

    pub fn runs(&self) -> &[VerificationRun] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty() && self.runs.is_empty()
    }

    fn append(&mut self, line: &CacheLine) -> Result<()> {
        let mut text = serde_json::to_string(line)?;
        text.push('\n');
        self.file.write_all(text.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }

    /// Store a freshly computed count. A count already present must agree.
    pub fn record(&mut self, rec: CountRecord) -> Result<CountRecord> {
        let key = (rec.variety_id.clone(), rec.p, rec.method);
        if let Some(old) = self.counts.get(&key) {
            check_same(old, &rec)?;
            return Ok(rec);
        }
        self.append(&CacheLine::Count(rec.clone()))?;
        self.counts.insert(key, rec.clone());
        Ok(rec)
    }

    pub fn record_run(&mut self, run: VerificationRun) -> Result<()> {
        self.append(&CacheLine::Run(run.clone()))?;
        self.runs.push(run);
        Ok(())
    }

    /// Serve a cached count, or compute and store it. With `recompute` the
    /// value is always computed and checked against the cache.
    pub fn get_or_compute(
        &mut self,
        variety_id: &str,
        p: u32,
        method: Method,
        recompute: bool,
        f: impl FnOnce() -> Result<CountRecord>,
    ) -> Result<CountRecord> {
        if !recompute {
            if let Some(rec) = self.get(variety_id, p, method) {
                return Ok(rec.clone());
            }
        }
        let rec = f()?;
        if rec.variety_id != variety_id || rec.p != p || rec.method != method {
            return Err(Error::Integrity(format!(
                "computed record ({}, {}, {}) does not match the requested key ({variety_id}, {p}, {})",
                rec.variety_id,
                rec.p,
                rec.method.as_str(),
                method.as_str()
            )));
        }
        self.record(rec)
    }
}

fn check_same(old: &CountRecord, new: &CountRecord) -> Result<()> {
    if old.count != new.count {
        return Err(Error::Integrity(format!(
            "{} at p = {} by {}: cached {} but computed {}",
            new.variety_id,
            new.p,
            new.method.as_str(),
            old.count,
            new.count
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(count: u128) -> CountRecord {
        CountRecord {
            variety_id: "f1".into(),
            p: 3,
            method: Method::Brute,
            count,
            wall_ms: 1.0,
        }
    }

    #[test]
    fn roundtrip_and_integrity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        {
            let mut c = Cache::open(&path).unwrap();
            c.record(rec(365)).unwrap();
            c.record(rec(365)).unwrap();
            assert!(matches!(c.record(rec(364)), Err(Error::Integrity(_))));
        }
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.get("f1", 3, Method::Brute).unwrap().count, 365);
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
    }

    #[test]
    fn corrupt_line_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, "{\"count\":{\"variety_id\":\"f1\"\n").unwrap();
        let err = Cache::open(&path).err().unwrap();
        assert!(err.to_string().contains("corrupt line 1"));
    }

    #[test]
    fn conflicting_lines_are_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let a = serde_json::to_string(&CacheLine::Count(rec(365))).unwrap();
        let b = serde_json::to_string(&CacheLine::Count(rec(366))).unwrap();
        std::fs::write(&path, format!("{a}\n{b}\n")).unwrap();
        assert!(matches!(Cache::open(&path), Err(Error::Integrity(_))));
    }

    #[test]
    fn recompute_checks_cache() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::open(dir.path().join("c.jsonl")).unwrap();
        c.record(rec(7)).unwrap();
        let served = c.get_or_compute("f1", 3, Method::Brute, false, || unreachable!()).unwrap();
        assert_eq!(served.count, 7);
        assert!(c.get_or_compute("f1", 3, Method::Brute, true, || Ok(rec(8))).is_err());
    }
}
