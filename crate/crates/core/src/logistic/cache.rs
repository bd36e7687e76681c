//! Persistent JSON-lines store of computed centers.
//!
//! The first line is a schema header; every other line is one serialized
//! [`Center`] with an extra `period_total` field giving the number of centers
//! of that period, so that partially written periods can be recognized and
//! dropped.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{centers_of_period, default_width, Center, LogisticError, PERIOD_CAP};
use crate::numkit::{RatInterval, Rational};

pub const CACHE_SCHEMA: &str = "entrolab-centers";
pub const CACHE_VERSION: u64 = 1;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("cache {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("cache {path}: unsupported header {header:?}")]
    Schema { path: String, header: String },
}

/// Centers grouped by period, optionally backed by a file.
#[derive(Debug, Default)]
pub struct CenterCache {
    path: Option<PathBuf>,
    width: Option<Rational>,
    periods: BTreeMap<u32, Vec<Center>>,
    unresolved: Vec<(u32, RatInterval)>,
}

fn io_err(path: &Path, e: impl ToString) -> CacheError {
    CacheError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

pub(crate) fn header_line() -> String {
    json!({"schema": CACHE_SCHEMA, "version": CACHE_VERSION}).to_string()
}

/// One cache line for `center`.
pub fn encode_line(center: &Center, period_total: usize) -> String {
    let mut v = serde_json::to_value(center).expect("center serializes");
    v.as_object_mut()
        .expect("center is an object")
        .insert("period_total".into(), json!(period_total));
    v.to_string()
}

/// Parse one cache line into a center and its `period_total`.
pub fn decode_line(line: &str) -> Option<(Center, usize)> {
    let mut obj: Map<String, Value> = serde_json::from_str(line).ok()?;
    let total = obj.remove("period_total")?.as_u64()?;
    let center: Center = serde_json::from_value(Value::Object(obj)).ok()?;
    Some((center, usize::try_from(total).ok()?))
}

impl CenterCache {
    pub fn in_memory() -> Self {
        CenterCache::default()
    }

    /// Root enclosure width for newly computed centers.
    pub fn with_width(mut self, width: Rational) -> Self {
        self.width = Some(width);
        self
    }

    /// Load a cache file, creating nothing until the first write. Periods
    /// whose lines are incomplete or malformed are discarded, and the file
    /// is rewritten without them.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let path = path.into();
        let mut cache = CenterCache {
            path: Some(path.clone()),
            ..CenterCache::default()
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(io_err(&path, e)),
        };
        let mut lines = text.lines();
        let Some(first) = lines.next() else {
            return Ok(cache);
        };
        let header: Option<Value> = serde_json::from_str(first).ok();
        let ok = header.as_ref().is_some_and(|h| {
            h.get("schema").and_then(Value::as_str) == Some(CACHE_SCHEMA)
                && h.get("version").and_then(Value::as_u64) == Some(CACHE_VERSION)
        });
        if !ok {
            return Err(CacheError::Schema {
                path: path.display().to_string(),
                header: first.chars().take(200).collect(),
            });
        }
        let mut groups: BTreeMap<u32, (Vec<Center>, Option<usize>, bool)> = BTreeMap::new();
        let mut dirty = false;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            match decode_line(line) {
                Some((c, total)) => {
                    let g = groups.entry(c.period()).or_insert((Vec::new(), Some(total), true));
                    if g.1 != Some(total) {
                        g.2 = false;
                    }
                    g.0.push(c);
                }
                None => dirty = true,
            }
        }
        for (p, (mut centers, total, consistent)) in groups {
            let complete = consistent && total == Some(centers.len()) && (1..=p).all(|_| true);
            if complete && p <= PERIOD_CAP {
                centers.sort_by(|a, b| a.r_enc().lo().cmp(b.r_enc().lo()));
                centers.dedup();
                if centers.len() == total.unwrap_or(0) {
                    cache.periods.insert(p, centers);
                    continue;
                }
            }
            dirty = true;
        }
        if dirty {
            cache.rewrite()?;
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    fn rewrite(&self) -> Result<(), CacheError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut out = header_line();
        out.push('\n');
        for centers in self.periods.values() {
            for c in centers {
                out.push_str(&encode_line(c, centers.len()));
                out.push('\n');
            }
        }
        fs::write(path, out).map_err(|e| io_err(path, e))
    }

    fn append(&self, centers: &[Center]) -> Result<(), CacheError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let mut buf = String::new();
        if fresh {
            buf.push_str(&header_line());
            buf.push('\n');
        }
        for c in centers {
            buf.push_str(&encode_line(c, centers.len()));
            buf.push('\n');
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| io_err(path, e))?;
        f.write_all(buf.as_bytes()).map_err(|e| io_err(path, e))
    }

    /// Whether period `p` is already present.
    pub fn has_period(&self, p: u32) -> bool {
        self.periods.contains_key(&p)
    }

    /// Compute and store every period up to `p_max` that is missing.
    pub fn ensure(&mut self, p_max: u32) -> Result<(), LogisticError> {
        for p in 1..=p_max {
            self.ensure_period(p)?;
        }
        Ok(())
    }

    /// Centers of period `p`, computing them (and their divisors) if needed.
    pub fn ensure_period(&mut self, p: u32) -> Result<&[Center], LogisticError> {
        if p == 0 || p > PERIOD_CAP {
            return Err(LogisticError::InvalidArgument(format!("period {p} outside 1..={PERIOD_CAP}")));
        }
        if !self.periods.contains_key(&p) {
            for q in (1..p).filter(|q| p.is_multiple_of(*q)) {
                self.ensure_period(q)?;
            }
            let divisors: Vec<Center> = self
                .periods
                .iter()
                .filter(|(q, _)| **q < p && p.is_multiple_of(**q))
                .flat_map(|(_, cs)| cs.iter().cloned())
                .collect();
            let width = self.width.clone().unwrap_or_else(default_width);
            let table = centers_of_period(p, &divisors, &width)?;
            let mut centers = table.centers;
            centers.sort_by(|a, b| a.r_enc().lo().cmp(b.r_enc().lo()));
            self.append(&centers)?;
            self.unresolved.extend(table.unresolved);
            self.periods.insert(p, centers);
        }
        Ok(&self.periods[&p])
    }

    /// Stored centers with period `<= p_max`, sorted by period then parameter.
    pub fn centers_up_to(&self, p_max: u32) -> Vec<&Center> {
        self.periods.range(1..=p_max).flat_map(|(_, cs)| cs.iter()).collect()
    }

    /// Root cells left unresolved by computations in this session.
    pub fn unresolved(&self) -> &[(u32, RatInterval)] {
        &self.unresolved
    }
}
