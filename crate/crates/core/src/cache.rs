//! On-disk cache of the expensive pipeline stages: the reduced Gröbner
//! basis, the algebra basis, `f²` and `f³` with both decompositions.
//!
//! Entries are JSON files named by a SHA-256 over the schema version, the
//! canonical presentation text (which fixes the arrow order), the cap and
//! the tie-break rule.

use std::fs::{self, File, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path as FsPath, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::groebner::TieBreak;
use crate::quiver::{FreeElement, Path, Presentation, Quiver, UniformElement};
use crate::resolution::{F3Member, TwoSidedTerm};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathData {
    pub source: u32,
    pub arrows: Vec<u32>,
}

pub type ElementData = Vec<(PathData, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermData {
    pub left: PathData,
    pub gen: usize,
    pub right: PathData,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F3Data {
    pub element: ElementData,
    pub right: Vec<ElementData>,
    pub two_sided: Vec<TermData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub key: String,
    pub groebner: Vec<ElementData>,
    pub basis: Vec<PathData>,
    pub nil_index: usize,
    pub nilpotency: usize,
    pub f2: Vec<usize>,
    pub f3: Vec<F3Data>,
}

pub fn cache_key(pres: &Presentation, cap: usize, tie: TieBreak) -> String {
    let mut h = Sha256::new();
    h.update(format!("schema {SCHEMA_VERSION}\ncap {cap}\ntie {tie:?}\n"));
    h.update(pres.to_string());
    hex::encode(h.finalize())
}

pub fn encode_path(p: &Path) -> PathData {
    PathData { source: p.source(), arrows: p.arrows().to_vec() }
}

pub fn decode_path(q: &Quiver, d: &PathData) -> Result<Path> {
    if d.arrows.is_empty() {
        if (d.source as usize) >= q.vertex_count() {
            return Err(Error::Cache(format!("vertex {} out of range", d.source)));
        }
        return Ok(Path::trivial(d.source));
    }
    let p = q.path(&d.arrows).ok_or_else(|| Error::Cache("stored path does not compose".into()))?;
    if p.source() != d.source {
        return Err(Error::Cache("stored path has the wrong source".into()));
    }
    Ok(p)
}

pub fn encode_element(x: &FreeElement) -> ElementData {
    x.terms().map(|(p, c)| (encode_path(p), c.to_string())).collect()
}

pub fn decode_element(field: FieldSpec, q: &Quiver, d: &ElementData) -> Result<FreeElement> {
    let mut terms = Vec::with_capacity(d.len());
    for (p, c) in d {
        terms.push((decode_path(q, p)?, field.parse_literal(c)?));
    }
    Ok(FreeElement::from_terms(terms))
}

pub fn encode_f3(y: &F3Member) -> F3Data {
    F3Data {
        element: encode_element(y.element.element()),
        right: y.right.iter().map(encode_element).collect(),
        two_sided: y
            .two_sided
            .iter()
            .map(|t| TermData {
                left: encode_path(&t.left),
                gen: t.gen,
                right: encode_path(&t.right),
                coeff: t.coeff.to_string(),
            })
            .collect(),
    }
}

pub fn decode_f3(field: FieldSpec, q: &Quiver, d: &F3Data) -> Result<F3Member> {
    let element = UniformElement::new(decode_element(field, q, &d.element)?)?;
    let right = d.right.iter().map(|r| decode_element(field, q, r)).collect::<Result<_>>()?;
    let two_sided = d
        .two_sided
        .iter()
        .map(|t| {
            Ok(TwoSidedTerm {
                left: decode_path(q, &t.left)?,
                gen: t.gen,
                right: decode_path(q, &t.right)?,
                coeff: field.parse_literal(&t.coeff)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(F3Member { element, right, two_sided })
}

/// A cache directory. Writers hold `<dir>/.lock`; entries are written to a
/// temporary file and renamed into place.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &FsPath {
        &self.dir
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Reads the entry for `key`. Entries with another schema version or key,
    /// or that fail to parse, count as misses.
    pub fn load(&self, key: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.entry_path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.schema == SCHEMA_VERSION && entry.key == key).then_some(entry)
    }

    fn lock(&self) -> Result<LockGuard> {
        let path = self.dir.join(".lock");
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(LockGuard(path));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if start.elapsed() > Duration::from_secs(30) {
                        return Err(Error::Cache(format!("timed out waiting for {}", path.display())));
                    }
                    thread::sleep(Duration::from_millis(50));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let _guard = self.lock()?;
        let target = self.entry_path(&entry.key);
        let tmp = self.dir.join(format!(".{}.tmp", entry.key));
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer(&mut f, entry)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    #[test]
    fn element_roundtrip() {
        let p = parse_presentation(
            "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { 2/3 x x - y y; }",
        )
        .unwrap();
        let x = p.relations[0].element().clone();
        let d = encode_element(&x);
        assert_eq!(decode_element(p.field, &p.quiver, &d).unwrap(), x);
        let e = FreeElement::from_path(Path::trivial(0), p.field.from_int(-1));
        assert_eq!(decode_element(p.field, &p.quiver, &encode_element(&e)).unwrap(), e);
    }

    #[test]
    fn key_depends_on_inputs() {
        let p = parse_presentation("field Q quiver { vertex v; arrow x: v -> v; } relations { x x; }").unwrap();
        let k1 = cache_key(&p, 12, TieBreak::Leftmost);
        assert_eq!(k1, cache_key(&p, 12, TieBreak::Leftmost));
        assert_ne!(k1, cache_key(&p, 13, TieBreak::Leftmost));
        assert_ne!(k1, cache_key(&p, 12, TieBreak::Rightmost));
    }

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("c"));
        let entry = CacheEntry {
            schema: SCHEMA_VERSION,
            key: "abc".into(),
            groebner: vec![],
            basis: vec![PathData { source: 0, arrows: vec![] }],
            nil_index: 1,
            nilpotency: 1,
            f2: vec![],
            f3: vec![],
        };
        assert!(cache.load("abc").is_none());
        cache.store(&entry).unwrap();
        assert_eq!(cache.load("abc"), Some(entry.clone()));
        assert!(!dir.path().join("c/.lock").exists());
        let mut stale = entry;
        stale.schema = SCHEMA_VERSION + 1;
        cache.store(&stale).unwrap();
        assert!(cache.load("abc").is_none());
    }
}
