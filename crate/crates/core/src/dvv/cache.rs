use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU32, Ordering};

use dashmap::DashMap;
use num_bigint::BigInt;

use super::key::{CanonicalKey, DVec};
use crate::arith::{is_reduced, Rational};
use crate::error::{Error, Result};

pub const CACHE_HEADER: &str = "dvvcache v1";

/// Concurrent table of C-values keyed by canonical multiset.
///
/// Readers never block each other. Two threads may race to fill the same key;
/// both compute the same exact value and the second insert is a no-op.
#[derive(Debug, Default)]
pub struct MemoCache {
    map: DashMap<CanonicalKey, Rational>,
    max_x: AtomicU32,
}

impl MemoCache {
    pub fn new() -> MemoCache {
        MemoCache::default()
    }

    pub fn version() -> &'static str {
        CACHE_HEADER
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Largest `X(d)` among stored keys.
    pub fn max_x(&self) -> u32 {
        self.max_x.load(Ordering::Relaxed)
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<Rational> {
        self.map.get(key).map(|v| v.value().clone())
    }

    pub fn insert(&self, key: CanonicalKey, value: Rational, x: u32) {
        self.map.entry(key).or_insert(value);
        self.max_x.fetch_max(x, Ordering::Relaxed);
    }

    pub fn clear(&self) {
        self.map.clear();
        self.max_x.store(0, Ordering::Relaxed);
    }

    /// All entries as sorted vectors, in a stable order.
    pub fn entries(&self) -> Vec<(DVec, Rational)> {
        let mut out: Vec<(DVec, Rational)> = self.map.iter().map(|e| (e.key().to_dvec(), e.value().clone())).collect();
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CACHE_HEADER}")?;
        for (d, v) in self.entries() {
            writeln!(w, "{} = {}/{}", d.to_csv(), v.numer(), v.denom())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn read_from<R: Read>(r: R) -> Result<MemoCache> {
        let reader = BufReader::new(r);
        let cache = MemoCache::new();
        let mut lines = reader.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim_end() != CACHE_HEADER {
            return Err(Error::CacheVersion { expected: CACHE_HEADER.into(), found: header });
        }
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::CacheLine { line: lineno, msg: msg.to_string() };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("missing `=`"))?;
            let d = DVec::parse_csv(lhs).map_err(|e| bad(&e.to_string()))?;
            if d != d.sorted() {
                return Err(bad("key is not sorted"));
            }
            let (p, q) = rhs.trim().split_once('/').ok_or_else(|| bad("value is not p/q"))?;
            let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if !is_reduced(&p, &q) {
                return Err(bad("rational not in lowest terms"));
            }
            let key = CanonicalKey::from_dvec(&d);
            if cache.map.contains_key(&key) {
                return Err(bad("duplicate key"));
            }
            let x = (d.three_x() / 3) as u32;
            cache.insert(key, Rational::new_raw(p, q), x);
        }
        Ok(cache)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MemoCache> {
        MemoCache::read_from(File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvv::Engine;

    #[test]
    fn save_load_round_trip() {
        let engine = Engine::new();
        engine.c_value(&DVec::from([2, 2, 3, 3]));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cache");
        engine.cache().save(&path).unwrap();
        let back = MemoCache::load(&path).unwrap();
        assert_eq!(back.entries(), engine.cache().entries());
        assert_eq!(back.max_x(), engine.cache().max_x());
    }

    #[test]
    fn rejects_bad_version() {
        let err = MemoCache::read_from("dvvcache v2\n4 = 35/144\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CacheVersion { .. }));
    }

    #[test]
    fn rejects_unreduced_rational_with_line_number() {
        let text = "dvvcache v1\n4 = 35/144\n2,3 = 2030/7776\n";
        match MemoCache::read_from(text.as_bytes()) {
            Err(Error::CacheLine { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_and_duplicate_lines() {
        for text in [
            "dvvcache v1\n4 35/144\n",
            "dvvcache v1\n4 = 35\n",
            "dvvcache v1\n3,2 = 1015/3888\n",
            "dvvcache v1\n4 = 35/144\n4 = 35/144\n",
            "dvvcache v1\n4 = 35/-144\n",
        ] {
            assert!(matches!(MemoCache::read_from(text.as_bytes()), Err(Error::CacheLine { .. })), "{text}");
        }
    }

    #[test]
    fn loaded_values_are_served() {
        let cache = MemoCache::read_from("dvvcache v1\n2,3 = 1015/3888\n".as_bytes()).unwrap();
        let engine = Engine::with_cache(cache);
        assert_eq!(engine.c_value(&DVec::from([3, 1, 2])), crate::arith::rat(1015, 3888));
    }
}
