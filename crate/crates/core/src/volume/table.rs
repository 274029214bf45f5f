use std::collections::HashMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::{Mutex, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{format_fraction, parse_rational, MultiIndex, Rational};
use crate::moduli::is_stable;

/// Canonical name of one bracket `⟨∏τ_{d_j} κ(b)⟩_g`; ψ exponents are kept
/// sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    genus: u32,
    psi: Vec<u32>,
    kappa: MultiIndex,
}

impl CorrelatorKey {
    pub fn new(genus: u32, psi: &[u32], kappa: MultiIndex) -> Self {
        let mut psi = psi.to_vec();
        psi.sort_unstable_by(|a, b| b.cmp(a));
        CorrelatorKey { genus, psi, kappa }
    }

    pub fn psi_only(genus: u32, psi: &[u32]) -> Self {
        Self::new(genus, psi, MultiIndex::empty())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn psi(&self) -> &[u32] {
        &self.psi
    }

    pub fn kappa(&self) -> &MultiIndex {
        &self.kappa
    }

    pub fn points(&self) -> usize {
        self.psi.len()
    }

    /// `Σd + |b| = 3g − 3 + n` on a stable moduli space. Keys failing this
    /// name correlators that are zero by convention.
    pub fn is_admissible(&self) -> bool {
        let n = self.psi.len();
        if !is_stable(self.genus, n) {
            return false;
        }
        let total = self.psi.iter().map(|&d| d as i64).sum::<i64>() + self.kappa.weight() as i64;
        total == 3 * self.genus as i64 - 3 + n as i64
    }
}

impl fmt::Display for CorrelatorKey {
    /// `g|d1,d2,...|i:bi,...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let psi: Vec<String> = self.psi.iter().map(|d| d.to_string()).collect();
        write!(f, "{}|{}|{}", self.genus, psi.join(","), self.kappa)
    }
}

impl FromStr for CorrelatorKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split('|').collect();
        if fields.len() != 3 {
            return Err(Error::invalid(format!("expected g|d|b, got {s:?}")));
        }
        let genus = fields[0]
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::invalid(format!("bad genus {:?}", fields[0])))?;
        let psi = parse_exponents(fields[1])?;
        let kappa = fields[2].parse()?;
        Ok(CorrelatorKey::new(genus, &psi, kappa))
    }
}

/// Comma-separated nonnegative integers; the empty string is the empty list.
pub fn parse_exponents(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::invalid(format!("bad exponent {t:?}")))
        })
        .collect()
}

/// Which computation produced a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// The τ/κ recursion (including its b = 0 case).
    Recursion,
    /// Coefficient extraction from the n-point functions.
    NPoint,
    /// Reduction of κ classes to ψ classes.
    KappaOracle,
    /// Read from a cache file.
    Cache,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Recursion => "recursion",
            Provenance::NPoint => "n-point",
            Provenance::KappaOracle => "kappa-oracle",
            Provenance::Cache => "cache",
        })
    }
}

/// Write-once store of correlator values. A second write of a different
/// value for the same key is an [`Error::Disagreement`].
#[derive(Default)]
pub struct CorrelatorTable {
    entries: RwLock<HashMap<CorrelatorKey, (Rational, Provenance)>>,
    unsaved: Mutex<Vec<CorrelatorKey>>,
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &CorrelatorKey) -> Option<Rational> {
        self.entries.read().unwrap().get(key).map(|(v, _)| v.clone())
    }

    pub fn provenance(&self, key: &CorrelatorKey) -> Option<Provenance> {
        self.entries.read().unwrap().get(key).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inserts `value` or checks it against the stored one.
    pub fn record(&self, key: &CorrelatorKey, value: &Rational, by: Provenance) -> Result<()> {
        let mut entries = self.entries.write().unwrap();
        match entries.get(key) {
            Some((stored, _)) if stored == value => Ok(()),
            Some((stored, stored_by)) => Err(Error::Disagreement {
                key: key.to_string(),
                stored: format_fraction(stored),
                stored_by: stored_by.to_string(),
                computed: format_fraction(value),
                computed_by: by.to_string(),
            }),
            None => {
                entries.insert(key.clone(), (value.clone(), by));
                if by != Provenance::Cache {
                    self.unsaved.lock().unwrap().push(key.clone());
                }
                Ok(())
            }
        }
    }

    /// All entries in key order.
    pub fn sorted_entries(&self) -> Vec<(CorrelatorKey, Rational)> {
        let mut v: Vec<_> = self
            .entries
            .read()
            .unwrap()
            .iter()
            .map(|(k, (r, _))| (k.clone(), r.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Reads `g|d|b|num/den` lines; blank lines and `#` comments are skipped.
    /// Returns the number of records read.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let reader = BufReader::new(File::open(path)?);
        let mut count = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: i + 1, message };
            let (key, value) = line
                .rsplit_once('|')
                .ok_or_else(|| parse_err("expected g|d|b|value".into()))?;
            let key: CorrelatorKey = key.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            let value = parse_rational(value).map_err(|e| parse_err(e.to_string()))?;
            self.record(&key, &value, Provenance::Cache)?;
            count += 1;
        }
        Ok(count)
    }

    /// Loads `path` if it exists.
    pub fn load_if_present(&self, path: &Path) -> Result<usize> {
        if path.exists() {
            self.load(path)
        } else {
            Ok(0)
        }
    }

    /// Writes every entry, sorted, replacing the file.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            for (k, v) in self.sorted_entries() {
                writeln!(w, "{k}|{}", format_fraction(&v))?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        self.unsaved.lock().unwrap().clear();
        Ok(())
    }

    /// Appends entries computed since the last load or save, in key order.
    pub fn append_new(&self, path: &Path) -> Result<usize> {
        let mut keys = std::mem::take(&mut *self.unsaved.lock().unwrap());
        keys.sort();
        keys.dedup();
        let mut w = BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
        for k in &keys {
            let v = self.get(k).unwrap_or_else(Rational::zero);
            writeln!(w, "{k}|{}", format_fraction(&v))?;
        }
        w.flush()?;
        Ok(keys.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn key_canonical_and_round_trip() {
        let k = CorrelatorKey::new(2, &[1, 3, 0], "1:2".parse().unwrap());
        assert_eq!(k.psi(), &[3, 1, 0]);
        assert_eq!(k.to_string(), "2|3,1,0|1:2");
        assert_eq!("2|3,1,0|1:2".parse::<CorrelatorKey>().unwrap(), k);
        let empty: CorrelatorKey = "2||1:3".parse().unwrap();
        assert_eq!(empty.points(), 0);
        assert!(empty.is_admissible());
        assert!(!CorrelatorKey::psi_only(0, &[0, 0]).is_admissible());
        assert!(CorrelatorKey::psi_only(1, &[1]).is_admissible());
    }

    #[test]
    fn write_once() {
        let t = CorrelatorTable::new();
        let k = CorrelatorKey::psi_only(1, &[1]);
        t.record(&k, &rat(1, 24), Provenance::Recursion).unwrap();
        t.record(&k, &rat(1, 24), Provenance::NPoint).unwrap();
        let err = t.record(&k, &rat(1, 12), Provenance::NPoint).unwrap_err();
        assert!(matches!(err, Error::Disagreement { .. }));
        assert_eq!(t.get(&k), Some(rat(1, 24)));
        assert_eq!(t.provenance(&k), Some(Provenance::Recursion));
    }

    #[test]
    fn load_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        fs::write(&p, "# header\n1|1||1/24\n\n0|0,0,0||1\n1|1|x|1/2\n").unwrap();
        let t = CorrelatorTable::new();
        let err = t.load(&p).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
        assert_eq!(t.get(&CorrelatorKey::psi_only(0, &[0, 0, 0])), Some(rat(1, 1)));
    }
}
