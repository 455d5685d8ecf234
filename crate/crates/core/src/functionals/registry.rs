//! The injective weight coding `σ` on histories `((f_1, n_1), ..., (f_m, n_m))`.
//!
//! Weights are handed out from `L_2` in increasing order of first request,
//! each above `growth(n_m, max supp f_m)`. The registry is the whole state of
//! `σ`: saving and replaying it reproduces every weight bit for bit.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{Mode, SpaceConfig};
use super::term::Term;
use crate::error::{Error, Result};
use crate::num::{natstr, Nat};
use crate::vectors::RationalVector;

/// Environment variable naming the default registry file.
pub const SESSION_ENV: &str = "XISP_SESSION";

const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub hash: String,
    pub history: String,
    #[serde(with = "natstr")]
    pub weight: Nat,
}

#[derive(Serialize, Deserialize)]
struct HistoryItem<'a> {
    f: std::borrow::Cow<'a, RationalVector>,
    #[serde(with = "natstr")]
    w: Nat,
}

/// Canonical text of a history: compact JSON of `[{"f": coefficients, "w": weight}, ...]`.
pub fn canonical_history(history: &[(RationalVector, Nat)]) -> String {
    let items: Vec<HistoryItem> = history
        .iter()
        .map(|(f, w)| HistoryItem { f: std::borrow::Cow::Borrowed(f), w: w.clone() })
        .collect();
    serde_json::to_string(&items).expect("history serializes")
}

pub fn history_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RegistryFile {
    version: u32,
    mode: Mode,
    entries: Vec<RegistryEntry>,
    #[serde(default)]
    terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRegistry {
    config: SpaceConfig,
    entries: Vec<RegistryEntry>,
    by_hash: HashMap<String, usize>,
    /// Known terms keyed by the canonical text of their coefficient vectors.
    terms: BTreeMap<String, Term>,
}

impl SigmaRegistry {
    pub fn new(config: SpaceConfig) -> Self {
        SigmaRegistry { config, entries: Vec::new(), by_hash: HashMap::new(), terms: BTreeMap::new() }
    }

    pub fn config(&self) -> SpaceConfig {
        self.config
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, history: &[(RationalVector, Nat)]) -> Option<&Nat> {
        let h = history_hash(&canonical_history(history));
        self.by_hash.get(&h).map(|&i| &self.entries[i].weight)
    }

    /// `σ(history)`: the stored weight, or a fresh one.
    pub fn assign(&mut self, history: &[(RationalVector, Nat)]) -> Result<Nat> {
        let (last_f, last_w) = history.last().ok_or_else(|| Error::malformed("empty history"))?;
        let canonical = canonical_history(history);
        let hash = history_hash(&canonical);
        if let Some(&i) = self.by_hash.get(&hash) {
            return Ok(self.entries[i].weight.clone());
        }
        let max_supp = last_f.max_supp().cloned().unwrap_or_default();
        let mut bound = self.config.sigma_bound(last_w, &max_supp)?;
        if let Some(prev) = self.entries.last() {
            bound = bound.max(prev.weight.clone());
        }
        let weight = self.config.l2_above(&bound)?;
        self.by_hash.insert(hash.clone(), self.entries.len());
        self.entries.push(RegistryEntry { hash, history: canonical, weight: weight.clone() });
        Ok(weight)
    }

    /// Remembers a term so that searches can rebuild functionals from histories.
    pub fn remember_term(&mut self, t: &Term) {
        let key = serde_json::to_string(&t.coefficients()).expect("vector serializes");
        self.terms.entry(key).or_insert_with(|| t.clone());
    }

    pub fn term_for(&self, f: &RationalVector) -> Option<&Term> {
        self.terms.get(&serde_json::to_string(f).expect("vector serializes"))
    }

    /// Parses stored histories back into `(f, n)` lists, in assignment order.
    pub fn histories(&self) -> Vec<(Vec<(RationalVector, Nat)>, Nat)> {
        self.entries
            .iter()
            .map(|e| {
                let items: Vec<HistoryItem> = serde_json::from_str(&e.history).expect("stored history parses");
                (items.into_iter().map(|i| (i.f.into_owned(), i.w)).collect(), e.weight.clone())
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = RegistryFile {
            version: FORMAT_VERSION,
            mode: self.config.mode,
            entries: self.entries.clone(),
            terms: self.terms.values().cloned().collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("registry serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: RegistryFile = serde_json::from_str(s)?;
        if file.version != FORMAT_VERSION {
            return Err(Error::malformed(format!("unsupported registry version {}", file.version)));
        }
        let mut r = SigmaRegistry::new(SpaceConfig::new(file.mode));
        for e in file.entries {
            if history_hash(&e.history) != e.hash {
                return Err(Error::malformed(format!("registry hash mismatch for entry {}", r.len())));
            }
            if !r.config.in_l2(&e.weight) {
                return Err(Error::malformed(format!("registry weight {} is not in L_2", e.weight)));
            }
            if r.entries.last().is_some_and(|p| p.weight >= e.weight) {
                return Err(Error::malformed("registry weights must increase"));
            }
            r.by_hash.insert(e.hash.clone(), r.entries.len());
            r.entries.push(e);
        }
        for t in file.terms {
            r.remember_term(&t);
        }
        Ok(r)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Loads `path`, or starts empty when it does not exist.
    pub fn open(path: &Path, config: SpaceConfig) -> Result<Self> {
        if path.exists() {
            let r = Self::from_json(&std::fs::read_to_string(path)?)?;
            if r.config != config {
                return Err(Error::malformed(format!("session {} was created in {} mode", path.display(), r.config.mode)));
            }
            Ok(r)
        } else {
            Ok(Self::new(config))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, qi};

    fn hist(ws: &[(u64, u64)]) -> Vec<(RationalVector, Nat)> {
        ws.iter().map(|&(i, w)| (RationalVector::from_u64(&[(i, qi(1))]), nat(w))).collect()
    }

    #[test]
    fn deterministic_injective_and_growing() {
        let mut r = SigmaRegistry::new(SpaceConfig::scaled());
        let a = r.assign(&hist(&[(3, 4)])).unwrap();
        let b = r.assign(&hist(&[(5, 4)])).unwrap();
        assert_eq!(r.assign(&hist(&[(3, 4)])).unwrap(), a);
        assert_ne!(a, b);
        // above 4 + 3 + 1
        assert_eq!(a, nat(10));
        assert!(b > a && SpaceConfig::scaled().in_l2(&b));
        let c = r.assign(&hist(&[(3, 4), (40, 10)])).unwrap();
        assert!(c > nat(10 + 40 + 1));
    }

    #[test]
    fn save_and_replay_are_bit_exact() {
        let mut r = SigmaRegistry::new(SpaceConfig::scaled());
        for k in 1..6 {
            r.assign(&hist(&[(k, 4), (k + 10, 10)])).unwrap();
        }
        let text = r.to_json();
        let back = SigmaRegistry::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let mut replay = SigmaRegistry::new(SpaceConfig::scaled());
        for k in 1..6 {
            replay.assign(&hist(&[(k, 4), (k + 10, 10)])).unwrap();
        }
        assert_eq!(replay.to_json(), text);
    }

    #[test]
    fn tampered_files_are_rejected() {
        let mut r = SigmaRegistry::new(SpaceConfig::scaled());
        r.assign(&hist(&[(3, 4)])).unwrap();
        let text = r.to_json().replace("\"10\"", "\"14\"");
        assert!(SigmaRegistry::from_json(&text).is_ok());
        let text = r.to_json().replace("\\\"w\\\":\\\"4\\\"", "\\\"w\\\":\\\"8\\\"");
        assert_eq!(SigmaRegistry::from_json(&text).unwrap_err().code(), "malformed-input");
    }

    #[test]
    fn faithful_weights_come_from_the_faithful_set() {
        let mut r = SigmaRegistry::new(SpaceConfig::faithful());
        let w = r.assign(&hist(&[(3, 11)])).unwrap();
        assert_eq!(w, nat((1 << 22) + 1));
    }
}
