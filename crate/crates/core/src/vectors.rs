//! Finitely supported rational vectors and block sequences.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::{fmt_q, parse_nat, parse_q, Nat, Q};

/// Closed interval `[lo, hi]` of naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Nat,
    pub hi: Nat,
}

impl Interval {
    pub fn new(lo: Nat, hi: Nat) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, i: &Nat) -> bool {
        &self.lo <= i && i <= &self.hi
    }

    pub fn meets(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = parse_nat(&lo).map_err(serde::de::Error::custom)?;
        let hi = parse_nat(&hi).map_err(serde::de::Error::custom)?;
        Ok(Interval { lo, hi })
    }
}

/// A vector in c00 with rational coefficients, indexed from 1.
///
/// Zero coefficients are never stored, so the key set is the support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalVector {
    entries: BTreeMap<Nat, Q>,
}

impl RationalVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(k: Nat) -> Self {
        let mut v = Self::new();
        v.set(k, Q::from_integer(1.into()));
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (Nat, Q)>>(it: I) -> Result<Self> {
        let mut v = Self::new();
        for (i, c) in it {
            if i.is_zero() {
                return Err(Error::malformed("indices start at 1"));
            }
            if v.entries.contains_key(&i) {
                return Err(Error::malformed(format!("duplicate index {i}")));
            }
            v.set(i, c);
        }
        Ok(v)
    }

    pub fn from_u64(pairs: &[(u64, Q)]) -> Self {
        Self::from_entries(pairs.iter().map(|(i, c)| (Nat::from(*i), c.clone())))
            .expect("indices are positive and distinct")
    }

    pub fn set(&mut self, i: Nat, c: Q) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn get(&self, i: &Nat) -> Q {
        self.entries.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Nat, &Q)> + ExactSizeIterator {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<Nat> {
        self.entries.keys().cloned().collect()
    }

    pub fn min_supp(&self) -> Option<&Nat> {
        self.entries.keys().next()
    }

    pub fn max_supp(&self) -> Option<&Nat> {
        self.entries.keys().next_back()
    }

    /// `ran v`, the smallest interval containing the support.
    pub fn range(&self) -> Option<Interval> {
        Some(Interval::new(self.min_supp()?.clone(), self.max_supp()?.clone()))
    }

    pub fn restrict(&self, iv: &Interval) -> Self {
        RationalVector {
            entries: self
                .entries
                .range(iv.lo.clone()..=iv.hi.clone())
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn restrict_to<F: Fn(&Nat) -> bool>(&self, keep: F) -> Self {
        RationalVector {
            entries: self.entries.iter().filter(|(i, _)| keep(i)).map(|(i, c)| (i.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            let s = out.get(i) + c;
            out.set(i.clone(), s);
        }
        out
    }

    pub fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::new();
        }
        RationalVector { entries: self.entries.iter().map(|(i, c)| (i.clone(), c * a)).collect() }
    }

    pub fn neg(&self) -> Self {
        RationalVector { entries: self.entries.iter().map(|(i, c)| (i.clone(), -c)).collect() }
    }

    pub fn abs(&self) -> Self {
        RationalVector { entries: self.entries.iter().map(|(i, c)| (i.clone(), c.abs())).collect() }
    }

    pub fn linf(&self) -> Q {
        self.entries.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn l1(&self) -> Q {
        self.entries.values().fold(Q::zero(), |a, c| a + c.abs())
    }

    /// Pairing with another vector, used for functionals given by coefficients.
    pub fn dot(&self, other: &Self) -> Q {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.entries.iter().fold(Q::zero(), |a, (i, c)| match big.entries.get(i) {
            Some(d) => a + c * d,
            None => a,
        })
    }

    /// True when `max supp self < min supp other` (either side empty counts as true).
    pub fn precedes(&self, other: &Self) -> bool {
        match (self.max_supp(), other.min_supp()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("vector serializes")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            entries: Vec<[String; 2]>,
        }
        Wire { entries: self.entries.iter().map(|(i, c)| [i.to_string(), fmt_q(c)]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            entries: Vec<(String, String)>,
        }
        let w = Wire::deserialize(d)?;
        let mut pairs = Vec::with_capacity(w.entries.len());
        for (i, c) in &w.entries {
            let i = parse_nat(i).map_err(serde::de::Error::custom)?;
            let c = parse_q(c).map_err(serde::de::Error::custom)?;
            pairs.push((i, c));
        }
        RationalVector::from_entries(pairs).map_err(serde::de::Error::custom)
    }
}

/// Checks that every block is nonempty and `max supp v_i < min supp v_{i+1}`.
pub fn validate_block_sequence(blocks: &[RationalVector]) -> Result<()> {
    if blocks.iter().any(RationalVector::is_empty) {
        return Err(Error::EmptyVector);
    }
    for (i, w) in blocks.windows(2).enumerate() {
        if !w[0].precedes(&w[1]) {
            return Err(Error::NotSuccessive { index: i });
        }
    }
    Ok(())
}

/// A validated block sequence with its two position maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSequence {
    blocks: Vec<RationalVector>,
}

impl BlockSequence {
    pub fn new(blocks: Vec<RationalVector>) -> Result<Self> {
        validate_block_sequence(&blocks)?;
        Ok(BlockSequence { blocks })
    }

    pub fn blocks(&self) -> &[RationalVector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `phi(k) = max supp x_k` (k counted from 0).
    pub fn phi(&self, k: usize) -> Nat {
        self.blocks[k].max_supp().expect("blocks are nonempty").clone()
    }

    /// `psi(k) = min supp x_k` (k counted from 0).
    pub fn psi(&self, k: usize) -> Nat {
        self.blocks[k].min_supp().expect("blocks are nonempty").clone()
    }

    pub fn ranges(&self) -> Vec<Interval> {
        self.blocks.iter().map(|b| b.range().expect("blocks are nonempty")).collect()
    }

    /// `sum_k c_k x_k`.
    pub fn combine(&self, coeffs: &[Q]) -> RationalVector {
        let mut out = RationalVector::new();
        for (b, c) in self.blocks.iter().zip(coeffs) {
            for (i, x) in b.iter() {
                out.set(i.clone(), x * c);
            }
        }
        out
    }

    /// `sum_k c_k e_{phi(k)}`.
    pub fn phi_vector(&self, coeffs: &[Q]) -> RationalVector {
        let mut out = RationalVector::new();
        for (k, c) in coeffs.iter().enumerate().take(self.len()) {
            out.set(self.phi(k), c.clone());
        }
        out
    }

    /// `sum_k c_k e_{psi(k)}`.
    pub fn psi_vector(&self, coeffs: &[Q]) -> RationalVector {
        let mut out = RationalVector::new();
        for (k, c) in coeffs.iter().enumerate().take(self.len()) {
            out.set(self.psi(k), c.clone());
        }
        out
    }
}

impl Serialize for BlockSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<RationalVector>::deserialize(d)?;
        BlockSequence::new(blocks).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q, qi};

    #[test]
    fn json_round_trip_and_canonical_form() {
        let v = RationalVector::from_u64(&[(3, q(-1, 2)), (1, qi(2))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"entries":[["1","2"],["3","-1/2"]]}"#);
        let back: RationalVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn zero_index_and_duplicates_are_rejected() {
        assert!(serde_json::from_str::<RationalVector>(r#"{"entries":[["0","1"]]}"#).is_err());
        assert!(serde_json::from_str::<RationalVector>(r#"{"entries":[["2","1"],["2","3"]]}"#).is_err());
    }

    #[test]
    fn zero_coefficients_leave_the_support() {
        let v = RationalVector::from_u64(&[(2, qi(0)), (5, qi(1))]);
        assert_eq!(v.support(), vec![nat(5)]);
        let w = v.add(&RationalVector::from_u64(&[(5, qi(-1))]));
        assert!(w.is_empty());
    }

    #[test]
    fn restriction_and_norms() {
        let v = RationalVector::from_u64(&[(1, qi(1)), (4, qi(-3)), (9, q(1, 2))]);
        let r = v.restrict(&Interval::new(nat(2), nat(9)));
        assert_eq!(r.support(), vec![nat(4), nat(9)]);
        assert_eq!(v.linf(), qi(3));
        assert_eq!(v.l1(), q(9, 2));
    }

    #[test]
    fn block_sequence_reports_first_overlap() {
        let a = RationalVector::from_u64(&[(1, qi(1)), (3, qi(1))]);
        let b = RationalVector::from_u64(&[(4, qi(1))]);
        let c = RationalVector::from_u64(&[(4, qi(2))]);
        assert!(validate_block_sequence(&[a.clone(), b.clone()]).is_ok());
        assert_eq!(validate_block_sequence(&[a, b, c]), Err(Error::NotSuccessive { index: 1 }));
        assert_eq!(validate_block_sequence(&[RationalVector::new()]), Err(Error::EmptyVector));
    }

    #[test]
    fn phi_and_psi_positions() {
        let bs = BlockSequence::new(vec![
            RationalVector::from_u64(&[(2, qi(1)), (5, qi(1))]),
            RationalVector::from_u64(&[(7, qi(1))]),
        ])
        .unwrap();
        assert_eq!((bs.psi(0), bs.phi(0), bs.psi(1), bs.phi(1)), (nat(2), nat(5), nat(7), nat(7)));
        let pv = bs.phi_vector(&[q(1, 2), q(1, 2)]);
        assert_eq!(pv.support(), vec![nat(5), nat(7)]);
    }
}
