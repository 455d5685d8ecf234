//! The two parameter regimes: faithful constants and the scaled desk regime.

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{pow2, Nat, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Faithful,
    #[default]
    Scaled,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "faithful" => Ok(Mode::Faithful),
            "scaled" => Ok(Mode::Scaled),
            _ => Err(Error::malformed(format!("unknown mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Faithful => "faithful",
            Mode::Scaled => "scaled",
        })
    }
}

/// Elements of `L` whose bit length exceeds this are never materialised.
const MAX_L_BITS: u64 = 1 << 24;

/// Weight set `L = L_1 ∪ L_2`, the growth map standing in for `(a, b) ↦ 2^a · b`,
/// and the checks on the chosen constants.
///
/// Faithful: `ℓ_1 = 11`, `ℓ_{k+1} = 2^{2ℓ_k} + 1`, odd-numbered elements in
/// `L_1`, even-numbered in `L_2`, growth `2^a · b`.
///
/// Scaled: `L` = even numbers from 4, `L_1 = {4, 8, 12, ...}`,
/// `L_2 = {6, 10, 14, ...}`, growth `a + b + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct SpaceConfig {
    pub mode: Mode,
}

impl SpaceConfig {
    pub fn new(mode: Mode) -> Self {
        SpaceConfig { mode }
    }

    pub fn scaled() -> Self {
        Self::new(Mode::Scaled)
    }

    pub fn faithful() -> Self {
        Self::new(Mode::Faithful)
    }

    /// `ℓ_k` for `k >= 1`, when it fits in memory.
    pub fn faithful_element(k: usize) -> Result<Nat> {
        let mut l = Nat::from(11u32);
        for _ in 1..k {
            let e = l.to_u64().filter(|e| 2 * e < MAX_L_BITS).ok_or_else(|| {
                Error::infeasible("weight set element", format!("ℓ_{k} has more than 2^{} bits", l.bits()))
            })?;
            l = pow2(2 * e) + Nat::one();
        }
        Ok(l)
    }

    /// Position `k` (1-based) of `w` in `L`, if `w ∈ L`.
    pub fn l_position(&self, w: &Nat) -> Option<usize> {
        match self.mode {
            Mode::Scaled => {
                let v = w.to_u64()?;
                (v >= 4 && v % 2 == 0).then(|| (v / 2 - 1) as usize)
            }
            Mode::Faithful => {
                let mut l = Nat::from(11u32);
                let mut k = 1;
                loop {
                    if &l == w {
                        return Some(k);
                    }
                    if &l > w {
                        return None;
                    }
                    // ℓ_{k+1} has 2ℓ_k + 1 bits
                    let e = l.to_u64()?;
                    if w.bits() < 2 * e + 1 {
                        return None;
                    }
                    l = pow2(2 * e) + Nat::one();
                    k += 1;
                }
            }
        }
    }

    pub fn in_l(&self, w: &Nat) -> bool {
        self.l_position(w).is_some()
    }

    pub fn in_l1(&self, w: &Nat) -> bool {
        match self.mode {
            Mode::Scaled => w.to_u64().is_some_and(|v| v >= 4 && v % 4 == 0),
            Mode::Faithful => self.l_position(w).is_some_and(|k| k % 2 == 1),
        }
    }

    pub fn in_l2(&self, w: &Nat) -> bool {
        match self.mode {
            Mode::Scaled => w.to_u64().is_some_and(|v| v >= 6 && v % 4 == 2),
            Mode::Faithful => self.l_position(w).is_some_and(|k| k % 2 == 0),
        }
    }

    fn next_in(&self, bound: &Nat, second: bool) -> Result<Nat> {
        match self.mode {
            Mode::Scaled => {
                let r: u32 = if second { 2 } else { 0 };
                let base = if second { Nat::from(6u32) } else { Nat::from(4u32) };
                if bound < &base {
                    return Ok(base);
                }
                // smallest w > bound with w ≡ r (mod 4)
                let m = bound + 1u32;
                let rem = (&m % 4u32).to_u32().unwrap_or(0);
                let add = (r + 4 - rem) % 4;
                Ok(m + add)
            }
            Mode::Faithful => {
                let mut k = if second { 2 } else { 1 };
                loop {
                    let l = Self::faithful_element(k)?;
                    if &l > bound {
                        return Ok(l);
                    }
                    k += 2;
                }
            }
        }
    }

    /// Smallest element of `L_1` above `bound`.
    pub fn l1_above(&self, bound: &Nat) -> Result<Nat> {
        self.next_in(bound, false)
    }

    /// Smallest element of `L_2` above `bound`.
    pub fn l2_above(&self, bound: &Nat) -> Result<Nat> {
        self.next_in(bound, true)
    }

    /// The growth map: `2^a · b` (faithful) or `a + b + 1` (scaled).
    pub fn growth(&self, a: &Nat, b: &Nat) -> Result<Nat> {
        match self.mode {
            Mode::Scaled => Ok(a + b + 1u32),
            Mode::Faithful => {
                let e = a.to_u64().filter(|e| *e < MAX_L_BITS).ok_or_else(|| {
                    Error::infeasible("growth bound", format!("2^{a} does not fit in memory"))
                })?;
                Ok(pow2(e) * b)
            }
        }
    }

    /// Lower bound `s(f_j) > vfg_bound(max supp f_{j-1})` for very fast growing sequences.
    pub fn vfg_bound(&self, prev_max_supp: &Nat) -> Result<Nat> {
        self.growth(prev_max_supp, &Nat::one())
    }

    /// Lower bound for `σ`: `σ(...) > growth(n_m, max supp f_m)`.
    pub fn sigma_bound(&self, last_weight: &Nat, last_max_supp: &Nat) -> Result<Nat> {
        self.growth(last_weight, last_max_supp)
    }

    /// `Σ_{ℓ∈L} 2^{-ℓ} < 1/1000`, with the tail bounded by twice its first term.
    pub fn check_weight_sum(&self) -> ConstantCheck {
        match self.mode {
            Mode::Faithful => {
                // ℓ_{k+1} > ℓ_k + 1, so Σ_{k≥2} 2^{-ℓ_k} ≤ 2^{1-ℓ_2}.
                let l2 = Self::faithful_element(2).expect("ℓ_2 fits");
                let e2 = l2.to_u64().expect("small");
                let head = Q::new(1.into(), (Nat::one() << 11usize).into());
                let tail = Q::new(1.into(), (Nat::one() << (e2 - 1)).into());
                let holds = head + tail < Q::new(1.into(), 1000.into());
                ConstantCheck { name: "weight-sum-below-1/1000".into(), holds, note: "2^-11 + 2^(1-ℓ_2) < 1/1000".into() }
            }
            Mode::Scaled => ConstantCheck {
                name: "weight-sum-below-1/1000".into(),
                holds: false,
                note: "Σ_{ℓ≥4 even} 2^-ℓ = 1/12; void in scaled mode".into(),
            },
        }
    }

    /// `#(L ∩ [n, 2^{2n}]) <= 1` for every `n`.
    ///
    /// Faithful: follows from `ℓ_{k+1} > 2^{2ℓ_k}`, checked on the elements
    /// that fit in memory plus a direct scan of small `n`.
    pub fn check_sparse_weights(&self) -> ConstantCheck {
        let name = "at-most-one-weight-in-[n,4^n]".to_string();
        match self.mode {
            Mode::Faithful => {
                let mut holds = true;
                for k in 1..=2 {
                    let a = Self::faithful_element(k).expect("fits");
                    let b = Self::faithful_element(k + 1).expect("fits");
                    let e = a.to_u64().expect("small");
                    holds &= b > pow2(2 * e);
                }
                let first: Vec<Nat> = (1..=3).filter_map(|k| Self::faithful_element(k).ok()).collect();
                for n in 1u64..=40 {
                    let lo = Nat::from(n);
                    let hi = pow2(2 * n);
                    let count = first.iter().filter(|l| *l >= &lo && *l <= &hi).count();
                    holds &= count <= 1;
                }
                ConstantCheck { name, holds, note: "ℓ_{k+1} > 2^{2ℓ_k} for k ≤ 2; scan n ≤ 40".into() }
            }
            Mode::Scaled => ConstantCheck { name, holds: false, note: "4 and 6 lie in [2, 16]; void in scaled mode".into() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantCheck {
    pub name: String,
    pub holds: bool,
    pub note: String,
}

/// `x ∈ ℕ` at least one: convenience for weights that must be positive.
pub fn positive(w: &Nat) -> bool {
    !w.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::nat;

    #[test]
    fn scaled_weight_sets() {
        let c = SpaceConfig::scaled();
        assert!(c.in_l1(&nat(4)) && c.in_l1(&nat(8)) && !c.in_l1(&nat(6)));
        assert!(c.in_l2(&nat(6)) && c.in_l2(&nat(10)) && !c.in_l2(&nat(4)));
        assert!(!c.in_l(&nat(5)) && !c.in_l(&nat(2)));
        assert_eq!(c.l2_above(&nat(6)).unwrap(), nat(10));
        assert_eq!(c.l2_above(&nat(7)).unwrap(), nat(10));
        assert_eq!(c.l2_above(&nat(1)).unwrap(), nat(6));
        assert_eq!(c.l1_above(&nat(128)).unwrap(), nat(132));
        assert_eq!(c.growth(&nat(3), &nat(10)).unwrap(), nat(14));
    }

    #[test]
    fn faithful_weight_sets_and_constants() {
        let c = SpaceConfig::faithful();
        assert_eq!(SpaceConfig::faithful_element(1).unwrap(), nat(11));
        assert_eq!(SpaceConfig::faithful_element(2).unwrap(), nat((1 << 22) + 1));
        assert!(c.in_l1(&nat(11)) && c.in_l2(&nat((1 << 22) + 1)) && !c.in_l(&nat(12)));
        assert_eq!(c.l2_above(&nat(100)).unwrap(), nat((1 << 22) + 1));
        assert!(c.check_weight_sum().holds);
        assert!(c.check_sparse_weights().holds);
        assert_eq!(c.growth(&nat(3), &nat(10)).unwrap(), nat(80));
        assert!(SpaceConfig::faithful_element(4).is_err());
    }

    #[test]
    fn scaled_constant_checks_are_void() {
        let c = SpaceConfig::scaled();
        assert!(!c.check_weight_sum().holds);
        assert!(!c.check_sparse_weights().holds);
    }
}
