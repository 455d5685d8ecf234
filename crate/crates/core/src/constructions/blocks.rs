//! `c_0`-style blocks `y_k = Σ_{i∈F_k} e_i` with very fast growing sizes.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{Mode, Sign, SpaceConfig, Term};
use crate::num::{nat, Nat};
use crate::vectors::{BlockSequence, RationalVector};

/// Largest number of points materialised for one block sequence.
pub const C0_POINT_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C0Blocks {
    pub mode: Mode,
    pub blocks: BlockSequence,
    /// `α_k`, the uniform average of `e*_i` over `F_k`.
    pub witnesses: Vec<Term>,
}

/// Blocks from `F_1 = {1}`.
pub fn build_c0_blocks(count: usize, config: SpaceConfig) -> Result<C0Blocks> {
    build_c0_blocks_from(&Nat::one(), count, config)
}

/// `F_1 = {start}`, then `#F_{k+1} > max(#F_k, g(max F_k, 1))` and
/// `min F_{k+1} = max(max F_k + 1, #F_{k+1})`.
pub fn build_c0_blocks_from(start: &Nat, count: usize, config: SpaceConfig) -> Result<C0Blocks> {
    if start < &Nat::one() {
        return Err(Error::malformed("blocks start at index 1 or later"));
    }
    let mut layout: Vec<(Nat, Nat)> = Vec::with_capacity(count);
    let mut total = Nat::one();
    for k in 0..count {
        let (lo, size) = match layout.last() {
            None => (start.clone(), Nat::one()),
            Some((lo, size)) => {
                let last = lo + size - 1u32;
                let size = size.clone().max(config.vfg_bound(&last)?) + 1u32;
                ((&last + 1u32).max(size.clone()), size)
            }
        };
        total += &size;
        if total > nat(C0_POINT_CAP) {
            return Err(Error::infeasible(
                "c0 blocks",
                format!("block {} alone has {size} points starting at {lo}; the cap is {C0_POINT_CAP} points", k + 1),
            ));
        }
        layout.push((lo, size));
    }
    let mut blocks = Vec::with_capacity(count);
    let mut witnesses = Vec::with_capacity(count);
    for (lo, size) in layout {
        let idx: Vec<Nat> = num_iter(&lo, &size);
        blocks.push(RationalVector::from_entries(idx.iter().map(|i| (i.clone(), crate::num::qi(1))))?);
        witnesses.push(Term::AlphaAverage { size, children: idx.into_iter().map(|i| Term::unit(i, Sign::Plus)).collect() });
    }
    Ok(C0Blocks { mode: config.mode, blocks: BlockSequence::new(blocks)?, witnesses })
}

fn num_iter(lo: &Nat, size: &Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut i = lo.clone();
    let end = lo + size;
    while i < end {
        out.push(i.clone());
        i += 1u32;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{FunctionalTerm, Grammar, Validator};
    use crate::num::qi;

    #[test]
    fn first_block_is_e1() {
        let b = build_c0_blocks(1, SpaceConfig::scaled()).unwrap();
        assert_eq!(b.blocks.blocks()[0], RationalVector::unit(nat(1)));
        assert_eq!(b.witnesses[0], Term::AlphaAverage { size: nat(1), children: vec![Term::unit_u64(1)] });
    }

    #[test]
    fn faithful_growth_is_exponential() {
        let b = build_c0_blocks(3, SpaceConfig::faithful()).unwrap();
        let r = b.blocks.ranges();
        assert_eq!((r[1].lo.clone(), r[1].hi.clone()), (nat(3), nat(5)));
        assert_eq!((r[2].lo.clone(), r[2].hi.clone()), (nat(33), nat(65)));
        assert_eq!(build_c0_blocks(4, SpaceConfig::faithful()).unwrap_err().code(), "infeasible-at-budget");
    }

    #[test]
    fn witnesses_norm_their_blocks_and_grow_very_fast() {
        let cfg = SpaceConfig::scaled();
        let b = build_c0_blocks(6, cfg).unwrap();
        for (y, a) in b.blocks.blocks().iter().zip(&b.witnesses) {
            assert_eq!(a.eval(y), qi(1));
            let s = a.average_size().unwrap();
            assert!(s <= y.min_supp().unwrap());
        }
        // {1} alone is a maximal Schreier set, so start from the second block
        let f = Term::TypeIAlpha { weight: nat(4), children: b.witnesses[1..3].to_vec() };
        assert!(Validator::new(cfg).is_valid(&FunctionalTerm::new(Grammar::W, f)));
    }
}
