//! The basic inequality: a functional of `W` acting on a normalised block
//! sequence is dominated, block by block, by twice a functional of `W_|||`
//! acting on `{e_{φ(k)}}`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Sign, SpaceConfig, Term, Validator};
use crate::num::{qi, Nat, Q};
use crate::vectors::{BlockSequence, Interval, RationalVector};

use super::analysis::{expand, NodeKind};
use super::search::upper_bound;

/// Builds `g ∈ W_|||` with `2g(e_{φ(k)}) ≥ f(x_k)` for every block and
/// `supp g ⊆ {φ(k) : ran f ∩ ran x_k ≠ ∅}`, following the tree analysis of `f`.
///
/// Every block needs a certified upper bound `‖x_k‖ ≤ 1`. The result is
/// re-checked exactly before it is returned.
pub fn basic_inequality_witness(f: &FunctionalTerm, xs: &BlockSequence, config: SpaceConfig) -> Result<FunctionalTerm> {
    if f.grammar != Grammar::W {
        return Err(Error::malformed("the functional must be tagged as a member of W"));
    }
    if let Some(v) = Validator::new(config).validate(f).first() {
        return Err(Error::malformed(format!("functional violates {} at {}: {}", v.clause, v.path, v.detail)));
    }
    for (k, x) in xs.blocks().iter().enumerate() {
        let u = upper_bound(x)?;
        if u.value > Q::one() {
            return Err(Error::malformed(format!("block {k} has certified upper bound {}, need at most 1", u.value)));
        }
    }
    let ranges = xs.ranges();
    let phi: Vec<Nat> = (0..xs.len()).map(|k| xs.phi(k)).collect();
    let g = FunctionalTerm::new(Grammar::WTriple, build(&f.root, &ranges, &phi)?);
    postcheck(f, &g, xs, config).map_err(Error::ConstructionInvariantViolated)?;
    Ok(g)
}

fn build(t: &Term, ranges: &[Interval], phi: &[Nat]) -> Result<Term> {
    let Some(ran) = t.range() else { return Ok(Term::Zero) };
    let (kind, succ) = expand(t)?;
    Ok(match kind {
        NodeKind::Zero => Term::Zero,
        NodeKind::Type0 => match ranges.iter().position(|r| r.meets(&ran)) {
            Some(k) => Term::unit(phi[k].clone(), Sign::Plus),
            None => Term::Zero,
        },
        NodeKind::Convex => {
            let mut weights = Vec::with_capacity(succ.len() + 1);
            let mut children = Vec::with_capacity(succ.len() + 1);
            for (c, f) in &succ {
                weights.push(c.clone());
                children.push(build(f, ranges, phi)?);
            }
            let rest = Q::one() - weights.iter().sum::<Q>();
            if !rest.is_zero() {
                weights.push(rest);
                children.push(Term::Zero);
            }
            Term::Convex { weights, children }
        }
        _ => {
            let kids: Vec<(Interval, &Term)> = succ.iter().filter_map(|(_, f)| f.range().map(|r| (r, f))).collect();
            let mut g2 = Vec::new();
            let mut parts: Vec<BTreeSet<Nat>> = vec![BTreeSet::new(); kids.len()];
            for (k, r) in ranges.iter().enumerate() {
                if !r.meets(&ran) {
                    continue;
                }
                let hits: Vec<usize> = (0..kids.len()).filter(|&j| kids[j].0.meets(r)).collect();
                match hits.as_slice() {
                    [] => {}
                    [j] => {
                        parts[*j].insert(phi[k].clone());
                    }
                    _ => g2.push(Term::unit(phi[k].clone(), Sign::Plus)),
                }
            }
            let mut children = g2;
            for ((_, f), set) in kids.iter().zip(&parts) {
                if set.is_empty() {
                    continue;
                }
                let g = prune(build(f, ranges, phi)?, set);
                if g.min_supp().is_some() {
                    children.push(g);
                }
            }
            children.sort_by_key(|a| a.min_supp());
            Term::Half { children }
        }
    })
}

/// Restriction of a `W_|||` term to the coordinates in `set`.
fn prune(t: Term, set: &BTreeSet<Nat>) -> Term {
    match t {
        Term::Unit { ref index, .. } if set.contains(index) => t,
        Term::Unit { .. } | Term::Zero => Term::Zero,
        Term::Half { children } => Term::Half {
            children: children.into_iter().map(|c| prune(c, set)).filter(|c| c.min_supp().is_some()).collect(),
        },
        Term::Convex { weights, children } => Term::Convex { weights, children: children.into_iter().map(|c| prune(c, set)).collect() },
        other => other,
    }
}

/// Exact re-check of the three properties the construction promises.
pub fn postcheck(f: &FunctionalTerm, g: &FunctionalTerm, xs: &BlockSequence, config: SpaceConfig) -> std::result::Result<(), String> {
    if g.grammar != Grammar::WTriple {
        return Err("witness is not tagged as a member of W_|||".into());
    }
    if let Some(v) = Validator::new(config).validate(g).first() {
        return Err(format!("witness violates {} at {}: {}", v.clause, v.path, v.detail));
    }
    let allowed: BTreeSet<Nat> = match f.root.range() {
        Some(ran) => (0..xs.len()).filter(|&k| xs.ranges()[k].meets(&ran)).map(|k| xs.phi(k)).collect(),
        None => BTreeSet::new(),
    };
    if let Some(i) = g.root.support().into_iter().find(|i| !allowed.contains(i)) {
        return Err(format!("witness uses e*_{i}, outside the blocks met by f"));
    }
    for (k, x) in xs.blocks().iter().enumerate() {
        let lhs = qi(2) * g.eval(&RationalVector::unit(xs.phi(k)));
        let rhs = f.eval(x);
        if lhs < rhs {
            return Err(format!("block {k}: 2g(e_φ) = {lhs} < f(x_k) = {rhs}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q};

    fn cfg() -> SpaceConfig {
        SpaceConfig::scaled()
    }

    fn blocks(spec: &[&[(u64, Q)]]) -> BlockSequence {
        BlockSequence::new(spec.iter().map(|b| RationalVector::from_u64(b)).collect()).unwrap()
    }

    #[test]
    fn a_leaf_meeting_one_block_maps_to_its_phi() {
        let xs = blocks(&[&[(2, q(1, 2)), (4, q(1, 2))], &[(6, qi(1))]]);
        let f = FunctionalTerm::new(Grammar::W, Term::unit_u64(3));
        let g = basic_inequality_witness(&f, &xs, cfg()).unwrap();
        assert_eq!(g.root, Term::unit_u64(4));
    }

    #[test]
    fn convex_combinations_carry_over() {
        let xs = blocks(&[&[(2, qi(1))], &[(5, qi(1))]]);
        let f = Term::Convex { weights: vec![q(1, 3), q(2, 3)], children: vec![Term::unit_u64(2), Term::unit_u64(5)] };
        let g = basic_inequality_witness(&FunctionalTerm::new(Grammar::W, f), &xs, cfg()).unwrap();
        assert_eq!(g.root, Term::Convex { weights: vec![q(1, 3), q(2, 3)], children: vec![Term::unit_u64(2), Term::unit_u64(5)] });
    }

    #[test]
    fn blocks_split_by_several_children_get_their_own_leaf() {
        // e*_3 and the size-6 average both meet the block on [3, 7]
        let xs = blocks(&[&[(3, q(1, 4)), (7, q(1, 4))], &[(9, q(1, 2))]]);
        let avg = Term::AlphaAverage { size: nat(6), children: (4..=9).step_by(5).map(Term::unit_u64).collect() };
        let f = Term::TypeIAlpha { weight: nat(1), children: vec![Term::AlphaAverage { size: nat(1), children: vec![Term::unit_u64(3)] }, avg] };
        let f = FunctionalTerm::new(Grammar::W, f);
        assert!(Validator::new(cfg()).is_valid(&f));
        let g = basic_inequality_witness(&f, &xs, cfg()).unwrap();
        assert!(g.root.support().contains(&nat(7)));
    }

    #[test]
    fn blocks_above_norm_one_are_refused() {
        let xs = blocks(&[&[(2, qi(2))]]);
        let f = FunctionalTerm::new(Grammar::W, Term::unit_u64(2));
        assert_eq!(basic_inequality_witness(&f, &xs, cfg()).unwrap_err().code(), "malformed-input");
    }
}
