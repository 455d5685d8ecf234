//! Diagnostic searches for the α- and β-index of a block sequence.
//!
//! Both report the best `Σ_q |avg_q(x_k)|` found over one block `x_k` and a
//! very fast growing, `S_n`-admissible family of averages. They are lower
//! bounds at a budget, never a decision about the asymptotic index.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functionals::{dual_norm_score, AverageKind, FunctionalTerm, Grammar, SigmaRegistry, Sign, SpaceConfig, Term, Validator};
use crate::normsearch::{alpha_family_search, Budget};
use crate::num::{nat, qstr, Q};
use crate::vectors::{BlockSequence, Interval, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWitness {
    pub kind: AverageKind,
    #[serde(with = "qstr")]
    pub score: Q,
    /// Block the family acts on; `None` when nothing positive was found.
    pub block: Option<usize>,
    pub family: Vec<Term>,
}

impl IndexWitness {
    fn empty(kind: AverageKind) -> Self {
        IndexWitness { kind, score: Q::zero(), block: None, family: Vec::new() }
    }

    /// Recomputes the score from the family.
    pub fn evaluate(&self, xs: &BlockSequence) -> Q {
        match self.block {
            Some(k) => self.family.iter().map(|a| a.eval(&xs.blocks()[k]).abs()).sum(),
            None => Q::zero(),
        }
    }
}

/// The family as averages of a type I functional of weight `max(n, 1)`, so
/// the validator checks growth and admissibility.
fn family_is_legal(family: &[Term], n: u32, config: SpaceConfig, registry: Option<&SigmaRegistry>) -> bool {
    if family.is_empty() {
        return true;
    }
    if n == 0 && family.len() > 1 {
        return false;
    }
    let wrapper = match family[0] {
        Term::BetaAverage { .. } => Term::TypeIBeta { weight: nat(n.max(1) as u64), children: family.to_vec() },
        _ => Term::TypeIAlpha { weight: nat(n.max(1) as u64), children: family.to_vec() },
    };
    let v = match registry {
        Some(r) => Validator::new(config).with_registry(r),
        None => Validator::new(config),
    };
    v.is_valid(&FunctionalTerm::new(Grammar::W, wrapper))
}

fn consider(best: &mut IndexWitness, k: usize, family: Vec<Term>, x: &RationalVector) {
    let score: Q = family.iter().map(|a| a.eval(x).abs()).sum();
    if score > best.score {
        *best = IndexWitness { kind: best.kind, score, block: Some(k), family };
    }
}

/// Best α-average family found on any single block.
///
/// Candidates per block: the weight-one type I search, the uniform signed
/// average over the support, and top-`j` signed averages for `j` up to the budget.
pub fn alpha_index_witness(xs: &BlockSequence, n: u32, budget: Budget, config: SpaceConfig) -> Result<IndexWitness> {
    let mut best = IndexWitness::empty(AverageKind::Alpha);
    for (k, x) in xs.blocks().iter().enumerate() {
        let mut candidates: Vec<Vec<Term>> = Vec::new();
        if let Some((_, family)) = alpha_family_search(x, budget, config) {
            if n == 0 {
                if let Some(top) = family.iter().max_by(|a, b| a.eval(x).abs().cmp(&b.eval(x).abs())) {
                    candidates.push(vec![top.clone()]);
                }
            } else {
                candidates.push(family);
            }
        }
        let uniform: Vec<Term> = x.iter().map(|(i, c)| Term::unit(i.clone(), Sign::of(c))).collect();
        if !uniform.is_empty() {
            candidates.push(vec![Term::AlphaAverage { size: nat(uniform.len() as u64), children: uniform }]);
        }
        let mut j = 1usize;
        while j <= budget.sizes.min(x.len()) {
            candidates.push(vec![dual_norm_score(x, &nat(j as u64), AverageKind::Alpha, config, budget.sizes)?.witness.root]);
            j *= 2;
        }
        for family in candidates {
            if family_is_legal(&family, n, config, None) {
                consider(&mut best, k, family, x);
            }
        }
    }
    Ok(best)
}

/// Best β-average found on any single block, built from restrictions of the
/// registry's special sequences and from one-member special sequences.
pub fn beta_index_witness(xs: &BlockSequence, n: u32, budget: Budget, config: SpaceConfig, registry: &SigmaRegistry) -> Result<IndexWitness> {
    let mut best = IndexWitness::empty(AverageKind::Beta);
    let sequences: Vec<(Vec<Term>, Vec<crate::num::Nat>)> = registry
        .histories()
        .into_iter()
        .filter_map(|(history, _)| {
            let terms: Option<Vec<Term>> = history.iter().map(|(f, _)| registry.term_for(f).cloned()).collect();
            terms.map(|t| (t, history.into_iter().map(|(_, w)| w).collect()))
        })
        .collect();
    for (k, x) in xs.blocks().iter().enumerate() {
        let Some(ran) = x.range() else { continue };
        let mut candidates: Vec<Vec<Term>> = Vec::new();
        for (terms, weights) in &sequences {
            let len = terms.len().min(budget.children);
            for a in 0..len {
                for b in a..len {
                    let g = Term::TypeII { children: terms[a..=b].to_vec(), weights: weights[a..=b].to_vec() };
                    let value = g.eval(x);
                    if value.is_zero() {
                        continue;
                    }
                    let g = if value.is_negative() { g.negate() } else { g };
                    let g = g.restrict(Interval::new(ran.lo.clone(), ran.hi.clone()));
                    candidates.push(vec![Term::BetaAverage { size: nat(1), children: vec![g] }]);
                }
            }
        }
        candidates.push(vec![dual_norm_score(x, &nat(1), AverageKind::Beta, config, budget.sizes)?.witness.root]);
        for family in candidates {
            if family_is_legal(&family, n, config, Some(registry)) {
                consider(&mut best, k, family, x);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::blocks::build_c0_blocks;
    use crate::constructions::dependent::build_dependent_sequence;
    use crate::constructions::pair::PairKind;
    use crate::num::qi;

    #[test]
    fn empty_sequences_score_zero() {
        let xs = BlockSequence::new(vec![]).unwrap();
        let cfg = SpaceConfig::scaled();
        assert!(alpha_index_witness(&xs, 2, Budget::default(), cfg).unwrap().score.is_zero());
        let reg = SigmaRegistry::new(cfg);
        assert!(beta_index_witness(&xs, 2, Budget::default(), cfg, &reg).unwrap().score.is_zero());
    }

    #[test]
    fn c0_blocks_score_at_least_one() {
        let cfg = SpaceConfig::scaled();
        let b = build_c0_blocks(5, cfg).unwrap();
        let w = alpha_index_witness(&b.blocks, 1, Budget::default(), cfg).unwrap();
        assert!(w.score >= qi(1));
        assert_eq!(w.evaluate(&b.blocks), w.score);
    }

    #[test]
    fn one_beta_average_scores_its_value() {
        let cfg = SpaceConfig::scaled();
        let mut reg = SigmaRegistry::new(cfg);
        let s = build_dependent_sequence(2, PairKind::One, cfg, &mut reg).unwrap();
        let xs = BlockSequence::new(vec![s.sum()]).unwrap();
        let w = beta_index_witness(&xs, 1, Budget::default(), cfg, &reg).unwrap();
        // the whole special sequence as a size-one β-average already gives (1/2)(1 + 1)
        assert!(w.score >= qi(1));
        assert_eq!(w.family.len(), 1);
        assert_eq!(w.evaluate(&xs), w.score);
    }
}
