//! Seeded random instances for the verification suites and property tests.
//!
//! The same seed always produces the same instances.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::functionals::{FunctionalTerm, Grammar, Sign, SpaceConfig, Term, Validator};
use crate::normsearch::upper_bound;
use crate::num::{nat, q, Nat, Q};
use crate::vectors::{BlockSequence, Interval, RationalVector};

pub struct Corpus {
    rng: ChaCha8Rng,
    config: SpaceConfig,
}

impl Corpus {
    pub fn new(seed: u64, config: SpaceConfig) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed), config }
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Nonzero rational `a/b` with `|a/b| ≤ bound` and `1 ≤ b ≤ den`.
    pub fn rational(&mut self, bound: i64, den: i64) -> Q {
        let b = self.rng.gen_range(1..=den);
        loop {
            let a = self.rng.gen_range(-bound * b..=bound * b);
            if a != 0 {
                return q(a, b);
            }
        }
    }

    /// Vector with `1..=max_support` entries on indices `1..=index_max`,
    /// coefficients nonzero in `[-bound, bound]`.
    pub fn vector(&mut self, max_support: usize, index_max: u64, bound: i64) -> RationalVector {
        let size = self.rng.gen_range(1..=max_support.min(index_max as usize));
        let idx = rand::seq::index::sample(&mut self.rng, index_max as usize, size);
        let mut v = RationalVector::new();
        for i in idx.iter() {
            let c = self.rational(bound, 4);
            v.set(nat(i as u64 + 1), c);
        }
        v
    }

    /// Nonnegative weights on `1..=max_support` indices below `index_max`.
    pub fn weights(&mut self, max_support: usize, index_max: u64) -> RationalVector {
        let v = self.vector(max_support, index_max, 3);
        v.abs()
    }

    /// A random subset, each point kept with probability one half.
    pub fn subset(&mut self, of: &[Nat]) -> Vec<Nat> {
        of.iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect()
    }

    /// A member of `W` with depth at most `depth`, supported in `[lo, hi]`.
    pub fn functional(&mut self, lo: u64, hi: u64, depth: usize) -> FunctionalTerm {
        let t = self.term(lo, hi, depth.max(1));
        let f = FunctionalTerm::new(Grammar::W, t);
        if Validator::new(self.config).is_valid(&f) {
            f
        } else {
            FunctionalTerm::new(Grammar::W, Term::unit(nat(lo.max(1)), Sign::Plus))
        }
    }

    fn sign(&mut self) -> Sign {
        if self.rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn term(&mut self, lo: u64, hi: u64, depth: usize) -> Term {
        let lo = lo.max(1);
        if depth < 2 || hi <= lo + 1 || self.rng.gen_bool(0.2) {
            let i = self.rng.gen_range(lo..=hi.max(lo));
            return Term::unit(nat(i), self.sign());
        }
        match self.rng.gen_range(0..4) {
            0 | 1 if depth >= 3 => self.type_i(lo, hi, depth),
            2 => {
                let r = q(self.rng.gen_range(1..8), 8);
                let a = self.term(lo, hi, depth - 1);
                let b = self.term(lo, hi, depth - 1);
                Term::Convex { weights: vec![r.clone(), Q::one() - r], children: vec![a, b] }
            }
            _ => {
                let a = self.rng.gen_range(lo..=hi);
                let b = self.rng.gen_range(a..=hi);
                let child = self.term(lo, hi, depth - 1);
                let sign = self.sign();
                Term::Restricted { interval: Interval::new(nat(a), nat(b)), sign, child: Box::new(child) }
            }
        }
    }

    /// Type I_α functional of weight 1 or 2 whose averages grow very fast
    /// and fit in `[lo, hi]`; averages are dropped until it is admissible.
    fn type_i(&mut self, lo: u64, hi: u64, depth: usize) -> Term {
        let weight = nat(self.rng.gen_range(1..=2));
        let mut averages = Vec::new();
        let mut pos = self.rng.gen_range(lo..=lo + (hi - lo) / 4);
        let mut size = Nat::from(self.rng.gen_range(1..=3u32));
        while pos <= hi && averages.len() < 4 {
            let s = crate::num::sat_usize(&size).min(6);
            let count = self.rng.gen_range(1..=s);
            let mut children = Vec::with_capacity(count);
            let mut last = pos;
            for _ in 0..count {
                if last > hi {
                    break;
                }
                let room = (hi - last).min(1);
                let i = last + self.rng.gen_range(0..=room);
                let child = if depth >= 5 && self.rng.gen_bool(0.3) {
                    Term::Restricted { interval: Interval::new(nat(i), nat(i)), sign: Sign::Plus, child: Box::new(Term::unit(nat(i), self.sign())) }
                } else {
                    Term::unit(nat(i), self.sign())
                };
                children.push(child);
                last = i + 1;
            }
            if children.is_empty() {
                break;
            }
            let max = nat(last - 1);
            averages.push(Term::AlphaAverage { size: size.clone(), children });
            let bound = self.config.vfg_bound(&max).unwrap_or_else(|_| max.clone());
            size = size.max(bound) + 1u32 + self.rng.gen_range(0..2u32);
            pos = last + self.rng.gen_range(0..2);
        }
        let validator = Validator::new(self.config);
        while !averages.is_empty() {
            let t = Term::TypeIAlpha { weight: weight.clone(), children: averages.clone() };
            if validator.is_valid(&FunctionalTerm::new(Grammar::W, t.clone())) {
                return t;
            }
            averages.pop();
        }
        Term::unit(nat(lo), Sign::Plus)
    }

    /// `count` successive blocks from `start`, each of `1..=max_len` entries
    /// spread over at most twice that many indices, divided by its certified
    /// upper bound so that `‖x_k‖ ≤ 1` is certified.
    pub fn normalised_blocks(&mut self, count: usize, start: u64, max_len: usize) -> Result<BlockSequence> {
        let mut blocks = Vec::with_capacity(count);
        let mut pos = start.max(1);
        for _ in 0..count {
            let len = self.rng.gen_range(1..=max_len);
            let mut x = RationalVector::new();
            for _ in 0..len {
                x.set(nat(pos), self.rational(3, 3));
                pos += self.rng.gen_range(1..=2);
            }
            let u = upper_bound(&x)?.value;
            blocks.push(if u.is_zero() { x } else { x.scale(&(Q::one() / u)) });
            pos += self.rng.gen_range(0..=2);
        }
        BlockSequence::new(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_replay() {
        let cfg = SpaceConfig::scaled();
        let (mut a, mut b) = (Corpus::new(7, cfg), Corpus::new(7, cfg));
        for _ in 0..20 {
            assert_eq!(a.vector(8, 20, 3), b.vector(8, 20, 3));
            assert_eq!(a.functional(2, 40, 4), b.functional(2, 40, 4));
        }
    }

    #[test]
    fn functionals_are_valid_and_shallow() {
        let cfg = SpaceConfig::scaled();
        let mut c = Corpus::new(1, cfg);
        let mut typed = 0;
        for _ in 0..200 {
            let f = c.functional(2, 60, 4);
            assert!(Validator::new(cfg).is_valid(&f));
            assert!(f.root.depth() <= 4, "{:?}", f.root);
            typed += usize::from(f.root.node_count() > 1);
        }
        assert!(typed > 50, "only {typed} composite functionals");
    }

    #[test]
    fn blocks_are_certified_normalised() {
        let cfg = SpaceConfig::scaled();
        let mut c = Corpus::new(3, cfg);
        let xs = c.normalised_blocks(5, 2, 4).unwrap();
        assert_eq!(xs.len(), 5);
        for x in xs.blocks() {
            assert_eq!(upper_bound(x).unwrap().value, Q::one());
        }
    }
}
