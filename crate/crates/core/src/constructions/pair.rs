//! Exact pairs `{x, f}`: `f` of type I_α with weight `n` acting on `x` as 1 or 0.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::blocks::build_c0_blocks_from;
use super::vector::{build_exact_vector, faithful_gate, ExactVectorRecord, PAIR_C};
use super::{ClauseCheck, ClauseStatus};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Mode, SigmaRegistry, Sign, SpaceConfig, Term, Validator};
use crate::num::{fmt_q, nat, q, qi, qstr, Nat, Q};
use crate::vectors::RationalVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Zero,
    One,
}

impl PairKind {
    pub fn from_u8(k: u8) -> Result<Self> {
        match k {
            0 => Ok(PairKind::Zero),
            1 => Ok(PairKind::One),
            _ => Err(Error::malformed(format!("pair kind must be 0 or 1, got {k}"))),
        }
    }

    pub fn target(self) -> Q {
        match self {
            PairKind::Zero => Q::zero(),
            PairKind::One => Q::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactPair {
    pub kind: PairKind,
    pub n: u32,
    pub x: RationalVector,
    pub f: FunctionalTerm,
    /// The exact vector `x′` behind `x`.
    pub exact_vector: ExactVectorRecord,
    /// `f(x′)` for kind 1, `f(x)` for kind 0.
    #[serde(with = "qstr")]
    pub f_value: Q,
    pub clauses: Vec<ClauseCheck>,
}

/// Exact pair of weight `n` over two `c_0` blocks `{start}` and `F_2`.
///
/// Kind 1 uses `f = (1/2^n)(α_1 + α_2)` so `f(x′) = 1` and `x = x′`. Kind 0
/// uses `f = (1/2^n)α′` where `α′` has the size of `F_2` and signs `+` on its
/// first half and `−` on its second half, so `f(x) = 0`.
pub fn build_exact_pair(n: u32, kind: PairKind, start: &Nat, config: SpaceConfig, registry: Option<&mut SigmaRegistry>) -> Result<ExactPair> {
    if config.mode == Mode::Faithful {
        return Err(faithful_gate(n, PAIR_C));
    }
    if start < &nat(2) {
        return Err(Error::malformed("exact pairs start at index 2 or later"));
    }
    let source = build_c0_blocks_from(start, 2, config)?;
    let xv = build_exact_vector(n, &source, None, config)?;
    let companion = xv.companion.clone().expect("exact vectors over c0 blocks carry a companion");
    let (x, f) = match kind {
        PairKind::One => {
            let v = companion.eval(&xv.vector);
            (xv.vector.scale(&(Q::one() / &v)), companion)
        }
        PairKind::Zero => {
            let f2 = &source.blocks.blocks()[1];
            let idx = f2.support();
            let half = idx.len() / 2;
            let mut children: Vec<Term> = idx[..half].iter().map(|i| Term::unit(i.clone(), Sign::Plus)).collect();
            children.extend(idx[idx.len() - half..].iter().map(|i| Term::unit(i.clone(), Sign::Minus)));
            let alpha = Term::AlphaAverage { size: nat(idx.len() as u64), children };
            (xv.vector.clone(), FunctionalTerm::new(Grammar::W, Term::TypeIAlpha { weight: nat(n as u64), children: vec![alpha] }))
        }
    };
    let f_value = match kind {
        PairKind::One => f.eval(&xv.vector),
        PairKind::Zero => f.eval(&x),
    };
    if let Some(r) = registry {
        r.remember_term(&f.root);
    }
    let mut pair = ExactPair { kind, n, x, f, exact_vector: xv, f_value, clauses: Vec::new() };
    pair.clauses = check_exact_pair(&pair, config);
    Ok(pair)
}

/// Re-derives the pair clauses from the finished data.
pub fn check_exact_pair(p: &ExactPair, config: SpaceConfig) -> Vec<ClauseCheck> {
    let mut out = Vec::new();
    let valid = Validator::new(config).is_valid(&p.f);
    let weight_ok = p.f.root.is_type_i_alpha() && p.f.root.type_i_weight() == Some(&nat(p.n as u64));
    out.push(ClauseCheck::exact("type-i-weight", valid && weight_ok, format!("f is a valid type I_α functional of weight {}", p.n)));

    let order = match (p.x.min_supp(), p.x.max_supp(), p.f.root.min_supp(), p.f.root.max_supp()) {
        (Some(a), Some(b), Some(c), Some(d)) => a <= &c && b <= &d,
        _ => false,
    };
    out.push(ClauseCheck::exact("support-order", order, "min supp x ≤ min supp f and max supp x ≤ max supp f"));

    let fx = p.f.eval(&p.x);
    out.push(ClauseCheck::exact("action", fx == p.kind.target(), format!("f(x) = {}", fmt_q(&fx))));

    let xp = &p.exact_vector.vector;
    if p.kind == PairKind::One {
        let fxp = p.f.eval(xp);
        out.push(ClauseCheck::exact("f-of-x-prime", fxp > q(28, 29) && fxp <= qi(1), format!("f(x′) = {}", fmt_q(&fxp))));
        let normalised = !fxp.is_zero() && p.x == xp.scale(&(Q::one() / &fxp));
        out.push(ClauseCheck::exact("normalisation", normalised, "x = x′/f(x′)"));
        let cert = &p.exact_vector.certificate;
        let scale = if fxp.is_zero() { Q::zero() } else { Q::one() / &fxp };
        let (lo, hi) = (&cert.lower * &scale, &cert.upper * &scale);
        let status = if lo >= qi(1) && hi <= qi(29) {
            ClauseStatus::Holds
        } else if lo > qi(29) || hi < qi(1) {
            ClauseStatus::Fails
        } else {
            ClauseStatus::Unverified
        };
        out.push(ClauseCheck::new("norm-in-1-29", status, format!("‖x‖ ∈ [{}, {}]", fmt_q(&lo), fmt_q(&hi))));
    } else {
        out.push(ClauseCheck::exact("x-is-x-prime", &p.x == xp, "x is the exact vector itself"));
    }

    let statuses: Vec<ClauseStatus> = p.exact_vector.clauses.iter().map(|c| c.status).collect();
    let status = if statuses.contains(&ClauseStatus::Fails) {
        ClauseStatus::Fails
    } else if statuses.contains(&ClauseStatus::Unverified) {
        ClauseStatus::Unverified
    } else {
        ClauseStatus::Holds
    };
    let failing: Vec<&str> = p.exact_vector.clauses.iter().filter(|c| !c.holds()).map(|c| c.clause.as_str()).collect();
    out.push(ClauseCheck::new("exact-vector", status, format!("(4, 1, n) exact vector; clauses not holding: {failing:?}")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::clause_status;

    fn holds(p: &ExactPair, name: &str) -> bool {
        clause_status(&p.clauses, name) == Some(ClauseStatus::Holds)
    }

    #[test]
    fn kind_one_acts_as_one() {
        let cfg = SpaceConfig::scaled();
        let mut reg = SigmaRegistry::new(cfg);
        let p = build_exact_pair(3, PairKind::One, &nat(4), cfg, Some(&mut reg)).unwrap();
        assert_eq!(p.f.eval(&p.x), qi(1));
        for name in ["type-i-weight", "support-order", "action", "f-of-x-prime", "normalisation"] {
            assert!(holds(&p, name), "{name}");
        }
        assert!(reg.term_for(&p.f.root.coefficients()).is_some());
    }

    #[test]
    fn kind_zero_annihilates() {
        let cfg = SpaceConfig::scaled();
        for start in [2u64, 3, 5, 8] {
            let p = build_exact_pair(2, PairKind::Zero, &nat(start), cfg, None).unwrap();
            assert!(p.f.eval(&p.x).is_zero());
            for name in ["type-i-weight", "support-order", "action", "x-is-x-prime"] {
                assert!(holds(&p, name), "{name} from {start}");
            }
        }
    }

    #[test]
    fn pairs_refuse_bad_input() {
        let cfg = SpaceConfig::scaled();
        assert_eq!(build_exact_pair(1, PairKind::One, &nat(1), cfg, None).unwrap_err().code(), "malformed-input");
        assert_eq!(PairKind::from_u8(2).unwrap_err().code(), "malformed-input");
        let e = build_exact_pair(1, PairKind::One, &nat(4), SpaceConfig::faithful(), None).unwrap_err();
        assert_eq!(e.code(), "infeasible-at-budget");
    }
}
