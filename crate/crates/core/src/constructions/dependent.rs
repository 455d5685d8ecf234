//! Dependent sequences of exact pairs tied together by the coding function,
//! and the interleaved pair `x`, `y` built from one of length `2n`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pair::{build_exact_pair, check_exact_pair, ExactPair, PairKind};
use super::vector::{faithful_gate, PAIR_C};
use super::ClauseCheck;
use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Mode, SigmaRegistry, SpaceConfig, Term, Validator};
use crate::normsearch::{norm_certificate, witness_certificate, BlockPresentation, Budget, NormCertificate, SearchContext};
use crate::num::{fmt_q, nat, natstr_vec, pow2, qi, qstr, to_u64, Nat, Q};
use crate::vectors::{BlockSequence, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependentSequence {
    pub mode: Mode,
    pub kind: PairKind,
    #[serde(with = "natstr_vec")]
    pub weights: Vec<Nat>,
    pub pairs: Vec<ExactPair>,
    /// `(1/2) Σ f_k`, a type II functional.
    pub witness: FunctionalTerm,
    /// `witness(Σ x_k)`.
    #[serde(with = "qstr")]
    pub witness_value: Q,
    pub clauses: Vec<ClauseCheck>,
}

impl DependentSequence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sum(&self) -> RationalVector {
        self.pairs.iter().fold(RationalVector::new(), |acc, p| acc.add(&p.x))
    }

    pub fn blocks(&self) -> Result<BlockSequence> {
        BlockSequence::new(self.pairs.iter().map(|p| p.x.clone()).collect())
    }
}

/// Chains `len` exact pairs: `m_1` is the least element of `L_1` above
/// `4·len·2^{2·len}`, each later weight is assigned by the registry from the
/// history so far, and each pair starts after the previous functional.
pub fn build_dependent_sequence(len: usize, kind: PairKind, config: SpaceConfig, registry: &mut SigmaRegistry) -> Result<DependentSequence> {
    if len == 0 {
        return Err(Error::malformed("a dependent sequence has at least one pair"));
    }
    if config.mode == Mode::Faithful {
        return Err(faithful_gate(first_bound(len).bits() as u32, PAIR_C));
    }
    if registry.config() != config {
        return Err(Error::malformed("registry session was opened in another mode"));
    }
    let mut weights = vec![config.l1_above(&first_bound(len))?];
    let mut pairs: Vec<ExactPair> = Vec::with_capacity(len);
    let mut history: Vec<(RationalVector, Nat)> = Vec::with_capacity(len);
    let mut start = nat(len as u64 + 1).max(nat(2));
    for k in 0..len {
        let m = weights[k].clone();
        let n = u32::try_from(to_u64(&m, "weight")?).map_err(|_| Error::infeasible("exact pair", format!("weight {m} exceeds 2^32")))?;
        let pair = build_exact_pair(n, kind, &start, config, Some(registry))?;
        history.push((pair.f.root.coefficients(), m));
        start = pair.f.root.max_supp().expect("nonzero functional") + 1u32;
        pairs.push(pair);
        if k + 1 < len {
            weights.push(registry.assign(&history)?);
        }
    }
    let root = Term::TypeII { children: pairs.iter().map(|p| p.f.root.clone()).collect(), weights: weights.clone() };
    registry.remember_term(&root);
    let witness = FunctionalTerm::new(Grammar::W, root);
    let sum = pairs.iter().fold(RationalVector::new(), |acc, p| acc.add(&p.x));
    let witness_value = witness.eval(&sum);
    let mut seq = DependentSequence { mode: config.mode, kind, weights, pairs, witness, witness_value, clauses: Vec::new() };
    seq.clauses = check_dependent_sequence(&seq, config, registry);
    Ok(seq)
}

fn first_bound(len: usize) -> Nat {
    nat(4 * len as u64) * pow2(2 * len as u64)
}

/// Re-derives the defining clauses from the finished sequence.
pub fn check_dependent_sequence(s: &DependentSequence, config: SpaceConfig, registry: &SigmaRegistry) -> Vec<ClauseCheck> {
    let mut out = Vec::new();
    let len = s.pairs.len();
    let m1 = s.weights.first().cloned().unwrap_or_default();
    out.push(ClauseCheck::exact(
        "first-weight",
        config.in_l1(&m1) && m1 > first_bound(len),
        format!("m_1 = {m1} in L_1 and above 4n·2^(2n) for n = {len}"),
    ));

    let mut coherent = s.weights.len() == len;
    let mut detail = String::from("each m_(k+1) is the registry weight of the history");
    for k in 0..len.saturating_sub(1) {
        let history: Vec<(RationalVector, Nat)> =
            s.pairs[..=k].iter().zip(&s.weights).map(|(p, m)| (p.f.root.coefficients(), m.clone())).collect();
        if registry.lookup(&history) != s.weights.get(k + 1) {
            coherent = false;
            detail = format!("weight {} does not match the registry", k + 2);
            break;
        }
    }
    out.push(ClauseCheck::exact("sigma-coherence", coherent, detail));

    let weights_match = s.pairs.iter().zip(&s.weights).all(|(p, m)| &nat(p.n as u64) == m);
    out.push(ClauseCheck::exact("pair-weights", weights_match, "pair k has weight m_k"));

    let ordered = s.pairs.windows(2).all(|w| match (w[0].f.root.max_supp(), w[1].x.min_supp()) {
        (Some(a), Some(b)) => &a < b,
        _ => false,
    });
    out.push(ClauseCheck::exact("successive", ordered, "max supp f_k < min supp x_(k+1)"));

    let structural = ["type-i-weight", "support-order", "action"];
    let pairs_ok = s.pairs.iter().all(|p| check_exact_pair(p, config).iter().filter(|c| structural.contains(&c.clause.as_str())).all(ClauseCheck::holds));
    out.push(ClauseCheck::exact("pairs", pairs_ok, "every pair is of type I_α with the prescribed action and support order"));

    let violations = Validator::new(config).with_registry(registry).validate(&s.witness);
    let detail = match violations.first() {
        None => "(1/2) Σ f_k validates as a type II functional".to_string(),
        Some(v) => format!("{} at {}: {}", v.clause, v.path, v.detail),
    };
    out.push(ClauseCheck::exact("type-ii", s.witness.root.is_type_ii() && violations.is_empty(), detail));

    let value = s.witness.eval(&s.sum());
    let target = match s.kind {
        PairKind::One => Q::new((len as i64).into(), 2.into()),
        PairKind::Zero => Q::zero(),
    };
    out.push(ClauseCheck::exact("witness-identity", value == target && value == s.witness_value, format!("(1/2) Σ f_k (Σ x_k) = {}", fmt_q(&value))));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiDemo {
    pub n: usize,
    pub mode: Mode,
    pub sequence: DependentSequence,
    /// `(1/n) Σ x_{2k−1}`
    pub x: RationalVector,
    /// `(1/n) Σ x_{2k}`
    pub y: RationalVector,
    /// `‖x + y‖ ≥ 1` from the type II witness.
    pub lower: NormCertificate,
    /// Certified interval for `‖x − y‖`.
    pub upper: NormCertificate,
    /// Same construction with kind-0 pairs: interval for `(1/n)‖Σ x_k‖`.
    pub kind_zero: DependentSequence,
    pub kind_zero_upper: NormCertificate,
    pub notes: Vec<String>,
}

/// Builds a kind-1 dependent sequence of length `2n`, splits it into odd and
/// even terms, and certifies both sides; then repeats with kind-0 pairs.
pub fn hi_demo(n: usize, config: SpaceConfig, registry: &mut SigmaRegistry, budget: Budget) -> Result<HiDemo> {
    if n == 0 {
        return Err(Error::malformed("n must be positive"));
    }
    let seq = build_dependent_sequence(2 * n, PairKind::One, config, registry)?;
    let inv = Q::new(1.into(), (n as i64).into());
    let mut x = RationalVector::new();
    let mut y = RationalVector::new();
    for (k, p) in seq.pairs.iter().enumerate() {
        let part = p.x.scale(&inv);
        if k % 2 == 0 {
            x = x.add(&part);
        } else {
            y = y.add(&part);
        }
    }
    let lower = witness_certificate(&x.add(&y), &seq.witness.root, config, Some(registry))?;
    let blocks = seq.blocks()?;
    let signs: Vec<Q> = (0..blocks.len()).map(|k| if k % 2 == 0 { inv.clone() } else { -inv.clone() }).collect();
    let diff = x.add(&y.neg());
    let presentation = BlockPresentation { blocks, coefficients: signs };
    let upper = norm_certificate(&diff, budget, config, &SearchContext { registry: Some(registry), blocks: Some(&presentation), hints: vec![] })?;

    let zero = build_dependent_sequence(2 * n, PairKind::Zero, config, registry)?;
    let avg = zero.sum().scale(&inv);
    let presentation = BlockPresentation { blocks: zero.blocks()?, coefficients: vec![inv.clone(); 2 * n] };
    let kind_zero_upper = norm_certificate(&avg, budget, config, &SearchContext { registry: Some(registry), blocks: Some(&presentation), hints: vec![] })?;

    let mut notes = vec![format!("lower bound for ‖x + y‖ from (1/2) Σ f_k: {}", fmt_q(&lower.lower))];
    if config.mode == Mode::Scaled {
        notes.push(format!(
            "scaled mode: measured ‖x − y‖ ≤ {} and (1/n)‖Σ x_k‖ ≤ {} for kind 0; no constant of the form c/n is claimed",
            fmt_q(&upper.upper),
            fmt_q(&kind_zero_upper.upper)
        ));
    }
    if lower.lower < qi(1) {
        return Err(Error::ConstructionInvariantViolated(format!("type II witness gives only {}", fmt_q(&lower.lower))));
    }
    debug_assert!(!lower.lower.is_zero() && lower.upper >= Q::one());
    Ok(HiDemo { n, mode: config.mode, sequence: seq, x, y, lower, upper, kind_zero: zero, kind_zero_upper, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ClauseStatus;

    #[test]
    fn length_two_kind_one() {
        let cfg = SpaceConfig::scaled();
        let mut reg = SigmaRegistry::new(cfg);
        let s = build_dependent_sequence(2, PairKind::One, cfg, &mut reg).unwrap();
        // 4·2·2^4 = 128, so m_1 = 132
        assert_eq!(s.weights[0], nat(132));
        assert_eq!(s.witness_value, qi(1));
        for c in &s.clauses {
            assert_eq!(c.status, ClauseStatus::Holds, "{}: {}", c.clause, c.detail);
        }
    }

    #[test]
    fn replay_assigns_the_same_weights() {
        let cfg = SpaceConfig::scaled();
        let mut a = SigmaRegistry::new(cfg);
        let s = build_dependent_sequence(3, PairKind::Zero, cfg, &mut a).unwrap();
        let mut b = SigmaRegistry::from_json(&a.to_json()).unwrap();
        let t = build_dependent_sequence(3, PairKind::Zero, cfg, &mut b).unwrap();
        assert_eq!(s.weights, t.weights);
        assert_eq!(a.to_json(), b.to_json());
        assert!(s.clauses.iter().all(ClauseCheck::holds));
    }

    #[test]
    fn hi_demo_for_one() {
        let cfg = SpaceConfig::scaled();
        let mut reg = SigmaRegistry::new(cfg);
        let d = hi_demo(1, cfg, &mut reg, Budget::default()).unwrap();
        assert_eq!(d.lower.lower, qi(1));
        assert!(d.lower.verify_with(cfg, Some(&reg)).is_ok());
        assert!(d.upper.verify_with(cfg, Some(&reg)).is_ok());
        assert!(d.kind_zero_upper.verify_with(cfg, Some(&reg)).is_ok());
    }
}
