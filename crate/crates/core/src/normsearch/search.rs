//! Two-sided certified estimates of the norm.
//!
//! Lower bounds come from explicit members of the norming set, evaluated
//! exactly. Upper bounds come from norms that dominate it: the Tsirelson
//! norm, the block domination by `6‖Σ c_k e_{φ(k)}‖_T`, and `ℓ_1`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Mode, SigmaRegistry, Sign, SpaceConfig, Term, Validator};
use crate::num::{nat_q, qi, qstr, Nat, Q};
use crate::tsirelson;
use crate::vectors::{BlockSequence, Interval, RationalVector};

/// Search limits: witness depth, averages per type I node, and largest average size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub depth: usize,
    pub children: usize,
    pub sizes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { depth: 6, children: 8, sizes: 64 }
    }
}

impl std::str::FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [d, c, z] = parts.as_slice() else {
            return Err(Error::malformed(format!("budget {s:?} is not of the form depth,children,sizes")));
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| Error::malformed(format!("budget entry {x:?} is not a natural number")));
        Ok(Budget { depth: num(d)?, children: num(c)?, sizes: num(z)? })
    }
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.depth, self.children, self.sizes)
    }
}

/// Supports beyond this skip the type I search.
pub const SEARCH_CAP: usize = 64;
/// Supports beyond this search type I functionals without nesting.
pub const NESTED_CAP: usize = 24;
/// Supports up to this get the exact Tsirelson norm as an upper bound.
pub const UPPER_EXACT_CAP: usize = 160;
/// Groups used by the collapse bound on larger supports.
pub const UPPER_CELLS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperSource {
    TsirelsonDomination,
    BlockDomination,
    Ell1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerSource {
    Zero,
    Type0,
    TypeISearch,
    RegistrySpecialSequence,
    Hint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperCandidate {
    pub source: UpperSource,
    #[serde(with = "qstr")]
    pub value: Q,
    /// Whether the value is the exact norm for that source or a further relaxation.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub vector: RationalVector,
    pub mode: Mode,
    pub budget: Budget,
    #[serde(with = "qstr")]
    pub lower: Q,
    pub lower_source: LowerSource,
    pub witness: FunctionalTerm,
    #[serde(with = "qstr")]
    pub upper: Q,
    pub upper_source: UpperSource,
    pub upper_candidates: Vec<UpperCandidate>,
    /// True when the two bounds meet.
    pub exact: bool,
    pub notes: Vec<String>,
}

impl NormCertificate {
    /// Re-checks the certificate from scratch: the witness is a member of
    /// `W`, evaluates to `lower`, and `lower ≤ upper`.
    pub fn verify(&self, config: SpaceConfig) -> std::result::Result<(), String> {
        self.verify_with(config, None)
    }

    /// As [`verify`](Self::verify), checking special sequences against `registry` when given.
    pub fn verify_with(&self, config: SpaceConfig, registry: Option<&SigmaRegistry>) -> std::result::Result<(), String> {
        let value = self.witness.eval(&self.vector);
        if value != self.lower {
            return Err(format!("witness evaluates to {value}, certificate says {}", self.lower));
        }
        if self.lower > self.upper {
            return Err(format!("lower {} exceeds upper {}", self.lower, self.upper));
        }
        if self.witness.grammar != Grammar::W {
            return Err("witness is not tagged as a member of W".into());
        }
        let validator = match registry {
            Some(r) => Validator::new(config).with_registry(r),
            None => Validator::new(config),
        };
        let violations = validator.validate(&self.witness);
        if let Some(v) = violations.first() {
            return Err(format!("witness violates {} at {}: {}", v.clause, v.path, v.detail));
        }
        if self.upper_candidates.iter().all(|c| c.value != self.upper) {
            return Err("upper bound does not come from a listed source".into());
        }
        Ok(())
    }
}

static LEDGER: Mutex<Option<Vec<NormCertificate>>> = Mutex::new(None);

/// Starts recording every certificate produced by [`norm_certificate`].
pub fn start_recording() {
    *LEDGER.lock().expect("ledger lock") = Some(Vec::new());
}

/// Stops recording and returns what was recorded.
pub fn take_recorded() -> Vec<NormCertificate> {
    LEDGER.lock().expect("ledger lock").take().unwrap_or_default()
}

fn record(c: &NormCertificate) {
    if let Some(log) = LEDGER.lock().expect("ledger lock").as_mut() {
        log.push(c.clone());
    }
}

/// `v = Σ c_k x_k` over successive blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPresentation {
    pub blocks: BlockSequence,
    #[serde(with = "crate::num::qstr_vec")]
    pub coefficients: Vec<Q>,
}

/// Optional inputs to [`norm_certificate`].
#[derive(Clone, Debug, Default)]
pub struct SearchContext<'a> {
    pub registry: Option<&'a SigmaRegistry>,
    pub blocks: Option<&'a BlockPresentation>,
    pub hints: Vec<Term>,
}

/// Best available upper bound for `‖v‖` from the Tsirelson norm and `ℓ_1`.
pub fn upper_bound(v: &RationalVector) -> Result<UpperCandidate> {
    let l1 = UpperCandidate { source: UpperSource::Ell1, value: v.l1(), exact: true };
    let t = tsirelson_upper_candidate(v)?;
    Ok(if t.value <= l1.value { t } else { l1 })
}

fn tsirelson_upper_candidate(v: &RationalVector) -> Result<UpperCandidate> {
    let exact = v.len() <= UPPER_EXACT_CAP;
    let value = if exact { tsirelson::tsirelson_norm(v)?.value } else { tsirelson::collapsed_upper(v, UPPER_CELLS)? };
    Ok(UpperCandidate { source: UpperSource::TsirelsonDomination, value, exact })
}

/// `6‖Σ c_k u_k e_{φ(k)}‖_T` with `u_k = max(1, upper(x_k))`.
pub fn block_domination(p: &BlockPresentation) -> Result<UpperCandidate> {
    let blocks = p.blocks.blocks();
    if blocks.len() != p.coefficients.len() {
        return Err(Error::malformed(format!("{} coefficients for {} blocks", p.coefficients.len(), blocks.len())));
    }
    let mut phi = RationalVector::new();
    let mut exact = true;
    for (k, (x, c)) in blocks.iter().zip(&p.coefficients).enumerate() {
        let u = upper_bound(x)?;
        exact &= u.exact;
        let scale = if u.value > Q::one() { u.value } else { Q::one() };
        phi.set(p.blocks.phi(k), c * scale);
    }
    let t = tsirelson_upper_candidate(&phi)?;
    Ok(UpperCandidate { source: UpperSource::BlockDomination, value: qi(6) * t.value, exact: exact && t.exact })
}

/// Certified interval for `‖v‖` with a witness functional for the lower end.
pub fn norm_certificate(v: &RationalVector, budget: Budget, config: SpaceConfig, cx: &SearchContext) -> Result<NormCertificate> {
    let mut notes = Vec::new();
    let mut uppers = vec![tsirelson_upper_candidate(v)?, UpperCandidate { source: UpperSource::Ell1, value: v.l1(), exact: true }];
    if let Some(p) = cx.blocks {
        if p.blocks.combine(&p.coefficients) != *v {
            return Err(Error::malformed("block presentation does not sum to the vector"));
        }
        uppers.push(block_domination(p)?);
    }
    let best_upper = uppers.iter().min_by(|a, b| a.value.cmp(&b.value)).expect("nonempty").clone();

    let mut lower = (Q::zero(), Term::Zero, LowerSource::Zero);
    let offer = |value: Q, t: Term, source: LowerSource, lower: &mut (Q, Term, LowerSource)| {
        if value > lower.0 {
            *lower = (value, t, source);
        }
    };
    if let Some((i, c)) = v.iter().max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(a.0))) {
        offer(c.abs(), Term::unit(i.clone(), Sign::of(c)), LowerSource::Type0, &mut lower);
    }
    if v.len() <= SEARCH_CAP {
        if let Some((value, t)) = TypeISearch::new(v, budget, config).run() {
            offer(value, t, LowerSource::TypeISearch, &mut lower);
        }
    } else {
        notes.push(format!("type I search skipped: support exceeds {SEARCH_CAP} points"));
    }
    if let Some(reg) = cx.registry {
        if let Some((value, t)) = registry_search(v, reg, budget, config) {
            offer(value, t, LowerSource::RegistrySpecialSequence, &mut lower);
        }
        notes.push("type II candidates range only over special sequences recorded in the coding registry".into());
    }
    let validator = match cx.registry {
        Some(r) => Validator::new(config).with_registry(r),
        None => Validator::new(config),
    };
    for h in &cx.hints {
        let ft = FunctionalTerm::new(Grammar::W, h.clone());
        if !validator.is_valid(&ft) {
            notes.push("a hint failed validation and was ignored".into());
            continue;
        }
        let value = h.eval(v);
        if value.is_negative() {
            offer(-value, h.clone().negate(), LowerSource::Hint, &mut lower);
        } else {
            offer(value, h.clone(), LowerSource::Hint, &mut lower);
        }
    }

    let (lower_value, witness, lower_source) = lower;
    let witness = FunctionalTerm::new(Grammar::W, witness);
    debug_assert_eq!(witness.eval(v), lower_value);
    if lower_value > best_upper.value {
        return Err(Error::ConstructionInvariantViolated(format!(
            "lower bound {lower_value} exceeds upper bound {} from {:?}",
            best_upper.value, best_upper.source
        )));
    }
    let cert = NormCertificate {
        vector: v.clone(),
        mode: config.mode,
        budget,
        exact: lower_value == best_upper.value,
        lower: lower_value,
        lower_source,
        witness,
        upper: best_upper.value,
        upper_source: best_upper.source,
        upper_candidates: uppers,
        notes,
    };
    record(&cert);
    Ok(cert)
}

/// Certificate whose lower end is a given member of `W`, for claims that
/// rest on one specific functional rather than on the best one found.
pub fn witness_certificate(v: &RationalVector, witness: &Term, config: SpaceConfig, registry: Option<&SigmaRegistry>) -> Result<NormCertificate> {
    let ft = FunctionalTerm::new(Grammar::W, witness.clone());
    let validator = match registry {
        Some(r) => Validator::new(config).with_registry(r),
        None => Validator::new(config),
    };
    if let Some(x) = validator.validate(&ft).first() {
        return Err(Error::malformed(format!("witness violates {} at {}: {}", x.clause, x.path, x.detail)));
    }
    let value = witness.eval(v);
    let (lower, ft) = if value.is_negative() { (-value, FunctionalTerm::new(Grammar::W, witness.clone().negate())) } else { (value, ft) };
    let uppers = vec![tsirelson_upper_candidate(v)?, UpperCandidate { source: UpperSource::Ell1, value: v.l1(), exact: true }];
    let best = uppers.iter().min_by(|a, b| a.value.cmp(&b.value)).expect("nonempty").clone();
    if lower > best.value {
        return Err(Error::ConstructionInvariantViolated(format!("witness value {lower} exceeds upper bound {}", best.value)));
    }
    let cert = NormCertificate {
        vector: v.clone(),
        mode: config.mode,
        budget: Budget::default(),
        exact: lower == best.value,
        lower,
        lower_source: LowerSource::Hint,
        witness: ft,
        upper: best.value,
        upper_source: best.source,
        upper_candidates: uppers,
        notes: vec!["lower bound from a prescribed witness".into()],
    };
    record(&cert);
    Ok(cert)
}

/// Best weight-one type I functional `(1/2)Σ α_q` found on `v`, as the
/// averages and the sum `Σ α_q(v)` (every term is nonnegative).
pub fn alpha_family_search(v: &RationalVector, budget: Budget, config: SpaceConfig) -> Option<(Q, Vec<Term>)> {
    if v.len() > SEARCH_CAP {
        return None;
    }
    let (value, t) = TypeISearch::new(v, budget, config).run()?;
    let Term::TypeIAlpha { children, .. } = t else { return None };
    Some((value * qi(2), children))
}

/// Best restricted special sequence among those the registry can rebuild.
fn registry_search(v: &RationalVector, reg: &SigmaRegistry, budget: Budget, config: SpaceConfig) -> Option<(Q, Term)> {
    let validator = Validator::new(config).with_registry(reg);
    let mut best: Option<(Q, Term)> = None;
    for (history, _) in reg.histories() {
        let Some(terms): Option<Vec<Term>> = history.iter().map(|(f, _)| reg.term_for(f).cloned()).collect() else { continue };
        let terms: Vec<Term> = terms.into_iter().take(budget.children.max(1)).collect();
        let weights: Vec<Nat> = history.iter().take(terms.len()).map(|(_, w)| w.clone()).collect();
        let values: Vec<Q> = terms.iter().map(|t| t.eval(v)).collect();
        // best contiguous run of members, in either sign
        for sign in [Sign::Plus, Sign::Minus] {
            let (mut run, mut start) = (Q::zero(), 0);
            for j in 0..values.len() {
                if run <= Q::zero() {
                    run = Q::zero();
                    start = j;
                }
                run += sign.apply(values[j].clone());
                let value = &run / qi(2);
                if value.is_positive() && best.as_ref().is_none_or(|b| value > b.0) {
                    let g = Term::TypeII { children: terms.clone(), weights: weights.clone() };
                    let lo = terms[start].min_supp();
                    let hi = terms[j].max_supp();
                    let (Some(lo), Some(hi)) = (lo, hi) else { continue };
                    let t = Term::Restricted { interval: Interval::new(lo, hi), sign, child: Box::new(g) };
                    if t.eval(v) == value && validator.is_valid(&FunctionalTerm::new(Grammar::W, t.clone())) {
                        best = Some((value, t));
                    }
                }
            }
        }
    }
    best
}

/// How the future of a weight-one type I functional continues from a state.
#[derive(Clone, Copy, Debug)]
enum Step {
    Stop,
    Skip,
    Take(usize),
}

/// Branch-free dynamic search over weight-one type I functionals
/// `(1/2)(α_1 + ... + α_d)`.
///
/// The first average has size 1 and holds the best functional found on its
/// interval, which may itself be of type I when depth allows. Later averages
/// take the smallest size the growth condition permits and average the
/// largest coordinates of their interval; smaller sizes are never worse.
struct TypeISearch<'a> {
    idx: Vec<Nat>,
    abs: Vec<Q>,
    signs: Vec<Sign>,
    budget: Budget,
    config: SpaceConfig,
    best_memo: HashMap<(usize, usize, usize), (Q, Term)>,
    future_memo: HashMap<(usize, usize, usize, usize, usize), (Q, Step)>,
    _v: std::marker::PhantomData<&'a ()>,
}

impl<'a> TypeISearch<'a> {
    fn new(v: &'a RationalVector, budget: Budget, config: SpaceConfig) -> Self {
        let pts: Vec<(&Nat, &Q)> = v.iter().collect();
        let mut budget = budget;
        if pts.len() > NESTED_CAP {
            budget.depth = budget.depth.min(4);
        }
        TypeISearch {
            idx: pts.iter().map(|p| p.0.clone()).collect(),
            abs: pts.iter().map(|p| p.1.abs()).collect(),
            signs: pts.iter().map(|p| Sign::of(p.1)).collect(),
            budget,
            config,
            best_memo: HashMap::new(),
            future_memo: HashMap::new(),
            _v: std::marker::PhantomData,
        }
    }

    fn run(&mut self) -> Option<(Q, Term)> {
        if self.idx.is_empty() || self.budget.depth < 3 {
            return None;
        }
        let m = self.idx.len();
        self.type_i(0, m - 1, self.budget.depth)
    }

    fn leaf(&self, i: usize) -> Term {
        Term::unit(self.idx[i].clone(), self.signs[i])
    }

    /// Size of the next average after one of size `s` ending at position `c`.
    fn next_size(&self, c: usize, s: usize) -> Option<usize> {
        let bound = self.config.vfg_bound(&self.idx[c]).ok()?;
        let next = bound.max(Nat::from(s)) + 1u32;
        usize::try_from(&next).ok().filter(|n| *n <= self.budget.sizes)
    }

    fn l1(&self, a: usize, b: usize) -> Q {
        if a > b {
            return Q::zero();
        }
        self.abs[a..=b].iter().sum()
    }

    /// Best functional with leaves in positions `a..=b` and at most `depth` levels.
    fn best(&mut self, a: usize, b: usize, depth: usize) -> (Q, Term) {
        if let Some(r) = self.best_memo.get(&(a, b, depth)) {
            return r.clone();
        }
        let mut i = a;
        for j in a..=b {
            if self.abs[j] > self.abs[i] {
                i = j;
            }
        }
        let mut out = (self.abs[i].clone(), self.leaf(i));
        if depth >= 3 {
            if let Some(t) = self.type_i(a, b, depth) {
                if t.0 > out.0 {
                    out = t;
                }
            }
        }
        self.best_memo.insert((a, b, depth), out.clone());
        out
    }

    fn type_i(&mut self, a: usize, b: usize, depth: usize) -> Option<(Q, Term)> {
        let mut best: Option<(Q, usize, usize)> = None;
        for a1 in a..=b {
            let cap = crate::num::sat_usize(&self.idx[a1]).min(self.budget.children);
            if cap == 0 {
                continue;
            }
            for c in a1..=b {
                let first = self.best(a1, c, depth - 2).0;
                let next = if cap >= 2 && c < b { self.next_size(c, 1) } else { None };
                let bound = match next {
                    Some(s) => &first + self.l1(c + 1, b) / qi(s as i64),
                    None => first.clone(),
                };
                if best.as_ref().is_some_and(|x| bound <= x.0) {
                    continue;
                }
                let rest = match next {
                    Some(s) => self.future(c + 1, s, cap - 1, b, depth - 1).0,
                    None => Q::zero(),
                };
                let total = first + rest;
                if best.as_ref().is_none_or(|x| total > x.0) {
                    best = Some((total, a1, c));
                }
            }
        }
        let (total, a1, c) = best?;
        let cap = crate::num::sat_usize(&self.idx[a1]).min(self.budget.children);
        let mut children = vec![Term::AlphaAverage { size: Nat::one(), children: vec![self.best(a1, c, depth - 2).1] }];
        if cap >= 2 && c < b {
            if let Some(s) = self.next_size(c, 1) {
                self.replay(c + 1, s, cap - 1, b, depth - 1, &mut children);
            }
        }
        Some((total / qi(2), Term::TypeIAlpha { weight: Nat::one(), children }))
    }

    /// Best sum of at most `r` averages starting at or after `p`, the first of
    /// size `s`, all inside `..=b`.
    fn future(&mut self, p: usize, s: usize, r: usize, b: usize, depth: usize) -> (Q, Step) {
        if r == 0 || p > b || depth < 2 {
            return (Q::zero(), Step::Stop);
        }
        let key = (p, s, r, b, depth);
        if let Some(x) = self.future_memo.get(&key) {
            return x.clone();
        }
        let mut out = (Q::zero(), Step::Stop);
        let skip = self.future(p + 1, s, r, b, depth).0;
        if skip > out.0 {
            out = (skip, Step::Skip);
        }
        let mut heap: BinaryHeap<Reverse<Q>> = BinaryHeap::new();
        let mut top = Q::zero();
        let size = qi(s as i64);
        for c in p..=b {
            heap.push(Reverse(self.abs[c].clone()));
            top += &self.abs[c];
            if heap.len() > s {
                let Reverse(x) = heap.pop().expect("nonempty");
                top -= x;
            }
            let here = &top / &size;
            let rest = match self.next_size(c, s) {
                Some(s2) if c < b => self.future(c + 1, s2, r - 1, b, depth).0,
                _ => Q::zero(),
            };
            let total = here + rest;
            if total > out.0 {
                out = (total, Step::Take(c));
            }
        }
        self.future_memo.insert(key, out.clone());
        out
    }

    fn replay(&mut self, mut p: usize, mut s: usize, mut r: usize, b: usize, depth: usize, out: &mut Vec<Term>) {
        loop {
            match self.future(p, s, r, b, depth).1 {
                Step::Stop => return,
                Step::Skip => p += 1,
                Step::Take(c) => {
                    let mut pos: Vec<usize> = (p..=c).collect();
                    pos.sort_by(|&x, &y| self.abs[y].cmp(&self.abs[x]).then(x.cmp(&y)));
                    pos.truncate(s);
                    pos.sort_unstable();
                    let children = pos.into_iter().map(|i| self.leaf(i)).collect();
                    out.push(Term::AlphaAverage { size: Nat::from(s), children });
                    match self.next_size(c, s) {
                        Some(s2) if c < b => {
                            p = c + 1;
                            s = s2;
                            r -= 1;
                        }
                        _ => return,
                    }
                }
            }
        }
    }
}

/// `‖v‖_∞` never exceeds the norm; used where only a cheap bound is needed.
pub fn sup_norm_witness(v: &RationalVector) -> (Q, Term) {
    match v.iter().max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(a.0))) {
        Some((i, c)) => (c.abs(), Term::unit(i.clone(), Sign::of(c))),
        None => (Q::zero(), Term::Zero),
    }
}

/// `sizes` as a rational, for bounds that mention the largest average size.
pub fn size_q(s: usize) -> Q {
    nat_q(&Nat::from(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q};

    fn scaled() -> SpaceConfig {
        SpaceConfig::scaled()
    }

    #[test]
    fn unit_vectors_are_certified_exactly() {
        for k in [1u64, 5, 40] {
            let v = RationalVector::unit(nat(k));
            let c = norm_certificate(&v, Budget::default(), scaled(), &SearchContext::default()).unwrap();
            assert_eq!((c.lower.clone(), c.upper.clone()), (qi(1), qi(1)));
            assert!(c.exact);
            c.verify(scaled()).unwrap();
        }
    }

    #[test]
    fn budgets_parse() {
        assert_eq!("6,8,64".parse::<Budget>().unwrap(), Budget::default());
        assert_eq!("6,8".parse::<Budget>().unwrap_err().code(), "malformed-input");
    }

    #[test]
    fn type_i_search_beats_the_sup_norm_on_spread_blocks() {
        // e_3, then averages of sizes 6 on [4, 9] and 12 on [10, 21]
        let v = RationalVector::from_u64(&(3..22).map(|i| (i, qi(1))).collect::<Vec<_>>());
        let c = norm_certificate(&v, Budget::default(), scaled(), &SearchContext::default()).unwrap();
        assert_eq!(c.lower_source, LowerSource::TypeISearch);
        assert!(c.lower >= q(3, 2), "lower {}", c.lower);
        c.verify(scaled()).unwrap();
    }

    #[test]
    fn raising_the_budget_never_hurts() {
        let v = RationalVector::from_u64(&(2..14).map(|i| (i, q(((i * 5) % 7) as i64 + 1, 3))).collect::<Vec<_>>());
        let mut prev: Option<NormCertificate> = None;
        for b in [Budget { depth: 2, children: 1, sizes: 4 }, Budget { depth: 4, children: 2, sizes: 16 }, Budget::default()] {
            let c = norm_certificate(&v, b, scaled(), &SearchContext::default()).unwrap();
            c.verify(scaled()).unwrap();
            if let Some(p) = &prev {
                assert!(c.lower >= p.lower && c.upper <= p.upper);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn ledger_records_when_enabled() {
        start_recording();
        let v = RationalVector::unit(nat(3));
        norm_certificate(&v, Budget::default(), scaled(), &SearchContext::default()).unwrap();
        let got = take_recorded();
        assert!(got.iter().any(|c| c.vector == v));
    }
}
