//! Grammar checking for functional trees.
//!
//! Every node is checked in its own frame: a restriction above a node does not
//! change what the node itself must satisfy. Supports are syntactic, which
//! makes the successiveness, admissibility and growth checks conservative.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::config::SpaceConfig;
use super::registry::SigmaRegistry;
use super::term::{FunctionalTerm, Grammar, Sign, Term};
use crate::error::{Error, Result};
use crate::num::{nat_q, sat_usize, Nat, Q};
use crate::schreier;
use crate::vectors::RationalVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Child indices from the root, e.g. `root/1/0`.
    pub path: String,
    pub clause: String,
    pub detail: String,
}

/// Validation settings.
///
/// With a registry, the weights of special sequences are compared against the
/// recorded coding. Without one only the necessary conditions are checked
/// (weights in `L_2` above the growth bound).
#[derive(Clone, Copy, Debug)]
pub struct Validator<'a> {
    pub config: SpaceConfig,
    pub registry: Option<&'a SigmaRegistry>,
    /// Requires successive β-average children and keeps convex combinations
    /// at the outermost stratum.
    pub strict: bool,
}

impl<'a> Validator<'a> {
    pub fn new(config: SpaceConfig) -> Self {
        Validator { config, registry: None, strict: false }
    }

    pub fn with_registry(mut self, registry: &'a SigmaRegistry) -> Self {
        self.registry = Some(registry);
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn validate(&self, t: &FunctionalTerm) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut cx = Cx { v: self, grammar: t.grammar, out: &mut out };
        cx.node(&t.root, "root".to_string(), true);
        out
    }

    pub fn is_valid(&self, t: &FunctionalTerm) -> bool {
        self.validate(t).is_empty()
    }
}

/// Validates with default settings and no registry.
pub fn validate(t: &FunctionalTerm, config: SpaceConfig) -> Vec<Violation> {
    Validator::new(config).validate(t)
}

struct Cx<'v, 'a> {
    v: &'v Validator<'a>,
    grammar: Grammar,
    out: &'v mut Vec<Violation>,
}

impl Cx<'_, '_> {
    fn flag(&mut self, path: &str, clause: &str, detail: impl Into<String>) {
        self.out.push(Violation { path: path.to_string(), clause: clause.to_string(), detail: detail.into() });
    }

    /// `outer` is true while only restrictions and convex nodes lie above.
    fn node(&mut self, t: &Term, path: String, outer: bool) {
        match self.grammar {
            Grammar::W => self.w_node(t, &path, outer),
            g => self.tsirelson_node(t, &path, g),
        }
    }

    fn children(&mut self, t: &Term, path: &str, outer: bool) {
        for (i, c) in t.children().iter().enumerate() {
            self.node(c, format!("{path}/{i}"), outer);
        }
    }

    fn tsirelson_node(&mut self, t: &Term, path: &str, g: Grammar) {
        match t {
            Term::Zero => {}
            Term::Unit { index, .. } => self.unit(index, path),
            Term::Restricted { .. } => self.restriction(t, path),
            Term::Convex { .. } if g != Grammar::WTPrime => self.convex(t, path, true),
            Term::Half { children } => {
                let supports = supports(children);
                self.successive(&supports, path, "successive");
                let mins: Vec<Nat> = supports.iter().filter_map(|s| s.first().cloned()).collect();
                if let Some(first) = mins.first() {
                    let cap = if g == Grammar::WTriple { 2 * sat_usize(first) } else { sat_usize(first) };
                    if mins.len() > cap {
                        let rule = if g == Grammar::WTriple { "at most 2·min supp" } else { "S_1-admissible" };
                        self.flag(path, "admissible", format!("{} nonzero children starting at {first}, need {rule}", mins.len()));
                    }
                }
            }
            other => {
                self.flag(path, "grammar-node", format!("{} is not a node of {}", kind_name(other), grammar_name(g)));
                return;
            }
        }
        self.children(t, path, true);
    }

    fn w_node(&mut self, t: &Term, path: &str, outer: bool) {
        match t {
            Term::Zero => {}
            Term::Unit { index, .. } => self.unit(index, path),
            Term::Restricted { child, .. } => {
                self.restriction(t, path);
                self.node(child, format!("{path}/0"), outer);
                return;
            }
            Term::Convex { .. } => {
                self.convex(t, path, outer);
                self.children(t, path, outer);
                return;
            }
            Term::AlphaAverage { size, children } => {
                self.average_size(size, children.len(), path);
                self.successive(&supports(children), path, "alpha-successive");
            }
            Term::BetaAverage { size, children } => {
                self.average_size(size, children.len(), path);
                self.beta_children(children, path);
            }
            Term::TypeIAlpha { weight, children } => self.type_i(weight, children, path, true),
            Term::TypeIBeta { weight, children } => self.type_i(weight, children, path, false),
            Term::TypeII { children, weights } => self.type_ii(children, weights, path),
            Term::Half { .. } => {
                self.flag(path, "grammar-node", "the Tsirelson node (1/2)Σ is not a node of W");
                return;
            }
        }
        self.children(t, path, false);
    }

    fn unit(&mut self, index: &Nat, path: &str) {
        if index.is_zero() {
            self.flag(path, "type0", "indices start at 1");
        }
    }

    fn restriction(&mut self, t: &Term, path: &str) {
        if let Term::Restricted { interval, .. } = t {
            if interval.lo.is_zero() || interval.lo > interval.hi {
                self.flag(path, "interval", format!("[{}, {}] is not an interval of the naturals", interval.lo, interval.hi));
            }
        }
    }

    fn convex(&mut self, t: &Term, path: &str, outer: bool) {
        let Term::Convex { weights, children } = t else { return };
        if weights.len() != children.len() {
            self.flag(path, "convex-weights", format!("{} weights for {} children", weights.len(), children.len()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            self.flag(path, "convex-weights", "weights must be nonnegative");
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            self.flag(path, "convex-weights", format!("weights sum to {total}"));
        }
        if self.v.strict && !outer {
            self.flag(path, "convex-placement", "strict mode keeps convex combinations outside averages");
        }
    }

    fn average_size(&mut self, size: &Nat, d: usize, path: &str) {
        if size.is_zero() {
            self.flag(path, "average-size", "size must be positive");
        } else if d == 0 {
            self.flag(path, "average-size", "an average needs at least one child");
        } else if Nat::from(d) > *size {
            self.flag(path, "average-size", format!("{d} children exceed size {size}"));
        }
    }

    fn successive(&mut self, supports: &[Vec<Nat>], path: &str, clause: &str) {
        let mut prev: Option<(usize, &Nat)> = None;
        for (i, s) in supports.iter().enumerate() {
            let (Some(lo), Some(hi)) = (s.first(), s.last()) else { continue };
            if let Some((j, p)) = prev {
                if p >= lo {
                    self.flag(path, clause, format!("child {j} ends at {p}, child {i} starts at {lo}"));
                }
            }
            prev = Some((i, hi));
        }
    }

    fn beta_children(&mut self, children: &[Term], path: &str) {
        let mut sets: Vec<(usize, BTreeSet<Nat>)> = Vec::new();
        for (i, c) in children.iter().enumerate() {
            match weight_set(c) {
                Ok(ws) => {
                    for (j, other) in &sets {
                        if let Some(w) = ws.intersection(other).next() {
                            self.flag(path, "beta-disjoint-weights", format!("children {j} and {i} share weight {w}"));
                        }
                    }
                    sets.push((i, ws));
                }
                Err(_) => self.flag(path, "beta-children-type-II", format!("child {i} is {}", kind_name(c.peel().0))),
            }
        }
        if self.v.strict {
            self.successive(&supports(children), path, "beta-successive");
        }
    }

    fn type_i(&mut self, weight: &Nat, children: &[Term], path: &str, alpha: bool) {
        if weight.is_zero() {
            self.flag(path, "weight", "type I weight must be positive");
        }
        if children.is_empty() {
            self.flag(path, "type-I-children", "a type I functional needs at least one child");
            return;
        }
        let (clause, want) = if alpha { ("type-I-alpha-children", "α-average") } else { ("type-I-beta-children", "β-average") };
        for (i, c) in children.iter().enumerate() {
            let ok = if alpha { c.is_alpha_average() } else { c.is_beta_average() };
            if !ok {
                self.flag(path, clause, format!("child {i} is {}, not an {want}", kind_name(c.peel().0)));
            }
        }
        let supports = supports(children);
        self.successive(&supports, path, "successive");
        self.admissible(&supports, weight, path);

        let mut prev: Option<(&Nat, Option<&Nat>)> = None;
        for (i, c) in children.iter().enumerate() {
            let Some(s) = c.average_size() else {
                prev = None;
                continue;
            };
            if let Some((ps, pmax)) = prev {
                if s <= ps {
                    self.flag(path, "very-fast-growing", format!("size {s} of child {i} does not exceed size {ps}"));
                }
                if let Some(m) = pmax {
                    match self.v.config.vfg_bound(m) {
                        Ok(b) if *s <= b => self.flag(
                            path,
                            "very-fast-growing",
                            format!("size {s} of child {i} must exceed {b}, the bound after max supp {m}"),
                        ),
                        Ok(_) => {}
                        Err(e) => self.flag(path, "very-fast-growing", format!("bound after max supp {m}: {e}")),
                    }
                }
            }
            prev = Some((s, supports[i].last()));
        }
    }

    fn admissible(&mut self, supports: &[Vec<Nat>], level: &Nat, path: &str) {
        let mins: Vec<Nat> = supports.iter().filter_map(|s| s.first().cloned()).collect();
        if mins.is_empty() {
            return;
        }
        let n = u32::try_from(level).unwrap_or(u32::MAX);
        match schreier::is_member(&mins, n) {
            Ok(Some(_)) => {}
            Ok(None) => self.flag(path, "schreier-admissible", format!("minima {} are not in S_{level}", list(&mins))),
            Err(e) => self.flag(path, "schreier-admissible", e.to_string()),
        }
    }

    fn type_ii(&mut self, children: &[Term], weights: &[Nat], path: &str) {
        if children.is_empty() {
            self.flag(path, "type-II-children", "a type II functional needs at least one child");
            return;
        }
        if weights.len() != children.len() {
            self.flag(path, "type-II-weights", format!("{} weights for {} children", weights.len(), children.len()));
        }
        for (i, c) in children.iter().enumerate() {
            if !c.is_type_i_alpha() {
                self.flag(path, "type-II-children", format!("child {i} is {}, not of type I_α", kind_name(c.peel().0)));
            } else if let (Some(w), Some(recorded)) = (c.type_i_weight(), weights.get(i)) {
                if w != recorded {
                    self.flag(path, "type-II-weights", format!("child {i} has weight {w}, recorded {recorded}"));
                }
            }
        }
        let supports = supports(children);
        self.successive(&supports, path, "successive");
        self.admissible(&supports, &Nat::one(), path);

        let ws: Vec<Nat> = children.iter().zip(weights).filter_map(|(c, w)| c.type_i_weight().or(Some(w)).cloned()).collect();
        if ws.len() != children.len() {
            return;
        }
        let cfg = self.v.config;
        if !cfg.in_l1(&ws[0]) {
            self.flag(path, "special-first-weight", format!("w(f_1) = {} is not in L_1", ws[0]));
        }
        let mut history: Vec<(RationalVector, Nat)> = Vec::new();
        for j in 1..children.len() {
            let f = children[j - 1].coefficients();
            let max_supp = f.max_supp().cloned().unwrap_or_default();
            history.push((f, ws[j - 1].clone()));
            match self.v.registry {
                Some(reg) => match reg.lookup(&history) {
                    Some(w) if *w == ws[j] => {}
                    Some(w) => self.flag(path, "special-coding", format!("w(f_{}) = {} but σ assigns {w}", j + 1, ws[j])),
                    None => self.flag(path, "special-coding", format!("history before child {j} is not in the registry")),
                },
                None => {
                    if !cfg.in_l2(&ws[j]) {
                        self.flag(path, "special-coding", format!("w(f_{}) = {} is not in L_2", j + 1, ws[j]));
                    }
                    match cfg.sigma_bound(&ws[j - 1], &max_supp) {
                        Ok(b) if ws[j] <= b => {
                            self.flag(path, "special-coding", format!("w(f_{}) = {} must exceed {b}", j + 1, ws[j]))
                        }
                        Ok(_) => {}
                        Err(e) => self.flag(path, "special-coding", e.to_string()),
                    }
                }
            }
        }
    }
}

fn supports(children: &[Term]) -> Vec<Vec<Nat>> {
    children.iter().map(Term::support).collect()
}

fn list(xs: &[Nat]) -> String {
    let parts: Vec<String> = xs.iter().map(Nat::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn kind_name(t: &Term) -> &'static str {
    match t {
        Term::Zero => "zero",
        Term::Unit { .. } => "type0",
        Term::AlphaAverage { .. } => "alpha-average",
        Term::BetaAverage { .. } => "beta-average",
        Term::TypeIAlpha { .. } => "type-I-alpha",
        Term::TypeIBeta { .. } => "type-I-beta",
        Term::TypeII { .. } => "type-II",
        Term::Convex { .. } => "convex",
        Term::Restricted { .. } => "restricted",
        Term::Half { .. } => "half",
    }
}

fn grammar_name(g: Grammar) -> &'static str {
    match g {
        Grammar::W => "W",
        Grammar::WT => "W_T",
        Grammar::WTPrime => "W_T'",
        Grammar::WTriple => "W_|||",
    }
}

/// `ŵ(g)`: weights of the special sequence members whose range meets the
/// restriction interval of `g`.
pub fn weight_set(t: &Term) -> Result<BTreeSet<Nat>> {
    let (node, window, _) = t.peel();
    let Term::TypeII { children, weights } = node else {
        return Err(Error::NotTypeII);
    };
    let mut out = BTreeSet::new();
    for (i, c) in children.iter().enumerate() {
        let Some(w) = c.type_i_weight().or(weights.get(i)) else { continue };
        let meets = match (&window, c.range()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(iv), Some(r)) => iv.lo <= iv.hi && iv.meets(&r),
        };
        if meets {
            out.insert(w.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageKind {
    Alpha,
    Beta,
}

impl std::str::FromStr for AverageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" | "α" => Ok(AverageKind::Alpha),
            "beta" | "β" => Ok(AverageKind::Beta),
            _ => Err(Error::malformed(format!("unknown average kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualScore {
    #[serde(with = "crate::num::qstr")]
    pub value: Q,
    pub witness: FunctionalTerm,
}

/// A certified lower bound for `‖v‖_j^α` or `‖v‖_j^β` with its witness.
///
/// α: the average of `±e*_k` over the `j` largest entries among the first
/// `budget` candidates. β: an average of one-member special sequences
/// `±(1/2)(1/2^ℓ)e*_k` on the largest entry, one for each of the smallest
/// available weights `ℓ ∈ L_1`, which keeps the weight sets disjoint.
pub fn dual_norm_score(v: &RationalVector, j: &Nat, kind: AverageKind, config: SpaceConfig, budget: usize) -> Result<DualScore> {
    if j.is_zero() {
        return Err(Error::malformed("average size must be positive"));
    }
    let take = sat_usize(j).min(budget.max(1));
    let mut entries: Vec<(&Nat, &Q)> = v.iter().collect();
    entries.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()).then(a.0.cmp(b.0)));
    let children: Vec<Term> = match kind {
        AverageKind::Alpha => {
            let mut top: Vec<(&Nat, &Q)> = entries.into_iter().take(take).collect();
            top.sort_by(|a, b| a.0.cmp(b.0));
            top.into_iter().map(|(i, c)| Term::unit(i.clone(), Sign::of(c))).collect()
        }
        AverageKind::Beta => match entries.first() {
            None => vec![],
            Some(&(k, c)) => {
                let mut out = Vec::new();
                let mut bound = Nat::zero();
                while out.len() < take {
                    let Ok(l) = config.l1_above(&bound) else { break };
                    if l > Nat::from(super::term::MAX_EVAL_WEIGHT) {
                        break;
                    }
                    let leaf = Term::AlphaAverage { size: Nat::one(), children: vec![Term::unit(k.clone(), Sign::of(c))] };
                    let f1 = Term::TypeIAlpha { weight: l.clone(), children: vec![leaf] };
                    out.push(Term::TypeII { children: vec![f1], weights: vec![l.clone()] });
                    bound = l;
                }
                out
            }
        },
    };
    let root = if children.is_empty() {
        Term::Zero
    } else {
        match kind {
            AverageKind::Alpha => Term::AlphaAverage { size: j.clone(), children },
            AverageKind::Beta => Term::BetaAverage { size: j.clone(), children },
        }
    };
    let witness = FunctionalTerm::new(Grammar::W, root);
    let value = witness.eval(v);
    debug_assert!(value <= v.linf() * nat_q(&Nat::from(take)) / nat_q(j) || value.is_zero());
    Ok(DualScore { value, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q, qi};
    use crate::vectors::Interval;

    fn w(root: Term) -> FunctionalTerm {
        FunctionalTerm::new(Grammar::W, root)
    }

    fn avg(size: u64, idx: &[u64]) -> Term {
        Term::AlphaAverage { size: nat(size), children: idx.iter().map(|&i| Term::unit_u64(i)).collect() }
    }

    fn clauses(t: &FunctionalTerm) -> Vec<String> {
        validate(t, SpaceConfig::scaled()).into_iter().map(|v| v.clause).collect()
    }

    fn type_i(weight: u64, kids: Vec<Term>) -> Term {
        Term::TypeIAlpha { weight: nat(weight), children: kids }
    }

    #[test]
    fn leaves_and_their_negations_are_valid() {
        assert!(clauses(&w(Term::unit_u64(5))).is_empty());
        assert!(clauses(&w(Term::unit_u64(5).negate())).is_empty());
        assert_eq!(clauses(&w(Term::unit_u64(0))), vec!["type0"]);
    }

    #[test]
    fn very_fast_growth_is_enforced() {
        // scaled bound after max supp 3 is 3 + 1 + 1
        let good = type_i(1, vec![avg(2, &[3]), avg(6, &[4])]);
        assert!(clauses(&w(good)).is_empty());
        let bad = type_i(1, vec![avg(2, &[3]), avg(5, &[4])]);
        assert_eq!(clauses(&w(bad)), vec!["very-fast-growing"]);
    }

    #[test]
    fn admissibility_and_successiveness() {
        let t = type_i(1, vec![avg(1, &[2]), avg(5, &[3]), avg(9, &[7])]);
        assert_eq!(clauses(&w(t)), vec!["schreier-admissible"]);
        let t = type_i(1, vec![avg(1, &[4]), avg(6, &[3])]);
        assert!(clauses(&w(t)).contains(&"successive".to_string()));
    }

    #[test]
    fn type_ii_needs_coding() {
        let cfg = SpaceConfig::scaled();
        let f1 = type_i(4, vec![avg(1, &[3])]);
        let mut reg = SigmaRegistry::new(cfg);
        let w2 = reg.assign(&[(f1.coefficients(), nat(4))]).unwrap();
        let f2 = Term::TypeIAlpha { weight: w2.clone(), children: vec![avg(1, &[20])] };
        let g = w(Term::TypeII { children: vec![f1.clone(), f2], weights: vec![nat(4), w2.clone()] });
        assert!(Validator::new(cfg).with_registry(&reg).validate(&g).is_empty());
        assert!(validate(&g, cfg).is_empty());

        let f2 = type_i(14, vec![avg(1, &[20])]);
        let g = w(Term::TypeII { children: vec![f1.clone(), f2], weights: vec![nat(4), nat(14)] });
        let v = Validator::new(cfg).with_registry(&reg).validate(&g);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause, "special-coding");

        let f2 = type_i(6, vec![avg(1, &[20])]);
        let g = w(Term::TypeII { children: vec![f1, f2], weights: vec![nat(4), nat(6)] });
        assert_eq!(clauses(&g), vec!["special-coding"]);
    }

    #[test]
    fn weight_sets_follow_the_restriction() {
        let f1 = type_i(4, vec![avg(1, &[3])]);
        let f2 = type_i(10, vec![avg(1, &[20])]);
        let g = Term::TypeII { children: vec![f1, f2], weights: vec![nat(4), nat(10)] };
        assert_eq!(weight_set(&g).unwrap(), [nat(4), nat(10)].into_iter().collect());
        let r = g.clone().restrict(Interval::new(nat(10), nat(30)));
        assert_eq!(weight_set(&r).unwrap(), [nat(10)].into_iter().collect());
        assert_eq!(weight_set(&Term::unit_u64(3)).unwrap_err(), Error::NotTypeII);

        let b = Term::BetaAverage { size: nat(2), children: vec![g.clone(), r] };
        assert_eq!(clauses(&w(b)), vec!["beta-disjoint-weights"]);
        let b = Term::BetaAverage { size: nat(2), children: vec![g, Term::unit_u64(40)] };
        assert_eq!(clauses(&w(b)), vec!["beta-children-type-II"]);
    }

    #[test]
    fn convex_weights_and_strict_placement() {
        let c = Term::Convex { weights: vec![q(1, 3), q(2, 3)], children: vec![Term::unit_u64(2), Term::unit_u64(9)] };
        assert!(clauses(&w(c.clone())).is_empty());
        let inside = w(type_i(1, vec![Term::AlphaAverage { size: nat(1), children: vec![c.clone()] }]));
        assert!(clauses(&inside).is_empty());
        let strict = Validator::new(SpaceConfig::scaled()).strict(true);
        assert_eq!(strict.validate(&inside)[0].clause, "convex-placement");
        assert!(strict.validate(&w(c)).is_empty());
        let bad = Term::Convex { weights: vec![q(1, 3), q(1, 3)], children: vec![Term::unit_u64(2), Term::unit_u64(9)] };
        assert_eq!(clauses(&w(bad)), vec!["convex-weights"]);
    }

    #[test]
    fn tsirelson_grammars() {
        let half = Term::Half { children: vec![Term::unit_u64(2), Term::unit_u64(3)] };
        assert!(clauses(&FunctionalTerm::new(Grammar::WT, half.clone())).is_empty());
        let wide = Term::Half { children: vec![Term::unit_u64(2), Term::unit_u64(3), Term::unit_u64(4)] };
        assert_eq!(clauses(&FunctionalTerm::new(Grammar::WT, wide.clone())), vec!["admissible"]);
        assert!(clauses(&FunctionalTerm::new(Grammar::WTriple, wide)).is_empty());
        assert_eq!(clauses(&w(half)), vec!["grammar-node"]);
        let c = Term::Convex { weights: vec![qi(1)], children: vec![Term::unit_u64(2)] };
        assert_eq!(clauses(&FunctionalTerm::new(Grammar::WTPrime, c)), vec!["grammar-node"]);
    }

    #[test]
    fn dual_scores() {
        let cfg = SpaceConfig::scaled();
        let e5 = RationalVector::from_u64(&[(5, qi(1))]);
        assert_eq!(dual_norm_score(&e5, &nat(1), AverageKind::Alpha, cfg, 64).unwrap().value, qi(1));
        let ones = RationalVector::from_u64(&[(3, qi(1)), (4, qi(1)), (5, qi(-1))]);
        let s = dual_norm_score(&ones, &nat(3), AverageKind::Alpha, cfg, 64).unwrap();
        assert_eq!(s.value, qi(1));
        assert!(validate(&s.witness, cfg).is_empty());
        let s = dual_norm_score(&ones, &nat(6), AverageKind::Alpha, cfg, 64).unwrap();
        assert_eq!(s.value, q(1, 2));
        let b = dual_norm_score(&ones, &nat(2), AverageKind::Beta, cfg, 64).unwrap();
        assert!(validate(&b.witness, cfg).is_empty());
        // (1/2)(2^-5 + 2^-9)
        assert_eq!(b.value, q(17, 1024));
    }
}
