use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::num::{nat_q, natstr, natstr_vec, qstr_vec, Nat, Q};
use crate::vectors::{Interval, RationalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(x: &Q) -> Sign {
        if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn apply(self, x: Q) -> Q {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Which norming set a term claims to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grammar {
    #[serde(rename = "W")]
    W,
    #[serde(rename = "W_T")]
    WT,
    #[serde(rename = "W_T'")]
    WTPrime,
    #[serde(rename = "W_|||")]
    WTriple,
}

/// A node of a functional tree.
///
/// `Half` is the Tsirelson node `(1/2) sum f_j` used by the `W_T`, `W_T'` and
/// `W_|||` grammars. `Zero` is the zero functional.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Term {
    Zero,
    #[serde(rename = "type0")]
    Unit {
        #[serde(with = "natstr")]
        index: Nat,
        sign: Sign,
    },
    AlphaAverage {
        #[serde(with = "natstr")]
        size: Nat,
        children: Vec<Term>,
    },
    BetaAverage {
        #[serde(with = "natstr")]
        size: Nat,
        children: Vec<Term>,
    },
    #[serde(rename = "type-I-alpha")]
    TypeIAlpha {
        #[serde(with = "natstr")]
        weight: Nat,
        children: Vec<Term>,
    },
    #[serde(rename = "type-I-beta")]
    TypeIBeta {
        #[serde(with = "natstr")]
        weight: Nat,
        children: Vec<Term>,
    },
    #[serde(rename = "type-II")]
    TypeII {
        children: Vec<Term>,
        #[serde(with = "natstr_vec")]
        weights: Vec<Nat>,
    },
    Convex {
        #[serde(with = "qstr_vec")]
        weights: Vec<Q>,
        children: Vec<Term>,
    },
    Restricted {
        interval: Interval,
        sign: Sign,
        child: Box<Term>,
    },
    Half {
        children: Vec<Term>,
    },
}

/// A functional tree tagged with the grammar it is checked against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalTerm {
    pub grammar: Grammar,
    pub root: Term,
}

/// Weights beyond this many bits cannot be evaluated exactly in memory.
pub const MAX_EVAL_WEIGHT: u64 = 1 << 24;

fn pow2_inv_nat(w: &Nat) -> Q {
    let e = w.to_u64().filter(|e| *e <= MAX_EVAL_WEIGHT).expect("weight too large to evaluate exactly");
    Q::new(BigInt::one(), BigInt::one() << e)
}

impl Term {
    pub fn unit(index: Nat, sign: Sign) -> Term {
        Term::Unit { index, sign }
    }

    pub fn unit_u64(index: u64) -> Term {
        Term::Unit { index: Nat::from(index), sign: Sign::Plus }
    }

    pub fn negate(self) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Unit { index, sign } => Term::Unit { index, sign: sign.flip() },
            Term::Restricted { interval, sign, child } => Term::Restricted { interval, sign: sign.flip(), child },
            other => {
                let iv = Interval::new(Nat::one(), other.max_supp().unwrap_or_else(Nat::one));
                Term::Restricted { interval: iv, sign: Sign::Minus, child: Box::new(other) }
            }
        }
    }

    pub fn restrict(self, interval: Interval) -> Term {
        Term::Restricted { interval, sign: Sign::Plus, child: Box::new(self) }
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::AlphaAverage { children, .. }
            | Term::BetaAverage { children, .. }
            | Term::TypeIAlpha { children, .. }
            | Term::TypeIBeta { children, .. }
            | Term::TypeII { children, .. }
            | Term::Convex { children, .. }
            | Term::Half { children } => children,
            Term::Restricted { child, .. } => std::slice::from_ref(child),
            Term::Zero | Term::Unit { .. } => &[],
        }
    }

    /// Scalar multiplying the children's sum at this node (convex nodes excluded).
    fn factor(&self) -> Q {
        match self {
            Term::AlphaAverage { size, .. } | Term::BetaAverage { size, .. } => Q::one() / nat_q(size),
            Term::TypeIAlpha { weight, .. } | Term::TypeIBeta { weight, .. } => pow2_inv_nat(weight),
            Term::TypeII { .. } | Term::Half { .. } => Q::new(1.into(), 2.into()),
            _ => Q::one(),
        }
    }

    /// `f(v)`, exactly.
    pub fn eval(&self, v: &RationalVector) -> Q {
        self.eval_in(v, None)
    }

    fn eval_in(&self, v: &RationalVector, window: Option<&Interval>) -> Q {
        match self {
            Term::Zero => Q::zero(),
            Term::Unit { index, sign } => {
                if window.is_none_or(|w| w.contains(index)) {
                    sign.apply(v.get(index))
                } else {
                    Q::zero()
                }
            }
            Term::Restricted { interval, sign, child } => {
                let w = match window {
                    None => Some(interval.clone()),
                    Some(w) => {
                        let lo = w.lo.clone().max(interval.lo.clone());
                        let hi = w.hi.clone().min(interval.hi.clone());
                        if lo > hi {
                            return Q::zero();
                        }
                        Some(Interval::new(lo, hi))
                    }
                };
                sign.apply(child.eval_in(v, w.as_ref()))
            }
            Term::Convex { weights, children } => weights
                .iter()
                .zip(children)
                .fold(Q::zero(), |a, (w, c)| if w.is_zero() { a } else { a + w * c.eval_in(v, window) }),
            _ => {
                let s = self.children().iter().fold(Q::zero(), |a, c| a + c.eval_in(v, window));
                if s.is_zero() {
                    s
                } else {
                    s * self.factor()
                }
            }
        }
    }

    /// The functional as a finitely supported coefficient vector.
    pub fn coefficients(&self) -> RationalVector {
        let mut out = RationalVector::new();
        self.collect(&Q::one(), None, &mut out);
        out
    }

    fn collect(&self, scale: &Q, window: Option<&Interval>, out: &mut RationalVector) {
        match self {
            Term::Zero => {}
            Term::Unit { index, sign } => {
                if window.is_none_or(|w| w.contains(index)) {
                    let c = out.get(index) + sign.apply(scale.clone());
                    out.set(index.clone(), c);
                }
            }
            Term::Restricted { interval, sign, child } => {
                let w = match window {
                    None => interval.clone(),
                    Some(w) => {
                        let lo = w.lo.clone().max(interval.lo.clone());
                        let hi = w.hi.clone().min(interval.hi.clone());
                        if lo > hi {
                            return;
                        }
                        Interval::new(lo, hi)
                    }
                };
                child.collect(&sign.apply(scale.clone()), Some(&w), out);
            }
            Term::Convex { weights, children } => {
                for (w, c) in weights.iter().zip(children) {
                    if !w.is_zero() {
                        c.collect(&(scale * w), window, out);
                    }
                }
            }
            _ => {
                let s = scale * self.factor();
                for c in self.children() {
                    c.collect(&s, window, out);
                }
            }
        }
    }

    /// Leaf indices that survive the restrictions above them, ascending.
    ///
    /// This is the syntactic support; it can strictly contain the support of
    /// the coefficient vector when convex weights cancel.
    pub fn support(&self) -> Vec<Nat> {
        let mut out = Vec::new();
        self.leaves(None, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn leaves(&self, window: Option<&Interval>, out: &mut Vec<Nat>) {
        match self {
            Term::Zero => {}
            Term::Unit { index, .. } => {
                if window.is_none_or(|w| w.contains(index)) {
                    out.push(index.clone());
                }
            }
            Term::Restricted { interval, child, .. } => {
                let w = match window {
                    None => interval.clone(),
                    Some(w) => {
                        let lo = w.lo.clone().max(interval.lo.clone());
                        let hi = w.hi.clone().min(interval.hi.clone());
                        if lo > hi {
                            return;
                        }
                        Interval::new(lo, hi)
                    }
                };
                child.leaves(Some(&w), out);
            }
            Term::Convex { weights, children } => {
                for (w, c) in weights.iter().zip(children) {
                    if !w.is_zero() {
                        c.leaves(window, out);
                    }
                }
            }
            _ => {
                for c in self.children() {
                    c.leaves(window, out);
                }
            }
        }
    }

    pub fn min_supp(&self) -> Option<Nat> {
        self.support().into_iter().next()
    }

    pub fn max_supp(&self) -> Option<Nat> {
        self.support().into_iter().next_back()
    }

    pub fn range(&self) -> Option<Interval> {
        let s = self.support();
        Some(Interval::new(s.first()?.clone(), s.last()?.clone()))
    }

    /// Peels restrictions: the underlying node together with the accumulated
    /// interval and sign.
    pub fn peel(&self) -> (&Term, Option<Interval>, Sign) {
        let mut t = self;
        let mut window: Option<Interval> = None;
        let mut sign = Sign::Plus;
        while let Term::Restricted { interval, sign: s, child } = t {
            window = Some(match window {
                None => interval.clone(),
                Some(w) => Interval::new(w.lo.max(interval.lo.clone()), w.hi.min(interval.hi.clone())),
            });
            sign = sign.times(*s);
            t = child;
        }
        (t, window, sign)
    }

    /// Size `s(f)` of an α- or β-average, looking through restrictions.
    pub fn average_size(&self) -> Option<&Nat> {
        match self.peel().0 {
            Term::AlphaAverage { size, .. } | Term::BetaAverage { size, .. } => Some(size),
            _ => None,
        }
    }

    pub fn is_alpha_average(&self) -> bool {
        matches!(self.peel().0, Term::AlphaAverage { .. })
    }

    pub fn is_beta_average(&self) -> bool {
        matches!(self.peel().0, Term::BetaAverage { .. })
    }

    /// Weight `w(f)` of a type I functional, looking through restrictions.
    pub fn type_i_weight(&self) -> Option<&Nat> {
        match self.peel().0 {
            Term::TypeIAlpha { weight, .. } | Term::TypeIBeta { weight, .. } => Some(weight),
            _ => None,
        }
    }

    pub fn is_type_i_alpha(&self) -> bool {
        matches!(self.peel().0, Term::TypeIAlpha { .. })
    }

    pub fn is_type_ii(&self) -> bool {
        matches!(self.peel().0, Term::TypeII { .. })
    }

    /// Number of nodes, for budgets and reports.
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(Term::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Term::depth).max().unwrap_or(0)
    }
}

impl FunctionalTerm {
    pub fn new(grammar: Grammar, root: Term) -> Self {
        FunctionalTerm { grammar, root }
    }

    pub fn eval(&self, v: &RationalVector) -> Q {
        self.root.eval(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q, qi};

    fn avg(size: u64, idx: &[u64]) -> Term {
        Term::AlphaAverage { size: nat(size), children: idx.iter().map(|&i| Term::unit_u64(i)).collect() }
    }

    #[test]
    fn evaluates_nested_nodes_exactly() {
        let v = RationalVector::from_u64(&[(2, qi(1)), (3, qi(1)), (5, qi(4))]);
        let f = Term::TypeIAlpha { weight: nat(1), children: vec![avg(3, &[2, 3]), avg(1, &[5])] };
        // (1/2)((1+1)/3 + 4)
        assert_eq!(f.eval(&v), q(7, 3));
        let c = f.coefficients();
        assert_eq!(c.dot(&v), f.eval(&v));
    }

    #[test]
    fn restriction_and_sign_act_on_the_vector() {
        let v = RationalVector::from_u64(&[(1, qi(2)), (4, qi(3)), (9, qi(5))]);
        let f = Term::Half { children: vec![Term::unit_u64(1), Term::unit_u64(4), Term::unit_u64(9)] };
        let r = f.clone().restrict(Interval::new(nat(2), nat(8))).negate();
        assert_eq!(r.eval(&v), q(-3, 2));
        assert_eq!(r.support(), vec![nat(4)]);
        assert_eq!(r.coefficients().dot(&v), r.eval(&v));
    }

    #[test]
    fn json_shape_is_tagged() {
        let f = Term::Convex { weights: vec![q(1, 3), q(2, 3)], children: vec![Term::unit_u64(2), Term::Zero] };
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains(r#""kind":"convex""#) && s.contains(r#""1/3""#));
        let back: Term = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
