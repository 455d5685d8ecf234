//! Tsirelson analyses of type I functionals and tree analyses of terms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{Sign, Term};
use crate::num::{nat_q, q, qstr_vec, Nat, Q};
use crate::schreier;
use crate::vectors::Interval;

/// Re-applies a peeled restriction and sign to a successor.
pub(crate) fn wrap(t: Term, window: &Option<Interval>, sign: Sign) -> Term {
    match (window, sign) {
        (None, Sign::Plus) => t,
        (None, Sign::Minus) => t.negate(),
        (Some(iv), s) => Term::Restricted { interval: iv.clone(), sign: s, child: Box::new(t) },
    }
}

fn empty_window(window: &Option<Interval>) -> bool {
    window.as_ref().is_some_and(|w| w.lo > w.hi)
}

/// `{g_i}` with `f = (1/2) Σ g_i`, each `g_i = (1/2^{n-1}) Σ_{j∈F_i} f_j`.
///
/// The groups `F_i` come from the greedy decomposition of the children's
/// minima as an `S_n` set. Restrictions and signs on `t` are carried onto
/// every part, so the identity holds for restricted functionals too.
pub fn tsirelson_analysis(t: &Term) -> Result<Vec<Term>> {
    let (node, window, sign) = t.peel();
    let (weight, children, alpha) = match node {
        Term::TypeIAlpha { weight, children } => (weight, children, true),
        Term::TypeIBeta { weight, children } => (weight, children, false),
        _ => return Err(Error::NotTypeI),
    };
    if weight.is_zero() {
        return Err(Error::malformed("type I weight must be positive"));
    }
    let mins: Vec<Option<Nat>> = children.iter().map(Term::min_supp).collect();
    let present: Vec<Nat> = mins.iter().flatten().cloned().collect();
    let n = u32::try_from(weight).unwrap_or(u32::MAX);
    let tree = schreier::is_member(&present, n)?
        .ok_or_else(|| Error::malformed("children of the type I functional are not S_n-admissible"))?;
    // Group boundaries as counts of nonempty children; n = 1 groups are singletons.
    let mut sizes: Vec<usize> = tree.children.iter().map(|c| c.set.len()).collect();
    if sizes.is_empty() {
        sizes.push(0);
    }
    let mut groups: Vec<Vec<Term>> = vec![Vec::new(); sizes.len()];
    let mut g = 0;
    let mut used = 0;
    for (c, m) in children.iter().zip(&mins) {
        if m.is_some() {
            if used == sizes[g] && g + 1 < sizes.len() {
                g += 1;
                used = 0;
            }
            used += 1;
        }
        groups[g].push(c.clone());
    }
    let lower = weight - Nat::one();
    Ok(groups
        .into_iter()
        .map(|group| {
            let part = if lower.is_zero() {
                debug_assert!(group.iter().filter(|c| c.min_supp().is_some()).count() <= 1);
                if group.len() == 1 {
                    group.into_iter().next().expect("one child")
                } else {
                    let mut weights = vec![Q::zero(); group.len()];
                    weights[0] = Q::one();
                    Term::Convex { weights, children: reorder_nonempty_first(group) }
                }
            } else if alpha {
                Term::TypeIAlpha { weight: lower.clone(), children: group }
            } else {
                Term::TypeIBeta { weight: lower.clone(), children: group }
            };
            wrap(part, &window, sign)
        })
        .collect())
}

/// Puts the one child with nonempty support first; the rest are zero functionals.
fn reorder_nonempty_first(mut group: Vec<Term>) -> Vec<Term> {
    if let Some(i) = group.iter().position(|c| c.min_supp().is_some()) {
        group.swap(0, i);
    }
    group
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Zero,
    #[serde(rename = "type0")]
    Type0,
    #[serde(rename = "type-I-alpha")]
    TypeIAlpha,
    #[serde(rename = "type-I-beta")]
    TypeIBeta,
    #[serde(rename = "type-II")]
    TypeII,
    /// `(1/2) Σ` node of the Tsirelson grammars.
    Half,
    /// Convex combinations, including α- and β-averages.
    Convex,
}

impl NodeKind {
    pub fn is_convex(self) -> bool {
        self == NodeKind::Convex
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub term: Term,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub depth: usize,
    pub children: Vec<usize>,
    /// `f_λ = Σ c_μ f_μ` over the successors; `1/2` each for non-convex nodes.
    #[serde(with = "qstr_vec")]
    pub coefficients: Vec<Q>,
}

/// A tree analysis `{f_λ}`; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeAnalysis {
    pub nodes: Vec<TreeNode>,
}

/// Immediate successors of a term in its tree analysis.
pub fn expand(t: &Term) -> Result<(NodeKind, Vec<(Q, Term)>)> {
    let (node, window, sign) = t.peel();
    if empty_window(&window) {
        return Ok((NodeKind::Zero, vec![]));
    }
    let half = q(1, 2);
    let each = |children: &[Term], c: &Q| -> Vec<(Q, Term)> {
        children.iter().map(|f| (c.clone(), wrap(f.clone(), &window, sign))).collect()
    };
    Ok(match node {
        Term::Zero => (NodeKind::Zero, vec![]),
        Term::Unit { .. } => (NodeKind::Type0, vec![]),
        Term::TypeIAlpha { .. } | Term::TypeIBeta { .. } => {
            let kind = if matches!(node, Term::TypeIAlpha { .. }) { NodeKind::TypeIAlpha } else { NodeKind::TypeIBeta };
            (kind, tsirelson_analysis(t)?.into_iter().map(|g| (half.clone(), g)).collect())
        }
        Term::TypeII { children, .. } => (NodeKind::TypeII, each(children, &half)),
        Term::Half { children } => (NodeKind::Half, each(children, &half)),
        Term::AlphaAverage { size, children } | Term::BetaAverage { size, children } => {
            if size.is_zero() {
                return Err(Error::malformed("average of size 0"));
            }
            (NodeKind::Convex, each(children, &(Q::one() / nat_q(size))))
        }
        Term::Convex { weights, children } => (
            NodeKind::Convex,
            weights.iter().zip(children).map(|(w, f)| (w.clone(), wrap(f.clone(), &window, sign))).collect(),
        ),
        Term::Restricted { .. } => unreachable!("peel removes restrictions"),
    })
}

pub fn tree_analysis(t: &Term) -> Result<TreeAnalysis> {
    let mut nodes = vec![TreeNode { term: t.clone(), kind: NodeKind::Zero, parent: None, depth: 0, children: vec![], coefficients: vec![] }];
    let mut i = 0;
    while i < nodes.len() {
        let (kind, succ) = expand(&nodes[i].term)?;
        nodes[i].kind = kind;
        let depth = nodes[i].depth + 1;
        for (c, f) in succ {
            let id = nodes.len();
            nodes.push(TreeNode { term: f, kind: NodeKind::Zero, parent: Some(i), depth, children: vec![], coefficients: vec![] });
            nodes[i].children.push(id);
            nodes[i].coefficients.push(c);
        }
        i += 1;
    }
    Ok(TreeAnalysis { nodes })
}

impl TreeAnalysis {
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Checks the structural facts of a tree analysis: maximal nodes are
    /// type 0 or zero, non-convex inner nodes are `(1/2)Σ` of `S_1`-admissible
    /// successors, and every node equals the combination of its successors.
    pub fn check(&self, probes: &[crate::vectors::RationalVector]) -> std::result::Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.children.is_empty() {
                if !matches!(n.kind, NodeKind::Type0 | NodeKind::Zero | NodeKind::Convex) {
                    return Err(format!("node {i} is maximal but of kind {:?}", n.kind));
                }
                continue;
            }
            let kids: Vec<&Term> = n.children.iter().map(|&c| &self.nodes[c].term).collect();
            if !n.kind.is_convex() {
                if n.coefficients.iter().any(|c| *c != q(1, 2)) {
                    return Err(format!("node {i} is not (1/2)Σ of its successors"));
                }
                let mut mins: Vec<Nat> = Vec::new();
                let mut last: Option<Nat> = None;
                for k in &kids {
                    let s = k.support();
                    let (Some(lo), Some(hi)) = (s.first(), s.last()) else { continue };
                    if last.as_ref().is_some_and(|l| l >= lo) {
                        return Err(format!("successors of node {i} are not successive"));
                    }
                    mins.push(lo.clone());
                    last = Some(hi.clone());
                }
                if let Some(first) = mins.first() {
                    if Nat::from(mins.len()) > *first {
                        return Err(format!("successors of node {i} are not S_1-admissible"));
                    }
                }
            }
            for v in probes {
                let lhs = n.term.eval(v);
                let rhs: Q = kids.iter().zip(&n.coefficients).map(|(k, c)| c * k.eval(v)).sum();
                if lhs != rhs {
                    return Err(format!("node {i} evaluates to {lhs}, its successors give {rhs}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, qi};
    use crate::vectors::RationalVector;

    fn avg(size: u64, idx: &[u64]) -> Term {
        Term::AlphaAverage { size: nat(size), children: idx.iter().map(|&i| Term::unit_u64(i)).collect() }
    }

    fn probe() -> RationalVector {
        RationalVector::from_u64(&(1..40).map(|i| (i, q(((i * 7) % 11) as i64 - 5, 1 + (i % 3) as i64))).collect::<Vec<_>>())
    }

    #[test]
    fn weight_one_parts_are_the_children() {
        let f = Term::TypeIAlpha { weight: nat(1), children: vec![avg(1, &[3]), avg(6, &[4, 5])] };
        let parts = tsirelson_analysis(&f).unwrap();
        assert_eq!(parts, vec![avg(1, &[3]), avg(6, &[4, 5])]);
    }

    #[test]
    fn weight_two_parts_drop_a_level_and_reconstruct() {
        // minima {2, 3, 9, 20}: S_2 splits as {2,3} then {9, 20}
        let f = Term::TypeIAlpha { weight: nat(2), children: vec![avg(1, &[2]), avg(5, &[3]), avg(9, &[9]), avg(12, &[20])] };
        let parts = tsirelson_analysis(&f).unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.type_i_weight(), Some(&nat(1)));
        }
        let v = probe();
        let sum: Q = parts.iter().map(|p| p.eval(&v)).sum();
        assert_eq!(f.eval(&v), sum / qi(2));
        let r = f.clone().restrict(Interval::new(nat(3), nat(15))).negate();
        let parts = tsirelson_analysis(&r).unwrap();
        let sum: Q = parts.iter().map(|p| p.eval(&v)).sum();
        assert_eq!(r.eval(&v), sum / qi(2));
        assert_eq!(tsirelson_analysis(&avg(1, &[2])).unwrap_err(), Error::NotTypeI);
    }

    #[test]
    fn trees_expand_every_kind() {
        assert_eq!(tree_analysis(&Term::unit_u64(4)).unwrap().nodes.len(), 1);
        let f1 = Term::TypeIAlpha { weight: nat(4), children: vec![avg(1, &[5])] };
        let f2 = Term::TypeIAlpha { weight: nat(10), children: vec![avg(1, &[30])] };
        let g = Term::TypeII { children: vec![f1, f2], weights: vec![nat(4), nat(10)] };
        let tree = tree_analysis(&g).unwrap();
        assert_eq!(tree.nodes[0].children.len(), 2);
        assert_eq!(tree.nodes[0].kind, NodeKind::TypeII);
        tree.check(&[probe()]).unwrap();
        // the weight 10 member unfolds through ten levels, then its average and leaf
        assert_eq!(tree.height(), 12);
    }
}
