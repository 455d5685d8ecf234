//! Schreier families `S_n`: membership, admissibility and weighted maxima.
//!
//! `S_0` holds the empty set and singletons; `S_{n+1}` holds unions
//! `F_1 < ... < F_k` of sets in `S_n` with `k <= min F_1`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{natstr_vec, sat_usize, Nat, Q};
use crate::vectors::RationalVector;

/// Decomposition proving `set ∈ S_level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierTree {
    pub level: u32,
    #[serde(with = "natstr_vec")]
    pub set: Vec<Nat>,
    pub children: Vec<SchreierTree>,
}

impl SchreierTree {
    /// Re-checks the tree against the recursive definition.
    pub fn verify(&self) -> bool {
        if self.set.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.level == 0 {
            return self.set.len() <= 1 && self.children.is_empty();
        }
        if self.set.is_empty() {
            return true;
        }
        let flat: Vec<Nat> = self.children.iter().flat_map(|c| c.set.iter().cloned()).collect();
        flat == self.set
            && self.children.len() <= sat_usize(&self.set[0])
            && self.children.iter().all(|c| c.level + 1 == self.level && !c.set.is_empty() && c.verify())
    }
}

fn sorted_distinct(set: &[Nat]) -> Result<Vec<Nat>> {
    let mut s = set.to_vec();
    s.sort();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::malformed("set has repeated elements"));
    }
    if s.first().is_some_and(|x| x.is_zero()) {
        return Err(Error::malformed("set elements start at 1"));
    }
    Ok(s)
}

/// Length of the longest prefix of `s[start..]` lying in `S_level`.
///
/// Greedy: at each level take the longest admissible piece, as many times as
/// the first element allows.
fn max_prefix(s: &[Nat], start: usize, level: u32) -> usize {
    if start >= s.len() {
        return 0;
    }
    if level == 0 {
        return 1;
    }
    let cap = sat_usize(&s[start]);
    let mut j = start;
    let mut pieces = 0;
    while pieces < cap && j < s.len() {
        j += max_prefix(s, j, level - 1);
        pieces += 1;
    }
    j - start
}

fn greedy_tree(s: &[Nat], level: u32) -> SchreierTree {
    if level == 0 || s.is_empty() {
        return SchreierTree { level, set: s.to_vec(), children: vec![] };
    }
    let mut children = Vec::new();
    let mut j = 0;
    while j < s.len() {
        let len = max_prefix(s, j, level - 1);
        children.push(greedy_tree(&s[j..j + len], level - 1));
        j += len;
    }
    SchreierTree { level, set: s.to_vec(), children }
}

/// Levels beyond this add no new subsets of a set with `len` elements: each
/// level that changes some greedy prefix length grows it, and those lengths
/// are bounded by `len`.
fn saturated_level(n: u32, len: usize) -> u32 {
    let cap = (len as u64).saturating_mul(len as u64).saturating_add(1);
    n.min(u32::try_from(cap).unwrap_or(u32::MAX))
}

/// Decides `F ∈ S_n`. On success returns the greedy left-maximal decomposition.
pub fn is_member(set: &[Nat], n: u32) -> Result<Option<SchreierTree>> {
    let s = sorted_distinct(set)?;
    let n = saturated_level(n, s.len());
    if max_prefix(&s, 0, n) == s.len() {
        Ok(Some(greedy_tree(&s, n)))
    } else {
        Ok(None)
    }
}

/// Decides whether successive blocks are `S_n`-admissible: `{min supp x_i} ∈ S_n`.
pub fn is_admissible(blocks: &[RationalVector], n: u32) -> Result<bool> {
    crate::vectors::validate_block_sequence(blocks)?;
    let mins: Vec<Nat> = blocks.iter().map(|b| b.min_supp().expect("nonempty").clone()).collect();
    Ok(is_member(&mins, n)?.is_some())
}

/// Result of a weighted Schreier maximisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierSum {
    pub value: Q,
    pub witness: Vec<Nat>,
}

/// Support sizes handled by the general window dynamic program (levels >= 2).
pub const MAXSUM_WINDOW_CAP: usize = 48;

/// `max { sum_{i∈G} |c_i| : G ∈ S_n }` with a witness `G`.
///
/// Level 0 is the largest entry and level 1 the best "top `min G`" suffix,
/// both in near-linear time. Higher levels use a memoized dynamic program over
/// windows of the support and refuse supports above [`MAXSUM_WINDOW_CAP`],
/// except at level 2 when `|c_i|` is nonincreasing along the support.
pub fn max_schreier_sum(weights: &RationalVector, n: u32) -> Result<SchreierSum> {
    let pts: Vec<(Nat, Q)> = weights.iter().map(|(i, c)| (i.clone(), c.abs())).collect();
    if pts.is_empty() {
        return Ok(SchreierSum { value: Q::zero(), witness: vec![] });
    }
    match n {
        0 => {
            let (i, c) = pts.iter().fold(&pts[0], |b, p| if p.1 > b.1 { p } else { b });
            Ok(SchreierSum { value: c.clone(), witness: vec![i.clone()] })
        }
        1 => Ok(level_one(&pts)),
        2 if pts.len() > MAXSUM_WINDOW_CAP && pts.windows(2).all(|w| w[0].1 >= w[1].1) => Ok(level_two_monotone(&pts)),
        _ => {
            if pts.len() > MAXSUM_WINDOW_CAP {
                return Err(Error::SupportTooLarge { size: pts.len(), cap: MAXSUM_WINDOW_CAP });
            }
            Ok(WindowDp::new(&pts).solve(saturated_level(n, pts.len())))
        }
    }
}

/// Fenwick tree over weight ranks storing counts and sums.
struct RankTree {
    count: Vec<usize>,
    sum: Vec<Q>,
}

impl RankTree {
    fn new(n: usize) -> Self {
        RankTree { count: vec![0; n + 1], sum: vec![Q::zero(); n + 1] }
    }

    fn insert(&mut self, rank: usize, w: &Q) {
        let mut i = rank + 1;
        while i < self.count.len() {
            self.count[i] += 1;
            self.sum[i] += w;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of the `k` smallest ranks present (ranks sort by decreasing weight).
    fn top_sum(&self, k: usize) -> Q {
        let n = self.count.len() - 1;
        let mut pos = 0;
        let mut left = k;
        let mut acc = Q::zero();
        let mut step = n.next_power_of_two();
        while step > 0 {
            let nxt = pos + step;
            if nxt <= n && self.count[nxt] <= left {
                left -= self.count[nxt];
                acc += &self.sum[nxt];
                pos = nxt;
            }
            step >>= 1;
        }
        acc
    }
}

fn level_one(pts: &[(Nat, Q)]) -> SchreierSum {
    let m = pts.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pts[b].1.cmp(&pts[a].1).then(a.cmp(&b)));
    let mut rank = vec![0; m];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut tree = RankTree::new(m);
    let mut best = (Q::zero(), 0usize);
    let mut first = true;
    for a in (0..m).rev() {
        tree.insert(rank[a], &pts[a].1);
        let cap = sat_usize(&pts[a].0).min(m - a);
        let v = tree.top_sum(cap);
        if first || v >= best.0 {
            best = (v, a);
            first = false;
        }
    }
    let a = best.1;
    let cap = sat_usize(&pts[a].0).min(m - a);
    let mut suffix: Vec<usize> = (a..m).collect();
    suffix.sort_by(|&x, &y| pts[y].1.cmp(&pts[x].1).then(x.cmp(&y)));
    let mut chosen: Vec<usize> = suffix.into_iter().take(cap).collect();
    chosen.sort();
    SchreierSum { value: best.0, witness: chosen.into_iter().map(|i| pts[i].0.clone()).collect() }
}

/// Level 2 for weights nonincreasing along the support.
///
/// Moving a point of a level-1 piece to an earlier unused position keeps the
/// piece admissible and does not lower its weight, so optimal pieces are runs
/// of consecutive support points, and a run is best extended to its full
/// length `p_b`. `h(b, r)`, the best value from position `b` on with at most
/// `r` pieces, then needs only `h(b + 1, r)` and `h(b + p_b, r − 1)`. A full
/// run from position `b` reaches position `2b + 1` or beyond, so
/// `⌈log2(m + 1)⌉` pieces already take every remaining point.
fn level_two_monotone(pts: &[(Nat, Q)]) -> SchreierSum {
    let m = pts.len();
    let cap = (usize::BITS - m.leading_zeros()) as usize + 1;
    let len: Vec<usize> = (0..m).map(|b| sat_usize(&pts[b].0).min(m - b)).collect();
    let mut suffix = vec![Q::zero(); m + 1];
    for b in (0..m).rev() {
        suffix[b] = &suffix[b + 1] + &pts[b].1;
    }
    // h[b][r] for r < cap; larger r is the whole suffix
    let mut h: Vec<Vec<Q>> = vec![vec![Q::zero(); cap]; m + 1];
    let get = |h: &Vec<Vec<Q>>, b: usize, r: usize| if r >= cap { suffix[b].clone() } else { h[b][r].clone() };
    for b in (0..m).rev() {
        for r in 1..cap {
            let skip = h[b + 1][r].clone();
            let take = &suffix[b] - &suffix[b + len[b]] + get(&h, b + len[b], r - 1);
            h[b][r] = skip.max(take);
        }
    }
    let value_at = |h: &Vec<Vec<Q>>, a: usize| &suffix[a] - &suffix[a + len[a]] + get(h, a + len[a], sat_usize(&pts[a].0) - 1);
    let mut best = (value_at(&h, 0), 0usize);
    for a in 1..m {
        let v = value_at(&h, a);
        if v > best.0 {
            best = (v, a);
        }
    }
    let mut chosen: Vec<usize> = (best.1..best.1 + len[best.1]).collect();
    let (mut b, mut r) = (best.1 + len[best.1], sat_usize(&pts[best.1].0) - 1);
    while b < m && r > 0 {
        if r >= cap {
            chosen.extend(b..m);
            break;
        }
        let take = &suffix[b] - &suffix[b + len[b]] + get(&h, b + len[b], r - 1);
        if take >= h[b + 1][r] {
            chosen.extend(b..b + len[b]);
            b += len[b];
            r -= 1;
        } else {
            b += 1;
        }
    }
    SchreierSum { value: best.0, witness: chosen.into_iter().map(|i| pts[i].0.clone()).collect() }
}

/// Window dynamic program: `g_n(i, j)` is the best `S_n` subset of points `i..=j`.
struct WindowDp<'a> {
    pts: &'a [(Nat, Q)],
    best: HashMap<(u32, usize, usize), (Q, Vec<usize>)>,
}

impl<'a> WindowDp<'a> {
    fn new(pts: &'a [(Nat, Q)]) -> Self {
        WindowDp { pts, best: HashMap::new() }
    }

    fn solve(mut self, n: u32) -> SchreierSum {
        let m = self.pts.len();
        let (value, idx) = self.g(n, 0, m - 1);
        SchreierSum { value, witness: idx.into_iter().map(|i| self.pts[i].0.clone()).collect() }
    }

    fn g(&mut self, n: u32, i: usize, j: usize) -> (Q, Vec<usize>) {
        if let Some(r) = self.best.get(&(n, i, j)) {
            return r.clone();
        }
        let r = if n == 0 {
            let k = (i..=j).fold(i, |b, t| if self.pts[t].1 > self.pts[b].1 { t } else { b });
            (self.pts[k].1.clone(), vec![k])
        } else {
            let mut best: (Q, Vec<usize>) = (Q::zero(), vec![]);
            for a in i..=j {
                let cap = sat_usize(&self.pts[a].0).min(j - a + 1);
                let cand = self.pieces(n - 1, a, j, cap);
                if cand.0 > best.0 {
                    best = cand;
                }
            }
            best
        };
        self.best.insert((n, i, j), r.clone());
        r
    }

    /// Best union of at most `b` successive `S_level` sets inside `a..=j`.
    fn pieces(&mut self, level: u32, a: usize, j: usize, b: usize) -> (Q, Vec<usize>) {
        // h[t][r]: best over points t..=j with r pieces left.
        let len = j + 1 - a;
        let mut h: Vec<Vec<(Q, Vec<usize>)>> = vec![vec![(Q::zero(), vec![]); b + 1]; len + 1];
        for t in (0..len).rev() {
            for r in 1..=b {
                let mut best = h[t + 1][r].clone();
                for e in t..len {
                    let (v, idx) = self.g(level, a + t, a + e);
                    let rest = &h[e + 1][r - 1];
                    let tot = &v + &rest.0;
                    if tot > best.0 {
                        let mut w = idx;
                        w.extend(rest.1.iter().copied());
                        best = (tot, w);
                    }
                }
                h[t][r] = best;
            }
        }
        h[0][b].clone()
    }
}

/// Membership by exhaustive search over all decompositions, straight from the
/// recursive definition. Exponential; meant as an independent check.
pub fn brute_is_member(set: &[Nat], n: u32) -> bool {
    let mut s = set.to_vec();
    s.sort();
    brute_sorted(&s, n)
}

fn brute_sorted(s: &[Nat], n: u32) -> bool {
    if s.len() <= 1 {
        return true;
    }
    if n == 0 {
        return false;
    }
    let cap = sat_usize(&s[0]);
    // every composition of s into consecutive nonempty runs
    let gaps = s.len() - 1;
    (0u64..(1u64 << gaps)).any(|mask| {
        let mut runs = Vec::new();
        let mut start = 0;
        for g in 0..gaps {
            if mask >> g & 1 == 1 {
                runs.push(&s[start..=g]);
                start = g + 1;
            }
        }
        runs.push(&s[start..]);
        runs.len() <= cap && runs.iter().all(|r| brute_sorted(r, n - 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q, qi};

    fn set(xs: &[u64]) -> Vec<Nat> {
        xs.iter().map(|&x| nat(x)).collect()
    }

    #[test]
    fn huge_levels_saturate() {
        for mask in 1u32..(1 << 9) {
            let xs: Vec<u64> = (1..=9).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let s = set(&xs);
            let direct = max_prefix(&s, 0, 200) == s.len();
            assert_eq!(is_member(&s, u32::MAX).unwrap().is_some(), direct, "{xs:?}");
        }
        assert!(is_member(&set(&[1, 2]), u32::MAX).unwrap().is_none());
    }

    #[test]
    fn small_memberships() {
        assert!(is_member(&set(&[5]), 0).unwrap().is_some());
        assert!(is_member(&set(&[1, 2]), 1).unwrap().is_none());
        assert!(is_member(&set(&[2, 3]), 1).unwrap().is_some());
        assert!(is_member(&set(&[]), 0).unwrap().is_some());
        // {2,3} ∪ {4,5,6,7} is two S_1 pieces starting at 2
        let t = is_member(&set(&[2, 3, 4, 5, 6, 7]), 2).unwrap().unwrap();
        assert!(t.verify());
        assert_eq!(t.children.len(), 2);
        assert!(is_member(&set(&[2, 3, 4, 5, 6, 7, 8]), 2).unwrap().is_none());
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(is_member(&set(&[0, 3]), 1).is_err());
        assert!(is_member(&set(&[3, 3]), 1).is_err());
    }

    #[test]
    fn greedy_agrees_with_exhaustive_search_on_small_sets() {
        for mask in 0u32..(1 << 10) {
            let s: Vec<Nat> = (0..10).filter(|b| mask >> b & 1 == 1).map(|b| nat(b as u64 + 1)).collect();
            for n in 0..=3 {
                assert_eq!(is_member(&s, n).unwrap().is_some(), brute_is_member(&s, n), "{s:?} n={n}");
            }
        }
    }

    #[test]
    fn uniform_block_is_maximised_by_the_whole_set() {
        for m in 2..7u64 {
            let v = RationalVector::from_u64(&(m..2 * m).map(|i| (i, q(1, m as i64))).collect::<Vec<_>>());
            let r = max_schreier_sum(&v, 1).unwrap();
            assert_eq!(r.value, qi(1));
            assert_eq!(r.witness, set(&(m..2 * m).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn level_two_dp_matches_level_one_fast_path_on_nested_sets() {
        let v = RationalVector::from_u64(&[(2, qi(1)), (3, qi(5)), (4, qi(2)), (6, qi(1)), (9, qi(3))]);
        let one = max_schreier_sum(&v, 1).unwrap();
        let mut pts: Vec<(Nat, Q)> = v.iter().map(|(i, c)| (i.clone(), c.clone())).collect();
        pts.sort();
        let mut dp = WindowDp::new(&pts);
        assert_eq!(dp.g(1, 0, 4).0, one.value);
        assert_eq!(one.value, qi(10));
    }

    proptest::proptest! {
        #[test]
        fn monotone_level_two_matches_the_window_dp(
            idx in proptest::collection::btree_set(1u64..60, 1..20),
            w in proptest::collection::vec(1i64..6, 20),
        ) {
            let mut w = w;
            w.sort_by(|a, b| b.cmp(a));
            let pts: Vec<(Nat, Q)> = idx.iter().zip(&w).map(|(&i, &c)| (Nat::from(i), q(c, 7))).collect();
            let fast = level_two_monotone(&pts);
            let slow = WindowDp::new(&pts).solve(2);
            proptest::prop_assert_eq!(&fast.value, &slow.value);
            proptest::prop_assert!(is_member(&fast.witness, 2).unwrap().is_some());
            let s = fast.witness.iter().map(|i| pts.iter().find(|p| &p.0 == i).unwrap().1.clone()).sum::<Q>();
            proptest::prop_assert_eq!(s, fast.value);
        }
    }

    #[test]
    fn witness_is_a_member_and_attains_the_value() {
        let v = RationalVector::from_u64(&[(1, qi(4)), (2, qi(1)), (3, qi(1)), (5, qi(2)), (6, q(1, 2)), (7, qi(3))]);
        for n in 0..=3 {
            let r = max_schreier_sum(&v, n).unwrap();
            assert!(is_member(&r.witness, n).unwrap().is_some());
            let s = r.witness.iter().fold(Q::zero(), |a, i| a + v.get(i).abs());
            assert_eq!(s, r.value);
        }
    }
}
