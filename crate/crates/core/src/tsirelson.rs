//! Exact Tsirelson norm `‖·‖_T` and its modification `|||·|||`.
//!
//! `‖x‖_T = max(‖x‖_∞, sup ½ Σ_{j≤d} ‖E_j x‖_T)` over successive sets with
//! `d ≤ min E_1`; `|||·|||` allows `2d` sets. Both norms are 1-unconditional
//! and monotone under restriction, so the supremum may be taken over
//! partitions of a suffix of a window of the support into at most `d`
//! consecutive runs. The dynamic program below works on windows of the sorted
//! support, in exact integer arithmetic scaled by `D · 2^m`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Sign, Term};
use crate::num::{sat_usize, Nat, Q};
use crate::vectors::RationalVector;

/// Largest support handled by the exact dynamic program.
pub const EXACT_CAP: usize = 320;

/// Largest support accepted by the brute-force oracle.
pub const ORACLE_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `d` successive sets (`‖·‖_T`, grammar `W_T'`).
    Standard,
    /// `2d` successive sets (`|||·|||`, grammar `W_|||`).
    Modified,
}

impl Variant {
    fn mult(self) -> usize {
        match self {
            Variant::Standard => 1,
            Variant::Modified => 2,
        }
    }

    fn grammar(self) -> Grammar {
        match self {
            Variant::Standard => Grammar::WTPrime,
            Variant::Modified => Grammar::WTriple,
        }
    }
}

/// An exact norm value with a norming functional attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormResult {
    pub value: Q,
    pub witness: FunctionalTerm,
}

/// `‖v‖_T` with a witness in `W_T'`.
pub fn tsirelson_norm(v: &RationalVector) -> Result<NormResult> {
    exact(v, Variant::Standard)
}

/// `|||v|||` with a witness in `W_|||`.
pub fn modified_norm(v: &RationalVector) -> Result<NormResult> {
    exact(v, Variant::Modified)
}

pub fn exact(v: &RationalVector, variant: Variant) -> Result<NormResult> {
    if v.len() > EXACT_CAP {
        return Err(Error::SupportTooLarge { size: v.len(), cap: EXACT_CAP });
    }
    if v.is_empty() {
        return Ok(NormResult { value: Q::zero(), witness: FunctionalTerm::new(variant.grammar(), Term::Zero) });
    }
    let dp = Dp::run(v, variant);
    let value = dp.value(0, dp.m - 1);
    let witness = dp.witness(0, dp.m - 1);
    Ok(NormResult { value, witness: FunctionalTerm::new(variant.grammar(), witness) })
}

struct Dp {
    m: usize,
    idx: Vec<Nat>,
    signs: Vec<Sign>,
    cap: Vec<usize>,
    /// `|x_t| · D · 2^m / g`
    a: Vec<BigUint>,
    denom: BigUint,
    /// `g`, the gcd of the `|x_t| · D`
    content: BigUint,
    /// `n[i][j - i] = N(i..=j)`
    n: Vec<Vec<BigUint>>,
}

impl Dp {
    fn run(v: &RationalVector, variant: Variant) -> Dp {
        let m = v.len();
        let denom = v.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
        let denom = denom.to_biguint().expect("positive");
        let mut idx = Vec::with_capacity(m);
        let mut signs = Vec::with_capacity(m);
        let mut cap = Vec::with_capacity(m);
        let mut ints = Vec::with_capacity(m);
        for (i, c) in v.iter() {
            idx.push(i.clone());
            signs.push(Sign::of(c));
            cap.push(sat_usize(i).saturating_mul(variant.mult()));
            let scaled = (c.abs() * Q::from_integer(BigInt::from(denom.clone()))).to_integer();
            ints.push(scaled.to_biguint().expect("nonnegative"));
        }
        // large common factors (such as 2^n scalings) only slow the arithmetic down
        let content = ints.iter().fold(BigUint::zero(), |g, x| g.gcd(x));
        let a = ints.into_iter().map(|x| (x / &content) << m).collect();
        let mut dp = Dp { m, idx, signs, cap, a, denom, content, n: vec![Vec::new(); m] };
        for j in 0..m {
            dp.extend_right(j);
        }
        dp
    }

    fn n(&self, i: usize, j: usize) -> &BigUint {
        &self.n[i][j - i]
    }

    fn parts_cap(&self, b: usize, j: usize) -> usize {
        self.cap[b].min(j - b + 1)
    }

    /// Computes `N(i..=j)` for every `i ≤ j`, assuming all shorter right ends are done.
    fn extend_right(&mut self, j: usize) {
        let mut g: Vec<Vec<BigUint>> = vec![Vec::new(); j + 1];
        let mut mx = BigUint::zero();
        let mut l1 = BigUint::zero();
        let mut run_best = BigUint::zero();
        for i in (0..=j).rev() {
            if self.a[i] > mx {
                mx = self.a[i].clone();
            }
            l1 += &self.a[i];
            let count = j - i + 1;
            let r_i = self.parts_cap(i, j);
            let mp = self.multi_part(i, j, r_i, &g, &l1);
            let val = if count <= self.cap[i] {
                std::cmp::max(mx.clone(), halve(&l1))
            } else {
                let own = mp.last().cloned().unwrap_or_default();
                std::cmp::max(mx.clone(), halve(&std::cmp::max(own, run_best.clone())))
            };
            let mut gi = Vec::with_capacity(r_i);
            gi.push(val.clone());
            for r in 2..=r_i {
                gi.push(std::cmp::max(val.clone(), mp[r - 2].clone()));
            }
            if gi[r_i - 1] > run_best {
                run_best = gi[r_i - 1].clone();
            }
            g[i] = gi;
            self.n[i].push(val);
        }
    }

    /// `mp[r-2]`: best sum of between 2 and `r` parts covering `i..=j`, for `r = 2..=r_i`.
    fn multi_part(&self, i: usize, j: usize, r_i: usize, g: &[Vec<BigUint>], l1: &BigUint) -> Vec<BigUint> {
        let count = j - i + 1;
        let mut mp = Vec::with_capacity(r_i.saturating_sub(1));
        for r in 2..=r_i {
            if r >= count {
                mp.push(l1.clone());
                continue;
            }
            let mut best = BigUint::zero();
            for e in i..j {
                let rest = &g[e + 1];
                let k = (r - 1).min(rest.len());
                let s = self.n(i, e) + &rest[k - 1];
                if s > best {
                    best = s;
                }
            }
            mp.push(best);
        }
        mp
    }

    fn to_q(&self, x: &BigUint) -> Q {
        let den = BigInt::from(self.denom.clone()) << self.m;
        Q::new(BigInt::from(x * &self.content), den)
    }

    fn value(&self, i: usize, j: usize) -> Q {
        self.to_q(self.n(i, j))
    }

    fn leaf(&self, t: usize) -> Term {
        Term::unit(self.idx[t].clone(), self.signs[t])
    }

    fn witness(&self, i: usize, j: usize) -> Term {
        let val = self.n(i, j);
        let (arg, mx) = (i..=j).fold((i, &self.a[i]), |b, t| if &self.a[t] > b.1 { (t, &self.a[t]) } else { b });
        if val == mx {
            return self.leaf(arg);
        }
        let count = j - i + 1;
        if count <= self.cap[i] {
            return Term::Half { children: (i..=j).map(|t| self.leaf(t)).collect() };
        }
        let parts = self.partition(i, j, &(val << 1));
        Term::Half { children: parts.into_iter().map(|(b, e)| self.witness(b, e)).collect() }
    }

    /// Recovers a partition of a suffix of `i..=j` whose part norms sum to `target`.
    fn partition(&self, i: usize, j: usize, target: &BigUint) -> Vec<(usize, usize)> {
        let mut g: Vec<Vec<BigUint>> = vec![Vec::new(); j + 1];
        let mut l1 = BigUint::zero();
        for b in (i..=j).rev() {
            l1 += &self.a[b];
            let r_b = self.parts_cap(b, j);
            let mp = self.multi_part(b, j, r_b, &g, &l1);
            let val = self.n(b, j).clone();
            let mut gb = vec![val.clone()];
            for r in 2..=r_b {
                gb.push(std::cmp::max(val.clone(), mp[r - 2].clone()));
            }
            g[b] = gb;
        }
        let start = (i..=j)
            .find(|&b| {
                let r = self.parts_cap(b, j);
                if b == i {
                    r >= 2 && self.multi_part(i, j, r, &g, &l1).last() == Some(target)
                } else {
                    &g[b][r - 1] == target
                }
            })
            .expect("optimal partition exists");
        let mut parts = Vec::new();
        let (mut b, mut r) = (start, self.parts_cap(start, j));
        let mut forbid_single = start == i;
        loop {
            let want = if forbid_single { target.clone() } else { g[b][r.min(g[b].len()) - 1].clone() };
            if !forbid_single && &want == self.n(b, j) {
                parts.push((b, j));
                break;
            }
            let count = j - b + 1;
            if r >= count && want == (b..=j).fold(BigUint::zero(), |s, t| s + &self.a[t]) {
                parts.extend((b..=j).map(|t| (t, t)));
                break;
            }
            let e = (b..j)
                .find(|&e| {
                    let rest = &g[e + 1];
                    let k = (r - 1).min(rest.len());
                    self.n(b, e) + &rest[k - 1] == want
                })
                .expect("cut exists");
            parts.push((b, e));
            r = (r - 1).min(g[e + 1].len());
            b = e + 1;
            forbid_single = false;
        }
        parts
    }
}

fn halve(x: &BigUint) -> BigUint {
    debug_assert!(x.is_zero() || !x.bit(0), "dyadic scale too small");
    x >> 1usize
}

/// Brute-force `‖v‖_T` straight from the implicit equation: every family of
/// successive subsets of the support is enumerated, with no memoisation.
pub fn brute_force_oracle(v: &RationalVector) -> Result<Q> {
    oracle(v, 1)
}

/// Brute-force `|||v|||`.
pub fn brute_force_modified_oracle(v: &RationalVector) -> Result<Q> {
    oracle(v, 2)
}

fn oracle(v: &RationalVector, mult: usize) -> Result<Q> {
    if v.len() > ORACLE_CAP {
        return Err(Error::SupportTooLarge { size: v.len(), cap: ORACLE_CAP });
    }
    if v.is_empty() {
        return Ok(Q::zero());
    }
    let caps: Vec<usize> = v.iter().map(|(i, _)| sat_usize(i).saturating_mul(mult)).collect();
    let full = (1u32 << v.len()) - 1;
    // Exact scaled integers when they fit, rationals otherwise.
    let denom = v.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
    let shift = ORACLE_CAP as u32;
    let scaled: Option<Vec<u128>> = v
        .iter()
        .map(|(_, c)| {
            let x = (c.abs() * Q::from_integer(denom.clone())).to_integer();
            u128::try_from(x).ok().filter(|x| x.leading_zeros() > shift + 8).map(|x| x << shift)
        })
        .collect();
    Ok(match scaled {
        Some(vals) => {
            let pts: Vec<(usize, u128)> = caps.into_iter().zip(vals).collect();
            let r = brute(&pts, full);
            Q::new(BigInt::from(r), denom << shift)
        }
        None => {
            let pts: Vec<(usize, Q)> = caps.into_iter().zip(v.iter().map(|(_, c)| c.abs())).collect();
            brute(&pts, full)
        }
    })
}

trait OracleValue: Clone + Ord {
    fn nil() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn half(&self) -> Self;
}

impl OracleValue for u128 {
    fn nil() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn half(&self) -> Self {
        debug_assert!(self & 1 == 0);
        self >> 1
    }
}

impl OracleValue for Q {
    fn nil() -> Self {
        <Q as Zero>::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn half(&self) -> Self {
        self / Q::from_integer(2.into())
    }
}

/// Every nonempty subset `U` of `set`, every split of `U` into consecutive
/// runs `E_1 < ... < E_d` with `d ≤ cap(min U)`, recursively.
fn brute<V: OracleValue>(pts: &[(usize, V)], set: u32) -> V {
    let mut best = V::nil();
    for t in 0..pts.len() {
        if set >> t & 1 == 1 && pts[t].1 > best {
            best = pts[t].1.clone();
        }
    }
    if set.count_ones() < 2 {
        return best;
    }
    let mut sub = set;
    while sub != 0 {
        let mut used = [0usize; ORACLE_CAP];
        let mut len = 0;
        for t in 0..pts.len() {
            if sub >> t & 1 == 1 {
                used[len] = t;
                len += 1;
            }
        }
        let cap = pts[used[0]].0;
        let gaps = len - 1;
        for cut in 0u32..(1u32 << gaps) {
            let runs = cut.count_ones() as usize + 1;
            if runs > cap || (sub == set && runs == 1) {
                continue;
            }
            let mut total = V::nil();
            let mut run = 0u32;
            for (k, &t) in used[..len].iter().enumerate() {
                run |= 1 << t;
                if k == gaps || cut >> k & 1 == 1 {
                    total = total.add(&brute(pts, run));
                    run = 0;
                }
            }
            let half = total.half();
            if half > best {
                best = half;
            }
        }
        sub = (sub - 1) & set;
    }
    best
}

/// Certified enclosure of `‖v‖_T` for supports beyond [`EXACT_CAP`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormBounds {
    pub lower: Q,
    pub witness: FunctionalTerm,
    pub upper: Q,
    pub exact: bool,
}

/// Encloses `‖v‖_T` using `cells` consecutive groups of the support.
///
/// Upper: the layered bound, or each group is collapsed onto its largest index carrying the group's
/// `ℓ_1` mass. Any functional in `W_T'` keeps, per group, a leaf of largest
/// weight; moving that leaf right to the group's end stays in `W_T'`, so the
/// collapsed vector has norm at least `‖v‖_T`. Refining the groups by
/// splitting can only lower this bound.
///
/// Lower: the exact norm of `v` restricted to one largest entry per group,
/// with its witness (restrictions of `v` have smaller norm).
pub fn tsirelson_bounds(v: &RationalVector, cells: usize) -> Result<NormBounds> {
    if v.len() <= EXACT_CAP {
        let r = tsirelson_norm(v)?;
        return Ok(NormBounds { lower: r.value.clone(), witness: r.witness, upper: r.value, exact: true });
    }
    let (collapsed, reps) = collapse(v, cells.clamp(1, EXACT_CAP));
    let upper = tsirelson_norm(&collapsed)?.value.min(layered_upper(v)?).min(v.l1());
    let low = tsirelson_norm(&reps)?;
    Ok(NormBounds { lower: low.value, witness: low.witness, upper, exact: false })
}

/// Collapsed vector and per-group representatives for `cells` groups.
fn collapse(v: &RationalVector, cells: usize) -> (RationalVector, RationalVector) {
    let pts: Vec<(&Nat, &Q)> = v.iter().collect();
    let m = pts.len();
    let mut collapsed = RationalVector::new();
    let mut reps = RationalVector::new();
    for c in 0..cells {
        let (lo, hi) = (c * m / cells, (c + 1) * m / cells);
        if lo == hi {
            continue;
        }
        let group = &pts[lo..hi];
        let mass = group.iter().fold(Q::zero(), |s, (_, x)| s + x.abs());
        collapsed.set(group[group.len() - 1].0.clone(), mass);
        let (i, x) = group.iter().fold(group[0], |b, p| if p.1.abs() > b.1.abs() { *p } else { b });
        reps.set(i.clone(), x.clone());
    }
    (collapsed, reps)
}

/// Layered upper bound.
///
/// In a tree functional the leaves of depth at most `d` form a set in `S_d`,
/// so `f(|v|) ≤ Σ_{d≥1} 2^{-(d+1)} M_d` with `M_d = max_{A∈S_d} Σ_A |v|`.
/// Once `M_d` is unavailable or reaches `‖v‖_1` the tail is at most
/// `2^{-d} ‖v‖_1`.
pub fn layered_upper(v: &RationalVector) -> Result<Q> {
    let l1 = v.l1();
    let supp = v.support();
    let mut acc = Q::zero();
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut weight = half.clone();
    for d in 1u32.. {
        let cheap = d == 1 || supp.len() <= crate::schreier::MAXSUM_WINDOW_CAP;
        if !cheap || d > 8 || crate::schreier::is_member(&supp, d)?.is_some() {
            break;
        }
        let m = crate::schreier::max_schreier_sum(v, d)?.value;
        if m == l1 {
            break;
        }
        acc += &weight * &half * m;
        weight *= &half;
    }
    Ok((acc + weight * l1).max(v.linf()))
}

/// The better of the collapse bound with at most `cells` groups and the
/// layered bound, exact when the support already fits.
pub fn collapsed_upper(v: &RationalVector, cells: usize) -> Result<Q> {
    let cells = cells.clamp(1, EXACT_CAP);
    if v.len() <= cells {
        return Ok(tsirelson_norm(v)?.value);
    }
    let collapsed = tsirelson_norm(&collapse(v, cells).0)?.value;
    Ok(collapsed.min(layered_upper(v)?).min(v.l1()))
}

/// Upper bound alone, exact when the support is small.
pub fn tsirelson_upper(v: &RationalVector, cells: usize) -> Result<Q> {
    Ok(tsirelson_bounds(v, cells)?.upper)
}
