//! Basic special convex combinations and their lifts to block sequences.
//!
//! An `(n, ε)` basic s.c.c. is `Σ c_k e_{p_k}` with `c_k > 0`, `Σ c_k = 1`,
//! `{p_k} ∈ S_n` and `Σ_{k∈G} c_k < ε` for every `G ∈ S_{n-1}`.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{fmt_q, nat_q, qstr, Nat, Q};
use crate::schreier::{is_member, max_schreier_sum};
use crate::vectors::{BlockSequence, RationalVector};

/// The index set `M` a combination is drawn from, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IndexStream {
    /// `{from, from + step, from + 2 step, ...}`
    Arithmetic {
        #[serde(with = "crate::num::natstr")]
        from: Nat,
        #[serde(with = "crate::num::natstr")]
        step: Nat,
    },
    /// A finite increasing list.
    Explicit {
        #[serde(with = "crate::num::natstr_vec")]
        items: Vec<Nat>,
    },
}

impl IndexStream {
    pub fn from(start: Nat) -> Self {
        IndexStream::Arithmetic { from: start, step: Nat::one() }
    }

    fn get(&self, k: usize) -> Option<Nat> {
        match self {
            IndexStream::Arithmetic { from, step } => Some(from + step * Nat::from(k)),
            IndexStream::Explicit { items } => items.get(k).cloned(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            IndexStream::Arithmetic { from, step } if from.is_zero() || step.is_zero() => {
                Err(Error::malformed("index stream must start at 1 or later and increase"))
            }
            IndexStream::Explicit { items } if items.first().is_some_and(Zero::is_zero) || items.windows(2).any(|w| w[0] >= w[1]) => {
                Err(Error::malformed("explicit index stream must be positive and increasing"))
            }
            _ => Ok(()),
        }
    }
}

/// Limits for materialising a combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SccBudget {
    pub max_points: usize,
    pub max_attempts: usize,
}

impl Default for SccBudget {
    fn default() -> Self {
        SccBudget { max_points: 1 << 16, max_attempts: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicScc {
    pub n: u32,
    #[serde(with = "qstr")]
    pub eps: Q,
    pub coefficients: RationalVector,
}

/// Outcome of checking both clauses of the definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SccReport {
    pub support_in_s_n: bool,
    pub positive_and_normalised: bool,
    /// `max_{G∈S_{n-1}} Σ_G c`
    #[serde(with = "qstr")]
    pub max_lower_sum: Q,
    pub lower_sum_below_eps: bool,
    pub valid: bool,
}

/// Checks clause (i) (support in `S_n`, positive, sums to 1) and clause (ii)
/// (`max_{G∈S_{n-1}} Σ_G c_k < ε`).
pub fn validate_basic_scc(c: &RationalVector, n: u32, eps: &Q) -> Result<SccReport> {
    if n == 0 {
        return Err(Error::malformed("s.c.c. level must be at least 1"));
    }
    let support_in_s_n = is_member(&c.support(), n)?.is_some();
    let positive = c.iter().all(|(_, x)| x.is_positive());
    let total = c.iter().fold(Q::zero(), |a, (_, x)| a + x);
    let positive_and_normalised = positive && total == Q::one();
    let max_lower_sum = max_schreier_sum(c, n - 1)?.value;
    let lower_sum_below_eps = &max_lower_sum < eps;
    Ok(SccReport {
        support_in_s_n,
        positive_and_normalised,
        lower_sum_below_eps,
        valid: support_in_s_n && positive_and_normalised && lower_sum_below_eps,
        max_lower_sum,
    })
}

/// Last index used by a repeated average of level `n` started at `s` on
/// consecutive integers, or `None` once it passes `2^bits_cap`.
///
/// Gaps in `M` only push indices further right, so this is a lower bound for
/// any stream whose leading index is `s`.
pub fn repeated_average_end(n: u32, s: &BigUint, bits_cap: u64) -> Option<BigUint> {
    if s.bits() > bits_cap {
        return None;
    }
    match n {
        0 => Some(s.clone()),
        _ => {
            let count = s.to_u64().filter(|&c| c <= 1 << 20)?;
            let mut start = s.clone();
            let mut end = s.clone();
            for _ in 0..count {
                end = repeated_average_end(n - 1, &start, bits_cap)?;
                start = &end + 1u32;
            }
            Some(end)
        }
    }
}

fn size_estimate(n: u32, s: &BigUint) -> String {
    match repeated_average_end(n, s, 4096) {
        Some(end) => format!("at least {} points (indices {s}..={end})", &end - s + 1u32),
        None => "more than 2^4096 points".to_string(),
    }
}

/// Builds the level-`n` repeated average starting at position `pos` of `m`.
///
/// Level 0 is a single index. Level `n` averages `p` successive level-`(n-1)`
/// averages, where `p` is the first index used.
fn repeated_average(m: &IndexStream, pos: &mut usize, n: u32, out: &mut Vec<(Nat, Q)>, scale: &Q, budget: usize) -> Result<()> {
    let first = m.get(*pos).ok_or_else(|| Error::malformed("index stream exhausted"))?;
    if n == 0 {
        if out.len() >= budget {
            return Err(Error::infeasible("s.c.c. generation", format!("more than {budget} points")));
        }
        out.push((first, scale.clone()));
        *pos += 1;
        return Ok(());
    }
    let p = first.to_usize().filter(|&p| p <= budget).ok_or_else(|| {
        Error::infeasible("s.c.c. generation", format!("a level-{n} average from {first} has {}", size_estimate(n, &first)))
    })?;
    let child_scale = scale / nat_q(&first);
    for _ in 0..p {
        repeated_average(m, pos, n - 1, out, &child_scale, budget)?;
    }
    Ok(())
}

/// Generates an `(n, ε)` basic s.c.c. on `M` by repeated averages.
///
/// The leading index is the first element of `M` above `1/ε`; if the result
/// fails validation the start advances along `M`.
pub fn generate_basic_scc(m: &IndexStream, n: u32, eps: &Q, budget: SccBudget) -> Result<BasicScc> {
    m.validate()?;
    if n == 0 || !eps.is_positive() {
        return Err(Error::malformed("need n >= 1 and ε > 0"));
    }
    let mut pos = 0usize;
    while let Some(x) = m.get(pos) {
        if Q::from_integer(x.clone().into()) > Q::one() / eps {
            break;
        }
        pos += 1;
        if pos > 1 << 24 {
            return Err(Error::malformed("index stream never exceeds 1/ε"));
        }
    }
    for _ in 0..budget.max_attempts {
        let lead = m.get(pos).ok_or_else(|| Error::malformed("index stream exhausted"))?;
        // refuse before materialising anything hopeless
        if let Some(end) = repeated_average_end(n, &lead, 64) {
            if &end - &lead + 1u32 > BigUint::from(budget.max_points) {
                return Err(Error::infeasible("s.c.c. generation", size_estimate(n, &lead)));
            }
        } else {
            return Err(Error::infeasible("s.c.c. generation", size_estimate(n, &lead)));
        }
        let mut cursor = pos;
        let mut pts = Vec::new();
        repeated_average(m, &mut cursor, n, &mut pts, &Q::one(), budget.max_points)?;
        let c = RationalVector::from_entries(pts)?;
        if validate_basic_scc(&c, n, eps)?.valid {
            return Ok(BasicScc { n, eps: eps.clone(), coefficients: c });
        }
        pos += 1;
    }
    Err(Error::infeasible(
        "s.c.c. generation",
        format!("no valid ({n}, {}) combination within {} starts", fmt_q(eps), budget.max_attempts),
    ))
}

/// `Σ c_k x_k` for a block sequence whose ψ-projection is an `(n, ε)` basic s.c.c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedScc {
    pub n: u32,
    pub eps: Q,
    pub coefficients: Vec<Q>,
    pub blocks: BlockSequence,
    pub vector: RationalVector,
}

pub fn lift_scc(blocks: &BlockSequence, coefficients: &[Q], n: u32, eps: &Q) -> Result<LiftedScc> {
    if coefficients.len() != blocks.len() {
        return Err(Error::malformed(format!(
            "{} coefficients for {} blocks",
            coefficients.len(),
            blocks.len()
        )));
    }
    let psi = blocks.psi_vector(coefficients);
    if psi.len() != coefficients.len() {
        return Err(Error::PsiProjectionInvalid("zero coefficient".into()));
    }
    let report = validate_basic_scc(&psi, n, eps)?;
    if !report.valid {
        return Err(Error::PsiProjectionInvalid(format!(
            "in S_n: {}, normalised: {}, max S_(n-1) mass {} vs ε {}",
            report.support_in_s_n,
            report.positive_and_normalised,
            fmt_q(&report.max_lower_sum),
            fmt_q(eps)
        )));
    }
    Ok(LiftedScc {
        n,
        eps: eps.clone(),
        coefficients: coefficients.to_vec(),
        vector: blocks.combine(coefficients),
        blocks: blocks.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{nat, q};

    #[test]
    fn level_one_from_three() {
        let s = generate_basic_scc(&IndexStream::from(nat(3)), 1, &q(1, 2), SccBudget::default()).unwrap();
        assert_eq!(s.coefficients, RationalVector::from_u64(&[(3, q(1, 3)), (4, q(1, 3)), (5, q(1, 3))]));
    }

    #[test]
    fn level_two_from_four_validates() {
        let s = generate_basic_scc(&IndexStream::from(nat(4)), 2, &q(1, 4), SccBudget::default()).unwrap();
        assert_eq!(s.coefficients.min_supp(), Some(&nat(5)));
        assert_eq!(s.coefficients.len(), 155);
        assert!(validate_basic_scc(&s.coefficients, 2, &q(1, 4)).unwrap().valid);
    }

    #[test]
    fn level_three_small_eps_is_refused_with_an_estimate() {
        let e = generate_basic_scc(&IndexStream::from(nat(1)), 3, &q(1, 4), SccBudget::default()).unwrap_err();
        assert_eq!(e.code(), "infeasible-at-budget");
        assert!(e.to_string().contains("points"), "{e}");
    }

    #[test]
    fn repeated_average_sizes() {
        assert_eq!(repeated_average_end(1, &nat(5), 64), Some(nat(9)));
        assert_eq!(repeated_average_end(2, &nat(9), 64), Some(nat(9 * 512 - 1)));
        assert_eq!(repeated_average_end(3, &nat(2), 64), Some(nat(2047)));
        assert_eq!(repeated_average_end(3, &nat(3), 64), None);
    }

    #[test]
    fn lifting_checks_the_psi_projection() {
        let blocks = BlockSequence::new(
            (0..3).map(|k| RationalVector::from_u64(&[(3 + 2 * k, q(1, 1)), (4 + 2 * k, q(1, 2))])).collect(),
        )
        .unwrap();
        let c = vec![q(1, 3); 3];
        // ψ positions 3,5,7 form an S_1 set with masses 1/3 < 1/2
        let l = lift_scc(&blocks, &c, 1, &q(1, 2)).unwrap();
        assert_eq!(l.vector.len(), 6);
        assert_eq!(lift_scc(&blocks, &c, 1, &q(1, 3)).unwrap_err().code(), "psi-projection-invalid");
    }
}
