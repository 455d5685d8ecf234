//! Exact spot checks of the estimates for averages and functionals acting on
//! `(C, θ, n)` and exact vectors.
//!
//! Each case evaluates the left side exactly and compares it with the right
//! side, also exactly. The inequalities are theorems under their hypotheses,
//! so a failing entry on an instance whose hypotheses hold is a bug.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::{ClauseCheck, ExactVectorRecord};
use crate::error::{Error, Result};
use crate::functionals::{weight_set, FunctionalTerm, Grammar, Mode, SigmaRegistry, SpaceConfig, Term, Validator};
use crate::num::{fmt_q, nat, nat_q, pow2, qi, qstr, Nat, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessCase {
    /// `|α(x)| < min{C2^n/s Σ_G c, 6C/s Σ_G c + 1/(3·2^{2n})} + 2C2^n max_G c`
    AverageOnVector,
    /// `Σ_q |α_q(x)| < 6C/s(α_1) + 1/2^n` for a very fast growing `S_j`-admissible family, `j < n`.
    VfgFamily,
    /// `|f(x)| < 7C/2^j` for `f` of type I_α with weight `j < n`.
    LowWeightTypeI,
    /// `Σ_q |β_q(x)| < Σ_q 8C/s(β_q) + 1/2^n`, exact vectors with `n ≥ 4`, `j ≤ n − 3`.
    BetaFamily,
    /// `|f(x)| < C/2^n + C/2^{2n} + Σ_{w(f_j)<n} 4C/2^{w(f_j)}` for type II `f`
    /// whose weights avoid `{n, …, 2^{2n}}`, exact vectors with `n ≥ 3`.
    WeightGap,
}

impl HarnessCase {
    pub const ALL: [HarnessCase; 5] =
        [HarnessCase::AverageOnVector, HarnessCase::VfgFamily, HarnessCase::LowWeightTypeI, HarnessCase::BetaFamily, HarnessCase::WeightGap];

    pub fn id(self) -> &'static str {
        match self {
            HarnessCase::AverageOnVector => "average-on-vector",
            HarnessCase::VfgFamily => "vfg-family",
            HarnessCase::LowWeightTypeI => "low-weight-type-i",
            HarnessCase::BetaFamily => "beta-family",
            HarnessCase::WeightGap => "weight-gap",
        }
    }
}

impl fmt::Display for HarnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for HarnessCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HarnessCase::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| Error::malformed(format!("unknown harness case {s:?}")))
    }
}

/// A constructed vector with the functionals to test on it.
///
/// `AverageOnVector` takes any number of α-averages and checks each one.
/// `VfgFamily` and `BetaFamily` take one family with its admissibility level
/// `j`. The two functional cases take one or more functionals, each checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessInstance {
    pub vector: ExactVectorRecord,
    pub functionals: Vec<Term>,
    pub j: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessEntry {
    #[serde(with = "qstr")]
    pub lhs: Q,
    #[serde(with = "qstr")]
    pub rhs: Q,
    pub pass: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub case: HarnessCase,
    pub mode: Mode,
    pub n: u32,
    #[serde(with = "qstr")]
    pub c: Q,
    pub entries: Vec<HarnessEntry>,
    pub pass: bool,
    /// Clause checks of the vector, i.e. which hypotheses are certified.
    pub hypotheses: Vec<ClauseCheck>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedInstance(msg.into())
}

/// Runs one case on one instance.
pub fn inequality_harness(case: HarnessCase, inst: &HarnessInstance, config: SpaceConfig, registry: Option<&SigmaRegistry>) -> Result<HarnessReport> {
    let r = &inst.vector;
    if r.blocks.len() != r.coefficients.len() || r.blocks.is_empty() {
        return Err(bad("vector record has no blocks or mismatched coefficients"));
    }
    if inst.functionals.is_empty() {
        return Err(bad("no functionals supplied"));
    }
    let validator = match registry {
        Some(reg) => Validator::new(config).with_registry(reg),
        None => Validator::new(config),
    };
    for (i, t) in inst.functionals.iter().enumerate() {
        if let Some(v) = validator.validate(&FunctionalTerm::new(Grammar::W, t.clone())).first() {
            return Err(bad(format!("functional {i} violates {} at {}: {}", v.clause, v.path, v.detail)));
        }
    }
    let x = &r.vector;
    let c = &r.c;
    let two_n = nat_q(&pow2(r.n as u64));
    let entries = match case {
        HarnessCase::AverageOnVector => {
            let mut out = Vec::new();
            for a in &inst.functionals {
                if !a.is_alpha_average() {
                    return Err(bad("average-on-vector takes α-averages"));
                }
                out.push(average_entry(r, a, &two_n));
            }
            out
        }
        HarnessCase::VfgFamily | HarnessCase::BetaFamily => {
            let j = inst.j.ok_or_else(|| bad("family cases need the admissibility level j"))?;
            let beta = case == HarnessCase::BetaFamily;
            if beta {
                if r.n < 4 || !r.is_exact() {
                    return Err(bad("beta-family needs an exact vector with n ≥ 4"));
                }
                if j + 3 > r.n {
                    return Err(bad(format!("beta-family needs j ≤ n − 3, got j = {j}, n = {}", r.n)));
                }
            } else if j >= r.n {
                return Err(bad(format!("vfg-family needs j < n, got j = {j}, n = {}", r.n)));
            }
            let fam = &inst.functionals;
            if fam.iter().any(|a| if beta { !a.is_beta_average() } else { !a.is_alpha_average() }) {
                return Err(bad("family members must all be averages of the case's kind"));
            }
            check_family(fam, j, beta, &validator)?;
            let lhs: Q = fam.iter().map(|a| a.eval(x).abs()).sum();
            let rhs = if beta {
                fam.iter().map(|b| qi(8) * c / nat_q(b.average_size().expect("average"))).sum::<Q>() + Q::one() / &two_n
            } else {
                let ran = x.range().expect("nonempty vector");
                // the first average meeting ran x plays the role of α_1
                let first = fam.iter().find(|a| a.range().is_some_and(|ra| ra.meets(&ran)));
                match first {
                    Some(a1) => qi(6) * c / nat_q(a1.average_size().expect("average")) + Q::one() / &two_n,
                    None => Q::one() / &two_n,
                }
            };
            vec![HarnessEntry { pass: lhs < rhs, note: format!("{} averages, j = {j}", fam.len()), lhs, rhs }]
        }
        HarnessCase::LowWeightTypeI => {
            let mut out = Vec::new();
            for f in &inst.functionals {
                if !f.is_type_i_alpha() {
                    return Err(bad("low-weight-type-i takes type I_α functionals"));
                }
                let j = f.type_i_weight().expect("type I").clone();
                if j >= nat(r.n as u64) {
                    return Err(bad(format!("weight {j} is not below n = {}", r.n)));
                }
                let lhs = f.eval(x).abs();
                let rhs = qi(7) * c / nat_q(&pow2(crate::num::to_u64(&j, "weight")?));
                out.push(HarnessEntry { pass: lhs < rhs, note: format!("w(f) = {j}"), lhs, rhs });
            }
            out
        }
        HarnessCase::WeightGap => {
            if r.n < 3 || !r.is_exact() {
                return Err(bad("weight-gap needs an exact vector with n ≥ 3"));
            }
            let lo = nat(r.n as u64);
            let hi = pow2(2 * r.n as u64);
            let mut out = Vec::new();
            for f in &inst.functionals {
                let ws = weight_set(f).map_err(|_| bad("weight-gap takes type II functionals"))?;
                if ws.iter().any(|w| w >= &lo && w <= &hi) {
                    return Err(bad(format!("a weight of f lies in [{lo}, {hi}]")));
                }
                let low: Q = ws.iter().filter(|w| *w < &lo).map(|w| qi(4) * c / nat_q(&pow2(crate::num::to_u64(w, "weight").unwrap_or(u64::MAX)))).sum();
                let rhs = c / &two_n + c / nat_q(&hi) + low;
                let lhs = f.eval(x).abs();
                out.push(HarnessEntry { pass: lhs < rhs, note: format!("weights {:?}", ws.iter().map(Nat::to_string).collect::<Vec<_>>()), lhs, rhs });
            }
            out
        }
    };
    let pass = entries.iter().all(|e| e.pass);
    Ok(HarnessReport { case, mode: r.mode, n: r.n, c: c.clone(), entries, pass, hypotheses: r.clauses.clone() })
}

fn average_entry(r: &ExactVectorRecord, a: &Term, two_n: &Q) -> HarnessEntry {
    let c = &r.c;
    let s = nat_q(a.average_size().expect("average"));
    let ran = a.range();
    let mut sum = Q::zero();
    let mut top = Q::zero();
    let mut met = 0usize;
    for (x, ck) in r.blocks.blocks().iter().zip(&r.coefficients) {
        let meets = match (&ran, x.range()) {
            (Some(ra), Some(rx)) => ra.meets(&rx),
            _ => false,
        };
        if meets {
            met += 1;
            sum += ck;
            top = top.max(ck.clone());
        }
    }
    let lhs = a.eval(&r.vector).abs();
    if met == 0 {
        // no block meets ran α, so both sides vanish
        return HarnessEntry { pass: lhs.is_zero(), rhs: Q::zero(), lhs, note: "no block meets ran α".into() };
    }
    let first = c * two_n / &s * &sum;
    let second = qi(6) * c / &s * &sum + Q::one() / (qi(3) * two_n * two_n);
    let rhs = first.min(second) + qi(2) * c * two_n * top;
    HarnessEntry { pass: lhs < rhs, note: format!("s(α) = {}, {met} blocks met", fmt_q(&s)), lhs, rhs }
}

/// The family must be very fast growing and `S_j`-admissible: checked by
/// wrapping it as the averages of a type I functional of weight `max(j, 1)`;
/// for `j = 0` only single averages are admissible.
fn check_family(fam: &[Term], j: u32, beta: bool, validator: &Validator) -> Result<()> {
    if j == 0 && fam.len() > 1 {
        return Err(bad("an S_0-admissible family has one member"));
    }
    let w = nat(j.max(1) as u64);
    let root = if beta {
        Term::TypeIBeta { weight: w, children: fam.to_vec() }
    } else {
        Term::TypeIAlpha { weight: w, children: fam.to_vec() }
    };
    match validator.validate(&FunctionalTerm::new(Grammar::W, root)).first() {
        None => Ok(()),
        Some(v) => Err(bad(format!("family is not very fast growing and S_{j}-admissible: {} at {}", v.clause, v.path))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_ctn_vector, CtnSpec};
    use crate::functionals::Sign;
    use crate::num::q;

    fn vector(n: u32, eps: Q, start: u64, exact: bool) -> ExactVectorRecord {
        let spec = CtnSpec { n, eps, start: nat(start), step: nat(1), sign_mask: 0b0110, c: qi(2), exact };
        build_ctn_vector(&spec, SpaceConfig::scaled()).unwrap()
    }

    fn avg(size: u64, idx: &[u64]) -> Term {
        Term::AlphaAverage { size: nat(size), children: idx.iter().map(|&i| Term::unit_u64(i)).collect() }
    }

    #[test]
    fn case_ids_round_trip() {
        for c in HarnessCase::ALL {
            assert_eq!(c.id().parse::<HarnessCase>().unwrap(), c);
        }
        assert!("lemma".parse::<HarnessCase>().is_err());
    }

    #[test]
    fn averages_on_a_level_two_vector() {
        let r = vector(2, q(1, 4), 5, false);
        let fam = vec![avg(1, &[5]), avg(3, &[6, 7, 8]), avg(40, &(5..45).collect::<Vec<_>>())];
        let inst = HarnessInstance { vector: r, functionals: fam, j: None };
        let rep = inequality_harness(HarnessCase::AverageOnVector, &inst, SpaceConfig::scaled(), None).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.entries.len(), 3);
    }

    #[test]
    fn low_weight_functional_and_family() {
        let r = vector(2, q(1, 4), 5, false);
        let fam = vec![avg(5, &[5, 6, 7, 8, 9]), avg(20, &(10..30).collect::<Vec<_>>())];
        let f = Term::TypeIAlpha { weight: nat(1), children: fam.clone() };
        let inst = HarnessInstance { vector: r.clone(), functionals: vec![f], j: None };
        assert!(inequality_harness(HarnessCase::LowWeightTypeI, &inst, SpaceConfig::scaled(), None).unwrap().pass);
        let inst = HarnessInstance { vector: r, functionals: fam, j: Some(1) };
        assert!(inequality_harness(HarnessCase::VfgFamily, &inst, SpaceConfig::scaled(), None).unwrap().pass);
    }

    #[test]
    fn unmet_preconditions_are_malformed_instances() {
        let cfg = SpaceConfig::scaled();
        let r = vector(1, q(1, 4), 5, false);
        let f = Term::TypeIAlpha { weight: nat(1), children: vec![avg(1, &[5])] };
        let inst = HarnessInstance { vector: r.clone(), functionals: vec![f], j: None };
        assert_eq!(inequality_harness(HarnessCase::LowWeightTypeI, &inst, cfg, None).unwrap_err().code(), "malformed-instance");
        let inst = HarnessInstance { vector: r.clone(), functionals: vec![avg(1, &[5])], j: Some(0) };
        assert_eq!(inequality_harness(HarnessCase::BetaFamily, &inst, cfg, None).unwrap_err().code(), "malformed-instance");
        let g = Term::TypeII { children: vec![Term::TypeIAlpha { weight: nat(4), children: vec![avg(1, &[5])] }], weights: vec![nat(4)] };
        let inst = HarnessInstance { vector: r.clone(), functionals: vec![g], j: None };
        assert_eq!(inequality_harness(HarnessCase::WeightGap, &inst, cfg, None).unwrap_err().code(), "malformed-instance");
        let inst = HarnessInstance { vector: r, functionals: vec![Term::unit(nat(5), Sign::Plus)], j: None };
        assert_eq!(inequality_harness(HarnessCase::AverageOnVector, &inst, cfg, None).unwrap_err().code(), "malformed-instance");
    }

    #[test]
    fn weight_gap_on_a_level_three_exact_vector() {
        let cfg = SpaceConfig::scaled();
        let r = vector(3, q(3, 4), 2, true);
        // 68 lies above 2^6, while 4 lies inside {3, ..., 64}
        let f1 = Term::TypeIAlpha { weight: nat(68), children: vec![avg(1, &[2])] };
        let g = Term::TypeII { children: vec![f1], weights: vec![nat(68)] };
        let inst = HarnessInstance { vector: r.clone(), functionals: vec![g], j: None };
        let rep = inequality_harness(HarnessCase::WeightGap, &inst, cfg, None).unwrap();
        assert!(rep.pass, "{rep:?}");
        let f1 = Term::TypeIAlpha { weight: nat(4), children: vec![avg(1, &[2])] };
        let g = Term::TypeII { children: vec![f1], weights: vec![nat(4)] };
        let inst = HarnessInstance { vector: r, functionals: vec![g], j: None };
        assert_eq!(inequality_harness(HarnessCase::WeightGap, &inst, cfg, None).unwrap_err().code(), "malformed-instance");
    }
}
