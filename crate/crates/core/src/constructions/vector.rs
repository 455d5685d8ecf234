//! `(C, θ, n)` vectors and exact vectors `x = 2^n Σ c_k x_k`.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::blocks::C0Blocks;
use super::{ClauseCheck, ClauseStatus};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalTerm, Grammar, Mode, SpaceConfig, Term, Validator};
use crate::normsearch::{norm_certificate, upper_bound, BlockPresentation, Budget, NormCertificate, SearchContext, UpperCandidate};
use crate::num::{fmt_q, nat, nat_q, pow2, qi, qstr, qstr_vec, Nat, Q};
use crate::scc::{generate_basic_scc, validate_basic_scc, IndexStream, SccBudget};
use crate::vectors::{BlockSequence, RationalVector};

/// Constant of the exact vectors behind exact pairs.
pub const PAIR_C: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactVectorRecord {
    pub mode: Mode,
    #[serde(with = "qstr")]
    pub c: Q,
    #[serde(with = "qstr")]
    pub theta: Q,
    pub n: u32,
    /// Level at which the ψ-projection of the coefficients is a basic s.c.c.
    pub scc_level: u32,
    #[serde(with = "qstr")]
    pub eps: Q,
    pub blocks: BlockSequence,
    pub block_uppers: Vec<UpperCandidate>,
    #[serde(with = "qstr_vec")]
    pub coefficients: Vec<Q>,
    pub vector: RationalVector,
    /// `(1/2^n) Σ α_k` when the blocks carry witness averages.
    pub companion: Option<FunctionalTerm>,
    /// The α-RIS ladder `n_k`; empty for plain `(C, θ, n)` vectors.
    #[serde(with = "crate::num::natstr_vec")]
    pub ladder: Vec<Nat>,
    pub certificate: NormCertificate,
    pub clauses: Vec<ClauseCheck>,
}

impl ExactVectorRecord {
    pub fn is_exact(&self) -> bool {
        !self.ladder.is_empty()
    }
}

/// Refusal for faithful mode: the support of any exact vector outgrows memory.
pub(crate) fn faithful_gate(n: u32, c: i64) -> Error {
    let blocks = BigUint::from(36u32 * c as u32) * pow2(3 * n as u64) + 1u32;
    Error::infeasible(
        "exact vector",
        format!(
            "ε < 1/(36·{c}·2^{}) needs more than {blocks} blocks; with faithful growth the fourth block already starts beyond 2^65",
            3 * n
        ),
    )
}

/// `x′ = 2^n Σ c_k y_k` over the given `c_0` blocks with uniform `c_k`, and
/// the companion `f = (1/2^n) Σ α_k` with `f(x′) = 1`.
///
/// The coefficients form a basic s.c.c. of level 1 on the ψ positions, which
/// needs at least two blocks and no more blocks than the first ψ position.
/// `ε` defaults to `1/(p − 1)` for `p` blocks.
pub fn build_exact_vector(n: u32, source: &C0Blocks, eps: Option<Q>, config: SpaceConfig) -> Result<ExactVectorRecord> {
    if config.mode == Mode::Faithful {
        return Err(faithful_gate(n, PAIR_C));
    }
    if n == 0 {
        return Err(Error::malformed("n must be positive"));
    }
    let p = source.blocks.len();
    if p < 2 || nat(p as u64) > source.blocks.psi(0) {
        return Err(Error::malformed(format!("{p} blocks do not fit a level-1 combination starting at {}", source.blocks.psi(0))));
    }
    let eps = eps.unwrap_or_else(|| Q::new(1.into(), (p as i64 - 1).into()));
    let c = vec![Q::new(1.into(), (p as i64).into()); p];
    let companion = FunctionalTerm::new(Grammar::W, Term::TypeIAlpha { weight: nat(n as u64), children: source.witnesses.clone() });
    let ladder = ladder_for(n, &source.blocks);
    assemble(Parts {
        mode: config.mode,
        c: qi(PAIR_C),
        theta: qi(1),
        n,
        scc_level: 1,
        eps,
        blocks: source.blocks.clone(),
        coefficients: c,
        companion: Some(companion),
        ladder,
        budget: Budget::default(),
    }, config)
}

/// Parameters of a `(C, θ, n)` vector on signed unit blocks `±e_{p_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtnSpec {
    pub n: u32,
    #[serde(with = "qstr")]
    pub eps: Q,
    #[serde(with = "crate::num::natstr")]
    pub start: Nat,
    #[serde(with = "crate::num::natstr")]
    pub step: Nat,
    /// Bit `k mod 64` set flips the sign of block `k`.
    pub sign_mask: u64,
    #[serde(with = "qstr")]
    pub c: Q,
    /// Attach an α-RIS ladder, making the vector exact when the clauses hold.
    pub exact: bool,
}

/// `x = 2^n Σ c_k (±e_{p_k})` with `Σ c_k e_{p_k}` a generated `(n, ε)` basic s.c.c.
/// on `{start, start + step, ...}`; `θ` is the certified lower bound.
pub fn build_ctn_vector(spec: &CtnSpec, config: SpaceConfig) -> Result<ExactVectorRecord> {
    if spec.c < qi(1) {
        return Err(Error::malformed("C must be at least 1"));
    }
    let scc = generate_basic_scc(&IndexStream::Arithmetic { from: spec.start.clone(), step: spec.step.clone() }, spec.n, &spec.eps, SccBudget::default())?;
    let mut blocks = Vec::with_capacity(scc.coefficients.len());
    let mut coefficients = Vec::with_capacity(scc.coefficients.len());
    for (k, (i, c)) in scc.coefficients.iter().enumerate() {
        let s = if spec.sign_mask >> (k % 64) & 1 == 1 { -qi(1) } else { qi(1) };
        blocks.push(RationalVector::from_entries([(i.clone(), s)])?);
        coefficients.push(c.clone());
    }
    let blocks = BlockSequence::new(blocks)?;
    let ladder = if spec.exact { ladder_for(spec.n, &blocks) } else { Vec::new() };
    assemble(Parts {
        mode: config.mode,
        c: spec.c.clone(),
        theta: Q::zero(),
        n: spec.n,
        scc_level: spec.n,
        eps: spec.eps.clone(),
        blocks,
        coefficients,
        companion: None,
        ladder,
        budget: Budget::default(),
    }, config)
}

/// `n_1 = 2^{2n} + 1`, `n_{k+1} = n_k + bits(max supp x_k) + 1`.
fn ladder_for(n: u32, blocks: &BlockSequence) -> Vec<Nat> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut cur = pow2(2 * n as u64) + 1u32;
    for x in blocks.blocks() {
        out.push(cur.clone());
        let top = x.max_supp().cloned().unwrap_or_default();
        cur += top.bits() + 1;
    }
    out
}

struct Parts {
    mode: Mode,
    c: Q,
    theta: Q,
    n: u32,
    scc_level: u32,
    eps: Q,
    blocks: BlockSequence,
    coefficients: Vec<Q>,
    companion: Option<FunctionalTerm>,
    ladder: Vec<Nat>,
    budget: Budget,
}

fn assemble(p: Parts, config: SpaceConfig) -> Result<ExactVectorRecord> {
    let scale = nat_q(&pow2(p.n as u64));
    let scaled: Vec<Q> = p.coefficients.iter().map(|c| c * &scale).collect();
    let vector = p.blocks.combine(&scaled);
    let block_uppers = p.blocks.blocks().iter().map(upper_bound).collect::<Result<Vec<_>>>()?;
    let presentation = BlockPresentation { blocks: p.blocks.clone(), coefficients: scaled };
    let hints = p.companion.iter().map(|f| f.root.clone()).collect();
    let certificate = norm_certificate(&vector, p.budget, config, &SearchContext { registry: None, blocks: Some(&presentation), hints })?;
    let theta = if p.theta.is_zero() { certificate.lower.clone() } else { p.theta };
    let mut record = ExactVectorRecord {
        mode: p.mode,
        c: p.c,
        theta,
        n: p.n,
        scc_level: p.scc_level,
        eps: p.eps,
        blocks: p.blocks,
        block_uppers,
        coefficients: p.coefficients,
        vector,
        companion: p.companion,
        ladder: p.ladder,
        certificate,
        clauses: Vec::new(),
    };
    record.clauses = check_vector(&record, config)?;
    Ok(record)
}

/// Re-derives every defining clause from the finished record.
pub fn check_vector(r: &ExactVectorRecord, config: SpaceConfig) -> Result<Vec<ClauseCheck>> {
    let mut out = Vec::new();
    let two_n = nat_q(&pow2(r.n as u64));
    let c = &r.c;

    let mut assembled = RationalVector::new();
    for (x, ck) in r.blocks.blocks().iter().zip(&r.coefficients) {
        assembled = assembled.add(&x.scale(&(ck * &two_n)));
    }
    let same_len = r.blocks.len() == r.coefficients.len();
    out.push(ClauseCheck::exact("assembly", same_len && assembled == r.vector, "x = 2^n Σ c_k x_k"));

    let in_unit = r.coefficients.iter().all(|x| !x.is_negative() && x <= &qi(1));
    out.push(ClauseCheck::exact("coefficients", in_unit, "c_k ∈ [0, 1]"));

    let mut worst = Q::zero();
    let mut refuted = false;
    for x in r.blocks.blocks() {
        let u = upper_bound(x)?;
        worst = worst.max(u.value);
        refuted |= &x.linf() > c;
    }
    let status = if worst <= *c {
        ClauseStatus::Holds
    } else if refuted {
        ClauseStatus::Fails
    } else {
        ClauseStatus::Unverified
    };
    out.push(ClauseCheck::new("block-norms", status, format!("largest certified block bound {} against C = {}", fmt_q(&worst), fmt_q(c))));

    let eps_bound = Q::one() / (qi(36) * c * nat_q(&pow2(3 * r.n as u64)));
    out.push(ClauseCheck::exact(
        "epsilon",
        r.eps.is_positive() && r.eps < eps_bound,
        format!("ε = {} against 1/(36C·2^(3n))", fmt_q(&r.eps)),
    ));

    let min_supp = r.blocks.blocks().first().and_then(|x| x.min_supp().cloned()).unwrap_or_default();
    let supp_bound = qi(8) * c * nat_q(&pow2(2 * r.n as u64));
    out.push(ClauseCheck::exact("min-support", nat_q(&min_supp) >= supp_bound, format!("min supp x_1 = {min_supp} against 8C·2^(2n)")));

    let psi = r.blocks.psi_vector(&r.coefficients);
    let at_n = validate_basic_scc(&psi, r.n, &r.eps)?;
    out.push(ClauseCheck::exact(
        "scc",
        at_n.valid && psi.len() == r.coefficients.len(),
        format!("({}, ε) basic s.c.c.: largest S_(n-1) mass {}", r.n, fmt_q(&at_n.max_lower_sum)),
    ));
    if r.scc_level != r.n {
        let at_level = validate_basic_scc(&psi, r.scc_level, &r.eps)?;
        out.push(ClauseCheck::exact(
            "scc-at-built-level",
            at_level.valid,
            format!("({}, ε) basic s.c.c.: largest mass {}", r.scc_level, fmt_q(&at_level.max_lower_sum)),
        ));
    }

    let cert = &r.certificate;
    let cert_ok = cert.vector == r.vector && cert.verify(config).is_ok();
    out.push(ClauseCheck::exact("certificate", cert_ok, "norm certificate re-verifies"));
    let status = if cert_ok && cert.lower >= r.theta {
        ClauseStatus::Holds
    } else if cert_ok && cert.upper < r.theta {
        ClauseStatus::Fails
    } else {
        ClauseStatus::Unverified
    };
    out.push(ClauseCheck::new("norm-lower", status, format!("‖x‖ ∈ [{}, {}] against θ = {}", fmt_q(&cert.lower), fmt_q(&cert.upper), fmt_q(&r.theta))));
    let seven_c = qi(7) * c;
    let status = if cert_ok && cert.upper < seven_c {
        ClauseStatus::Holds
    } else if cert_ok && cert.lower >= seven_c {
        ClauseStatus::Fails
    } else {
        ClauseStatus::Unverified
    };
    out.push(ClauseCheck::new("norm-below-7C", status, format!("upper {} against 7C = {}", fmt_q(&cert.upper), fmt_q(&seven_c))));

    if let Some(f) = &r.companion {
        let valid = Validator::new(config).is_valid(f);
        let weight_ok = f.root.type_i_weight() == Some(&nat(r.n as u64));
        out.push(ClauseCheck::exact("companion", valid && weight_ok, format!("type I functional of weight {}, f(x) = {}", r.n, fmt_q(&f.eval(&r.vector)))));
    }

    if !r.ladder.is_empty() {
        out.extend(check_ris(r)?);
    }
    Ok(out)
}

fn check_ris(r: &ExactVectorRecord) -> Result<Vec<ClauseCheck>> {
    let mut out = Vec::new();
    let lad = &r.ladder;
    let first = pow2(2 * r.n as u64);
    let increasing = lad.len() == r.blocks.len() && lad.windows(2).all(|w| w[0] < w[1]) && lad.first().is_some_and(|n1| n1 > &first);
    out.push(ClauseCheck::exact("ladder", increasing, "n_k strictly increasing with n_1 > 2^(2n)"));

    // |f(x_k)| ≤ 2^{-j} Σ_q |α_q(x_k)| ≤ 2^{-j} ‖x_k‖_1
    let mut status = ClauseStatus::Holds;
    let mut detail = String::from("‖x_k‖_1 < C for every block");
    for (k, x) in r.blocks.blocks().iter().enumerate() {
        if x.l1() < r.c {
            continue;
        }
        // (1/2) e*_i has weight 1 < n_k and attains |x_k(i)| / 2
        if x.linf() >= r.c {
            status = ClauseStatus::Fails;
            detail = format!("block {k}: (1/2)e*_i(x_k) reaches C/2");
            break;
        }
        status = ClauseStatus::Unverified;
        detail = format!("block {k}: ‖x_k‖_1 = {} is not below C", fmt_q(&x.l1()));
    }
    out.push(ClauseCheck::new("ris-type-i", status, detail));

    let mut ok = increasing;
    let mut detail = String::from("max supp x_k < 2^(n_(k+1) - n_k)");
    for k in 0..r.blocks.len().saturating_sub(1).min(lad.len().saturating_sub(1)) {
        let gap = (&lad[k + 1] - &lad[k]).to_u64();
        let top = r.blocks.blocks()[k].max_supp().cloned().unwrap_or_default();
        let holds = match gap {
            Some(g) => top < pow2(g),
            None => true,
        };
        if !holds {
            ok = false;
            detail = format!("block {k}: max supp {top} is not below 2^{}", gap.unwrap_or_default());
            break;
        }
    }
    out.push(ClauseCheck::exact("ris-growth", ok, detail));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::blocks::build_c0_blocks_from;
    use crate::constructions::clause_status;
    use crate::num::q;

    #[test]
    fn exact_vector_over_two_c0_blocks() {
        let cfg = SpaceConfig::scaled();
        let src = build_c0_blocks_from(&nat(3), 2, cfg).unwrap();
        let r = build_exact_vector(3, &src, None, cfg).unwrap();
        let f = r.companion.as_ref().unwrap();
        assert_eq!(f.eval(&r.vector), qi(1));
        assert_eq!(r.vector, RationalVector::from_entries(
            std::iter::once((nat(3), qi(4))).chain((6..=11).map(|i| (nat(i), qi(4)))),
        ).unwrap());
        assert_eq!(clause_status(&r.clauses, "assembly"), Some(ClauseStatus::Holds));
        assert_eq!(clause_status(&r.clauses, "scc-at-built-level"), Some(ClauseStatus::Holds));
        assert_eq!(clause_status(&r.clauses, "epsilon"), Some(ClauseStatus::Fails));
        assert_eq!(clause_status(&r.clauses, "ris-growth"), Some(ClauseStatus::Holds));
        assert_eq!(clause_status(&r.clauses, "companion"), Some(ClauseStatus::Holds));
        assert!(r.certificate.lower >= qi(1));
    }

    #[test]
    fn faithful_mode_is_refused() {
        let src = build_c0_blocks_from(&nat(3), 2, SpaceConfig::faithful()).unwrap();
        let e = build_exact_vector(1, &src, None, SpaceConfig::faithful()).unwrap_err();
        assert_eq!(e.code(), "infeasible-at-budget");
    }

    #[test]
    fn too_many_blocks_for_level_one() {
        let cfg = SpaceConfig::scaled();
        let src = build_c0_blocks_from(&nat(2), 3, cfg).unwrap();
        assert_eq!(build_exact_vector(1, &src, None, cfg).unwrap_err().code(), "malformed-input");
    }

    #[test]
    fn ctn_vector_on_unit_blocks() {
        let cfg = SpaceConfig::scaled();
        let spec = CtnSpec { n: 1, eps: q(1, 4), start: nat(70), step: nat(1), sign_mask: 0b1010, c: qi(2), exact: true };
        let r = build_ctn_vector(&spec, cfg).unwrap();
        assert_eq!(r.blocks.len(), 70);
        assert_eq!(r.vector.l1(), qi(2));
        for name in ["assembly", "block-norms", "min-support", "scc", "certificate", "norm-lower", "norm-below-7C", "ladder", "ris-type-i", "ris-growth"] {
            assert_eq!(clause_status(&r.clauses, name), Some(ClauseStatus::Holds), "{name}");
        }
        assert_eq!(clause_status(&r.clauses, "epsilon"), Some(ClauseStatus::Fails));
        assert_eq!(r.theta, r.certificate.lower);
    }
}
