//! The verification suites behind `xisp verify` and the acceptance target.
//!
//! Every suite is deterministic for a given seed and reports each failing
//! instance. Suites never stop at the first failure.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_ctn_vector, build_dependent_sequence, hi_demo, CtnSpec, ExactVectorRecord, PairKind};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::functionals::{Grammar, SigmaRegistry, SpaceConfig, Term, Validator};
use crate::normsearch::{
    alpha_family_search, basic_inequality_witness, inequality_harness, norm_certificate, search, BlockPresentation, Budget, HarnessCase,
    HarnessInstance, NormCertificate, SearchContext,
};
use crate::num::{fmt_q, nat, pow2_inv, q, qi, Nat, Q};
use crate::scc::{generate_basic_scc, lift_scc, IndexStream, SccBudget};
use crate::schreier::{brute_is_member, is_member, max_schreier_sum};
use crate::tsirelson::{brute_force_oracle, modified_norm, tsirelson_norm, tsirelson_upper};
use crate::vectors::{BlockSequence, RationalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TsirelsonOracle,
    Sandwich,
    Schreier,
    SccRestriction,
    BasicInequality,
    BlockCertificates,
    Harness,
    DependentWitness,
    Soundness,
    BudgetMonotonicity,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::TsirelsonOracle,
        Suite::Sandwich,
        Suite::Schreier,
        Suite::SccRestriction,
        Suite::BasicInequality,
        Suite::BlockCertificates,
        Suite::Harness,
        Suite::DependentWitness,
        Suite::Soundness,
        Suite::BudgetMonotonicity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::TsirelsonOracle => "tsirelson-oracle",
            Suite::Sandwich => "sandwich",
            Suite::Schreier => "schreier",
            Suite::SccRestriction => "scc-restriction",
            Suite::BasicInequality => "basic-inequality",
            Suite::BlockCertificates => "block-certificates",
            Suite::Harness => "harness",
            Suite::DependentWitness => "dependent-witness",
            Suite::Soundness => "soundness",
            Suite::BudgetMonotonicity => "budget-monotonicity",
        }
    }

    /// Acceptance criterion number, 1 to 10.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|s| *s == self).expect("listed") + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s || s.parse::<usize>().ok() == Some(x.criterion()))
            .ok_or_else(|| Error::malformed(format!("unknown suite {s:?}; known: {}", Suite::ALL.map(Suite::id).join(", "))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub criterion: usize,
    pub seed: u64,
    pub pass: bool,
    /// Number of individual comparisons made.
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    fn note(&mut self, what: String) {
        self.notes.push(what);
    }

    fn finish(self, suite: Suite, seed: u64) -> SuiteReport {
        SuiteReport { suite, criterion: suite.criterion(), seed, pass: self.failures.is_empty() && self.checks > 0, checks: self.checks, failures: self.failures, notes: self.notes }
    }
}

fn scaled() -> SpaceConfig {
    SpaceConfig::scaled()
}

/// Runs one suite. The soundness suite produces and checks its own certificates.
pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let mut t = Tally::default();
    match suite {
        Suite::TsirelsonOracle => tsirelson_oracle(&mut t, seed),
        Suite::Sandwich => sandwich(&mut t, seed),
        Suite::Schreier => schreier(&mut t, seed),
        Suite::SccRestriction => scc_restriction(&mut t, seed),
        Suite::BasicInequality => basic_inequality(&mut t, seed),
        Suite::BlockCertificates => block_certificates(&mut t, seed),
        Suite::Harness => harness(&mut t),
        Suite::DependentWitness => dependent_witness(&mut t),
        Suite::Soundness => {
            search::start_recording();
            let mut registries = Vec::new();
            certificate_corpus(&mut t, seed, &mut registries);
            let certs = search::take_recorded();
            soundness(&mut t, &certs, &registries);
            replay(&mut t);
        }
        Suite::BudgetMonotonicity => budget_monotonicity(&mut t, seed),
    }
    t.finish(suite, seed)
}

/// Runs several suites in parallel, reporting in the order given.
///
/// When the soundness suite is included it also checks every certificate the
/// other suites emitted.
pub fn run_suites(suites: &[Suite], seed: u64) -> Vec<SuiteReport> {
    let sweep = suites.contains(&Suite::Soundness);
    if sweep {
        search::start_recording();
    }
    let mut reports: Vec<SuiteReport> = suites
        .par_iter()
        .map(|&s| if s == Suite::Soundness { SuiteReport { suite: s, criterion: s.criterion(), seed, pass: false, checks: 0, failures: vec![], notes: vec![] } } else { run_suite(s, seed) })
        .collect();
    if sweep {
        let mut t = Tally::default();
        let mut registries = Vec::new();
        certificate_corpus(&mut t, seed, &mut registries);
        registries.extend(demo_registries());
        let certs = search::take_recorded();
        soundness(&mut t, &certs, &registries);
        replay(&mut t);
        let pos = suites.iter().position(|s| *s == Suite::Soundness).expect("present");
        reports[pos] = t.finish(Suite::Soundness, seed);
    }
    reports
}

fn tsirelson_oracle(t: &mut Tally, seed: u64) {
    let mut c = Corpus::new(seed, scaled());
    for k in 0..200 {
        let v = c.vector(8, 16, 3);
        match (tsirelson_norm(&v), brute_force_oracle(&v)) {
            (Ok(a), Ok(b)) => t.check(a.value == b && a.witness.eval(&v) == a.value, || format!("vector {k}: dp {} vs oracle {}", fmt_q(&a.value), fmt_q(&b))),
            (a, b) => t.fail(format!("vector {k}: {:?} / {:?}", a.err(), b.err())),
        }
    }
}

fn sandwich(t: &mut Tally, seed: u64) {
    let mut c = Corpus::new(seed ^ 0x5a5a, scaled());
    for k in 0..100 {
        let v = c.vector(12, 24, 3);
        match (tsirelson_norm(&v), modified_norm(&v)) {
            (Ok(a), Ok(m)) => {
                let (a, m) = (a.value, m.value);
                t.check(a <= m && m <= &a * qi(3), || format!("vector {k}: ‖v‖_T = {}, |||v||| = {}", fmt_q(&a), fmt_q(&m)));
            }
            (a, b) => t.fail(format!("vector {k}: {:?} / {:?}", a.err(), b.err())),
        }
    }
}

fn schreier(t: &mut Tally, seed: u64) {
    for n in 0..=3u32 {
        let bad: Vec<String> = (0u32..1 << 14)
            .into_par_iter()
            .filter_map(|mask| {
                let set: Vec<Nat> = (1..=14u64).filter(|i| mask >> (i - 1) & 1 == 1).map(nat).collect();
                let fast = is_member(&set, n).map(|m| m.is_some());
                match fast {
                    Ok(f) if f == brute_is_member(&set, n) => None,
                    other => Some(format!("S_{n} membership of mask {mask:#x}: {other:?}")),
                }
            })
            .collect();
        t.checks += 1 << 14;
        t.failures.extend(bad);
    }
    let mut c = Corpus::new(seed ^ 0x3c3c, scaled());
    for k in 0..100 {
        let w = c.weights(10, 20);
        let n = c.below(4) as u32;
        let supp = w.support();
        let mut best = Q::zero();
        for mask in 0u32..1 << supp.len() {
            let set: Vec<Nat> = supp.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect();
            if brute_is_member(&set, n) {
                best = best.max(set.iter().map(|i| w.get(i)).sum());
            }
        }
        match max_schreier_sum(&w, n) {
            Ok(s) => {
                let attained: Q = s.witness.iter().map(|i| w.get(i)).sum();
                t.check(s.value == best && attained == best && brute_is_member(&s.witness, n), || {
                    format!("weights {k} at level {n}: {} vs exhaustive {}", fmt_q(&s.value), fmt_q(&best))
                });
            }
            Err(e) => t.fail(format!("weights {k}: {e}")),
        }
    }
}

/// `‖Σ_{k∈G} c_k e_k‖_T ≤ (1/2^n) Σ_G c_k + ε`, using the exact norm when the
/// support allows and a certified upper bound otherwise.
fn scc_restriction(t: &mut Tally, seed: u64) {
    let mut c = Corpus::new(seed ^ 0x2121, scaled());
    for n in 1..=3u32 {
        for eps in [q(1, 4), q(1, 8)] {
            let scc = match generate_basic_scc(&IndexStream::from(Nat::one()), n, &eps, SccBudget::default()) {
                Ok(s) => s,
                Err(e) => {
                    t.fail(format!("({n}, {}) generation: {e}", fmt_q(&eps)));
                    continue;
                }
            };
            let f = scc.coefficients.support();
            let mut subsets = vec![f.clone()];
            subsets.extend((0..50).map(|_| c.subset(&f)));
            let results: Vec<std::result::Result<(), String>> = subsets
                .par_iter()
                .map(|g| {
                    let v = scc.coefficients.restrict_to(|i| g.binary_search(i).is_ok());
                    let mass: Q = v.l1();
                    let rhs = pow2_inv(n as u64) * mass + &eps;
                    let lhs = tsirelson_upper(&v, 64).map_err(|e| e.to_string())?;
                    if lhs <= rhs {
                        Ok(())
                    } else {
                        Err(format!("({n}, {}) on {} of {} points: bound {} > {}", fmt_q(&eps), g.len(), f.len(), fmt_q(&lhs), fmt_q(&rhs)))
                    }
                })
                .collect();
            for r in results {
                t.check(r.is_ok(), || r.clone().unwrap_err());
            }
            t.note(format!("({n}, {}) basic s.c.c. on {} points from {}", fmt_q(&eps), f.len(), f[0]));
        }
    }
}

fn basic_inequality(t: &mut Tally, seed: u64) {
    let cfg = scaled();
    let mut c = Corpus::new(seed ^ 0x7777, cfg);
    for k in 0..100 {
        let count = 1 + c.below(5) as usize;
        let start = 1 + c.below(3);
        let xs = match c.normalised_blocks(count, start, 4) {
            Ok(x) => x,
            Err(e) => {
                t.fail(format!("instance {k}: blocks: {e}"));
                continue;
            }
        };
        let hi = xs.blocks().last().and_then(|x| x.max_supp()).and_then(|m| u64::try_from(m).ok()).unwrap_or(start);
        let f = c.functional(start, hi, 4);
        match basic_inequality_witness(&f, &xs, cfg) {
            Ok(g) => {
                let valid = g.grammar == Grammar::WTriple && Validator::new(cfg).is_valid(&g);
                t.check(valid, || format!("instance {k}: witness is not in W_|||"));
                for (j, x) in xs.blocks().iter().enumerate() {
                    let lhs = qi(2) * g.eval(&RationalVector::unit(xs.phi(j)));
                    let rhs = f.eval(x);
                    t.check(lhs >= rhs, || format!("instance {k}, block {j}: 2g(e_φ) = {} < f(x) = {}", fmt_q(&lhs), fmt_q(&rhs)));
                }
            }
            Err(e) => t.fail(format!("instance {k}: {e}")),
        }
    }
}

/// Blocks whose minima follow a basic s.c.c., normalised, then lifted.
fn lifted_instance(c: &mut Corpus, n: u32, eps: &Q, start: u64, step: u64) -> Result<(BlockPresentation, RationalVector)> {
    let scc = generate_basic_scc(&IndexStream::Arithmetic { from: nat(start), step: nat(step) }, n, eps, SccBudget::default())?;
    let pts: Vec<(Nat, Q)> = scc.coefficients.iter().map(|(i, x)| (i.clone(), x.clone())).collect();
    let mut blocks = Vec::with_capacity(pts.len());
    for (i, _) in &pts {
        let mut x = RationalVector::new();
        x.set(i.clone(), c.rational(3, 3));
        for d in 1..step {
            if c.coin(0.5) {
                x.set(i + d, c.rational(3, 3));
            }
        }
        let u = crate::normsearch::upper_bound(&x)?.value;
        blocks.push(x.scale(&(Q::one() / u)));
    }
    let blocks = BlockSequence::new(blocks)?;
    let coefficients: Vec<Q> = pts.into_iter().map(|(_, x)| x).collect();
    let lifted = lift_scc(&blocks, &coefficients, n, eps)?;
    Ok((BlockPresentation { blocks, coefficients }, lifted.vector))
}

fn block_certificates(t: &mut Tally, seed: u64) {
    let cfg = scaled();
    let mut c = Corpus::new(seed ^ 0x0b0b, cfg);
    let mut plan = Vec::new();
    for (k, (n, eps)) in [(1u32, q(1, 4)), (1, q(1, 8)), (2, q(1, 4)), (1, q(1, 2))].iter().cycle().take(20).enumerate() {
        let step = if *n == 2 { 2 + k as u64 % 2 } else { 2 + k as u64 % 3 };
        plan.push((*n, eps.clone(), 1 + (k as u64 % 5), step));
    }
    let instances: Vec<_> = plan.iter().map(|(n, eps, start, step)| (*n, eps.clone(), lifted_instance(&mut c, *n, eps, *start, *step))).collect();
    let results: Vec<std::result::Result<String, String>> = instances
        .into_par_iter()
        .map(|(n, eps, inst)| {
            let (p, v) = inst.map_err(|e| format!("({n}, {}): {e}", fmt_q(&eps)))?;
            let cert = norm_certificate(&v, Budget::default(), cfg, &SearchContext { registry: None, blocks: Some(&p), hints: vec![] }).map_err(|e| e.to_string())?;
            let bound = qi(6) * pow2_inv(n as u64) + qi(12) * &eps;
            if cert.upper <= bound {
                Ok(format!("({n}, {}) on {} blocks: [{}, {}] ≤ {}", fmt_q(&eps), p.blocks.len(), fmt_q(&cert.lower), fmt_q(&cert.upper), fmt_q(&bound)))
            } else {
                Err(format!("({n}, {}): upper {} exceeds {}", fmt_q(&eps), fmt_q(&cert.upper), fmt_q(&bound)))
            }
        })
        .collect();
    for r in results {
        match r {
            Ok(note) => {
                t.checks += 1;
                t.note(note);
            }
            Err(e) => t.fail(e),
        }
    }
}

/// The twenty `(C, θ, n)` vectors of the harness suite, all with `C = 2`.
pub fn harness_specs() -> Vec<CtnSpec> {
    let mut out = Vec::new();
    let spec = |n: u32, eps: Q, start: u64, mask: u64| CtnSpec { n, eps, start: nat(start), step: nat(1), sign_mask: mask, c: qi(2), exact: true };
    for (k, start) in [5u64, 6, 9, 13, 20, 31, 50, 70].into_iter().enumerate() {
        let eps = if k % 2 == 0 { q(1, 4) } else { q(1, 3) };
        out.push(spec(1, eps, start, 0b0110_1001 * k as u64));
    }
    for (k, start) in [4u64, 5, 6, 7, 8, 9, 10, 11].into_iter().enumerate() {
        let eps = if start > 8 { q(1, 8) } else if k % 2 == 0 { q(1, 4) } else { q(1, 3) };
        out.push(spec(2, eps, start, 0x5555_0f0f * (k as u64 + 1)));
    }
    for (k, mask) in [0u64, u64::MAX, 0xaaaa_aaaa_aaaa_aaaa, 0x0123_4567_89ab_cdef].into_iter().enumerate() {
        let eps = if k < 2 { q(3, 4) } else { q(7, 8) };
        out.push(spec(3, eps, 2, mask));
    }
    out
}

/// Functionals for each harness case on one vector.
pub fn harness_instances(r: &ExactVectorRecord) -> Vec<(HarnessCase, HarnessInstance)> {
    let cfg = scaled();
    let x = &r.vector;
    let supp = x.support();
    let mut out = Vec::new();

    // α-averages: uniform and signed over windows of the support, and singletons
    let mut averages = Vec::new();
    for len in [1usize, 2, 3, 5, 8, 13, 40, 200] {
        for from in [0usize, 1, supp.len() / 3, supp.len() / 2] {
            if from + len > supp.len() {
                continue;
            }
            let window = &supp[from..from + len];
            let signed: Vec<Term> = window.iter().map(|i| Term::unit(i.clone(), crate::functionals::Sign::of(&x.get(i)))).collect();
            averages.push(Term::AlphaAverage { size: nat(len as u64), children: signed });
            averages.push(Term::AlphaAverage { size: nat(2 * len as u64), children: window.iter().map(|i| Term::unit(i.clone(), crate::functionals::Sign::Plus)).collect() });
        }
    }
    let beyond = supp.last().map(|m| m + 5u32).unwrap_or_else(|| nat(1));
    averages.push(Term::AlphaAverage { size: nat(1), children: vec![Term::unit(beyond, crate::functionals::Sign::Plus)] });
    out.push((HarnessCase::AverageOnVector, HarnessInstance { vector: r.clone(), functionals: averages, j: None }));

    // very fast growing families: the best weight-one family on x, on each third of x, and singletons
    let thirds: Vec<RationalVector> = (0..3)
        .map(|p| {
            let (a, b) = (p * supp.len() / 3, (p + 1) * supp.len() / 3);
            x.restrict_to(|i| supp[a..b].binary_search(i).is_ok())
        })
        .chain(std::iter::once(x.clone()))
        .collect();
    let mut families: Vec<Vec<Term>> = Vec::new();
    for part in &thirds {
        let part = if part.len() > search::SEARCH_CAP {
            part.restrict_to(|i| part.support()[..search::SEARCH_CAP].binary_search(i).is_ok())
        } else {
            part.clone()
        };
        if let Some((_, fam)) = alpha_family_search(&part, Budget::default(), cfg) {
            families.push(fam);
        }
    }
    for fam in &families {
        if r.n >= 2 {
            out.push((HarnessCase::VfgFamily, HarnessInstance { vector: r.clone(), functionals: fam.clone(), j: Some(1) }));
        }
        for a in fam {
            out.push((HarnessCase::VfgFamily, HarnessInstance { vector: r.clone(), functionals: vec![a.clone()], j: Some(0) }));
        }
    }

    // type I_α functionals of weight below n
    if r.n >= 2 {
        let mut fs = Vec::new();
        for fam in &families {
            for w in 1..r.n {
                fs.push(Term::TypeIAlpha { weight: nat(w as u64), children: fam.clone() });
            }
        }
        if !fs.is_empty() {
            out.push((HarnessCase::LowWeightTypeI, HarnessInstance { vector: r.clone(), functionals: fs, j: None }));
        }
    }
    out
}

fn harness(t: &mut Tally) {
    let cfg = scaled();
    let results: Vec<(usize, std::result::Result<Vec<(HarnessCase, crate::normsearch::HarnessReport)>, String>)> = harness_specs()
        .into_par_iter()
        .enumerate()
        .map(|(k, spec)| {
            let run = || -> Result<Vec<_>> {
                let r = build_ctn_vector(&spec, cfg)?;
                harness_instances(&r).into_iter().map(|(case, inst)| inequality_harness(case, &inst, cfg, None).map(|rep| (case, rep))).collect()
            };
            (k, run().map_err(|e| e.to_string()))
        })
        .collect();
    let mut per_case = std::collections::BTreeMap::<&str, (usize, usize)>::new();
    for (k, r) in results {
        match r {
            Err(e) => t.fail(format!("vector {k}: {e}")),
            Ok(reps) => {
                for (case, rep) in reps {
                    for e in &rep.entries {
                        let slot = per_case.entry(case.id()).or_default();
                        slot.0 += 1;
                        if !e.pass {
                            slot.1 += 1;
                        }
                        t.check(e.pass, || format!("vector {k} (n = {}), {case}: {} ≥ {} ({})", rep.n, fmt_q(&e.lhs), fmt_q(&e.rhs), e.note));
                    }
                }
            }
        }
    }
    for (case, (n, bad)) in per_case {
        t.note(format!("{case}: {n} entries, {bad} failing"));
    }
}

fn dependent_witness(t: &mut Tally) {
    let cfg = scaled();
    for n in [2usize, 3] {
        let mut reg = SigmaRegistry::new(cfg);
        match hi_demo(n, cfg, &mut reg, Budget::default()) {
            Ok(d) => {
                t.check(d.lower.lower >= qi(1), || format!("n = {n}: lower {}", fmt_q(&d.lower.lower)));
                let w = d.lower.witness.eval(&d.x.add(&d.y));
                t.check(w == d.lower.lower, || format!("n = {n}: witness gives {} not {}", fmt_q(&w), fmt_q(&d.lower.lower)));
                t.check(d.lower.verify_with(cfg, Some(&reg)).is_ok(), || format!("n = {n}: lower certificate does not verify"));
                t.note(format!(
                    "n = {n}: (1/n)‖Σ x_k‖ ≥ {}; kind 0: (1/n)‖Σ x_k‖ ∈ [{}, {}]",
                    brief(&d.lower.lower),
                    brief(&d.kind_zero_upper.lower),
                    brief(&d.kind_zero_upper.upper)
                ));
            }
            Err(e) => t.fail(format!("n = {n}: {e}")),
        }
    }
}

/// Registries behind the dependent-witness suite, rebuilt deterministically
/// so that type II witnesses can be checked against them.
fn demo_registries() -> Vec<SigmaRegistry> {
    let cfg = scaled();
    [2usize, 3]
        .into_iter()
        .filter_map(|n| {
            let mut reg = SigmaRegistry::new(cfg);
            hi_demo(n, cfg, &mut reg, Budget::default()).ok().map(|_| reg)
        })
        .collect()
}

/// Certificates from random vectors, lifted blocks and a small demo.
fn certificate_corpus(t: &mut Tally, seed: u64, registries: &mut Vec<SigmaRegistry>) {
    let cfg = scaled();
    let mut c = Corpus::new(seed ^ 0x9999, cfg);
    for k in 0..30 {
        let v = c.vector(10, 30, 3);
        if let Err(e) = norm_certificate(&v, Budget::default(), cfg, &SearchContext::default()) {
            t.fail(format!("corpus vector {k}: {e}"));
        }
    }
    let mut reg = SigmaRegistry::new(cfg);
    if let Err(e) = hi_demo(1, cfg, &mut reg, Budget::default()) {
        t.fail(format!("demo: {e}"));
    }
    registries.push(reg);
}

/// Every certificate: the witness evaluates to `lower`, `lower ≤ upper`, and
/// the witness is a member of `W` (against one of the session registries).
fn soundness(t: &mut Tally, certs: &[NormCertificate], registries: &[SigmaRegistry]) {
    let cfg = scaled();
    let bad: Vec<String> = certs
        .par_iter()
        .enumerate()
        .filter_map(|(k, cert)| {
            let value = cert.witness.eval(&cert.vector);
            if value != cert.lower || cert.lower > cert.upper {
                return Some(format!("certificate {k}: witness {} lower {} upper {}", fmt_q(&value), fmt_q(&cert.lower), fmt_q(&cert.upper)));
            }
            let member = cert.verify_with(cfg, None).is_ok() || registries.iter().any(|r| cert.verify_with(cfg, Some(r)).is_ok());
            (!member).then(|| format!("certificate {k}: {}", cert.verify_with(cfg, None).unwrap_err()))
        })
        .collect();
    t.checks += certs.len();
    t.failures.extend(bad);
    t.note(format!("{} certificates checked", certs.len()));
}

/// A saved registry, reopened, assigns byte-identical weights.
fn replay(t: &mut Tally) {
    let cfg = scaled();
    for (len, kind) in [(2usize, PairKind::One), (3, PairKind::Zero), (4, PairKind::One)] {
        let mut a = SigmaRegistry::new(cfg);
        let first = build_dependent_sequence(len, kind, cfg, &mut a);
        let saved = a.to_json();
        let mut b = match SigmaRegistry::from_json(&saved) {
            Ok(b) => b,
            Err(e) => {
                t.fail(format!("replay {len}: {e}"));
                continue;
            }
        };
        let second = build_dependent_sequence(len, kind, cfg, &mut b);
        match (first, second) {
            (Ok(s), Ok(u)) => {
                let same = serde_json::to_string(&s.weights).ok() == serde_json::to_string(&u.weights).ok();
                t.check(same && b.to_json() == saved, || format!("replay {len}: weights or registry bytes differ"));
                let mut fresh = SigmaRegistry::new(cfg);
                let again = build_dependent_sequence(len, kind, cfg, &mut fresh);
                t.check(again.is_ok_and(|g| g.weights == s.weights) && fresh.to_json() == saved, || format!("replay {len}: a fresh session differs"));
            }
            (a, b) => t.fail(format!("replay {len}: {:?} / {:?}", a.err(), b.err())),
        }
    }
}

fn budget_monotonicity(t: &mut Tally, seed: u64) {
    let cfg = scaled();
    let mut c = Corpus::new(seed ^ 0x4242, cfg);
    let vectors: Vec<RationalVector> = (0..20).map(|_| c.vector(14, 40, 3)).collect();
    let ladder = [
        Budget { depth: 1, children: 1, sizes: 1 },
        Budget { depth: 3, children: 2, sizes: 4 },
        Budget { depth: 4, children: 4, sizes: 16 },
        Budget::default(),
        Budget { depth: 8, children: 12, sizes: 128 },
    ];
    let results: Vec<Vec<String>> = vectors
        .par_iter()
        .enumerate()
        .map(|(k, v)| {
            let mut bad = Vec::new();
            let mut prev: Option<NormCertificate> = None;
            for b in ladder {
                match norm_certificate(v, b, cfg, &SearchContext::default()) {
                    Ok(cert) => {
                        if let Some(p) = &prev {
                            if cert.lower < p.lower || cert.upper > p.upper {
                                bad.push(format!("vector {k}, budget {b}: [{}, {}] after [{}, {}]", fmt_q(&cert.lower), fmt_q(&cert.upper), fmt_q(&p.lower), fmt_q(&p.upper)));
                            }
                        }
                        prev = Some(cert);
                    }
                    Err(e) => bad.push(format!("vector {k}, budget {b}: {e}")),
                }
            }
            bad
        })
        .collect();
    t.checks += vectors.len() * (ladder.len() - 1);
    for r in results {
        t.failures.extend(r);
    }
}

/// Exact form when short, otherwise the binary magnitude.
fn brief(x: &Q) -> String {
    let s = fmt_q(x);
    if s.len() <= 40 {
        return s;
    }
    let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    format!("≈2^{bits}")
}

/// One line per report: criterion, suite, verdict and the first failure.
pub fn describe(report: &SuiteReport) -> String {
    let status = if report.pass { "PASS" } else { "FAIL" };
    let mut s = format!("criterion {:>2} [{}] {status}: {} checks, {} failures", report.criterion, report.suite, report.checks, report.failures.len());
    if let Some(f) = report.failures.first() {
        s.push_str(&format!("; first: {f}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_criteria() {
        for (k, s) in Suite::ALL.iter().enumerate() {
            assert_eq!(s.criterion(), k + 1);
            assert_eq!(s.id().parse::<Suite>().unwrap(), *s);
            assert_eq!((k + 1).to_string().parse::<Suite>().unwrap(), *s);
        }
        assert!("prop".parse::<Suite>().is_err());
    }

    #[test]
    fn sandwich_suite_passes() {
        let r = run_suite(Suite::Sandwich, 1);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.checks, 100);
    }

    #[test]
    fn harness_specs_are_twenty() {
        let specs = harness_specs();
        assert_eq!(specs.len(), 20);
        for n in 1..=3 {
            assert!(specs.iter().any(|s| s.n == n));
        }
    }
}
