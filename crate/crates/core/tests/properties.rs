use num_traits::{One, Signed};
use proptest::prelude::*;

use xisp::corpus::Corpus;
use xisp::functionals::{SpaceConfig, Validator};
use xisp::normsearch::{norm_certificate, Budget, SearchContext};
use xisp::num::{nat, q, Q};
use xisp::scc::{generate_basic_scc, validate_basic_scc, IndexStream, SccBudget};
use xisp::tsirelson::tsirelson_norm;
use xisp::vectors::{BlockSequence, RationalVector};

fn cfg() -> SpaceConfig {
    SpaceConfig::scaled()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every member of W is in the dual ball of the Tsirelson norm.
    #[test]
    fn functionals_are_dominated_by_the_tsirelson_norm(seed in any::<u64>()) {
        let mut c = Corpus::new(seed, cfg());
        let v = c.vector(9, 30, 3);
        let f = c.functional(1, 30, 4);
        prop_assert!(Validator::new(cfg()).is_valid(&f));
        let t = tsirelson_norm(&v).unwrap().value;
        prop_assert!(f.eval(&v).abs() <= t);
    }

    #[test]
    fn certificates_verify(seed in any::<u64>()) {
        let mut c = Corpus::new(seed, cfg());
        let v = c.vector(12, 40, 3);
        let cert = norm_certificate(&v, Budget::default(), cfg(), &SearchContext::default()).unwrap();
        prop_assert!(cert.verify(cfg()).is_ok());
        prop_assert!(cert.lower >= v.linf());
        prop_assert!(cert.upper <= v.l1());
    }

    #[test]
    fn norm_bounds_are_invariant_under_sign_flips(seed in any::<u64>(), mask in any::<u32>()) {
        let mut c = Corpus::new(seed, cfg());
        let v = c.vector(10, 30, 3);
        let flipped = RationalVector::from_entries(v.iter().enumerate().map(|(k, (i, x))| {
            (i.clone(), if mask >> k & 1 == 1 { -x.clone() } else { x.clone() })
        })).unwrap();
        let a = norm_certificate(&v, Budget::default(), cfg(), &SearchContext::default()).unwrap();
        let b = norm_certificate(&flipped, Budget::default(), cfg(), &SearchContext::default()).unwrap();
        prop_assert_eq!(a.upper, b.upper);
        prop_assert_eq!(a.lower, b.lower);
    }

    /// Moving the coefficients of a level-one combination from the block
    /// minima to the block maxima keeps a basic s.c.c. with twice the tolerance.
    #[test]
    fn phi_shift_doubles_the_tolerance(start in 3u64..12, gaps in proptest::collection::vec(0u64..3, 64)) {
        let eps = q(1, 2);
        let d = generate_basic_scc(&IndexStream::Arithmetic { from: nat(start), step: nat(3) }, 1, &eps, SccBudget::default()).unwrap();
        let blocks: Vec<RationalVector> = d.coefficients.support().iter().zip(&gaps)
            .map(|(i, g)| RationalVector::from_entries((0..=*g).map(|t| (i + t, Q::one()))).unwrap())
            .collect();
        let xs = BlockSequence::new(blocks).unwrap();
        let coeffs: Vec<Q> = d.coefficients.iter().map(|(_, x)| x.clone()).collect();
        let phi = xs.phi_vector(&coeffs);
        prop_assert!(validate_basic_scc(&phi, 1, &(eps * Q::from_integer(2.into()))).unwrap().valid);
    }
}

#[test]
fn generator_round_trips_where_feasible() {
    for n in 1..=3u32 {
        for eps in [q(1, 1), q(1, 2), q(1, 4), q(1, 8)] {
            match generate_basic_scc(&IndexStream::from(nat(1)), n, &eps, SccBudget::default()) {
                Ok(d) => assert!(validate_basic_scc(&d.coefficients, n, &eps).unwrap().valid),
                Err(e) => {
                    // level 3 with ε < 1 needs more than 2^2048 points
                    assert!(n == 3 && eps < Q::one(), "({n}, {eps}): {e}");
                    assert_eq!(e.code(), "infeasible-at-budget");
                }
            }
        }
    }
}
