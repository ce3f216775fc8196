//! Property tests for the combinatorial layer and the exact bundle engine.

use hbn::birkhoff::birkhoff_factorize;
use hbn::cohomology::h0_twist;
use hbn::ext::{admissible_slots, doubled, extension_transition, is_split_extension, random_ext_class, surjective_at};
use hbn::field::Prime;
use hbn::matrix::{random_unimodular_antipoly, random_unimodular_poly, LaurentMatrix};
use hbn::splitting::{BBType, SplittingType};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitting_type(max_len: usize, bound: i64) -> impl Strategy<Value = SplittingType> {
    prop::collection::vec(-bound..=bound, 1..=max_len)
        .prop_map(|v| SplittingType::new(v).unwrap())
}

fn class_pair(max_len: usize, bound: i64) -> impl Strategy<Value = (SplittingType, SplittingType)> {
    // draw one type, then redistribute its total over the same length
    (splitting_type(max_len, bound), any::<u64>()).prop_map(|(e, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = e.len();
        let total = e.total();
        use rand::Rng;
        let mut other: Vec<i64> = (0..k).map(|_| rng.gen_range(-6..=6)).collect();
        let drift: i64 = total - other.iter().sum::<i64>();
        other[0] += drift;
        (e, SplittingType::new(other).unwrap())
    })
}

proptest! {
    #[test]
    fn riemann_roch(e in splitting_type(6, 6), n in -8..=8i64) {
        prop_assert_eq!(e.h0(n) - e.h1(n), e.total() + e.len() as i64 * (n + 1));
    }

    #[test]
    fn u_twist_invariance(e in splitting_type(6, 6), n in -5..=5i64) {
        prop_assert_eq!(e.twist(n).u_invariant(), e.u_invariant());
    }

    #[test]
    fn h0_profile_first_differences(e in splitting_type(6, 6), n in -8..=8i64) {
        let count = e.entries().iter().filter(|&&ei| ei >= -n).count() as i64;
        prop_assert_eq!(e.h0(n) - e.h0(n - 1), count);
    }

    #[test]
    fn order_reflexive_and_equivalent(pair in class_pair(5, 4)) {
        let (a, b) = pair;
        prop_assert!(a.leq(&a).unwrap());
        prop_assert_eq!(a.leq(&b).unwrap(), a.h0_dominates(&b).unwrap());
        prop_assert_eq!(b.leq(&a).unwrap(), b.h0_dominates(&a).unwrap());
        // antisymmetry
        if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
            prop_assert_eq!(&a, &b);
        }
        // u monotone down the order
        if a.leq(&b).unwrap() {
            prop_assert!(a.u_invariant() >= b.u_invariant());
        }
    }

    #[test]
    fn bb_reconstruction_roundtrip(a in 0..=3i64, b in 1..=4i64, x in 0..=3usize, y in 1..=3usize, u in 1..=3usize, v in 0..=3usize) {
        let bb = BBType::new(a, b, x, y, u, v).unwrap();
        let e = bb.splitting_type();
        prop_assert_eq!(e.detect_bb(), Some(bb));
        prop_assert_eq!(e.h0(0), bb.h0());
    }

    #[test]
    fn downward_closure_is_dominated(e in splitting_type(4, 3), u_extra in 0..=3i64) {
        let u_max = e.u_invariant() + u_extra;
        let closure = e.downward_closure(u_max);
        prop_assert!(closure.contains(&e));
        for member in &closure {
            prop_assert!(member.leq(&e).unwrap());
            prop_assert!(member.u_invariant() <= u_max);
        }
    }

    #[test]
    fn ext_slot_count_is_u(e in splitting_type(6, 5)) {
        prop_assert_eq!(admissible_slots(&e).len() as i64, e.u_invariant());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorization_exactness_and_scramble_invariance(
        entries in prop::collection::vec(-3..=3i64, 1..=4),
        seed in any::<u64>(),
    ) {
        let prime = Prime::new(101).unwrap();
        let e = SplittingType::new(entries).unwrap();
        let k = e.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = LaurentMatrix::diag_transition(&e, prime);
        let l = random_unimodular_antipoly(k, prime, 8, &mut rng);
        let r = random_unimodular_poly(k, prime, 8, &mut rng);
        let m = l.mul(&d).mul(&r);

        let fact = birkhoff_factorize(&m).unwrap();
        prop_assert_eq!(&fact.splitting, &e);
        prop_assert_eq!(fact.reassemble(), m.clone());
        prop_assert!(fact.left.is_antipolynomial());
        prop_assert!(fact.right.is_polynomial());
        let dl = fact.left.det();
        prop_assert!(dl.is_monomial() && dl.ord() == Some(0));
        let dr = fact.right.det();
        prop_assert!(dr.is_monomial() && dr.ord() == Some(0));

        // two independent section-count routes agree on the whole window
        for n in (-e.max_entry() - 2)..=(-e.min_entry() + 1) {
            prop_assert_eq!(h0_twist(&m, n), e.h0(n));
        }
    }

    #[test]
    fn extension_invariants(
        entries in prop::collection::vec(-3..=2i64, 2..=4),
        seed in any::<u64>(),
    ) {
        let prime = Prime::new(101).unwrap();
        let base = SplittingType::new(entries).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = random_ext_class(&base, prime, &mut rng);
        let middle = extension_transition(&gamma);
        let fact = birkhoff_factorize(&middle).unwrap();

        // degree additivity
        prop_assert_eq!(fact.splitting.total(), 2 * base.total());

        // sandwich bound from the section sequence, plus the split criterion
        let lo = -base.max_entry() - 2;
        let hi = -base.min_entry() + 1;
        let mut surjective_everywhere = true;
        for n in lo..=hi {
            let h_mid = h0_twist(&middle, n);
            prop_assert!(base.h0(n) <= h_mid);
            prop_assert!(h_mid <= 2 * base.h0(n));
            if h_mid != 2 * base.h0(n) {
                surjective_everywhere = false;
            }
        }
        let split = is_split_extension(&gamma).unwrap();
        prop_assert_eq!(split, surjective_everywhere);
        prop_assert_eq!(split, fact.splitting == doubled(&base));

        // the split bundle is the special fiber of the extension family
        prop_assert!(doubled(&base).leq(&fact.splitting).unwrap());
    }

    #[test]
    fn surjectivity_matches_connecting_rank(
        seed in any::<u64>(),
    ) {
        // spot check of the worked example base on random classes
        let prime = Prime::new(101).unwrap();
        let base = SplittingType::new(vec![-1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = random_ext_class(&base, prime, &mut rng);
        if gamma.is_zero() {
            for n in -3..=2 {
                prop_assert!(surjective_at(&gamma, n));
            }
        } else {
            prop_assert!(!surjective_at(&gamma, -1));
        }
    }
}
