mod common;

use cmht::herm;
use cmht::random as rnd;
use cmht::serre;
use cmht::suites;
use common::{field, rng};
use proptest::prelude::*;

const FIELDS: [&str; 3] = ["Qi", "Qsqrt-5", "Qzeta5"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tensor_valid_iff_positive(seed in any::<u64>(), n in 1usize..=3) {
        for f in FIELDS {
            let t = suites::theorem_a(field(f), seed, 4, n).unwrap();
            prop_assert!(t.passed(), "{}: {:?}", f, t.notes);
        }
    }

    /// f is an isomorphism onto H^* exactly when h is one onto M^dual.
    #[test]
    fn tensor_nondegenerate_iff_h_nondegenerate(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        for f in FIELDS {
            let ar = field(f);
            let k = &ar.k;
            let a = suites::base_witness(ar).unwrap();
            let m = rnd::rand_positive_unimodular_herm(ar, &mut r, n);
            prop_assert!(serre::validate_herm(ar, &m).is_ok());
            prop_assert!(serre::tensor(ar, &m, &a).is_ok());
            let mut m2 = m.clone();
            m2.gram = herm::mat_scale(k, &m.gram, &k.from_i64(2));
            let e = serre::validate_herm(ar, &m2).unwrap_err();
            prop_assert_eq!(e.invariant(), Some("nondegenerate"));
            let e = serre::tensor(ar, &m2, &a).unwrap_err();
            prop_assert_eq!(e.invariant(), Some("h degenerate"));
            // kill the last pseudo-basis vector in local coordinates, then move back
            let mut loc = m.local_gram(k);
            for i in 0..n {
                loc[n - 1][i] = k.zero();
                loc[i][n - 1] = k.zero();
            }
            let bi = herm::inverse(k, &m.basis).unwrap();
            let mut m0 = m.clone();
            m0.gram = herm::mat_mul(k, &herm::star(k, &bi), &herm::mat_mul(k, &loc, &bi));
            prop_assert_eq!(m0.local_gram(k), loc);
            prop_assert!(herm::det(k, &m0.gram).is_zero());
            let e = serre::tensor(ar, &m0, &a).unwrap_err();
            prop_assert_eq!(e.invariant(), Some("h degenerate"));
        }
    }

    #[test]
    fn decompose_tensor_are_inverse(seed in any::<u64>()) {
        for f in FIELDS {
            let t = suites::basek(field(f), seed, 3).unwrap();
            prop_assert!(t.passed(), "{}: {:?}", f, t.notes);
        }
    }

    #[test]
    fn det_descent_is_valid(seed in any::<u64>()) {
        for f in FIELDS {
            let t = suites::det_descent(field(f), seed, 2).unwrap();
            prop_assert!(t.passed(), "{}: {:?}", f, t.notes);
        }
    }

    #[test]
    fn hom_forms_and_rosati(seed in any::<u64>()) {
        let mut r = rng(seed);
        for f in FIELDS {
            let ar = field(f);
            let k = &ar.k;
            let h = suites::hom_pairs(ar, seed, 3).unwrap();
            prop_assert!(h.tally.passed(), "{}: {:?}", f, h.tally.notes);
            let a = suites::base_witness(ar).unwrap();
            let hm = serre::hom_module(ar, &a, &a).unwrap();
            prop_assert!(k.is_totally_positive(&hm.n).unwrap());
            let x = rnd::rand_integral(k, &mut r, 3);
            let y = rnd::rand_integral(k, &mut r, 3);
            let hxy = serre::hom_herm(k, &hm, &x, &y).unwrap();
            prop_assert_eq!(k.conj(&hxy), serre::hom_herm(k, &hm, &y, &x).unwrap());
            let d = serre::rosati_dual(ar, &x, &a, &a).unwrap();
            prop_assert_eq!(serre::rosati_dual(ar, &d, &a, &a).unwrap(), x);
        }
    }
}
