mod common;

use cmht::field::CMField;
use cmht::ideal::{self, FracIdeal};
use cmht::random as rnd;
use common::{fields, rng};
use proptest::prelude::*;
use rand::Rng;

/// Product of primes above 2, 3, 5 and a principal factor from a random element.
fn random_ideal<R: Rng>(k: &CMField, r: &mut R) -> FracIdeal {
    let mut a = ideal::principal(k, &rnd::rand_nonzero(k, r, 3)).unwrap();
    for p in [2u64, 3, 5] {
        let ps = ideal::primes_above(k, p).unwrap();
        if r.gen_bool(0.5) {
            a = ideal::mul(k, &a, &ps[r.gen_range(0..ps.len())].ideal);
        }
    }
    if r.gen_bool(0.3) {
        a = ideal::inv(k, &a);
    }
    a
}

#[test]
fn different_is_conjugation_stable() {
    for ar in fields() {
        assert_eq!(ideal::conj(&ar.k, &ar.delta), ar.delta, "{}", ar.k.name);
    }
}

#[test]
fn class_group_representatives_are_distinct_classes() {
    for ar in fields() {
        let k = &ar.k;
        let cg = ar.class_group().unwrap();
        assert_eq!(cg.representatives.len(), cg.order);
        for (i, a) in cg.representatives.iter().enumerate() {
            for b in &cg.representatives[i + 1..] {
                assert!(!ideal::is_equivalent(k, &ar.units, a, b).unwrap(), "{}", k.name);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_and_conjugate(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let a = random_ideal(k, &mut r);
            prop_assert_eq!(ideal::mul(k, &a, &ideal::inv(k, &a)), ideal::unit_ideal(k));
            prop_assert_eq!(ideal::conj(k, &ideal::conj(k, &a)), a.clone());
        }
    }

    #[test]
    fn norm_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let a = random_ideal(k, &mut r);
            let b = random_ideal(k, &mut r);
            prop_assert_eq!(ideal::mul(k, &a, &b).norm(), a.norm() * b.norm());
        }
    }

    #[test]
    fn principal_generators_generate(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let a = random_ideal(k, &mut r);
            if let Some(g) = ar.is_principal(&a).unwrap() {
                prop_assert_eq!(ideal::principal(k, &g).unwrap(), a);
            }
            let x = rnd::rand_nonzero(k, &mut r, 4);
            let px = ideal::principal(k, &x).unwrap();
            let g = ar.is_principal(&px).unwrap();
            prop_assert!(g.is_some());
            prop_assert_eq!(ideal::principal(k, &g.unwrap()).unwrap(), px);
        }
    }
}
