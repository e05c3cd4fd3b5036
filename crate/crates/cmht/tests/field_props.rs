mod common;

use cmht::random as rnd;
use common::{fields, rng};
use proptest::prelude::*;

#[test]
fn trace_dual_identities() {
    for ar in fields() {
        let k = &ar.k;
        let td = k.trace_dual();
        for (i, a) in td.alpha.iter().enumerate() {
            for (j, b) in td.beta.iter().enumerate() {
                let want = if i == j { 1 } else { 0 };
                assert_eq!(k.trace(&k.mul(a, b)), cmht::linalg::q(want), "{}", k.name);
            }
        }
        let s = td.alpha.iter().zip(&td.beta).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)));
        assert_eq!(s, k.one(), "{}", k.name);
        let s = td.alpha.iter().zip(&td.beta).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(&k.conj(a), b)));
        assert!(s.is_zero(), "{}", k.name);
    }
}

#[test]
fn cm_types_partition_embeddings() {
    for ar in fields() {
        let k = &ar.k;
        for t in k.cm_types() {
            let c = k.conj_type(&t);
            let mut all: Vec<usize> = t.indices.iter().chain(&c.indices).copied().collect();
            all.sort();
            assert_eq!(all, (0..k.degree()).collect::<Vec<_>>(), "{}", k.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugation_is_an_involutive_automorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            for _ in 0..20 {
                let x = rnd::rand_elem(k, &mut r, 6, 4);
                let y = rnd::rand_elem(k, &mut r, 6, 4);
                prop_assert_eq!(k.conj(&k.conj(&x)), x.clone());
                prop_assert_eq!(k.conj(&k.mul(&x, &y)), k.mul(&k.conj(&x), &k.conj(&y)));
            }
        }
    }

    #[test]
    fn trace_is_sum_of_embeddings(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let x = rnd::rand_elem(k, &mut r, 9, 5);
            let t = k.trace(&x);
            let mut re = cmht::ball::RBall::zero();
            let mut im = cmht::ball::RBall::zero();
            for j in 0..k.degree() {
                let e = k.embed(&x, j, 128);
                re = re.add(&e.re);
                im = im.add(&e.im);
            }
            prop_assert!(re.lo() <= t && t <= re.hi(), "{}: {} not in [{}, {}]", k.name, t, re.lo(), re.hi());
            prop_assert!(im.contains_zero());
        }
    }

    #[test]
    fn real_sign_trichotomy(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let x = rnd::rand_real(k, &mut r, 7);
            if x.is_zero() {
                continue;
            }
            let pos = k.is_totally_positive(&x).unwrap();
            let neg = k.is_totally_positive(&k.neg(&x)).unwrap();
            let sv = k.sign_vector(&x).unwrap();
            let mixed = sv.contains(&1) && sv.contains(&-1);
            prop_assert_eq!([pos, neg, mixed].iter().filter(|b| **b).count(), 1);
            prop_assert!(k.is_totally_positive(&k.mul(&x, &x)).unwrap());
        }
    }
}
