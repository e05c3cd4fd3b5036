mod common;

use cmht::field::{CMField, Elem};
use cmht::jphi;
use cmht::random as rnd;
use common::{fields, rng};
use proptest::prelude::*;

fn poly_mul(k: &CMField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

#[test]
fn exact_sequence_ranks_add() {
    for ar in fields() {
        let k = &ar.k;
        for t in k.cm_types() {
            let d = jphi::compute_jphi(k, &t).unwrap();
            assert_eq!(d.j_rank() + d.lie_rank(), 2 * k.g, "{}", k.name);
            assert_eq!(d.j_basis.len() + d.lie_basis.len(), d.ambient.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn charpoly_of_direct_sum_is_power(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            for t in k.cm_types() {
                let d = jphi::compute_jphi(k, &t).unwrap();
                let a = rnd::rand_integral(k, &mut r, 3);
                let p1 = jphi::charpoly_on_lie(k, &d, &a, 1).unwrap();
                let mut pw = p1.clone();
                for _ in 1..n {
                    pw = poly_mul(k, &pw, &p1);
                }
                prop_assert_eq!(jphi::charpoly_on_lie(k, &d, &a, n).unwrap(), pw);
                prop_assert!(p1.iter().all(|c| jphi::in_reflex(k, &d, c)));
            }
        }
    }
}
