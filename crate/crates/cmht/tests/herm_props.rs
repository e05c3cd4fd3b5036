mod common;

use cmht::field::CMField;
use cmht::herm::{self, KMat, LatticeBasis};
use cmht::random as rnd;
use common::{field, fields, rng};
use proptest::prelude::*;

/// LDL* pivots of phi_j(x) in floating point; None when a pivot is too close to 0 to decide.
fn float_positive(k: &CMField, x: &KMat, j: usize) -> Option<bool> {
    let n = x.len();
    let mut a: Vec<Vec<(f64, f64)>> = x.iter().map(|r| r.iter().map(|e| k.embed_f64(e, j)).collect()).collect();
    for i in 0..n {
        let d = a[i][i].0;
        if d.abs() < 1e-6 {
            return None;
        }
        if d < 0.0 {
            return Some(false);
        }
        for r in i + 1..n {
            // a[r][c] -= a[r][i] conj(a[c][i]) / d ... using a[i][c] = conj(a[c][i])
            let (pr, pi) = a[r][i];
            for c in i + 1..n {
                let (qr, qi) = a[i][c];
                a[r][c].0 -= (pr * qr - pi * qi) / d;
                a[r][c].1 -= (pr * qi + pi * qr) / d;
            }
        }
    }
    Some(true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn congruence_invariance(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        for name in ["Qi", "Qsqrt-5", "Qzeta5"] {
            let k = &field(name).k;
            let t = if seed % 2 == 0 { rnd::rand_positive(k, &mut r, n, 3) } else { rnd::rand_hermitian(k, &mut r, n, 3) };
            let q = rnd::rand_invertible(k, &mut r, n, 3);
            let c = herm::mat_mul(k, &herm::mat_mul(k, &q, &t), &herm::star(k, &q));
            prop_assert_eq!(herm::is_positive(k, &t).unwrap(), herm::is_positive(k, &c).unwrap());
        }
    }

    #[test]
    fn positivity_agrees_with_float_oracle(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let t = if seed % 3 == 0 { rnd::rand_positive(k, &mut r, n, 3) } else { rnd::rand_hermitian(k, &mut r, n, 3) };
            let oracle: Option<Vec<bool>> = (0..k.g).map(|j| float_positive(k, &t, j)).collect();
            if let Some(o) = oracle {
                prop_assert_eq!(herm::is_positive(k, &t).unwrap(), o.iter().all(|b| *b), "{}", k.name);
            }
        }
    }

    #[test]
    fn jordan_product_laws(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        for name in ["Qi", "Qzeta5"] {
            let k = &field(name).k;
            let u = rnd::rand_hermitian(k, &mut r, n, 3);
            let v = rnd::rand_hermitian(k, &mut r, n, 3);
            let j = |a: &KMat, b: &KMat| herm::jordan_product(k, a, b).unwrap();
            prop_assert_eq!(j(&u, &v), j(&v, &u));
            let uu = j(&u, &u);
            prop_assert_eq!(j(&uu, &j(&u, &v)), j(&u, &j(&uu, &v)));
            prop_assert!(herm::is_hermitian(k, &j(&u, &v)));
        }
    }

    #[test]
    fn alternating_skew_dictionary(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let h = LatticeBasis::standard(k, n);
            let g = rnd::rand_skew(k, &mut r, n, 3);
            let e = herm::alt_from_skew(k, &h, &g);
            prop_assert!(herm::is_alternating(&e));
            prop_assert_eq!(herm::skew_from_alt(k, &h, &e).unwrap(), g);
            // a nonzero hermitian form gives a symmetric, hence non-alternating, trace form
            let s = rnd::rand_hermitian(k, &mut r, n, 3);
            if !herm::is_zero_mat(&s) {
                prop_assert!(!herm::is_alternating(&herm::alt_from_skew(k, &h, &s)));
            }
        }
    }

    #[test]
    fn negdef_never_for_both_conjugate_types(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let g = rnd::rand_skew(k, &mut r, n, 3);
            if herm::is_zero_mat(&g) {
                continue;
            }
            for t in k.cm_types() {
                let a = herm::is_negative_definite_along(k, &g, &t).unwrap();
                let b = herm::is_negative_definite_along(k, &g, &k.conj_type(&t)).unwrap();
                prop_assert!(!(a && b));
            }
        }
    }

    #[test]
    fn riemann_direct_matches_negdef_over_gaussian(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let k = &field("Qi").k;
        let (h, e) = rnd::rand_alt(k, &mut r, n, 3);
        for t in k.cm_types() {
            prop_assert_eq!(herm::is_riemann_direct(k, &h, &e, &t).unwrap(), herm::is_riemann(k, &h, &e, &t).unwrap());
        }
    }
}
