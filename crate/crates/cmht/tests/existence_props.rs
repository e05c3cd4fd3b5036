mod common;

use cmht::existence;
use cmht::ideal::{self, relative_ramification};
use cmht::random as rnd;
use cmht::serre;
use common::{fields, rng};
use proptest::prelude::*;

#[test]
fn conjugation_symmetry_and_count_law() {
    for ar in fields() {
        let k = &ar.k;
        let rep = existence::admissible_types(ar).unwrap();
        assert_eq!(rep.admissible_types.len(), rep.group_order, "{}", k.name);
        let ramified = !relative_ramification(k).unwrap().unramified;
        assert_eq!(rep.admissible_types.len() == 1 << k.g, ramified, "{}", k.name);
        for t in k.cm_types() {
            let i = k.cm_type_index(&t);
            let j = k.cm_type_index(&k.conj_type(&t));
            assert_eq!(rep.witnesses.contains_key(&i), rep.witnesses.contains_key(&j), "{}", k.name);
            if let Some(w) = rep.witnesses.get(&i) {
                let c = w.conjugate(k);
                assert!(serre::make_skew1(ar, &c.ideal, &c.zeta, &c.cm_type).is_ok());
                assert!(serre::make_skew1(ar, &w.ideal, &w.zeta, &w.cm_type).is_ok());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// (c, r) = (y O_K, y y^sigma u): totally positive r keeps the type, otherwise
    /// the type moves to the one picked out by the signs of r.
    #[test]
    fn transporters_move_types_predictably(seed in any::<u64>()) {
        let mut r = rng(seed);
        for ar in fields() {
            let k = &ar.k;
            let rep = existence::admissible_types(ar).unwrap();
            let Some(w) = rep.witnesses.values().next() else { continue };
            let y = rnd::rand_nonzero(k, &mut r, 3);
            let (sv, u) = ar.units.sign_reps[(seed as usize) % ar.units.sign_reps.len()].clone();
            let rr = k.mul(&k.mul(&y, &k.conj(&y)), &u);
            let c = ideal::principal(k, &y).unwrap();
            let b = serre::apply_transporter(ar, w, &c, &rr).unwrap();
            let mut want = w.cm_type.indices.clone();
            for (j, s) in sv.iter().enumerate() {
                if *s < 0 {
                    want[j] = k.conj_index(want[j]);
                }
            }
            prop_assert_eq!(&b.cm_type.indices, &want);
            if sv.iter().all(|s| *s > 0) {
                prop_assert_eq!(&b.cm_type, &w.cm_type);
            }
            prop_assert!(rep.witnesses.contains_key(&k.cm_type_index(&b.cm_type)));
        }
    }
}
