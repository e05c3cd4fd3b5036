use cmht::db;
use cmht::expr::parse_elem;
use cmht::ideal::{self, Arith, ClassGroupData};
use cmht::linalg::{q, qf};

#[test]
fn all_bundled_fields_load() {
    for n in db::names() {
        let k = db::load(n).unwrap();
        assert_eq!(k.name, n);
    }
}

#[test]
fn different_of_gaussian_and_sqrt5() {
    let k = db::load("Qi").unwrap();
    let d = ideal::different(&k);
    assert_eq!(d, ideal::principal(&k, &k.from_i64(2)).unwrap());
    let k = db::load("Qsqrt-5").unwrap();
    let d = ideal::different(&k);
    let g = parse_elem(&k, "2x").unwrap();
    assert_eq!(d, ideal::principal(&k, &g).unwrap());
    assert_eq!(d.norm(), q(20));
}

#[test]
fn split_two_in_sqrt5() {
    let k = db::load("Qsqrt-5").unwrap();
    let a = ideal::parse_ideal(&k, "(2, 1+x)").unwrap();
    let aa = ideal::mul(&k, &a, &ideal::conj(&k, &a));
    assert_eq!(aa, ideal::principal(&k, &k.from_i64(2)).unwrap());
    let ar = Arith::new(k).unwrap();
    assert!(ar.is_principal(&a).unwrap().is_none());
    let two = ideal::principal(&ar.k, &ar.k.from_i64(2)).unwrap();
    assert_eq!(ideal::inv(&ar.k, &two).norm(), qf(1, 4));
}

#[test]
fn class_numbers() {
    for (n, h) in [("Qi", 1), ("Qsqrt-2", 1), ("Qsqrt-5", 2), ("Qzeta5", 1), ("Qzeta12", 1)] {
        let ar = Arith::new(db::load(n).unwrap()).unwrap();
        let cg = ClassGroupData::compute(&ar.k, &ar.units).unwrap();
        assert_eq!(cg.order, h, "{}", n);
    }
}

#[test]
fn unit_indices() {
    for (n, idx, w, two) in [("Qi", 2, 4, false), ("Qsqrt-5", 2, 2, false), ("Qzeta5", 4, 10, false), ("Qzeta12", 2, 12, true)] {
        let ar = Arith::new(db::load(n).unwrap()).unwrap();
        assert_eq!(ar.units.signs.index, idx, "{}", n);
        assert_eq!(ar.units.torsion_order(), w, "{}", n);
        assert_eq!(ar.units.index_two, two, "{}", n);
    }
}

#[test]
fn relative_ramification() {
    for (n, unram) in [("Qi", false), ("Qsqrt-5", false), ("Qzeta5", false), ("Qzeta12", true)] {
        let k = db::load(n).unwrap();
        assert_eq!(ideal::relative_ramification(&k).unwrap().unramified, unram, "{}", n);
    }
}
