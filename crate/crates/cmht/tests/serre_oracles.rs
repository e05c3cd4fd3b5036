use cmht::db;
use cmht::expr::parse_elem;
use cmht::field::{CMField, Elem};
use cmht::herm::{self, KMat, LatticeBasis};
use cmht::ideal::{self, Arith};
use cmht::linalg::q;
use cmht::serre::{self, PseudoLattice};
use cmht::Error;

fn el(k: &CMField, s: &str) -> Elem {
    parse_elem(k, s).unwrap()
}

fn mat(k: &CMField, rows: &[&[&str]]) -> KMat {
    rows.iter().map(|r| r.iter().map(|s| el(k, s)).collect()).collect()
}

fn arith(name: &str) -> Arith {
    Arith::new(db::load(name).unwrap()).unwrap()
}

fn invariant(e: Error) -> String {
    match e {
        Error::Invalid { invariant, .. } => invariant,
        other => panic!("expected an invariant violation, got {:?}", other),
    }
}

#[test]
fn jordan_examples() {
    let k = db::load("Qi").unwrap();
    let x = mat(&k, &[&["0", "i"], &["-i", "0"]]);
    let y = mat(&k, &[&["1", "0"], &["0", "-1"]]);
    // x and y anticommute, so the Jordan product vanishes
    let p = herm::jordan_product(&k, &x, &y).unwrap();
    assert!(herm::is_zero_mat(&p));
    let id = herm::identity(&k, 2);
    assert_eq!(herm::jordan_product(&k, &x, &id).unwrap(), x);
    let d = mat(&k, &[&["1", "0"], &["0", "2"]]);
    assert_eq!(herm::jordan_product(&k, &d, &d).unwrap(), herm::mat_mul(&k, &d, &d));
}

#[test]
fn positivity_examples() {
    let k = db::load("Qi").unwrap();
    assert!(herm::is_positive(&k, &herm::identity(&k, 3)).unwrap());
    assert!(!herm::is_positive(&k, &mat(&k, &[&["1", "0"], &["0", "-1"]])).unwrap());
    assert!(herm::is_positive(&k, &mat(&k, &[&["2", "1+i"], &["1-i", "2"]])).unwrap());
    assert!(herm::property_p_check(&k, &mat(&k, &[&["1", "1"], &["0", "1"]])).unwrap());
    let sing = mat(&k, &[&["1", "i"], &["i", "-1"]]);
    assert_eq!(invariant(herm::property_p_check(&k, &sing).unwrap_err()), "invertible");
}

#[test]
fn negdef_examples() {
    let k = db::load("Qsqrt-5").unwrap();
    let f = vec![vec![el(&k, "-x/20")]];
    let t = k.cm_type(0);
    assert!(herm::is_negative_definite_along(&k, &f, &t).unwrap());
    assert!(!herm::is_negative_definite_along(&k, &f, &k.conj_type(&t)).unwrap());
    let z = vec![vec![k.zero(), k.zero()], vec![k.zero(), k.zero()]];
    assert!(!herm::is_negative_definite_along(&k, &z, &t).unwrap());
}

#[test]
fn alt_skew_dictionary_gaussian() {
    let k = db::load("Qi").unwrap();
    let h = LatticeBasis::standard(&k, 1);
    // basis {1, i}; E(1, i) = 1
    let e = vec![vec![q(0), q(1)], vec![q(-1), q(0)]];
    let g = herm::skew_from_alt(&k, &h, &e).unwrap();
    assert_eq!(g, vec![vec![el(&k, "-i/2")]]);
    assert_eq!(herm::alt_from_skew(&k, &h, &g), e);
    let t = k.cm_type(0);
    assert!(herm::is_riemann(&k, &h, &e, &t).unwrap());
    assert!(herm::is_riemann_direct(&k, &h, &e, &t).unwrap());
    let ne: Vec<Vec<_>> = e.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect();
    assert!(!herm::is_riemann(&k, &h, &ne, &t).unwrap());
    assert!(!herm::is_riemann_direct(&k, &h, &ne, &t).unwrap());
    let zero = vec![vec![q(0), q(0)], vec![q(0), q(0)]];
    assert!(herm::is_zero_mat(&herm::skew_from_alt(&k, &h, &zero).unwrap()));
}

#[test]
fn elinear_violation_rejected() {
    let k = db::load("Qi").unwrap();
    let h = LatticeBasis::standard(&k, 2);
    let mut e = vec![vec![q(0); 4]; 4];
    e[0][2] = q(1);
    e[2][0] = q(-1);
    assert_eq!(invariant(herm::skew_from_alt(&k, &h, &e).unwrap_err()), "E-linear");
}

#[test]
fn make_skew1_examples() {
    let ar = arith("Qi");
    let k = &ar.k;
    let ok = ideal::unit_ideal(k);
    let t = k.cm_type(0);
    serre::make_skew1(&ar, &ok, &el(k, "i/2"), &t).unwrap();
    let e = serre::make_skew1(&ar, &ok, &el(k, "-i/2"), &t).unwrap_err();
    assert_eq!(invariant(e), "imaginary sign");
    let e = serre::make_skew1(&ar, &ok, &el(k, "1+i"), &t).unwrap_err();
    assert_eq!(invariant(e), "totally imaginary");
    let e = serre::make_skew1(&ar, &ok, &el(k, "i"), &t).unwrap_err();
    assert_eq!(invariant(e), "principality");

    let ar = arith("Qsqrt-5");
    let k = &ar.k;
    let a = ideal::parse_ideal(k, "(2, 1+x)").unwrap();
    serre::make_skew1(&ar, &a, &el(k, "x/20"), &k.cm_type(0)).unwrap();
}

#[test]
fn tensor_examples() {
    let ar = arith("Qi");
    let k = &ar.k;
    let a = serre::make_skew1(&ar, &ideal::unit_ideal(k), &el(k, "i/2"), &k.cm_type(0)).unwrap();
    let m = serre::standard_herm(k, 2);
    let x = serre::tensor(&ar, &m, &a).unwrap();
    assert_eq!(x.lat.gram, mat(k, &[&["-i/2", "0"], &["0", "-i/2"]]));
    assert_eq!(serre::decompose(&ar, &x, &a).unwrap(), m);

    let one = serre::standard_herm(k, 1);
    assert_eq!(serre::tensor(&ar, &one, &a).unwrap(), a.as_lattice(k));

    let mut neg = one.clone();
    neg.gram[0][0] = el(k, "-1");
    let e = serre::tensor(&ar, &neg, &a).unwrap_err();
    assert_eq!(invariant(e), "h not positive-definite (Theorem A)");
}

#[test]
fn det_descent_examples() {
    let ar = arith("Qi");
    let k = &ar.k;
    let a = serre::make_skew1(&ar, &ideal::unit_ideal(k), &el(k, "i/2"), &k.cm_type(0)).unwrap();
    assert_eq!(serre::det_descent(&ar, &a.as_lattice(k)).unwrap(), a);
    let x = serre::tensor(&ar, &serre::standard_herm(k, 3), &a).unwrap();
    let d = serre::det_descent(&ar, &x).unwrap();
    assert_eq!(d.zeta, el(k, "i/8"));
    assert_eq!(d.ideal, ideal::principal(k, &el(k, "2")).unwrap());
    // one negated diagonal entry flips the half-plane of the product
    let mut bad = x.clone();
    bad.lat.gram[1][1] = k.neg(&bad.lat.gram[1][1]);
    assert_eq!(invariant(serre::det_descent(&ar, &bad).unwrap_err()), "imaginary sign");
    let x2 = serre::tensor(&ar, &serre::standard_herm(k, 2), &a).unwrap();
    assert_eq!(invariant(serre::det_descent(&ar, &x2).unwrap_err()), "odd rank");
}

#[test]
fn hom_and_rosati_sqrt5() {
    let ar = arith("Qsqrt-5");
    let k = &ar.k;
    let t = k.cm_type(0);
    let a0 = serre::make_skew1(&ar, &ideal::unit_ideal(k), &el(k, "x/10"), &t).unwrap();
    let p2 = ideal::parse_ideal(k, "(2, 1+x)").unwrap();
    let b = serre::make_skew1(&ar, &p2, &el(k, "x/20"), &t).unwrap();

    let same = serre::hom_module(&ar, &a0, &a0).unwrap();
    assert_eq!(same.hom_ideal, ideal::unit_ideal(k));
    assert_eq!(same.n, k.one());

    let h = serre::hom_module(&ar, &a0, &b).unwrap();
    assert_eq!(h.hom_ideal, p2);
    assert!(k.is_totally_positive(&h.n).unwrap());
    assert_eq!(h.n, el(k, "2"));
    for g in p2.basis(k) {
        let v = serre::hom_herm(k, &h, &g, &g).unwrap();
        assert!(k.is_totally_positive(&v).unwrap());
        let d = serre::rosati_dual(&ar, &g, &a0, &b).unwrap();
        assert_eq!(serre::rosati_dual(&ar, &d, &b, &a0).unwrap(), g);
    }
    assert_eq!(serre::rosati_dual(&ar, &k.one(), &a0, &a0).unwrap(), k.one());
    assert_eq!(serre::rosati_dual(&ar, &k.gen(), &a0, &a0).unwrap(), k.conj(&k.gen()));
    let e = serre::rosati_dual(&ar, &k.one(), &a0, &b).unwrap_err();
    assert_eq!(invariant(e), "hom ideal membership");
}

#[test]
fn steinitz_reduction_sqrt5() {
    let ar = arith("Qsqrt-5");
    let k = &ar.k;
    let p2 = ideal::parse_ideal(k, "(2, 1+x)").unwrap();
    let p3 = ideal::parse_ideal(k, "(3, 1+x)").unwrap();
    let lat = PseudoLattice {
        ideals: vec![p2.clone(), p3],
        basis: mat(k, &[&["1", "x"], &["0", "1"]]),
        gram: herm::identity(k, 2),
    };
    let s = serre::steinitz_form(&ar, &lat).unwrap();
    assert_eq!(s.ideals[0], ideal::unit_ideal(k));
    assert!(s.same_module(k, &lat));
    // p2 p3 is principal (1 + x), so the last ideal is trivial
    assert_eq!(s.ideals[1], ideal::unit_ideal(k));
    let lat2 = PseudoLattice { ideals: vec![p2.clone(), ideal::unit_ideal(k)], ..lat.clone() };
    let s2 = serre::steinitz_form(&ar, &lat2).unwrap();
    assert!(s2.same_module(k, &lat2));
    assert_eq!(ar.class_group().unwrap().class_of(k, &ar.units, &s2.ideals[1]).unwrap(), 1);
}

#[test]
fn transporter_moves_types() {
    let ar = arith("Qsqrt-5");
    let k = &ar.k;
    let t = k.cm_type(0);
    let a = serre::make_skew1(&ar, &ideal::unit_ideal(k), &el(k, "x/10"), &t).unwrap();
    let p2 = ideal::parse_ideal(k, "(2, 1+x)").unwrap();
    let b = serre::make_skew1(&ar, &p2, &el(k, "x/20"), &t).unwrap();
    let (c, r) = serre::transporter(&ar, &a, &b).unwrap();
    assert_eq!(serre::apply_transporter(&ar, &a, &c, &r).unwrap(), b);
    let flipped = serre::apply_transporter(&ar, &a, &ideal::unit_ideal(k), &k.from_i64(-1)).unwrap();
    assert_eq!(flipped.cm_type, k.conj_type(&t));
    // a = O_K, so the flip is the conjugate object (a^sigma, -zeta)
    assert_eq!(flipped, a.conjugate(k));
}
