use cmht::tensor_cat::{self as tc, Direction, Model, Symbol, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PENTAGON_1: &str = "\
src X0.a.b Y0
A X0.a b Y0
A X0 a b.Y0
";

const PENTAGON_2: &str = "\
A X0 a.b Y0
";

fn model() -> Model {
    tc::standard_model(2).unwrap()
}

#[test]
fn pentagon_words_agree() {
    let w1 = tc::parse_word_text(PENTAGON_1).unwrap();
    let w2 = tc::parse_word_text(PENTAGON_2).unwrap();
    let n1 = tc::normalize(&w1).unwrap();
    let n2 = tc::normalize(&w2).unwrap();
    assert_eq!(n1.nf, n2.nf);
    assert!(n1.trace.iter().any(|t| t.starts_with("redlem (alpha, alpha)")));
}

#[test]
fn unit_letter_omega_is_identity() {
    // omega for o = (O_K, c = 1), and the same contraction done on the X side
    let w = tc::parse_word_text("A X0 o o^-1.Y0\nPT id c@0\n").unwrap();
    let w2 = tc::parse_word_text("src X0.o o^-1.Y0\nA' X0.o o^-1 Y0\nPT c@0 id\n").unwrap();
    let m = model();
    assert_eq!(w.target().unwrap(), w2.target().unwrap());
    assert!(tc::is_identity(&m.k, &m.eval_word(&w).unwrap()));
    assert!(tc::is_identity(&m.k, &m.eval_word(&w2).unwrap()));
    let n = tc::normalize(&w).unwrap();
    assert_eq!(tc::fmt_word(&n.nf.a), "o");
}

#[test]
fn lone_pure_tensor_has_unit_object() {
    let w = tc::parse_word_text("xmor f X0 -> X1\nymor p Y0 -> Y1\nsrc X0 Y0\nPT f p\n").unwrap();
    let n = tc::normalize(&w).unwrap();
    assert!(n.nf.a.is_empty());
    assert_eq!(tc::fmt_steps(&n.nf.phi), "f");
    assert_eq!(tc::fmt_steps(&n.nf.psi), "p");
}

#[test]
fn associator_inverse_pair_cancels() {
    let w1 = tc::parse_word_text("A X0 a Y0\n").unwrap();
    let w2 = tc::parse_word_text("A' X0 a Y0\n").unwrap();
    let c = tc::compose(&w1, &w2).unwrap();
    assert!(c.syms.is_empty());
    let n = tc::normalize(&c).unwrap();
    assert!(n.nf.a.is_empty() && n.nf.phi.is_empty() && n.nf.psi.is_empty());
}

#[test]
fn four_redlem_cases() {
    let texts = [
        ("xmor f X0 -> X1.b\nymor p a.Y0 -> Y1\nA X0 a Y0\nPT f p\nA X1 b Y1\n", "redlem (alpha, alpha)"),
        ("xmor f X0.a -> X1\nymor p Y0 -> b.Y1\nA' X0 a Y0\nPT f p\nA' X1 b Y1\n", "redlem (alpha', alpha')"),
        ("xmor f X0 -> X1\nymor p a.Y0 -> b.Y1\nA X0 a Y0\nPT f p\nA' X1 b Y1\n", "redlem (alpha, alpha')"),
        ("xmor f X0.a -> X1.b\nymor p Y0 -> Y1\nA' X0 a Y0\nPT f p\nA X1 b Y1\n", "redlem (alpha', alpha)"),
    ];
    let k = model().k;
    for (t, case) in texts {
        let w = tc::parse_word_text(t).unwrap();
        let mut m = model();
        m.xmor.insert("f".into(), vec![vec![k.from_i64(1), k.from_i64(2)], vec![k.zero(), k.from_i64(3)]]);
        m.ymor.insert("p".into(), k.from_i64(5));
        let n = tc::normalize(&w).unwrap();
        assert!(n.trace.iter().any(|x| x == case), "{:?}", n.trace);
        let lhs = eval_loose(&m, &w);
        let rhs = eval_loose(&m, &n.nf.to_word(&w.decls));
        assert_eq!(lhs, rhs, "{}", case);
    }
}

/// Evaluation without checking that labels respect the model lattices.
fn eval_loose(m: &Model, w: &Word) -> cmht::herm::KMat {
    m.eval_word_unchecked(w).unwrap()
}

#[test]
fn incompatible_inverse_contraction_breaks_redlem() {
    // with I_{a^-1} != I_a omega_a o (1 (x) mu^{-1}) differs from alpha by c / c_inv = -1
    let v = serde_json::json!({
        "field": "Qsqrt-5", "rank": 1,
        "letters": {"a": {"ideal": "(2, 1+x)", "c": "1/2", "c_inv": "-1/2"}},
        "y_bases": {"Y0": "OK"}
    });
    let m = Model::from_json(&v).unwrap();
    let w = tc::parse_word_text("A X0 a Y0\n").unwrap();
    let n = tc::normalize(&w).unwrap();
    assert_ne!(m.eval_word(&w).unwrap(), m.eval_normal_form(&n.nf, &w.decls).unwrap());
}

#[test]
fn word_text_roundtrip() {
    let w = tc::parse_word_text("xmor f X0 -> X1.b\nymor p a.Y0 -> Y1\nA X0 a Y0\nPT f p\nA X1 b Y1\n").unwrap();
    let w2 = tc::parse_word_text(&w.to_text()).unwrap();
    assert_eq!(w, w2);
    let n = tc::normalize(&w).unwrap();
    let nw = n.nf.to_word(&w.decls);
    assert_eq!(tc::parse_word_text(&nw.to_text()).unwrap(), nw);
}

#[test]
fn malformed_words_rejected() {
    assert!(matches!(tc::parse_word_text("B X0 a Y0\n"), Err(cmht::Error::Malformed(_))));
    assert!(matches!(tc::parse_word_text("PT f p\n"), Err(cmht::Error::Malformed(_))));
    // associator source does not match the running object
    let e = tc::parse_word_text("A X0 a Y0\nA X0 b Y0\n").unwrap_err();
    assert_eq!(e.invariant(), Some("typing"));
}

#[test]
fn reverse_direction_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut m = model();
    for _ in 0..20 {
        let w = tc::random_word(&mut rng, &mut m, 3, 3).unwrap();
        let f = tc::normalize_dir(&w, Direction::Forward).unwrap();
        let r = tc::normalize_dir(&w, Direction::Reverse).unwrap();
        let ev = m.eval_word(&w).unwrap();
        assert_eq!(m.eval_normal_form(&f.nf, &w.decls).unwrap(), ev);
        assert_eq!(m.eval_normal_form(&r.nf, &w.decls).unwrap(), ev);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_sound(seed in any::<u64>(), na in 0usize..8, np in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = model();
        let w = tc::random_word(&mut rng, &mut m, na, np).unwrap();
        let n = tc::normalize(&w).unwrap();
        prop_assert_eq!(m.eval_word(&w).unwrap(), m.eval_normal_form(&n.nf, &w.decls).unwrap());
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>(), na in 0usize..8, np in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = model();
        let w = tc::random_word(&mut rng, &mut m, na, np).unwrap();
        let n = tc::normalize(&w).unwrap();
        let again = tc::normalize(&n.nf.to_word(&w.decls)).unwrap();
        prop_assert_eq!(again.nf, n.nf);
    }

    #[test]
    fn reduction_terminates_with_one_associator(seed in any::<u64>(), na in 0usize..12, np in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = model();
        let w = tc::random_word(&mut rng, &mut m, na, np).unwrap();
        let n = tc::normalize(&w).unwrap();
        let nw = n.nf.to_word(&w.decls);
        prop_assert!(nw.assoc_count() <= 1);
        let pure = nw.syms.iter().filter(|s| matches!(s, Symbol::Pure { .. })).count();
        prop_assert!(pure <= 2);
        prop_assert!(n.trace.iter().filter(|t| t.starts_with("redlem")).count() < na.max(1));
    }
}
