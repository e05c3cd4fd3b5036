//! Acceptance run: one PASS/FAIL line per criterion, with counts and seeds pinned here.

// thresholds are pinned constants; a zero threshold makes `<=` comparisons look degenerate
#![allow(clippy::absurd_extreme_comparisons)]

use cmht::db;
use cmht::existence;
use cmht::expr::parse_elem;
use cmht::ideal::{self, Arith};
use cmht::serre;
use cmht::suites::{self, Tally};
use std::time::Instant;

const SEED: u64 = 0x5eed_2024;
/// Exact arithmetic throughout: every criterion allows zero exceptions.
const MAX_EXCEPTIONS: usize = 0;
const THEOREM_A_PER_RANK: usize = 50;
const CONGRUENCE_PER_FIELD: usize = 200;
const PROPERTY_P_PER_FIELD: usize = 100;
const RIEMANN_ROUNDTRIP: usize = 100;
const RIEMANN_NEGDEF_QI: usize = 100;
const DET_DESCENT_PER_FIELD: usize = 20;
const BASEK_PER_FIELD: usize = 50;
const HOM_PAIRS_PER_FIELD: usize = 20;
const CAT_WORDS: usize = 500;
const CHARPOLY_PER_TYPE: usize = 20;
const SUITE_SECONDS: u64 = 60;

const FIELDS_A: [&str; 3] = ["Qi", "Qsqrt-5", "Qzeta5"];

fn arith(name: &str) -> Arith {
    Arith::new(db::load(name).unwrap()).unwrap()
}

struct Line {
    id: usize,
    ok: bool,
    text: String,
}

fn tally_line(id: usize, what: &str, t: &Tally, secs: f64) -> Line {
    let ok = t.instances > 0 && t.exceptions <= MAX_EXCEPTIONS && secs <= SUITE_SECONDS as f64;
    let mut text = format!("{}: {} instances, {} exceptions, {:.1}s", what, t.instances, t.exceptions, secs);
    if !t.notes.is_empty() {
        text += &format!(" (first: {})", t.notes[0]);
    }
    Line { id, ok, text }
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        let ar = arith(f);
        for n in 1..=3 {
            t.merge(suites::theorem_a(&ar, SEED + n as u64, THEOREM_A_PER_RANK, n).unwrap());
        }
    }
    tally_line(1, "Theorem A (tensor valid iff h positive)", &t, start.elapsed().as_secs_f64())
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        t.merge(suites::congruence(&arith(f), SEED, CONGRUENCE_PER_FIELD).unwrap());
    }
    tally_line(2, "congruence invariance of positivity", &t, start.elapsed().as_secs_f64())
}

fn criterion_3() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        t.merge(suites::property_p(&arith(f), SEED, PROPERTY_P_PER_FIELD).unwrap());
    }
    tally_line(3, "property (P): Q*Q positive", &t, start.elapsed().as_secs_f64())
}

fn criterion_4() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        t.merge(suites::riemann_roundtrip(&arith(f), SEED, RIEMANN_ROUNDTRIP).unwrap());
    }
    let rt = t.instances;
    t.merge(suites::riemann_negdef(&arith("Qi"), SEED, RIEMANN_NEGDEF_QI).unwrap());
    let mut l = tally_line(4, "Riemann dictionary roundtrip + negdef equivalence over Q(i)", &t, start.elapsed().as_secs_f64());
    l.text += &format!(" [{} roundtrips, {} negdef comparisons]", rt, t.instances - rt);
    l
}

fn criterion_5() -> Line {
    let expected = [("Qi", 2, 2, 2, true), ("Qsqrt-5", 2, 2, 2, true), ("Qzeta5", 4, 4, 4, true), ("Qzeta12", 2, 4, 2, false)];
    let mut ok = true;
    let mut parts = vec![];
    for (f, admissible, total, order, ramified) in expected {
        let ar = arith(f);
        let rep = existence::admissible_types(&ar).unwrap();
        let rr = ideal::relative_ramification(&ar.k).unwrap();
        let got = (rep.admissible_types.len(), ar.k.cm_types().len(), rep.group_order, rep.relative_ramified, !rr.unramified);
        ok &= got == (admissible, total, order, ramified, ramified) && rep.witnesses.len() == admissible;
        parts.push(format!("{} {}/{} order {}{}", f, got.0, got.1, got.2, if got.3 { "" } else { " unramified" }));
    }
    Line { id: 5, ok, text: format!("existence counts: {}", parts.join(", ")) }
}

fn criterion_6() -> Line {
    let mut ok = true;
    let mut checked = 0;
    for f in ["Qi", "Qsqrt-5", "Qzeta5", "Qzeta12"] {
        let ar = arith(f);
        let rep = existence::admissible_types(&ar).unwrap();
        for w in rep.witnesses.values() {
            ok &= serre::make_skew1(&ar, &w.ideal, &w.zeta, &w.cm_type).is_ok();
            checked += 1;
        }
    }
    let ar = arith("Qi");
    let w = existence::solve(&ar, &ar.k.cm_type(0)).unwrap().unwrap();
    let qi_ok = w.ideal == ideal::unit_ideal(&ar.k) && w.zeta == parse_elem(&ar.k, "i/2").unwrap();
    ok &= qi_ok;
    let mut reproducible = true;
    for f in ["Qi", "Qsqrt-5"] {
        let ar = arith(f);
        let base = existence::admissible_types(&ar).unwrap();
        for s in [SEED, SEED + 1, SEED + 2] {
            reproducible &= existence::admissible_types_seeded(&ar, Some(s)).unwrap().witnesses == base.witnesses;
        }
    }
    ok &= reproducible;
    Line {
        id: 6,
        ok,
        text: format!("witness validity: {} witnesses pass make_skew1, Q(i) witness (O_K, i/2) {}, seed-reproducible {}", checked, qi_ok, reproducible),
    }
}

fn criterion_7() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        t.merge(suites::det_descent(&arith(f), SEED, DET_DESCENT_PER_FIELD).unwrap());
    }
    tally_line(7, "determinant descent (valid + sign-corrupted)", &t, start.elapsed().as_secs_f64())
}

fn criterion_8() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in FIELDS_A {
        t.merge(suites::basek(&arith(f), SEED, BASEK_PER_FIELD).unwrap());
    }
    tally_line(8, "decompose o tensor = id, tensor o decompose = id", &t, start.elapsed().as_secs_f64())
}

fn criterion_9() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut nonprincipal = 0;
    for f in FIELDS_A {
        let h = suites::hom_pairs(&arith(f), SEED, HOM_PAIRS_PER_FIELD).unwrap();
        if f == "Qsqrt-5" {
            nonprincipal = h.nonprincipal;
        }
        t.merge(h.tally);
    }
    let mut l = tally_line(9, "hom modules: N totally positive, herm positive unimodular, Rosati involutive", &t, start.elapsed().as_secs_f64());
    l.ok &= nonprincipal > 0;
    l.text += &format!(" [{} nonprincipal hom ideals over Q(sqrt -5)]", nonprincipal);
    l
}

fn criterion_10() -> Line {
    let start = Instant::now();
    let c = suites::tensor_cat(SEED, CAT_WORDS).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let parts = [("terminates", &c.terminated), ("idempotent", &c.idempotent), ("sound", &c.sound), ("coherence", &c.coherence)];
    let ok = parts.iter().all(|(_, t)| t.instances > 0 && t.exceptions <= MAX_EXCEPTIONS) && secs <= SUITE_SECONDS as f64;
    let text = parts.iter().map(|(n, t)| format!("{} {}/{}", n, t.instances - t.exceptions, t.instances)).collect::<Vec<_>>().join(", ");
    Line { id: 10, ok, text: format!("tensor_cat words over Q(sqrt -5): {}, {:.1}s", text, secs) }
}

fn criterion_11() -> Line {
    let start = Instant::now();
    let mut t = Tally::default();
    for f in db::names() {
        t.merge(suites::jphi_suite(&arith(f), SEED, CHARPOLY_PER_TYPE).unwrap());
    }
    tally_line(11, "J_Phi rank g, J J^sigma = 0, charpoly on Lie", &t, start.elapsed().as_secs_f64())
}

#[test]
fn acceptance() {
    let runs: [fn() -> Line; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let mut failed = vec![];
    for r in runs {
        let l = r();
        println!("criterion {:>2}: {} - {}", l.id, if l.ok { "PASS" } else { "FAIL" }, l.text);
        if !l.ok {
            failed.push(l.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
