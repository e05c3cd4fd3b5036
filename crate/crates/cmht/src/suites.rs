//! Seeded randomized property suites over the bundled fields.
//!
//! Each suite returns a [`Tally`] counting instances and exceptions; the CLI
//! `props` command and the acceptance target both run these.

use crate::existence;
use crate::herm;
use crate::ideal::{self, Arith};
use crate::jphi;
use crate::random::{self as rnd};
use crate::serre::{self, SkewLatticeN, SkewObject1};
use crate::tensor_cat as tc;
use crate::{Error, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub exceptions: usize,
    /// First few failure descriptions.
    pub notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.exceptions += 1;
            if self.notes.len() < 5 {
                self.notes.push(note());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.exceptions == 0 && self.instances > 0
    }

    pub fn merge(&mut self, o: Tally) {
        self.instances += o.instances;
        self.exceptions += o.exceptions;
        for n in o.notes {
            if self.notes.len() < 5 {
                self.notes.push(n);
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"instances": self.instances, "exceptions": self.exceptions, "notes": self.notes})
    }
}

pub const SUITES: &[&str] =
    &["theorem-a", "congruence", "property-p", "riemann", "det-descent", "basek", "hom", "tensor-cat", "jphi"];

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Canonical witness of the first admissible type.
pub fn base_witness(ar: &Arith) -> Result<SkewObject1> {
    let rep = existence::admissible_types(ar)?;
    rep.witnesses.values().next().cloned().ok_or_else(|| Error::invalid("existence", "no admissible type"))
}

/// tensor(M, A) is valid iff h is positive, on unimodular (M, h) of rank n.
pub fn theorem_a(ar: &Arith, seed: u64, count: usize, n: usize) -> Result<Tally> {
    let k = &ar.k;
    let a = base_witness(ar)?;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for _ in 0..count {
        let m = rnd::rand_unimodular_herm(ar, &mut r, n);
        let pos = herm::is_positive(k, &m.gram)?;
        let res = serre::tensor(ar, &m, &a);
        let ok = match &res {
            Ok(x) => pos && serre::validate_skew(ar, x).is_ok(),
            Err(e) => !pos && e.invariant() == Some("h not positive-definite (Theorem A)"),
        };
        t.record(ok, || format!("n = {}: positive = {}, tensor = {:?}", n, pos, res.err()));
    }
    Ok(t)
}

/// is_positive(T) = is_positive(Q T Q^*) for invertible Q.
pub fn congruence(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let n = 1 + i % 3;
        let tm = if r.gen_bool(0.5) { rnd::rand_positive(k, &mut r, n, 3) } else { rnd::rand_hermitian(k, &mut r, n, 3) };
        let q = rnd::rand_invertible(k, &mut r, n, 3);
        let c = herm::mat_mul(k, &herm::mat_mul(k, &q, &tm), &herm::star(k, &q));
        let (a, b) = (herm::is_positive(k, &tm)?, herm::is_positive(k, &c)?);
        t.record(a == b, || format!("rank {}: {} vs {}", n, a, b));
    }
    Ok(t)
}

/// Q^* Q is positive for invertible Q.
pub fn property_p(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let n = 1 + i % 3;
        let q = rnd::rand_invertible(k, &mut r, n, 4);
        let ok = herm::property_p_check(k, &q)?;
        t.record(ok, || format!("rank {}", n));
    }
    Ok(t)
}

/// E -> F -> E is the identity on O_K-compatible alternating forms.
pub fn riemann_roundtrip(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let n = 1 + i % 3;
        let (h, e) = rnd::rand_alt(k, &mut r, n, 3);
        let f = herm::skew_from_alt(k, &h, &e)?;
        let back = herm::alt_from_skew(k, &h, &f);
        t.record(back == e && herm::is_skew_hermitian(k, &f), || format!("rank {}", n));
    }
    Ok(t)
}

/// Direct Riemann positivity agrees with negative-definiteness along each type.
pub fn riemann_negdef(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let n = 1 + i % 2;
        let (h, e) = rnd::rand_alt(k, &mut r, n, 3);
        let g = herm::skew_from_alt(k, &h, &e)?;
        for ty in k.cm_types() {
            let a = herm::is_riemann_direct(k, &h, &e, &ty)?;
            let b = herm::is_negative_definite_along(k, &g, &ty)?;
            t.record(a == b, || format!("rank {}: direct {} vs negdef {}", n, a, b));
        }
    }
    Ok(t)
}

/// A random valid rank-n skew object M (x) A with M positive unimodular.
pub fn random_skew_object<R: Rng>(ar: &Arith, r: &mut R, a: &SkewObject1, n: usize) -> Result<SkewLatticeN> {
    let m = rnd::rand_positive_unimodular_herm(ar, r, n);
    serre::tensor(ar, &m, a)
}

/// det_descent of valid rank-3 objects passes the rank-1 invariants; negating the
/// form flips the sign of zeta and must fail on "imaginary sign".
pub fn det_descent(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let a = base_witness(ar)?;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for _ in 0..count {
        let x = random_skew_object(ar, &mut r, &a, 3)?;
        let d = serre::det_descent(ar, &x);
        t.record(d.is_ok(), || format!("valid input rejected: {:?}", d.err()));
        let mut bad = x.clone();
        bad.lat.gram = herm::mat_scale(k, &bad.lat.gram, &k.from_i64(-1));
        let e = serre::det_descent(ar, &bad);
        let inv = e.as_ref().err().and_then(|e| e.invariant().map(str::to_string));
        t.record(inv.as_deref() == Some("imaginary sign"), || format!("corrupted input gave {:?}", inv));
    }
    Ok(t)
}

/// decompose o tensor = id and tensor o decompose = id.
pub fn basek(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let a = base_witness(ar)?;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let n = 1 + i % 3;
        let x = random_skew_object(ar, &mut r, &a, n)?;
        let m = serre::decompose(ar, &x, &a)?;
        let x2 = serre::tensor(ar, &m, &a)?;
        let m2 = serre::decompose(ar, &x2, &a)?;
        t.record(x2 == x && m2 == m, || format!("rank {}", n));
    }
    Ok(t)
}

/// A second object of the same type: (a c^{-1}, zeta r) with c c^sigma = (r), r totally positive.
fn same_type_partner<R: Rng>(ar: &Arith, r: &mut R, a: &SkewObject1, twisted: bool) -> Result<Option<SkewObject1>> {
    let k = &ar.k;
    let y = rnd::rand_nonzero(k, r, 3);
    let (c0, r0) = match (twisted, rnd::twisted_slot(ar)) {
        (true, Some((c, rr))) => (c, rr),
        (true, None) => return Ok(None),
        (false, _) => (ideal::unit_ideal(k), k.one()),
    };
    let c = ideal::scale(k, &c0, &y)?;
    let mut rr = k.mul(&r0, &k.mul(&y, &k.conj(&y)));
    if !k.is_totally_positive(&rr)? {
        // adjust by a unit of F carrying the missing signs, if any
        let sv = k.sign_vector(&rr)?;
        match ar.units.sign_reps.iter().find(|(s, _)| *s == sv) {
            Some((_, u)) => rr = k.mul(&rr, u),
            None => return Ok(None),
        }
    }
    let b = serre::make_skew1(ar, &ideal::div(k, &a.ideal, &c), &k.mul(&a.zeta, &rr), &a.cm_type);
    match b {
        Ok(b) => Ok(Some(b)),
        Err(Error::Invalid { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, Default)]
pub struct HomTally {
    pub tally: Tally,
    pub nonprincipal: usize,
}

/// N totally positive, herm positive and unimodular, Rosati dual involutive.
pub fn hom_pairs(ar: &Arith, seed: u64, count: usize) -> Result<HomTally> {
    let k = &ar.k;
    let a0 = base_witness(ar)?;
    let mut r = rng(seed);
    let mut out = HomTally::default();
    let mut tries = 0;
    while out.tally.instances < count {
        tries += 1;
        if tries > 50 * count {
            return Err(Error::Budget("could not draw enough hom pairs".into()));
        }
        let twisted = r.gen_bool(0.5);
        let Some(a) = same_type_partner(ar, &mut r, &a0, false)? else { continue };
        let Some(b) = same_type_partner(ar, &mut r, &a, twisted)? else { continue };
        let h = serre::hom_module(ar, &a, &b);
        let ok = match &h {
            Ok(h) => {
                let npos = k.is_totally_positive(&h.n)?;
                let hpos = herm::is_positive(k, &h.herm.gram)? && serre::validate_herm(ar, &h.herm).is_ok();
                let mut inv = true;
                for _ in 0..3 {
                    let phi = random_in(ar, &mut r, &h.hom_ideal);
                    let d = serre::rosati_dual(ar, &phi, &a, &b)?;
                    let dd = serre::rosati_dual(ar, &d, &b, &a)?;
                    inv &= dd == phi;
                }
                if ar.is_principal(&h.hom_ideal)?.is_none() {
                    out.nonprincipal += 1;
                }
                npos && hpos && inv
            }
            Err(_) => false,
        };
        out.tally.record(ok, || format!("hom: {:?}", h.as_ref().err()));
    }
    Ok(out)
}

fn random_in<R: Rng>(ar: &Arith, r: &mut R, id: &ideal::FracIdeal) -> crate::field::Elem {
    let k = &ar.k;
    loop {
        let mut acc = k.zero();
        for b in id.basis(k) {
            acc = k.add(&acc, &k.mul(&b, &k.from_i64(r.gen_range(-3..=3))));
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CatTally {
    pub terminated: Tally,
    pub idempotent: Tally,
    pub sound: Tally,
    pub coherence: Tally,
}

/// Random words of length <= 20 on the standard model over Q(sqrt -5).
pub fn tensor_cat(seed: u64, count: usize) -> Result<CatTally> {
    let mut r = rng(seed);
    let mut out = CatTally::default();
    for _ in 0..count {
        let mut m = tc::standard_model(2)?;
        let na = r.gen_range(0..=10);
        let np = r.gen_range(0..=(20 - na).min(10));
        let w = tc::random_word(&mut r, &mut m, na, np)?;
        let n = tc::normalize(&w);
        out.terminated.record(n.is_ok() && w.syms.len() <= 20, || format!("normalize failed: {:?}", n.as_ref().err()));
        let Ok(n) = n else { continue };
        let again = tc::normalize(&n.nf.to_word(&w.decls))?;
        out.idempotent.record(again.nf == n.nf, || "normalize(normalize(w)) differs".into());
        let lhs = m.eval_word(&w)?;
        let rhs = m.eval_normal_form(&n.nf, &w.decls)?;
        out.sound.record(lhs == rhs, || "evaluation differs".into());
    }
    for (p, q) in coherence_words() {
        let a = tc::normalize(&tc::parse_word_text(p)?)?;
        let b = tc::normalize(&tc::parse_word_text(q)?)?;
        out.coherence.record(a.nf == b.nf, || format!("{:?} vs {:?}", p, q));
    }
    Ok(out)
}

/// Pairs of words that must normalize to the same form: pentagon instances
/// (moving a.b at once or letter by letter) and unit triangles through o.
pub fn coherence_words() -> Vec<(&'static str, &'static str)> {
    vec![
        ("src X0.a.b Y0\nA X0.a b Y0\nA X0 a b.Y0\n", "A X0 a.b Y0\n"),
        ("src X0.a.b.b^-1 Y0\nA X0.a.b b^-1 Y0\nA X0.a b b^-1.Y0\nA X0 a b.b^-1.Y0\n", "A X0 a.b.b^-1 Y0\n"),
        ("src X0 a.b.Y0\nA' X0 a b.Y0\nA' X0.a b Y0\n", "A' X0 a.b Y0\n"),
        ("src X0.o Y0\nA X0 o Y0\nA' X0 o Y0\n", "src X0.o Y0\nPT id id\n"),
        ("src X0.o o^-1.Y0\nA X0 o o^-1.Y0\nPT id c@0\n", "src X0.o o^-1.Y0\nA' X0.o o^-1 Y0\nA X0 o.o^-1 Y0\nPT id c@0\n"),
    ]
}

/// J_Phi rank g for every type (compute_jphi itself checks J J^sigma = 0 and
/// J cap J^sigma = 0); charpoly matches the product formula.
pub fn jphi_suite(ar: &Arith, seed: u64, count: usize) -> Result<Tally> {
    let k = &ar.k;
    let mut r = rng(seed);
    let mut t = Tally::default();
    for ty in k.cm_types() {
        let d = jphi::compute_jphi(k, &ty)?;
        t.record(d.j_rank() == k.g, || format!("rank {} for type {}", d.j_rank(), k.cm_type_index(&ty)));
        for _ in 0..count {
            let a = rnd::rand_integral(k, &mut r, 3);
            let n = r.gen_range(1..=2);
            let cp = jphi::charpoly_on_lie(k, &d, &a, n)?;
            t.record(cp == jphi::product_formula(k, &d.auts, &ty, &a, n), || "charpoly mismatch".into());
        }
    }
    Ok(t)
}
