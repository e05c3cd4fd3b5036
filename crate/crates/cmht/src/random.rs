//! Random instances for property tests and batch checks.

use crate::field::{CMField, Elem};
use crate::herm::{self, KMat, LatticeBasis};
use crate::ideal::{self, Arith, FracIdeal};
use crate::linalg::{q, Mat, Q};
use crate::serre::{HermLattice, PseudoLattice};
use rand::Rng;

/// Element with small integer coordinates in the integral basis.
pub fn rand_integral<R: Rng>(k: &CMField, rng: &mut R, bound: i64) -> Elem {
    let c: Vec<Q> = (0..k.degree()).map(|_| q(rng.gen_range(-bound..=bound))).collect();
    k.from_int_coords(&c)
}

/// Element with small rational coordinates (denominators up to `den`).
pub fn rand_elem<R: Rng>(k: &CMField, rng: &mut R, bound: i64, den: i64) -> Elem {
    let c: Vec<Q> = (0..k.degree())
        .map(|_| Q::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=den).into()))
        .collect();
    k.from_int_coords(&c)
}

pub fn rand_nonzero<R: Rng>(k: &CMField, rng: &mut R, bound: i64) -> Elem {
    loop {
        let x = rand_integral(k, rng, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Element of the real subfield F.
pub fn rand_real<R: Rng>(k: &CMField, rng: &mut R, bound: i64) -> Elem {
    let x = rand_elem(k, rng, bound, 3);
    k.scale(&k.add(&x, &k.conj(&x)), &Q::new(1.into(), 2.into()))
}

pub fn rand_matrix<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> KMat {
    (0..n).map(|_| (0..n).map(|_| rand_integral(k, rng, bound)).collect()).collect()
}

pub fn rand_invertible<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> KMat {
    loop {
        let m = rand_matrix(k, rng, n, bound);
        if !herm::det(k, &m).is_zero() {
            return m;
        }
    }
}

/// Hermitian matrix with real diagonal and random off-diagonal entries.
pub fn rand_hermitian<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> KMat {
    let mut m = vec![vec![k.zero(); n]; n];
    for i in 0..n {
        m[i][i] = rand_real(k, rng, bound);
        for j in i + 1..n {
            let x = rand_elem(k, rng, bound, 2);
            m[j][i] = k.conj(&x);
            m[i][j] = x;
        }
    }
    m
}

/// Random positive-definite hermitian matrix Q^* D Q with D totally positive.
pub fn rand_positive<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> KMat {
    let qm = rand_invertible(k, rng, n, bound);
    let d: Vec<Elem> = (0..n)
        .map(|_| {
            let x = rand_nonzero(k, rng, bound);
            k.mul(&x, &k.conj(&x))
        })
        .collect();
    herm::mat_mul(k, &herm::mat_mul(k, &herm::star(k, &qm), &herm::diag(k, &d)), &qm)
}

/// Units of F available for diagonal entries: +-1, +-eps, +-eps^-1.
fn real_units(ar: &Arith) -> Vec<Elem> {
    let k = &ar.k;
    let mut out = vec![k.one(), k.from_i64(-1)];
    if let Some(e) = &ar.units.signs.fundamental_unit {
        let ei = k.inv(e).expect("unit");
        out.push(k.neg(e));
        out.push(k.neg(&ei));
        out.push(e.clone());
        out.push(ei);
    }
    out
}

/// Unimodular O_K-valued hermitian lattice of rank n, definite or not,
/// presented through a random change of basis.
pub fn rand_unimodular_herm<R: Rng>(ar: &Arith, rng: &mut R, n: usize) -> HermLattice {
    unimodular(ar, rng, n, false)
}

/// As rand_unimodular_herm, but positive-definite.
pub fn rand_positive_unimodular_herm<R: Rng>(ar: &Arith, rng: &mut R, n: usize) -> HermLattice {
    unimodular(ar, rng, n, true)
}

fn unimodular<R: Rng>(ar: &Arith, rng: &mut R, n: usize, positive: bool) -> HermLattice {
    let k = &ar.k;
    let tp = |x: &Elem| k.is_totally_positive(x).unwrap_or(false);
    let mut units = real_units(ar);
    if positive {
        units.retain(|u| tp(u));
        if let Some(e) = &ar.units.signs.fundamental_unit {
            units.push(k.mul(e, e));
        }
    }
    let mut ideals = vec![ideal::unit_ideal(k); n];
    let mut d: Vec<Elem> = (0..n).map(|_| units[rng.gen_range(0..units.len())].clone()).collect();
    // an ideal slot c with c c^sigma = (r), r in F, carries h = 1/r
    if let Some((c, r)) = twisted_slot(ar) {
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..n);
            let s = if rng.gen_bool(0.5) { k.one() } else { k.from_i64(-1) };
            let mut h = k.mul(&s, &k.inv(&r).expect("nonzero"));
            if positive && !tp(&h) {
                h = k.neg(&h);
            }
            if !positive || tp(&h) {
                ideals[i] = c;
                d[i] = h;
            }
        }
    }
    let p = rand_invertible(k, rng, n, 2);
    let pinv = herm::inverse(k, &p).expect("invertible");
    let gram = herm::mat_mul(k, &herm::mat_mul(k, &herm::star(k, &pinv), &herm::diag(k, &d)), &pinv);
    PseudoLattice { ideals, basis: p, gram }
}

/// Like rand_unimodular_herm but with h scaled by 2, so h is not an isomorphism onto the dual.
pub fn rand_degenerate_herm<R: Rng>(ar: &Arith, rng: &mut R, n: usize) -> HermLattice {
    let k = &ar.k;
    let mut m = rand_unimodular_herm(ar, rng, n);
    m.gram = herm::mat_scale(k, &m.gram, &k.from_i64(2));
    m
}

/// A non-principal ideal c with c c^sigma principal generated in F, if the class group has one.
pub fn twisted_slot(ar: &Arith) -> Option<(FracIdeal, Elem)> {
    let k = &ar.k;
    let cg = ar.class_group().ok()?;
    for c in cg.representatives.iter().skip(1) {
        let nc = ideal::mul(k, c, &ideal::conj(k, c));
        if let Ok(Some(g)) = ar.is_principal(&nc) {
            // generators in F exist iff some unit multiple of g is real
            for u in &ar.units.torsion {
                let r = k.mul(&g, u);
                if k.is_real(&r) {
                    return Some((c.clone(), r));
                }
            }
        }
    }
    None
}

/// Random skew-hermitian matrix.
pub fn rand_skew<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> KMat {
    let h = rand_hermitian(k, rng, n, bound);
    let x = k.gen();
    let theta = k.sub(&x, &k.conj(&x));
    herm::mat_scale(k, &h, &theta)
}

/// Random O_K-compatible alternating form on the standard lattice O_K^n.
pub fn rand_alt<R: Rng>(k: &CMField, rng: &mut R, n: usize, bound: i64) -> (LatticeBasis, Mat) {
    let h = LatticeBasis::standard(k, n);
    let g = rand_skew(k, rng, n, bound);
    let e = herm::alt_from_skew(k, &h, &g);
    (h, e)
}
