//! The ideal J_Phi in O_K (x) O_L, its quotient Lie_Phi, and characteristic
//! polynomials on Lie_Phi.
//!
//! Only fields that are Galois over Q are handled: then the Galois closure is K
//! itself, every embedding is phi_j = phi_0 o tau_j for an automorphism tau_j,
//! and the reflex field is a subfield of K through phi_0.

use crate::field::{CMField, CMType, Elem};
use crate::linalg::{self, q, zq, IMat, Mat, Q, Z};
use crate::{Error, Result};
use num_traits::{One, ToPrimitive, Zero};

/// Automorphisms tau_j of K with phi_0 o tau_j = phi_j, as images of the generator.
///
/// Candidates come from floating-point interpolation; each is accepted only
/// after an exact root check and a certified embedding comparison.
pub fn automorphisms(k: &CMField) -> Result<Vec<Elem>> {
    let d = k.degree();
    let prec = 64;
    let th: Vec<C64> = (0..d).map(|j| k.embed_f64(&k.gen(), j)).collect();
    // power-basis coordinates of integral elements have denominators dividing disc(f)
    let disc = linalg::qabs(&k.discriminant());
    let fq: Vec<Q> = k.min_poly.iter().map(zq).collect();
    let mut out = vec![];
    for j in 0..d {
        let tj = k.embed(&k.gen(), j, prec);
        let mut found = None;
        for perm in perms_fixing_first(d, j) {
            let w: Vec<C64> = perm.iter().map(|&p| th[p]).collect();
            let c = interpolate(&th, &w);
            let Some(r) = round_coords(&c, &disc) else { continue };
            let r = Elem(r);
            if is_root(k, &fq, &r) && k.embed(&r, 0, prec).overlaps(&tj) {
                found = Some(r);
                break;
            }
        }
        match found {
            Some(r) => out.push(r),
            None => {
                return Err(Error::Unsupported(
                    "K is not Galois over Q; the Galois closure is not available".into(),
                ))
            }
        }
    }
    Ok(out)
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let n = b.0 * b.0 + b.1 * b.1;
    cmul(a, (b.0 / n, -b.1 / n))
}

fn perms_fixing_first(d: usize, j: usize) -> Vec<Vec<usize>> {
    let rest: Vec<usize> = (0..d).filter(|&x| x != j).collect();
    let mut out = vec![];
    permute(&rest, &mut vec![], &mut vec![false; rest.len()], &mut out);
    out.into_iter()
        .map(|p| {
            let mut v = vec![j];
            v.extend(p);
            v
        })
        .collect()
}

fn permute(xs: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == xs.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..xs.len() {
        if !used[i] {
            used[i] = true;
            cur.push(xs[i]);
            permute(xs, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Coefficients of the polynomial p of degree < d with p(th_k) = w_k.
fn interpolate(th: &[C64], w: &[C64]) -> Vec<C64> {
    let d = th.len();
    let mut out = vec![(0.0, 0.0); d];
    for kk in 0..d {
        let mut basis = vec![(1.0, 0.0)];
        let mut den = (1.0, 0.0);
        for m in 0..d {
            if m == kk {
                continue;
            }
            let mut nb = vec![(0.0, 0.0); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                nb[i + 1] = (nb[i + 1].0 + b.0, nb[i + 1].1 + b.1);
                let t = cmul(*b, th[m]);
                nb[i] = (nb[i].0 - t.0, nb[i].1 - t.1);
            }
            basis = nb;
            den = cmul(den, (th[kk].0 - th[m].0, th[kk].1 - th[m].1));
        }
        let s = cdiv(w[kk], den);
        for (i, b) in basis.iter().enumerate() {
            let t = cmul(*b, s);
            out[i] = (out[i].0 + t.0, out[i].1 + t.1);
        }
    }
    out
}

fn round_coords(c: &[C64], disc: &Q) -> Option<Vec<Q>> {
    let df = disc.to_f64()?;
    c.iter()
        .map(|&(re, im)| {
            if (im * df).abs() > 0.25 {
                return None;
            }
            let t = re * df;
            let n = t.round();
            if (t - n).abs() > 0.25 {
                return None;
            }
            Some(Q::from_integer(Z::from(n as i64)) / disc)
        })
        .collect()
}

fn is_root(k: &CMField, f: &[Q], r: &Elem) -> bool {
    let mut acc = k.zero();
    for c in f.iter().rev() {
        acc = k.add(&k.mul(&acc, r), &k.from_q(c));
    }
    acc.is_zero()
}

/// Apply the automorphism with tau(gen) = r.
pub fn apply_aut(k: &CMField, r: &Elem, a: &Elem) -> Elem {
    let mut acc = k.zero();
    for c in a.0.iter().rev() {
        acc = k.add(&k.mul(&acc, r), &k.from_q(c));
    }
    acc
}

/// Index of the automorphism tau_i o tau_j among `auts`.
fn compose_index(k: &CMField, auts: &[Elem], i: usize, j: usize) -> usize {
    let img = apply_aut(k, &auts[i], &auts[j]);
    auts.iter().position(|a| *a == img).expect("automorphism group is closed")
}

#[derive(Clone, Debug)]
pub struct ReflexField {
    /// Indices i with tau_i Phi = Phi.
    pub stabilizer: Vec<usize>,
    /// Z-basis of O_L = O_K cap L.
    pub ol_basis: Vec<Elem>,
}

pub fn reflex_field(k: &CMField, auts: &[Elem], t: &CMType) -> Result<ReflexField> {
    let mut stabilizer = vec![];
    for i in 0..auts.len() {
        let mut img: Vec<usize> = t.indices.iter().map(|&j| compose_index(k, auts, i, j)).collect();
        img.sort();
        let mut own = t.indices.clone();
        own.sort();
        if img == own {
            stabilizer.push(i);
        }
    }
    // O_L: integer vectors in O_K-coordinates fixed by the stabilizer
    let basis = k.integral_basis();
    let d = k.degree();
    let mut cols: Vec<Vec<Q>> = vec![vec![]; d];
    for &i in &stabilizer {
        for (a, w) in basis.iter().enumerate() {
            let diff = k.sub(&apply_aut(k, &auts[i], w), w);
            cols[a].extend(k.to_int_coords(&diff));
        }
    }
    let ol_basis = if cols[0].is_empty() {
        basis.clone()
    } else {
        let (ints, _) = linalg::clear_denoms(&cols);
        linalg::int_left_kernel(&ints).iter().map(|v| comb(k, &basis, v)).collect()
    };
    Ok(ReflexField { stabilizer, ol_basis })
}

fn comb(k: &CMField, basis: &[Elem], v: &[Z]) -> Elem {
    basis.iter().zip(v).fold(k.zero(), |acc, (b, c)| k.add(&acc, &k.scale(b, &zq(c))))
}

/// Elements of K (x) K in coordinates c[a*d + b] on x^a (x) x^b.
pub type Tensor = Vec<Q>;

pub fn pure_tensor(k: &CMField, a: &Elem, b: &Elem) -> Tensor {
    let d = k.degree();
    let mut out = vec![Q::zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = &a.0[i] * &b.0[j];
        }
    }
    out
}

pub fn tensor_mul(k: &CMField, x: &Tensor, y: &Tensor) -> Tensor {
    let d = k.degree();
    let pw: Vec<Elem> = (0..2 * d).map(|i| k.pow(&k.gen(), i as i64).expect("power")).collect();
    let mut out = vec![Q::zero(); d * d];
    for (ix, cx) in x.iter().enumerate() {
        if cx.is_zero() {
            continue;
        }
        for (iy, cy) in y.iter().enumerate() {
            if cy.is_zero() {
                continue;
            }
            let c = cx * cy;
            let (a1, b1) = (ix / d, ix % d);
            let (a2, b2) = (iy / d, iy % d);
            let l = &pw[a1 + a2];
            let r = &pw[b1 + b2];
            for i in 0..d {
                if l.0[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += &c * &l.0[i] * &r.0[j];
                }
            }
        }
    }
    out
}

/// (sigma (x) 1) on K (x) K.
pub fn tensor_conj(k: &CMField, x: &Tensor) -> Tensor {
    let d = k.degree();
    let mut out = vec![Q::zero(); d * d];
    for a in 0..d {
        let ca = k.conj(&k.pow(&k.gen(), a as i64).expect("power"));
        for b in 0..d {
            let c = &x[a * d + b];
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                out[i * d + b] += c * &ca.0[i];
            }
        }
    }
    out
}

/// The component map x (x) y -> tau_j(x) y.
pub fn component(k: &CMField, auts: &[Elem], j: usize, x: &Tensor) -> Elem {
    let d = k.degree();
    let mut acc = k.zero();
    for a in 0..d {
        let ta = apply_aut(k, &auts[j], &k.pow(&k.gen(), a as i64).expect("power"));
        for b in 0..d {
            let c = &x[a * d + b];
            if c.is_zero() {
                continue;
            }
            let y = k.mul(&ta, &k.pow(&k.gen(), b as i64).expect("power"));
            acc = k.add(&acc, &k.scale(&y, c));
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct JPhiData {
    pub cm_type: CMType,
    pub auts: Vec<Elem>,
    pub reflex: ReflexField,
    /// Z-basis of O_K (x) O_L.
    pub ambient: Vec<Tensor>,
    /// Z-basis of J_Phi.
    pub j_basis: Vec<Tensor>,
    /// Z-basis of Lie_Phi as vectors in prod_{phi in Phi} K.
    pub lie_basis: Vec<Vec<Elem>>,
}

impl JPhiData {
    pub fn l_degree(&self) -> usize {
        self.reflex.ol_basis.len()
    }

    pub fn j_rank(&self) -> usize {
        self.j_basis.len() / self.l_degree()
    }

    pub fn lie_rank(&self) -> usize {
        self.lie_basis.len() / self.l_degree()
    }
}

fn lie_image(k: &CMField, auts: &[Elem], t: &CMType, x: &Tensor) -> Vec<Elem> {
    t.indices.iter().map(|&j| component(k, auts, j, x)).collect()
}

fn flat(v: &[Elem]) -> Vec<Q> {
    v.iter().flat_map(|e| e.0.iter().cloned()).collect()
}

pub fn compute_jphi(k: &CMField, t: &CMType) -> Result<JPhiData> {
    k.validate_type(t)?;
    let auts = automorphisms(k)?;
    let reflex = reflex_field(k, &auts, t)?;
    let mut ambient = vec![];
    for w in k.integral_basis() {
        for l in &reflex.ol_basis {
            ambient.push(pure_tensor(k, &w, l));
        }
    }
    let images: Vec<Vec<Q>> = ambient.iter().map(|x| flat(&lie_image(k, &auts, t, x))).collect();
    let (ints, _) = linalg::clear_denoms(&images);
    let kern = linalg::int_left_kernel(&ints);
    let j_basis: Vec<Tensor> = kern
        .iter()
        .map(|v| {
            let mut acc = vec![Q::zero(); ambient[0].len()];
            for (c, a) in v.iter().zip(&ambient) {
                for (x, y) in acc.iter_mut().zip(a) {
                    *x += zq(c) * y;
                }
            }
            acc
        })
        .collect();
    let (h, den) = linalg::rational_lattice(&images);
    let n = t.indices.len();
    let lie_basis: Vec<Vec<Elem>> = linalg::to_q_rows(&h, &den)
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(|r| (0..n).map(|i| Elem(r[i * k.degree()..(i + 1) * k.degree()].to_vec())).collect())
        .collect();
    let data = JPhiData { cm_type: t.clone(), auts, reflex, ambient, j_basis, lie_basis };
    check_invariants(k, &data)?;
    Ok(data)
}

fn check_invariants(k: &CMField, data: &JPhiData) -> Result<()> {
    let g = k.g;
    let l = data.l_degree();
    if data.j_basis.len() != g * l || data.lie_basis.len() != g * l {
        return Err(Error::invalid(
            "rank",
            format!("J_Phi has Z-rank {}, Lie_Phi {}; expected {} each", data.j_basis.len(), data.lie_basis.len(), g * l),
        ));
    }
    let jc: Vec<Tensor> = data.j_basis.iter().map(|x| tensor_conj(k, x)).collect();
    for x in &data.j_basis {
        for y in &jc {
            if tensor_mul(k, x, y).iter().any(|c| !c.is_zero()) {
                return Err(Error::invalid("J J^sigma = 0", "nonzero product"));
            }
        }
    }
    let mut stack: Mat = data.j_basis.clone();
    stack.extend(jc);
    if linalg::rank(&stack) != 2 * g * l {
        return Err(Error::invalid("J cap J^sigma = 0", "intersection is nonzero"));
    }
    Ok(())
}

/// Integer matrix of multiplication by (a (x) b) on the Lie_Phi basis (rows = images).
pub fn lie_action(k: &CMField, data: &JPhiData, a: &Elem, b: &Elem) -> Result<IMat> {
    let ta: Vec<Elem> = data.cm_type.indices.iter().map(|&j| k.mul(&apply_aut(k, &data.auts[j], a), b)).collect();
    let rows: Mat = data.lie_basis.iter().map(|v| flat(v)).collect();
    let at = linalg::transpose(&rows);
    let mut out = vec![];
    for v in &data.lie_basis {
        let w: Vec<Elem> = v.iter().zip(&ta).map(|(x, y)| k.mul(x, y)).collect();
        let c = linalg::solve_any(&at, &flat(&w)).ok_or_else(|| Error::invalid("Lie_Phi", "not stable under the action"))?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::invalid("Lie_Phi", "action is not integral on the lattice"));
        }
        out.push(c.iter().map(|x| x.to_integer()).collect());
    }
    Ok(out)
}

/// Characteristic polynomial over L of a in O_K acting on Lie_Phi (x) O_L^n,
/// coefficients (low to high) in L inside K.
pub fn charpoly_on_lie(k: &CMField, data: &JPhiData, a: &Elem, n: usize) -> Result<Vec<Elem>> {
    if n == 0 {
        return Err(Error::malformed("rank n must be positive"));
    }
    let g = data.cm_type.indices.len();
    let ls = &data.reflex.ol_basis;
    // an L-basis of Lie_Phi (x) Q
    let mut lbasis: Vec<Vec<Elem>> = vec![];
    let mut span: Mat = vec![];
    for v in &data.lie_basis {
        let mut trial = span.clone();
        for l in ls {
            trial.push(flat(&v.iter().map(|x| k.mul(x, l)).collect::<Vec<_>>()));
        }
        if linalg::rank(&trial) > linalg::rank(&span) {
            span = trial;
            lbasis.push(v.clone());
        }
        if lbasis.len() == g {
            break;
        }
    }
    // matrix of a over L
    let ta: Vec<Elem> = data.cm_type.indices.iter().map(|&j| apply_aut(k, &data.auts[j], a)).collect();
    let mut cols: Mat = vec![];
    for v in &lbasis {
        for l in ls {
            cols.push(flat(&v.iter().map(|x| k.mul(x, l)).collect::<Vec<_>>()));
        }
    }
    let at = linalg::transpose(&cols);
    let mut m1 = vec![vec![k.zero(); g]; g];
    for (i, v) in lbasis.iter().enumerate() {
        let w: Vec<Elem> = v.iter().zip(&ta).map(|(x, y)| k.mul(x, y)).collect();
        let c = linalg::solve_any(&at, &flat(&w)).ok_or_else(|| Error::invalid("Lie_Phi", "not stable under O_K"))?;
        for (r, row) in m1.iter_mut().enumerate() {
            // column i of the matrix: coordinates of a v_i
            row[i] = ls.iter().enumerate().fold(k.zero(), |acc, (b, l)| k.add(&acc, &k.scale(l, &c[r * ls.len() + b])));
        }
    }
    // block diagonal n copies
    let big = g * n;
    let mut m = vec![vec![k.zero(); big]; big];
    for blk in 0..n {
        for i in 0..g {
            for j in 0..g {
                m[blk * g + i][blk * g + j] = m1[i][j].clone();
            }
        }
    }
    Ok(faddeev_leverrier(k, &m))
}

/// Characteristic polynomial det(X - M) by the Faddeev-LeVerrier recursion.
pub fn faddeev_leverrier(k: &CMField, m: &[Vec<Elem>]) -> Vec<Elem> {
    let n = m.len();
    let mut coeffs = vec![k.zero(); n + 1];
    coeffs[n] = k.one();
    let mut mk: Vec<Vec<Elem>> = vec![vec![k.zero(); n]; n];
    for i in 1..=n {
        // M_i = M (M_{i-1} + c_{n-i+1} I)
        let mut prev = mk.clone();
        for (d, row) in prev.iter_mut().enumerate() {
            row[d] = k.add(&row[d], &coeffs[n - i + 1]);
        }
        mk = crate::herm::mat_mul(k, &m.to_vec(), &prev);
        let tr = (0..n).fold(k.zero(), |acc, d| k.add(&acc, &mk[d][d]));
        coeffs[n - i] = k.scale(&tr, &(-Q::one() / q(i as i64)));
    }
    coeffs
}

/// prod_{phi in Phi} (X - phi(a))^n expanded in K.
pub fn product_formula(k: &CMField, auts: &[Elem], t: &CMType, a: &Elem, n: usize) -> Vec<Elem> {
    let mut p = vec![k.one()];
    for _ in 0..n {
        for &j in &t.indices {
            let r = apply_aut(k, &auts[j], a);
            let mut np = vec![k.zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                np[i + 1] = k.add(&np[i + 1], c);
                np[i] = k.sub(&np[i], &k.mul(c, &r));
            }
            p = np;
        }
    }
    p
}

/// Whether x lies in L (fixed by the stabilizer).
pub fn in_reflex(k: &CMField, data: &JPhiData, x: &Elem) -> bool {
    data.reflex.stabilizer.iter().all(|&i| apply_aut(k, &data.auts[i], x) == *x)
}

/// The idempotents e1, e2 of K (x) K projecting onto the Phi and non-Phi components.
pub fn idempotents(k: &CMField, auts: &[Elem], t: &CMType) -> Result<(Tensor, Tensor)> {
    let d = k.degree();
    // the map K (x) K -> K^d, x -> (component_j(x))_j, on the power basis
    let mut cols: Mat = vec![];
    for a in 0..d {
        for b in 0..d {
            let mut e = vec![Q::zero(); d * d];
            e[a * d + b] = Q::one();
            let img: Vec<Elem> = (0..d).map(|j| component(k, auts, j, &e)).collect();
            cols.push(flat(&img));
        }
    }
    let m = linalg::transpose(&cols);
    let target = |inside: bool| -> Vec<Q> {
        (0..d)
            .flat_map(|j| {
                let v = if t.indices.contains(&j) == inside { k.one() } else { k.zero() };
                v.0
            })
            .collect()
    };
    let e1 = linalg::solve(&m, &target(true)).ok_or_else(|| Error::invalid("idempotent", "K (x) K -> K^d not invertible"))?;
    let e2 = linalg::solve(&m, &target(false)).ok_or_else(|| Error::invalid("idempotent", "K (x) K -> K^d not invertible"))?;
    Ok((e1, e2))
}

/// Check e2 (K (x) K) = J_Phi (x) K as Q-subspaces.
pub fn idempotent_span_matches(k: &CMField, data: &JPhiData, e2: &Tensor) -> bool {
    let d = k.degree();
    let mut lhs: Mat = vec![];
    for a in 0..d {
        for b in 0..d {
            let mut e = vec![Q::zero(); d * d];
            e[a * d + b] = Q::one();
            lhs.push(tensor_mul(k, e2, &e));
        }
    }
    let mut rhs: Mat = vec![];
    for x in &data.j_basis {
        for b in 0..d {
            let w = k.pow(&k.gen(), b as i64).expect("power");
            rhs.push(tensor_mul(k, x, &pure_tensor(k, &k.one(), &w)));
        }
    }
    let rl = linalg::rank(&lhs);
    let rr = linalg::rank(&rhs);
    let mut both = lhs;
    both.extend(rhs);
    rl == rr && linalg::rank(&both) == rl
}

