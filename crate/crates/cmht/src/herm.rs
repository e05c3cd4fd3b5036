//! Hermitian and skew-hermitian matrices over K: the Jordan product, exact
//! positivity by leading minors, definiteness along a CM type, and the
//! dictionary between alternating forms E and skew-hermitian forms F.
//!
//! Forms are `F(x, y) = x^* G y`, sigma-linear in the first argument.

use crate::ball::{CBall, RBall};
use crate::field::{CMField, CMType, Elem};
use crate::linalg::{self, Mat, Q};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Square matrix with entries in K.
pub type KMat = Vec<Vec<Elem>>;

pub fn identity(k: &CMField, n: usize) -> KMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
}

pub fn diag(k: &CMField, d: &[Elem]) -> KMat {
    let n = d.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { k.zero() }).collect()).collect()
}

pub fn mat_mul(k: &CMField, a: &KMat, b: &KMat) -> KMat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(k.zero(), |acc, l| k.add(&acc, &k.mul(&a[i][l], &b[l][j]))))
                .collect()
        })
        .collect()
}

pub fn mat_add(k: &CMField, a: &KMat, b: &KMat) -> KMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| k.add(x, y)).collect()).collect()
}

pub fn mat_scale(k: &CMField, a: &KMat, c: &Elem) -> KMat {
    a.iter().map(|r| r.iter().map(|x| k.mul(x, c)).collect()).collect()
}

/// Conjugate transpose.
pub fn star(k: &CMField, a: &KMat) -> KMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|i| (0..n).map(|j| k.conj(&a[j][i])).collect()).collect()
}

pub fn mat_vec(k: &CMField, a: &KMat, v: &[Elem]) -> Vec<Elem> {
    a.iter().map(|r| r.iter().zip(v).fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)))).collect()
}

/// x^* G y.
pub fn form(k: &CMField, g: &KMat, x: &[Elem], y: &[Elem]) -> Elem {
    let gy = mat_vec(k, g, y);
    x.iter().zip(&gy).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(&k.conj(a), b)))
}

pub fn det(k: &CMField, a: &KMat) -> Elem {
    let n = a.len();
    let mut m = a.clone();
    let mut d = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return k.zero();
        };
        if p != c {
            m.swap(p, c);
            d = k.neg(&d);
        }
        let inv = k.inv(&m[c][c]).expect("nonzero pivot");
        d = k.mul(&d, &m[c][c]);
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = k.mul(&m[r][c], &inv);
            for j in c..n {
                let t = k.mul(&f, &m[c][j]);
                m[r][j] = k.sub(&m[r][j], &t);
            }
        }
    }
    d
}

pub fn inverse(k: &CMField, a: &KMat) -> Option<KMat> {
    let n = a.len();
    let mut m: KMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let inv = k.inv(&m[c][c]).ok()?;
        for x in m[c].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = k.mul(&f, &m[c][j]);
                    m[r][j] = k.sub(&m[r][j], &t);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_hermitian(k: &CMField, x: &KMat) -> bool {
    let n = x.len();
    x.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..n).all(|j| x[j][i] == k.conj(&x[i][j])))
}

pub fn is_skew_hermitian(k: &CMField, x: &KMat) -> bool {
    let n = x.len();
    x.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..n).all(|j| x[j][i] == k.neg(&k.conj(&x[i][j]))))
}

/// (XY + YX) / 2.
pub fn jordan_product(k: &CMField, x: &KMat, y: &KMat) -> Result<KMat> {
    if x.len() != y.len() {
        return Err(Error::invalid("rank", "Jordan product of matrices of different rank"));
    }
    let s = mat_add(k, &mat_mul(k, x, y), &mat_mul(k, y, x));
    Ok(mat_scale(k, &s, &k.from_q(&Q::new(1.into(), 2.into()))))
}

/// Leading principal minors det(X[0..k, 0..k]) for k = 1..n.
pub fn leading_minors(k: &CMField, x: &KMat) -> Vec<Elem> {
    (1..=x.len())
        .map(|m| {
            let sub: KMat = x[..m].iter().map(|r| r[..m].to_vec()).collect();
            det(k, &sub)
        })
        .collect()
}

/// Positivity of a hermitian matrix: every leading minor is totally positive.
pub fn is_positive(k: &CMField, x: &KMat) -> Result<bool> {
    if !is_hermitian(k, x) {
        return Err(Error::invalid("hermitian", "matrix is not hermitian"));
    }
    for m in leading_minors(k, x) {
        if !k.is_totally_positive(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// is_positive(Q^* Q) for invertible Q.
pub fn property_p_check(k: &CMField, qm: &KMat) -> Result<bool> {
    if det(k, qm).is_zero() {
        return Err(Error::invalid("invertible", "Q is singular"));
    }
    is_positive(k, &mat_mul(k, &star(k, qm), qm))
}

/// Im phi(x^* G x) < 0 for all nonzero x and all phi in the type.
///
/// With theta = x - x^sigma totally imaginary, theta G is hermitian and
/// phi(theta G) = s |phi(theta)| (i phi(G)) with s the sign of Im phi(theta); so
/// i phi(G) > 0 iff s^k phi(m_k) > 0 for the leading minors m_k of theta G.
pub fn is_negative_definite_along(k: &CMField, g: &KMat, t: &CMType) -> Result<bool> {
    if !is_skew_hermitian(k, g) {
        return Err(Error::invalid("skew-hermitian", "matrix is not skew-hermitian"));
    }
    let x = k.gen();
    let theta = k.sub(&x, &k.conj(&x));
    let tg = mat_scale(k, g, &theta);
    let minors = leading_minors(k, &tg);
    if minors.iter().any(|m| m.is_zero()) {
        return Ok(false);
    }
    for &j in &t.indices {
        let s = k.imag_sign(&theta, j)?;
        for (i, m) in minors.iter().enumerate() {
            let sm = k.real_sign(m, j)?;
            let want = if s == Ordering::Less && i % 2 == 0 { Ordering::Less } else { Ordering::Greater };
            if sm != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---- alternating forms on Z-lattices in K^n

/// Q-coordinates of a vector of K^n: power coordinates of each component, concatenated.
pub fn q_coords(v: &[Elem]) -> Vec<Q> {
    v.iter().flat_map(|e| e.0.iter().cloned()).collect()
}

pub fn vector_from_q_coords(k: &CMField, c: &[Q], n: usize) -> Vec<Elem> {
    let d = k.degree();
    (0..n).map(|a| Elem(c[a * d..(a + 1) * d].to_vec())).collect()
}

/// Z-basis data of a full lattice H in K^n.
pub struct LatticeBasis {
    pub n: usize,
    pub vecs: Vec<Vec<Elem>>,
    /// Inverse of the matrix whose columns are the Q-coordinates of `vecs`.
    coord_inv: Mat,
}

impl LatticeBasis {
    pub fn new(k: &CMField, vecs: Vec<Vec<Elem>>) -> Result<Self> {
        let n = vecs.first().map(|v| v.len()).unwrap_or(0);
        if n == 0 || vecs.len() != n * k.degree() || vecs.iter().any(|v| v.len() != n) {
            return Err(Error::malformed("lattice basis must have 2g*n vectors of length n"));
        }
        let cols: Mat = vecs.iter().map(|v| q_coords(v)).collect();
        let m = linalg::transpose(&cols);
        let coord_inv = linalg::inverse(&m).ok_or_else(|| Error::invalid("full rank", "lattice basis is degenerate"))?;
        Ok(LatticeBasis { n, vecs, coord_inv })
    }

    /// The standard lattice O_K^n with basis w_i e_a.
    pub fn standard(k: &CMField, n: usize) -> Self {
        let mut vecs = vec![];
        for a in 0..n {
            for w in k.integral_basis() {
                let mut v = vec![k.zero(); n];
                v[a] = w;
                vecs.push(v);
            }
        }
        LatticeBasis::new(k, vecs).expect("standard lattice")
    }

    /// Coordinates of v with respect to the basis.
    pub fn coords(&self, v: &[Elem]) -> Vec<Q> {
        linalg::mat_vec(&self.coord_inv, &q_coords(v))
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }
}

fn eval_alt(e: &Mat, cx: &[Q], cy: &[Q]) -> Q {
    let ey = linalg::mat_vec(e, cy);
    cx.iter().zip(&ey).fold(Q::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_alternating(e: &Mat) -> bool {
    let n = e.len();
    (0..n).all(|i| e[i].len() == n && (0..n).all(|j| e[i][j] == -e[j][i].clone()))
}

/// E(ax, y) = E(x, a^sigma y) for a in the integral basis and x, y in the lattice basis.
pub fn check_elinear(k: &CMField, h: &LatticeBasis, e: &Mat) -> Result<()> {
    for a in k.integral_basis() {
        let ac = k.conj(&a);
        for x in &h.vecs {
            let ax: Vec<Elem> = x.iter().map(|c| k.mul(&a, c)).collect();
            let cax = h.coords(&ax);
            for (j, y) in h.vecs.iter().enumerate() {
                let acy: Vec<Elem> = y.iter().map(|c| k.mul(&ac, c)).collect();
                let mut cy = vec![Q::zero(); h.len()];
                cy[j] = Q::one();
                let lhs = eval_alt(e, &cax, &cy);
                let rhs = eval_alt(e, &h.coords(x), &h.coords(&acy));
                if lhs != rhs {
                    return Err(Error::invalid("E-linear", "E(ax, y) != E(x, a^sigma y)"));
                }
            }
        }
    }
    Ok(())
}

/// Gram matrix G of F(x, y) = sum_j E(x, alpha_j y) beta_j on the standard basis of K^n.
pub fn skew_from_alt(k: &CMField, h: &LatticeBasis, e: &Mat) -> Result<KMat> {
    if e.len() != h.len() || !e.iter().all(|r| r.len() == h.len()) {
        return Err(Error::malformed("E must be a square matrix matching the lattice basis"));
    }
    check_elinear(k, h, e)?;
    let td = k.trace_dual();
    let n = h.n;
    let unit = |a: usize| -> Vec<Elem> { (0..n).map(|i| if i == a { k.one() } else { k.zero() }).collect() };
    let mut g = vec![vec![k.zero(); n]; n];
    for a in 0..n {
        let cx = h.coords(&unit(a));
        for b in 0..n {
            let mut acc = k.zero();
            for (al, be) in td.alpha.iter().zip(&td.beta) {
                let y: Vec<Elem> = unit(b).iter().map(|c| k.mul(al, c)).collect();
                let v = eval_alt(e, &cx, &h.coords(&y));
                acc = k.add(&acc, &k.scale(be, &v));
            }
            g[a][b] = acc;
        }
    }
    Ok(g)
}

/// E = Tr F on the lattice basis.
pub fn alt_from_skew(k: &CMField, h: &LatticeBasis, g: &KMat) -> Mat {
    h.vecs.iter().map(|x| h.vecs.iter().map(|y| k.trace(&form(k, g, x, y))).collect()).collect()
}

/// Riemann check through the skew-hermitian dictionary.
pub fn is_riemann(k: &CMField, h: &LatticeBasis, e: &Mat, t: &CMType) -> Result<bool> {
    if !is_alternating(e) {
        return Err(Error::invalid("alternating", "E is not alternating"));
    }
    let g = skew_from_alt(k, h, e)?;
    is_negative_definite_along(k, &g, t)
}

/// Direct Riemann check: (x, y) -> E(x, J y) positive-definite on H (x) R, where
/// J is multiplication by i on prod_{phi in type} C^n.
pub fn is_riemann_direct(k: &CMField, h: &LatticeBasis, e: &Mat, t: &CMType) -> Result<bool> {
    if !is_alternating(e) {
        return Err(Error::invalid("alternating", "E is not alternating"));
    }
    check_elinear(k, h, e)?;
    if linalg::det(e).is_zero() {
        return Ok(false);
    }
    let m = h.len();
    let mut prec = crate::prec();
    loop {
        // columns: real coordinates (Re, Im of phi(x_a)) of each basis vector
        let mut qcols: Vec<Vec<RBall>> = vec![];
        for v in &h.vecs {
            let mut col = vec![];
            for &j in &t.indices {
                for c in v {
                    let b: CBall = k.embed(c, j, prec);
                    col.push(b.re);
                    col.push(b.im);
                }
            }
            qcols.push(col);
        }
        let qm: Vec<Vec<RBall>> = (0..m).map(|r| (0..m).map(|c| qcols[c][r].clone()).collect()).collect();
        // J0 Q: (re, im) -> (-im, re)
        let jq: Vec<Vec<RBall>> = (0..m)
            .map(|r| (0..m).map(|c| if r % 2 == 0 { qm[r + 1][c].neg() } else { qm[r - 1][c].clone() }).collect())
            .collect();
        if let Some(cmat) = ball_solve(&qm, &jq, prec) {
            // S = E C
            let s: Vec<Vec<RBall>> = (0..m)
                .map(|r| {
                    (0..m)
                        .map(|c| {
                            (0..m).fold(RBall::zero(), |acc, w| acc.add(&cmat[w][c].scale(&e[r][w]))).round(prec + 8)
                        })
                        .collect()
                })
                .collect();
            if let Some(ans) = ball_posdef(s) {
                return Ok(ans);
            }
        }
        prec *= 2;
        if prec > 1 << 14 {
            return Err(Error::Budget("direct Riemann check did not converge".into()));
        }
    }
}

/// Solve A X = B for ball matrices by Gaussian elimination; None if a pivot is not certified.
fn ball_solve(a: &[Vec<RBall>], b: &[Vec<RBall>], prec: u32) -> Option<Vec<Vec<RBall>>> {
    let n = a.len();
    let mut m: Vec<Vec<RBall>> = a
        .iter()
        .zip(b)
        .map(|(r, s)| {
            let mut r = r.clone();
            r.extend(s.iter().cloned());
            r
        })
        .collect();
    let w = m[0].len();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].mid.abs().cmp(&m[y][c].mid.abs()))?;
        m.swap(p, c);
        let inv = m[c][c].recip()?;
        for j in 0..w {
            m[c][j] = m[c][j].mul(&inv).round(prec + 8);
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c].clone();
                for j in 0..w {
                    let t = f.mul(&m[c][j]);
                    m[r][j] = m[r][j].sub(&t).round(prec + 8);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Positive-definiteness of a symmetric ball matrix by symmetric pivoting.
/// Some(false) if certified not positive-definite, None if undecided.
fn ball_posdef(mut s: Vec<Vec<RBall>>) -> Option<bool> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    while !idx.is_empty() {
        if idx.iter().any(|&i| s[i][i].sign() == Some(Ordering::Less)) {
            return Some(false);
        }
        let pos: Vec<usize> = idx.iter().copied().filter(|&i| s[i][i].sign() == Some(Ordering::Greater)).collect();
        let Some(&p) = pos.iter().max_by(|&&a, &&b| s[a][a].mid.cmp(&s[b][b].mid)) else {
            for &i in &idx {
                for &j in &idx {
                    if i < j {
                        let minor = s[i][i].mul(&s[j][j]).sub(&s[i][j].mul(&s[j][i]));
                        if minor.sign() == Some(Ordering::Less) {
                            return Some(false);
                        }
                    }
                }
            }
            return None;
        };
        idx.retain(|&i| i != p);
        let inv = s[p][p].recip()?;
        for &i in &idx {
            for &j in &idx {
                let t = s[i][p].mul(&s[p][j]).mul(&inv);
                s[i][j] = s[i][j].sub(&t);
            }
        }
    }
    Some(true)
}

/// Rational matrix to K-matrix of scalars.
pub fn scalar_mat(k: &CMField, m: &Mat) -> KMat {
    m.iter().map(|r| r.iter().map(|x| k.from_q(x)).collect()).collect()
}

pub fn is_zero_mat(a: &KMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Sign pattern of a nonzero scalar `c` in F (helper for reports).
pub fn sign_word(k: &CMField, c: &Elem) -> Result<String> {
    Ok(k.sign_vector(c)?.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect())
}

/// Integer matrix check.
pub fn is_integral_mat(e: &Mat) -> bool {
    e.iter().all(|r| r.iter().all(|x| x.is_integer()))
}
