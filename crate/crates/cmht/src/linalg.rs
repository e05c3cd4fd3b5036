//! Exact linear algebra over Q and Z: dense matrices, Hermite normal form with
//! transforms, integer kernels and short-vector enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type Z = BigInt;
pub type Mat = Vec<Vec<Q>>;
pub type IMat = Vec<Vec<Z>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn zq(z: &Z) -> Q {
    Q::from_integer(z.clone())
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Q::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return vec![];
    }
    let (r, c) = (m.len(), m[0].len());
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut t = m.clone();
    rref(&mut t).len()
}

pub fn det(m: &Mat) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `a x = b` for square invertible `a`.
pub fn solve(a: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Solve `a x = b` for a (possibly non-square) matrix; any solution.
pub fn solve_any(a: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the right kernel {x : m x = 0}.
pub fn kernel(m: &Mat) -> Vec<Vec<Q>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Q>) -> Z {
    it.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a Z>) -> Z {
    it.into_iter().fold(Z::zero(), |acc, x| acc.gcd(x))
}

/// Extended gcd: returns (g, s, t) with s a + t b = g >= 0.
pub fn egcd(a: &Z, b: &Z) -> (Z, Z, Z) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form with a unimodular transform.
///
/// Returns `(h, u)` with `u * a = h`; the nonzero rows of `h` come first, are in
/// echelon form with positive pivots, and entries above each pivot lie in
/// `[0, pivot)`. Rows of `u` beyond the rank span the integer left kernel.
pub fn hnf_with_transform(a: &IMat) -> (IMat, IMat, usize) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut u: IMat = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
        .collect();
    let mut r = 0;
    let mut pivots = vec![];
    for c in 0..n {
        if r == m {
            break;
        }
        // gcd-combine all rows below r into row r
        for k in r + 1..m {
            if h[k][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, k);
                u.swap(r, k);
                continue;
            }
            let a0 = h[r][c].clone();
            let b0 = h[k][c].clone();
            let (g, s, t) = egcd(&a0, &b0);
            let ag = &a0 / &g;
            let bg = &b0 / &g;
            combine_rows(&mut h, r, k, &s, &t, &bg, &ag);
            combine_rows(&mut u, r, k, &s, &t, &bg, &ag);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        // reduce rows above
        for i in 0..r {
            let f = h[i][c].div_floor(&h[r][c]);
            if !f.is_zero() {
                for j in 0..n {
                    let t = &f * &h[r][j];
                    h[i][j] -= t;
                }
                for j in 0..m {
                    let t = &f * &u[r][j];
                    u[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, r)
}

fn combine_rows(m: &mut IMat, r: usize, k: usize, s: &Z, t: &Z, bg: &Z, ag: &Z) {
    let len = m[r].len();
    for j in 0..len {
        let x = m[r][j].clone();
        let y = m[k][j].clone();
        m[r][j] = s * &x + t * &y;
        m[k][j] = ag * &y - bg * &x;
    }
}

/// HNF basis (nonzero rows) of the Z-span of integer row vectors.
pub fn hnf_rows(a: &IMat) -> IMat {
    let (h, _, r) = hnf_with_transform(a);
    h.into_iter().take(r).collect()
}

/// Basis of the integer left kernel {y in Z^m : y a = 0}.
pub fn int_left_kernel(a: &IMat) -> IMat {
    let (_, u, r) = hnf_with_transform(a);
    u.into_iter().skip(r).collect()
}

/// Clear denominators of rational rows: returns integer rows and a common denominator.
pub fn clear_denoms(rows: &[Vec<Q>]) -> (IMat, Z) {
    let d = lcm_denoms(rows.iter().flatten());
    let out = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * zq(&d)).to_integer()).collect())
        .collect();
    (out, d)
}

/// HNF basis of the Z-span of rational vectors, as `(rows, denom)` with
/// gcd(all entries, denom) = 1.
pub fn rational_lattice(rows: &[Vec<Q>]) -> (IMat, Z) {
    let (ints, d) = clear_denoms(rows);
    let h = hnf_rows(&ints);
    let g = gcd_all(h.iter().flatten()).gcd(&d);
    if g.is_one() || g.is_zero() {
        return (h, d);
    }
    let h = h
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / &g).collect())
        .collect();
    (h, d / g)
}

pub fn to_q_rows(rows: &IMat, denom: &Z) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|x| Q::new(x.clone(), denom.clone())).collect())
        .collect()
}

/// Dual lattice {x : <b, x> in Z for all basis rows b} of a full-rank lattice.
pub fn dual_basis_rows(basis_rows: &Mat) -> Option<Mat> {
    // x in dual iff B x in Z^d, so the dual basis is the columns of B^{-1}.
    let inv = inverse(basis_rows)?;
    Some(transpose(&inv))
}

/// Is the rational vector in the Z-span of the (independent) rows?
pub fn in_lattice(basis_rows: &Mat, v: &[Q]) -> bool {
    let bt = transpose(basis_rows);
    match solve_any(&bt, v) {
        Some(c) => {
            c.iter().all(|x| x.is_integer()) && mat_vec(&bt, &c).iter().zip(v).all(|(a, b)| a == b)
        }
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBudget;

/// All nonzero integer vectors x with x^T g x <= bound, for positive-definite g.
/// Fincke-Pohst over an exact LDL^T decomposition.
pub fn short_vectors(g: &Mat, bound: &Q, limit: usize) -> Result<Vec<Vec<Z>>, EnumBudget> {
    let n = g.len();
    // q[i][i] = D_i, q[i][j] = L_ji for j > i
    let mut qm = g.clone();
    for i in 0..n {
        for j in i + 1..n {
            let t = &qm[i][j] / &qm[i][i];
            qm[j][i] = t;
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &qm[k][i] * &qm[i][l];
                qm[k][l] -= t;
            }
        }
        for j in i + 1..n {
            qm[i][j] = qm[j][i].clone();
        }
    }
    let mut out = vec![];
    let mut x = vec![Z::zero(); n];
    let mut visited = 0usize;
    fn rec(
        i: isize,
        qm: &Mat,
        rem: Q,
        x: &mut Vec<Z>,
        out: &mut Vec<Vec<Z>>,
        visited: &mut usize,
        limit: usize,
    ) -> Result<(), EnumBudget> {
        if i < 0 {
            if x.iter().any(|v| !v.is_zero()) {
                out.push(x.clone());
            }
            return Ok(());
        }
        let i = i as usize;
        let n = qm.len();
        let mut c = Q::zero();
        for j in i + 1..n {
            c += &qm[i][j] * zq(&x[j]);
        }
        let t = &rem / &qm[i][i];
        let tf = t.to_f64().unwrap_or(f64::MAX).max(0.0).sqrt();
        let cf = c.to_f64().unwrap_or(0.0);
        let lo = (-cf - tf).floor() as i64 - 1;
        let hi = (-cf + tf).ceil() as i64 + 1;
        for v in lo..=hi {
            *visited += 1;
            if *visited > limit {
                return Err(EnumBudget);
            }
            let s = q(v) + &c;
            let used = &qm[i][i] * &s * &s;
            if used > rem {
                continue;
            }
            x[i] = Z::from(v);
            rec(i as isize - 1, qm, &rem - used, x, out, visited, limit)?;
        }
        x[i] = Z::zero();
        Ok(())
    }
    rec(n as isize - 1, &qm, bound.clone(), &mut x, &mut out, &mut visited, limit)?;
    Ok(out)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &Z) -> Z {
    n.sqrt()
}

pub fn qabs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| Z::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let h = hnf_rows(&im(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(h, im(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn transform_is_consistent() {
        let a = im(&[&[4, 6, 2], &[3, 9, 1], &[7, 15, 3], &[1, 1, 1]]);
        let (h, u, r) = hnf_with_transform(&a);
        let ua: IMat = u
            .iter()
            .map(|row| {
                (0..3)
                    .map(|j| row.iter().zip(&a).fold(Z::zero(), |s, (x, ar)| s + x * &ar[j]))
                    .collect()
            })
            .collect();
        assert_eq!(ua, h);
        assert_eq!(r, 3);
        let k = int_left_kernel(&a);
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert_eq!(det(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn short_vectors_z2() {
        let g = identity(2);
        let v = short_vectors(&g, &q(1), 1000).unwrap();
        assert_eq!(v.len(), 4);
    }
}
