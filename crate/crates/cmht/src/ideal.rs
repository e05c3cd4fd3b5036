//! Fractional ideals as full-rank lattices in integral-basis coordinates, plus
//! the arithmetic data built on them: the different, principality, units of
//! CM fields with g <= 2, class groups and ramification of K/F.

use crate::field::{CMField, Elem};
use crate::linalg::{self, q, zq, IMat, Mat, Q, Z};
use crate::{budget, Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::VecDeque;

/// A fractional ideal: the Z-span of `rows / denom` in integral-basis coordinates.
/// `rows` is in row Hermite normal form and gcd(rows, denom) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    pub rows: IMat,
    pub denom: Z,
}

impl FracIdeal {
    /// Build from rational row vectors (integral-basis coordinates) spanning a full-rank lattice.
    pub fn from_coord_rows(d: usize, rows: &[Vec<Q>]) -> Result<FracIdeal> {
        if rows.is_empty() {
            return Err(Error::invalid("nonzero ideal", "the zero ideal is not allowed"));
        }
        let (h, den) = linalg::rational_lattice(rows);
        if h.len() != d {
            return Err(Error::invalid("full rank", "lattice does not have full rank"));
        }
        Ok(FracIdeal { rows: h, denom: den })
    }

    /// Rational basis rows in integral-basis coordinates.
    pub fn coord_rows(&self) -> Mat {
        linalg::to_q_rows(&self.rows, &self.denom)
    }

    pub fn basis(&self, k: &CMField) -> Vec<Elem> {
        self.coord_rows().iter().map(|r| k.from_int_coords(r)).collect()
    }

    /// Absolute norm: the index [O_K : a] as a rational number.
    pub fn norm(&self) -> Q {
        let d = self.rows.len();
        let det = self.rows.iter().enumerate().fold(Z::one(), |acc, (i, r)| acc * &r[i]);
        Q::new(det.abs(), num_traits::pow(self.denom.clone(), d))
    }

    pub fn contains(&self, k: &CMField, x: &Elem) -> bool {
        let c = k.to_int_coords(x);
        linalg::in_lattice(&self.coord_rows(), &c)
    }

    pub fn is_subset_of(&self, k: &CMField, other: &FracIdeal) -> bool {
        self.basis(k).iter().all(|b| other.contains(k, b))
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// `{"hnf": ..., "denom": n}` with columns the basis vectors.
    pub fn to_json(&self) -> serde_json::Value {
        let cols = linalg::transpose(&self.rows);
        serde_json::json!({
            "hnf": cols.iter().map(|r| r.iter().map(z_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "denom": z_json(&self.denom),
        })
    }
}

/// Integers as JSON numbers when they fit, strings otherwise.
pub fn z_json(x: &Z) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

fn json_int(v: &serde_json::Value) -> Result<Z> {
    match v {
        serde_json::Value::Number(n) => {
            n.to_string().parse().map_err(|_| Error::malformed(format!("expected an integer, got {}", n)))
        }
        serde_json::Value::String(s) => {
            s.trim().parse().map_err(|_| Error::malformed(format!("expected an integer, got {}", s)))
        }
        _ => Err(Error::malformed("expected an integer")),
    }
}

/// Matrix of multiplication by `a` in integral-basis coordinates.
pub fn int_mult_matrix(k: &CMField, a: &Elem) -> Mat {
    let w = k.basis_matrix();
    let m = k.mult_matrix(a);
    let winv = linalg::inverse(w).expect("integral basis is invertible");
    linalg::mat_mul(&winv, &linalg::mat_mul(&m, w))
}

pub fn unit_ideal(k: &CMField) -> FracIdeal {
    FracIdeal { rows: (0..k.degree()).map(|i| (0..k.degree()).map(|j| Z::from((i == j) as i64)).collect()).collect(), denom: Z::one() }
}

/// The O_K-ideal generated by the given elements.
pub fn from_generators(k: &CMField, gens: &[Elem]) -> Result<FracIdeal> {
    let w = k.integral_basis();
    let mut rows = vec![];
    for g in gens {
        for b in &w {
            rows.push(k.to_int_coords(&k.mul(g, b)));
        }
    }
    if rows.iter().all(|r| r.iter().all(|x| x.is_zero())) {
        return Err(Error::invalid("nonzero ideal", "the zero ideal is not allowed"));
    }
    FracIdeal::from_coord_rows(k.degree(), &rows)
}

pub fn principal(k: &CMField, a: &Elem) -> Result<FracIdeal> {
    from_generators(k, std::slice::from_ref(a))
}

/// Parse an ideal: `OK`, a JSON object `{"hnf": [[..]], "denom": n}` or a
/// generator list such as `(2, 1+x)`.
pub fn parse_ideal(k: &CMField, s: &str) -> Result<FracIdeal> {
    let t = s.trim();
    if t == "OK" || t == "O_K" || t == "1" {
        return Ok(unit_ideal(k));
    }
    if t.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(t).map_err(|e| Error::malformed(e.to_string()))?;
        return ideal_from_json(k, &v);
    }
    let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
    let gens = split_top_level(inner)
        .iter()
        .map(|g| crate::expr::parse_elem(k, g))
        .collect::<Result<Vec<_>>>()?;
    if gens.is_empty() {
        return Err(Error::malformed("empty generator list"));
    }
    from_generators(k, &gens)
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = vec![];
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub fn ideal_from_json(k: &CMField, v: &serde_json::Value) -> Result<FracIdeal> {
    let d = k.degree();
    let hnf = v.get("hnf").and_then(|h| h.as_array()).ok_or_else(|| Error::malformed("ideal JSON needs \"hnf\""))?;
    let denom = match v.get("denom") {
        Some(x) => json_int(x)?,
        None => Z::one(),
    };
    if !denom.is_positive() {
        return Err(Error::malformed("denom must be positive"));
    }
    let m: IMat = hnf
        .iter()
        .map(|r| r.as_array().ok_or_else(|| Error::malformed("hnf rows must be arrays"))?.iter().map(json_int).collect())
        .collect::<Result<_>>()?;
    if m.len() != d || m.iter().any(|r| r.len() != d) {
        return Err(Error::malformed(format!("hnf must be {} x {}", d, d)));
    }
    let cols = linalg::transpose(&m);
    let rows: Vec<Vec<Q>> = cols.iter().map(|c| c.iter().map(|x| Q::new(x.clone(), denom.clone())).collect()).collect();
    let a = FracIdeal::from_coord_rows(d, &rows)?;
    // O_K-module check on generators
    for b in a.basis(k) {
        for w in k.integral_basis() {
            if !a.contains(k, &k.mul(&b, &w)) {
                return Err(Error::invalid("O_K-module", "lattice is not closed under multiplication by O_K"));
            }
        }
    }
    Ok(a)
}

pub fn mul(k: &CMField, a: &FracIdeal, b: &FracIdeal) -> FracIdeal {
    let ba = a.basis(k);
    let bb = b.basis(k);
    let mut rows = vec![];
    for x in &ba {
        for y in &bb {
            rows.push(k.to_int_coords(&k.mul(x, y)));
        }
    }
    FracIdeal::from_coord_rows(k.degree(), &rows).expect("product of nonzero ideals")
}

pub fn scale(k: &CMField, a: &FracIdeal, x: &Elem) -> Result<FracIdeal> {
    if x.is_zero() {
        return Err(Error::invalid("nonzero ideal", "scaling by zero"));
    }
    let rows: Vec<Vec<Q>> = a.basis(k).iter().map(|b| k.to_int_coords(&k.mul(b, x))).collect();
    FracIdeal::from_coord_rows(k.degree(), &rows)
}

pub fn add(k: &CMField, a: &FracIdeal, b: &FracIdeal) -> FracIdeal {
    let mut rows = a.coord_rows();
    rows.extend(b.coord_rows());
    FracIdeal::from_coord_rows(k.degree(), &rows).expect("sum of full-rank lattices")
}

pub fn conj(k: &CMField, a: &FracIdeal) -> FracIdeal {
    let rows: Vec<Vec<Q>> = a.basis(k).iter().map(|b| k.to_int_coords(&k.conj(b))).collect();
    FracIdeal::from_coord_rows(k.degree(), &rows).expect("conjugate of a full-rank lattice")
}

/// a^{-1} = {x : x a in O_K}.
pub fn inv(k: &CMField, a: &FracIdeal) -> FracIdeal {
    // x a_i in O_K  <=>  M_i x in Z^d; collect the rows of all M_i
    let mut rows = vec![];
    for b in a.basis(k) {
        rows.extend(int_mult_matrix(k, &b));
    }
    let (h, den) = linalg::rational_lattice(&rows);
    let basis = linalg::to_q_rows(&h, &den);
    let dual = linalg::dual_basis_rows(&basis).expect("full-rank lattice");
    FracIdeal::from_coord_rows(k.degree(), &dual).expect("dual of a full-rank lattice")
}

pub fn pow(k: &CMField, a: &FracIdeal, e: i64) -> FracIdeal {
    let base = if e < 0 { inv(k, a) } else { a.clone() };
    let mut out = unit_ideal(k);
    for _ in 0..e.unsigned_abs() {
        out = mul(k, &out, &base);
    }
    out
}

pub fn div(k: &CMField, a: &FracIdeal, b: &FracIdeal) -> FracIdeal {
    mul(k, a, &inv(k, b))
}

/// The inverse different: the trace dual of O_K.
pub fn inverse_different(k: &CMField) -> FracIdeal {
    let t = k.trace_dual();
    let rows: Vec<Vec<Q>> = t.beta.iter().map(|b| k.to_int_coords(b)).collect();
    FracIdeal::from_coord_rows(k.degree(), &rows).expect("trace dual has full rank")
}

pub fn different(k: &CMField) -> FracIdeal {
    inv(k, &inverse_different(k))
}

// ---- units

/// Sign data for the unit group of the real subfield F.
#[derive(Clone, Debug)]
pub struct UnitSignData {
    /// Fundamental unit of F with phi_0(eps) > 1 (None when F = Q).
    pub fundamental_unit: Option<Elem>,
    /// Subgroup of {+-1}^g generated by the sign vectors of -1 and eps.
    pub sign_image: Vec<Vec<i8>>,
    /// |U_F / U_F^+|.
    pub index: usize,
}

/// Units of K: torsion times one free generator (for g = 2).
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub signs: UnitSignData,
    /// Roots of unity of K (in a fixed order, generator first after 1).
    pub torsion: Vec<Elem>,
    pub torsion_gen: Elem,
    /// Free generator of U_K modulo torsion, and whether [U_K : W U_F] = 2.
    pub free_gen: Option<Elem>,
    pub index_two: bool,
    /// Representatives of U_F modulo totally positive units, with their signs.
    pub sign_reps: Vec<(Vec<i8>, Elem)>,
}

fn mul_signs(a: &[i8], b: &[i8]) -> Vec<i8> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// O_F as a Z-basis {1, w} (or {1} when g = 1), elements of K.
pub fn real_order_basis(k: &CMField) -> Result<Vec<Elem>> {
    let s = k.conj_matrix();
    let w = k.basis_matrix();
    let winv = linalg::inverse(w).expect("integral basis invertible");
    let sint = linalg::mat_mul(&winv, &linalg::mat_mul(s, w));
    // x with (S - I) x = 0, as integer row vectors y with y (S - I)^T = 0
    let mut m: IMat = vec![];
    let mut diff = sint.clone();
    for (i, row) in diff.iter_mut().enumerate() {
        row[i] -= Q::one();
    }
    let dt = linalg::transpose(&diff);
    let (ints, _) = linalg::clear_denoms(&dt);
    m.extend(ints);
    let ker = linalg::int_left_kernel(&m);
    if ker.len() != k.g {
        return Err(Error::invalid("sigma", "fixed lattice has wrong rank"));
    }
    let basis: Vec<Elem> = ker.iter().map(|r| k.from_int_coords(&r.iter().map(zq).collect::<Vec<_>>())).collect();
    if k.g == 1 {
        return Ok(vec![k.one()]);
    }
    if k.g != 2 {
        return Ok(basis);
    }
    // complete 1 to a basis
    let one = k.to_int_coords(&k.one());
    let bm: Mat = basis.iter().map(|b| k.to_int_coords(b)).collect();
    let c = linalg::solve_any(&linalg::transpose(&bm), &one).ok_or_else(|| Error::invalid("integral basis", "1 not in O_F"))?;
    let (a, b) = (c[0].to_integer(), c[1].to_integer());
    let (g, x, y) = linalg::egcd(&a, &b);
    if !g.is_one() {
        return Err(Error::invalid("integral basis", "1 is not primitive in O_F"));
    }
    let w = k.add(&k.scale(&basis[0], &zq(&-y)), &k.scale(&basis[1], &zq(&x)));
    Ok(vec![k.one(), w])
}

/// Fundamental unit of the real quadratic order of discriminant `disc`, as
/// (x, y) with eps = x + y * theta, theta = (b + sqrt(disc)) / 2.
pub fn quadratic_fundamental_unit(disc: &Z) -> (Z, Z, Z) {
    let r = linalg::isqrt(disc);
    // largest b < sqrt(disc) with b = disc mod 2
    let mut b = r.clone();
    if &b * &b == *disc {
        b -= 1;
    }
    if (&b - disc).is_odd() {
        b -= 1;
    }
    let (p0, q0) = (b.clone(), Z::from(2));
    let (mut p, mut qq) = (p0.clone(), q0.clone());
    let (mut qm2, mut qm1) = (Z::one(), Z::zero());
    loop {
        let a = (&p + &r).div_floor(&qq);
        let qn = &a * &qm1 + &qm2;
        qm2 = qm1;
        qm1 = qn;
        let pn = &a * &qq - &p;
        let qnext = (disc - &pn * &pn) / &qq;
        p = pn;
        qq = qnext;
        if p == p0 && qq == q0 {
            break;
        }
    }
    // eps = q_{l-1} theta + q_{l-2}
    (qm2, qm1, b)
}

impl UnitGroup {
    pub fn compute(k: &CMField) -> Result<UnitGroup> {
        if k.g > 2 {
            return Err(Error::Unsupported("unit group unavailable for this field degree (g > 2)".into()));
        }
        let torsion = torsion_units(k)?;
        let w = torsion.len();
        let torsion_gen = torsion
            .iter()
            .find(|z| {
                let mut c = (*z).clone();
                let mut ord = 1;
                while c != k.one() {
                    c = k.mul(&c, z);
                    ord += 1;
                }
                ord == w
            })
            .cloned()
            .expect("torsion group is cyclic");
        let minus = vec![-1i8; k.g];
        if k.g == 1 {
            let signs = UnitSignData { fundamental_unit: None, sign_image: vec![vec![1], vec![-1]], index: 2 };
            return Ok(UnitGroup {
                signs,
                torsion,
                torsion_gen,
                free_gen: None,
                index_two: false,
                sign_reps: vec![(vec![1], k.one()), (vec![-1], k.from_i64(-1))],
            });
        }
        let ob = real_order_basis(k)?;
        let wq = &ob[1];
        let mp = k.minpoly(wq);
        if mp.len() != 3 {
            return Err(Error::invalid("sigma", "real subfield generator is not quadratic"));
        }
        let t = -mp[1].clone();
        let n = mp[0].clone();
        let disc = (&t * &t - q(4) * &n).to_integer();
        let (x, y, b) = quadratic_fundamental_unit(&disc);
        // theta = w + (b - t)/2
        let theta = k.add(wq, &k.from_q(&((zq(&b) - &t) / q(2))));
        let mut eps = k.add(&k.scale(&theta, &zq(&y)), &k.from_q(&zq(&x)));
        if k.norm(&eps).abs() != Q::one() {
            return Err(Error::invalid("unit", "continued fraction did not produce a unit"));
        }
        // normalize: phi_0(eps) > 1
        if k.real_sign(&eps, 0)? == Ordering::Less {
            eps = k.neg(&eps);
        }
        if k.real_sign(&k.sub(&eps, &k.one()), 0)? == Ordering::Less {
            eps = k.inv(&eps)?;
        }
        let se = k.sign_vector(&eps)?;
        let mut image = vec![vec![1i8; k.g]];
        let gens = [minus.clone(), se.clone()];
        let mut reps: Vec<(Vec<i8>, Elem)> = vec![(vec![1i8; k.g], k.one())];
        let gen_elems = [k.from_i64(-1), eps.clone()];
        let mut changed = true;
        while changed {
            changed = false;
            for (gs, ge) in gens.iter().zip(&gen_elems) {
                for i in 0..reps.len() {
                    let s = mul_signs(&reps[i].0, gs);
                    if !image.contains(&s) {
                        image.push(s.clone());
                        let e = k.mul(&reps[i].1, ge);
                        reps.push((s, e));
                        changed = true;
                    }
                }
            }
        }
        image.sort();
        let index = image.len();
        let signs = UnitSignData { fundamental_unit: Some(eps.clone()), sign_image: image, index };
        // unit index [U_K : W U_F]
        let mut free_gen = eps.clone();
        let mut index_two = false;
        if k.is_totally_positive(&eps)? {
            let bound = q(2) * k.trace(&eps);
            let ok = unit_ideal(k);
            let basis = ok.basis(k);
            let gram = k.t2_gram(&basis);
            let vs = linalg::short_vectors(&gram, &bound, budget())
                .map_err(|_| Error::Budget("unit search".into()))?;
            let w2: Vec<Elem> = torsion.iter().map(|z| k.mul(z, z)).collect();
            let mut best: Option<(Q, Elem)> = None;
            for v in vs {
                let u = comb(k, &basis, &v);
                if k.norm(&u).abs() != Q::one() {
                    continue;
                }
                let ratio = k.div(&u, &k.conj(&u))?;
                if w2.contains(&ratio) {
                    continue;
                }
                let t2 = k.trace(&k.mul(&u, &k.conj(&u)));
                if best.as_ref().is_none_or(|(bt, be)| t2 < *bt || (t2 == *bt && u.0 < be.0)) {
                    best = Some((t2, u));
                }
            }
            if let Some((_, eta)) = best {
                let sq = k.mul(&eta, &eta);
                let ok = torsion.iter().any(|z| {
                    let zm = k.mul(z, &eps);
                    sq == zm || Some(sq.clone()) == k.div(z, &eps).ok()
                });
                if !ok {
                    return Err(Error::invalid("unit", "unit index computation inconsistent"));
                }
                free_gen = eta;
                index_two = true;
            }
        }
        Ok(UnitGroup { signs, torsion, torsion_gen, free_gen: Some(free_gen), index_two, sign_reps: reps })
    }

    pub fn torsion_order(&self) -> usize {
        self.torsion.len()
    }
}

pub(crate) fn comb(k: &CMField, basis: &[Elem], v: &[Z]) -> Elem {
    basis.iter().zip(v).fold(k.zero(), |acc, (b, c)| k.add(&acc, &k.scale(b, &zq(c))))
}

/// Roots of unity of K: integral elements with T2 = [K:Q].
pub fn torsion_units(k: &CMField) -> Result<Vec<Elem>> {
    let basis = k.integral_basis();
    let gram = k.t2_gram(&basis);
    let d = q(k.degree() as i64);
    let vs = linalg::short_vectors(&gram, &d, budget()).map_err(|_| Error::Budget("torsion search".into()))?;
    let mut out: Vec<Elem> = vs.iter().map(|v| comb(k, &basis, v)).filter(|u| k.norm(u) == Q::one()).collect();
    out.retain(|u| k.trace(&k.mul(u, &k.conj(u))) == d);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

// ---- principality

/// Find a generator of `a`, or `None` if `a` is not principal.
///
/// Generators are enumerated as short vectors of T2 on the lattice `a`; the
/// returned generator is the one of least T2, ties broken by coordinates.
pub fn is_principal(k: &CMField, units: &UnitGroup, a: &FracIdeal) -> Result<Option<Elem>> {
    let n = a.norm();
    let bound = match k.g {
        1 => q(2) * &n,
        2 => {
            let eps = units.signs.fundamental_unit.as_ref().expect("g = 2 has a fundamental unit");
            let e = k.embed(eps, 0, 32);
            let ehi = e.re.hi().abs() + Q::new(Z::one(), Z::from(1u64 << 20));
            let s = ehi.clone() + ehi.recip();
            // 2 sqrt(N) (E + 1/E), with a rational upper bound for sqrt(N)
            let sq = rational_sqrt_upper(&n);
            q(2) * sq * s
        }
        _ => return Err(Error::Unsupported("unit group unavailable for this field degree (g > 2)".into())),
    };
    let basis = a.basis(k);
    let gram = k.t2_gram(&basis);
    let vs = linalg::short_vectors(&gram, &bound, budget()).map_err(|_| Error::Budget("principal generator search".into()))?;
    let mut best: Option<(Q, Elem)> = None;
    for v in vs {
        let x = comb(k, &basis, &v);
        if k.norm(&x).abs() != n {
            continue;
        }
        let t2 = k.trace(&k.mul(&x, &k.conj(&x)));
        let better = match &best {
            None => true,
            Some((bt, be)) => t2 < *bt || (t2 == *bt && x.0 > be.0),
        };
        if better {
            best = Some((t2, x));
        }
    }
    Ok(best.map(|(_, x)| x))
}

fn rational_sqrt_upper(n: &Q) -> Q {
    // sqrt(p/q) <= (isqrt(p q * 2^40) + 1) / (q 2^20)
    let s = Z::one() << 40;
    let pq = n.numer() * n.denom() * &s;
    Q::new(linalg::isqrt(&pq) + 1, n.denom() * (Z::one() << 20))
}

pub fn is_equivalent(k: &CMField, units: &UnitGroup, a: &FracIdeal, b: &FracIdeal) -> Result<bool> {
    Ok(is_principal(k, units, &div(k, a, b))?.is_some())
}

// ---- primes and class group

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

type PolyP = Vec<i64>;

fn pp_trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pp_divrem(a: &PolyP, b: &PolyP, p: i64) -> (PolyP, PolyP) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead_inv = modinv(b[db], p);
    let mut quo = vec![0; r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            r[dr - db + i] = (r[dr - db + i] - c * b[i]).rem_euclid(p);
        }
        quo[dr - db] = c;
        r = pp_trim(r);
    }
    (pp_trim(quo), r)
}

fn modinv(a: i64, p: i64) -> i64 {
    let mut r = 1;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Factor a monic polynomial mod p into irreducibles with multiplicity.
fn factor_mod_p(f: &[i64], p: i64) -> Vec<(PolyP, usize)> {
    let mut rest: PolyP = pp_trim(f.iter().map(|c| c.rem_euclid(p)).collect());
    let mut out = vec![];
    let mut deg = 1;
    while rest.len() > 1 {
        if deg > rest.len() - 1 {
            break;
        }
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = vec![0i64; deg + 1];
            let mut t = idx;
            for c in g.iter_mut().take(deg) {
                *c = (t % p as u64) as i64;
                t /= p as u64;
            }
            g[deg] = 1;
            let mut e = 0;
            loop {
                let (qq, r) = pp_divrem(&rest, &g, p);
                if !r.is_empty() {
                    break;
                }
                rest = qq;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        }
        deg += 1;
    }
    out
}

/// A prime ideal together with its residue degree and the rational prime below it.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub ideal: FracIdeal,
}

/// Prime ideals above p by Kummer-Dedekind on an element of index prime to p.
pub fn primes_above(k: &CMField, p: u64) -> Result<Vec<PrimeIdeal>> {
    let d = k.degree();
    let basis = k.integral_basis();
    let pz = Z::from(p);
    let mut cands = vec![k.gen()];
    for idx in 1..3usize.pow(d as u32) {
        let mut t = idx;
        let mut c = k.zero();
        for b in &basis {
            c = k.add(&c, &k.scale(b, &q((t % 3) as i64)));
            t /= 3;
        }
        cands.push(c);
    }
    for theta in cands {
        if !k.is_integral(&theta) {
            continue;
        }
        let mut pows = vec![k.one()];
        for i in 1..d {
            pows.push(k.mul(&pows[i - 1], &theta));
        }
        let m: Mat = pows.iter().map(|x| k.to_int_coords(x)).collect();
        let idx = linalg::det(&m).abs();
        if idx.is_zero() || (idx.to_integer() % &pz).is_zero() {
            continue;
        }
        let cp = k.minpoly(&theta);
        if cp.len() != d + 1 {
            continue;
        }
        let f: Vec<i64> = cp.iter().map(|c| c.to_integer().to_i64().unwrap_or(0) % p as i64).collect();
        let facs = factor_mod_p(&f, p as i64);
        let mut out = vec![];
        for (g, e) in facs {
            let gtheta = g.iter().enumerate().fold(k.zero(), |acc, (i, c)| k.add(&acc, &k.scale(&pows_or(k, &pows, &theta, i), &q(*c))));
            let ideal = from_generators(k, &[k.from_i64(p as i64), gtheta])?;
            out.push(PrimeIdeal { p, f: g.len() - 1, e, ideal });
        }
        return Ok(out);
    }
    Err(Error::Budget(format!("no element of index prime to {} found", p)))
}

fn pows_or(k: &CMField, pows: &[Elem], theta: &Elem, i: usize) -> Elem {
    if i < pows.len() {
        pows[i].clone()
    } else {
        k.mul(&pows[i - 1], theta)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupData {
    pub bound: f64,
    pub generators: Vec<FracIdeal>,
    pub relations: IMat,
    pub order: usize,
    pub representatives: Vec<FracIdeal>,
}

/// Minkowski bound (4/pi)^g d!/d^d sqrt|disc|.
pub fn minkowski_bound(k: &CMField) -> f64 {
    let d = k.degree();
    let disc = k.discriminant().abs().to_f64().unwrap_or(f64::MAX);
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    (4.0 / std::f64::consts::PI).powi(k.g as i32) * fact / (d as f64).powi(d as i32) * disc.sqrt()
}

impl ClassGroupData {
    pub fn compute(k: &CMField, units: &UnitGroup) -> Result<ClassGroupData> {
        let bound = minkowski_bound(k);
        let limit = (bound * 1.000001).floor() as u64;
        if limit > 10_000 {
            return Err(Error::Budget("Minkowski bound too large".into()));
        }
        let mut gens = vec![];
        for p in primes_upto(limit) {
            for pr in primes_above(k, p)? {
                if pr.ideal.norm() <= q(limit as i64) {
                    gens.push(pr.ideal);
                }
            }
        }
        let ng = gens.len();
        let mut reps: Vec<FracIdeal> = vec![unit_ideal(k)];
        let mut words: Vec<Vec<Z>> = vec![vec![Z::zero(); ng]];
        let mut relations: IMat = vec![];
        let mut queue = VecDeque::from([0usize]);
        let mut steps = 0usize;
        while let Some(r) = queue.pop_front() {
            for (j, pj) in gens.iter().enumerate() {
                steps += 1;
                if steps > budget() {
                    return Err(Error::Budget("class group search".into()));
                }
                let prod = mul(k, &reps[r], pj);
                let mut found = None;
                for (s, rep) in reps.iter().enumerate() {
                    if is_equivalent(k, units, &prod, rep)? {
                        found = Some(s);
                        break;
                    }
                }
                let mut w = words[r].clone();
                w[j] += 1;
                match found {
                    Some(s) => {
                        let rel: Vec<Z> = w.iter().zip(&words[s]).map(|(a, b)| a - b).collect();
                        if rel.iter().any(|x| !x.is_zero()) {
                            relations.push(rel);
                        }
                    }
                    None => {
                        reps.push(prod);
                        words.push(w);
                        queue.push_back(reps.len() - 1);
                    }
                }
            }
        }
        let relations = linalg::hnf_rows(&relations);
        let order = if ng == 0 {
            1
        } else {
            if relations.len() != ng {
                return Err(Error::invalid("class group", "relations do not have full rank"));
            }
            relations.iter().enumerate().fold(Z::one(), |acc, (i, r)| acc * &r[i]).to_usize().unwrap_or(0)
        };
        if order != reps.len() {
            return Err(Error::invalid("class group", "relation determinant differs from the number of classes"));
        }
        Ok(ClassGroupData { bound, generators: gens, relations, order, representatives: reps })
    }

    /// Index of the representative equivalent to `a`.
    pub fn class_of(&self, k: &CMField, units: &UnitGroup, a: &FracIdeal) -> Result<usize> {
        for (i, r) in self.representatives.iter().enumerate() {
            if is_equivalent(k, units, a, r)? {
                return Ok(i);
            }
        }
        Err(Error::invalid("class group", "ideal is not equivalent to any representative"))
    }
}

/// Relative different of K/F and whether K/F is unramified at all finite primes.
#[derive(Clone, Debug)]
pub struct RelativeRamification {
    pub relative_different: FracIdeal,
    /// Absolute norm of the relative discriminant N_{K/F}(delta_{K/F}).
    pub relative_discriminant_norm: Q,
    pub unramified: bool,
}

pub fn relative_ramification(k: &CMField) -> Result<RelativeRamification> {
    let dk = different(k);
    let rel = if k.g == 1 {
        dk
    } else {
        // delta_F^{-1} O_K from the trace dual of O_F
        let of = real_order_basis(k)?;
        let t: Mat = of
            .iter()
            .map(|a| of.iter().map(|b| k.trace(&k.mul(a, b)) / q(2)).collect())
            .collect();
        let tinv = linalg::inverse(&t).ok_or_else(|| Error::invalid("real subfield", "degenerate trace form on O_F"))?;
        let dual: Vec<Elem> = (0..of.len())
            .map(|j| of.iter().enumerate().fold(k.zero(), |acc, (i, a)| k.add(&acc, &k.scale(a, &tinv[i][j]))))
            .collect();
        let dfinv = from_generators(k, &dual)?;
        mul(k, &dk, &dfinv)
    };
    let n = rel.norm();
    Ok(RelativeRamification { unramified: rel == unit_ideal(k), relative_discriminant_norm: n, relative_different: rel })
}

/// Field data computed once and shared by the higher-level modules.
pub struct Arith {
    pub k: CMField,
    pub units: UnitGroup,
    pub delta: FracIdeal,
    pub delta_inv: FracIdeal,
    class_group: std::sync::OnceLock<Result<ClassGroupData>>,
}

impl Arith {
    pub fn new(k: CMField) -> Result<Arith> {
        let units = UnitGroup::compute(&k)?;
        let delta_inv = inverse_different(&k);
        let delta = inv(&k, &delta_inv);
        Ok(Arith { k, units, delta, delta_inv, class_group: std::sync::OnceLock::new() })
    }

    pub fn class_group(&self) -> Result<&ClassGroupData> {
        self.class_group
            .get_or_init(|| ClassGroupData::compute(&self.k, &self.units))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn is_principal(&self, a: &FracIdeal) -> Result<Option<Elem>> {
        is_principal(&self.k, &self.units, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_units_small() {
        assert_eq!(quadratic_fundamental_unit(&Z::from(5)), (Z::from(0), Z::from(1), Z::from(1)));
        // disc 12: eps = theta + 1 = 2 + sqrt 3
        assert_eq!(quadratic_fundamental_unit(&Z::from(12)), (Z::from(1), Z::from(1), Z::from(2)));
    }

    #[test]
    fn factor_mod_small() {
        // x^2 + 5 = (x + 1)^2 mod 2
        let f = factor_mod_p(&[5, 0, 1], 2);
        assert_eq!(f, vec![(vec![1, 1], 2)]);
    }
}
