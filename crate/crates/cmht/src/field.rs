//! CM fields given by a minimal polynomial, an integral basis and complex
//! conjugation, with exact element arithmetic and certified complex embeddings.

use crate::ball::{CBall, RBall};
use crate::linalg::{self, q, zq, Mat, Q, Z};
use crate::poly;
use crate::{Error, Result, DEFAULT_PREC};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

/// An element of K in the power basis 1, x, ..., x^{2g-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem(pub Vec<Q>);

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
    pub fn coords(&self) -> &[Q] {
        &self.0
    }
}

/// A CM type: one embedding index from each conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMType {
    pub indices: Vec<usize>,
}

impl CMType {
    pub fn contains(&self, j: usize) -> bool {
        self.indices.contains(&j)
    }
}

/// Trace-dual pair: an integral basis and its dual basis for the inverse different.
#[derive(Clone, Debug)]
pub struct TraceDualPair {
    pub alpha: Vec<Elem>,
    pub beta: Vec<Elem>,
}

pub struct CMField {
    pub name: String,
    /// Symbol used to print and parse the generator.
    pub var: String,
    pub min_poly: Vec<Z>,
    pub g: usize,
    fpoly: Vec<Q>,
    /// Columns are the integral basis in power coordinates.
    basis: Mat,
    basis_inv: Mat,
    /// Column j is sigma(x^j) in power coordinates.
    conj: Mat,
    power_sums: Vec<Q>,
    reduce_tab: Vec<Vec<Q>>,
    /// Root starting points, ordered: upper half plane first, then conjugates.
    root_starts: Vec<(Q, Q)>,
    root_cache: Mutex<Vec<(u32, Vec<CBall>)>>,
    /// Generator of F and its minimal polynomial.
    pub real_gen: Elem,
    pub real_minpoly: Vec<Q>,
}

impl fmt::Debug for CMField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMField({})", self.name)
    }
}

/// Parsed but unvalidated field definition.
#[derive(Clone, Debug, Default)]
pub struct FieldSpec {
    pub name: String,
    pub var: String,
    pub min_poly: Vec<Z>,
    pub basis: Vec<Vec<Q>>,
    pub sigma: Option<Vec<Vec<Q>>>,
}

fn parse_q_value(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(n) => {
            let s = n.to_string();
            parse_q(&s)
        }
        serde_json::Value::String(s) => parse_q(s),
        _ => Err(Error::malformed(format!("expected a rational, got {}", v))),
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::malformed(format!("bad rational '{}'", s));
    if let Some((a, b)) = s.split_once('/') {
        let a: Z = a.trim().parse().map_err(|_| bad())?;
        let b: Z = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(a, b))
    } else {
        let a: Z = s.parse().map_err(|_| bad())?;
        Ok(zq(&a))
    }
}

pub fn parse_q_matrix(text: &str) -> Result<Vec<Vec<Q>>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::malformed(format!("bad matrix: {}", e)))?;
    let rows = v.as_array().ok_or_else(|| Error::malformed("matrix must be an array"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::malformed("matrix rows must be arrays"))?
                .iter()
                .map(parse_q_value)
                .collect()
        })
        .collect()
}

impl FieldSpec {
    /// Parse the line-oriented `key = value` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = FieldSpec { var: "x".into(), ..Default::default() };
        let mut have_poly = false;
        let mut have_basis = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::malformed(format!("line {}: expected key = value", ln + 1)))?;
            let v = v.trim();
            match k.trim() {
                "name" => spec.name = v.to_string(),
                "gen" | "var" => spec.var = v.to_string(),
                "minpoly" => {
                    let vals: Vec<serde_json::Value> = serde_json::from_str(v)
                        .map_err(|e| Error::malformed(format!("minpoly: {}", e)))?;
                    spec.min_poly = vals
                        .iter()
                        .map(|x| {
                            let r = parse_q_value(x)?;
                            if !r.is_integer() {
                                return Err(Error::malformed("minpoly must have integer coefficients"));
                            }
                            Ok(r.to_integer())
                        })
                        .collect::<Result<_>>()?;
                    have_poly = true;
                }
                "basis" => {
                    spec.basis = parse_q_matrix(v)?;
                    have_basis = true;
                }
                "sigma" => spec.sigma = Some(parse_q_matrix(v)?),
                other => return Err(Error::malformed(format!("unknown key '{}'", other))),
            }
        }
        if !have_poly {
            return Err(Error::malformed("missing minpoly"));
        }
        if !have_basis {
            return Err(Error::malformed("missing basis (an integral basis is required)"));
        }
        if spec.var.is_empty() || !spec.var.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(Error::malformed("generator name must be alphabetic"));
        }
        Ok(spec)
    }
}

// ---- complex f64 helpers for initial root approximations

#[derive(Clone, Copy, Debug)]
struct C64(f64, f64);

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C64) -> C64 {
        C64(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C64) -> C64 {
        C64(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.0 * o.0 + o.1 * o.1;
        C64((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

fn durand_kerner(f: &[f64]) -> Vec<C64> {
    let d = f.len() - 1;
    let mut z: Vec<C64> = (0..d)
        .map(|k| {
            let t = 0.4 + 0.9 * k as f64;
            let r = 1.0 + f.iter().map(|c| c.abs()).fold(0.0, f64::max).sqrt() * 0.1;
            C64(r * t.cos(), r * t.sin())
        })
        .collect();
    let eval = |x: C64| f.iter().rev().fold(C64(0.0, 0.0), |acc, &c| acc.mul(x).add(C64(c, 0.0)));
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = C64(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

type CQ = (Q, Q);

fn cq_mul(a: &CQ, b: &CQ) -> CQ {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn cq_eval(p: &[Q], z: &CQ) -> CQ {
    let mut acc = (Q::zero(), Q::zero());
    for c in p.iter().rev() {
        acc = cq_mul(&acc, z);
        acc.0 += c;
    }
    acc
}

fn round_q(x: &Q, prec: u32) -> Q {
    let s = Q::from_integer(Z::one() << prec);
    Q::new((x * &s).round().to_integer(), Z::one() << prec)
}

/// Newton-refine a start point to `prec` bits and return a certified root box.
fn certify_root(f: &[Q], df: &[Q], start: &CQ, prec: u32) -> Option<CBall> {
    let mut z = (round_q(&start.0, prec), round_q(&start.1, prec));
    let tiny = Q::new(Z::one(), Z::one() << prec);
    for _ in 0..(64 + prec / 4) {
        let fz = cq_eval(f, &z);
        let dz = cq_eval(df, &z);
        let den = &dz.0 * &dz.0 + &dz.1 * &dz.1;
        if den.is_zero() {
            return None;
        }
        let step = ((&fz.0 * &dz.0 + &fz.1 * &dz.1) / &den, (&fz.1 * &dz.0 - &fz.0 * &dz.1) / &den);
        z = (round_q(&(&z.0 - &step.0), prec), round_q(&(&z.1 - &step.1), prec));
        if step.0.abs() <= tiny && step.1.abs() <= tiny {
            break;
        }
    }
    let fz = cq_eval(f, &z);
    let dz = cq_eval(df, &z);
    let up = fz.0.abs() + fz.1.abs();
    let low = dz.0.abs().max(dz.1.abs());
    if low.is_zero() {
        return None;
    }
    let n = q((f.len() - 1) as i64);
    let r = n * up / low;
    // round the radius up to a dyadic
    let s = Q::from_integer(Z::one() << (prec + 8));
    let r = Q::new((&r * &s).ceil().to_integer() + 1, Z::one() << (prec + 8));
    Some(CBall { re: RBall { mid: z.0, rad: r.clone() }, im: RBall { mid: z.1, rad: r } })
}

fn boxes_disjoint(bs: &[CBall]) -> bool {
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if bs[i].overlaps(&bs[j]) {
                return false;
            }
        }
    }
    true
}

impl CMField {
    /// Validate a field definition and build the field.
    pub fn from_spec(spec: &FieldSpec) -> Result<CMField> {
        let d = spec.min_poly.len().saturating_sub(1);
        if d < 2 || d % 2 == 1 {
            return Err(Error::invalid("degree", "degree must be even and at least 2"));
        }
        if !spec.min_poly[d].is_one() {
            return Err(Error::invalid("monic", "minimal polynomial must be monic"));
        }
        let fpoly: Vec<Q> = spec.min_poly.iter().map(zq).collect();
        let df = poly::derivative(&fpoly);
        if poly::degree(&poly::monic_gcd(&fpoly, &df)) != Some(0) {
            return Err(Error::invalid("irreducible", "minimal polynomial is not squarefree"));
        }
        // initial roots
        let ff: Vec<f64> = fpoly.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
        let approx = durand_kerner(&ff);
        let starts: Vec<CQ> = approx
            .iter()
            .map(|c| {
                (
                    Q::from_float(c.0).unwrap_or_else(Q::zero),
                    Q::from_float(c.1).unwrap_or_else(Q::zero),
                )
            })
            .collect();
        let mut balls = vec![];
        for s in &starts {
            balls.push(
                certify_root(&fpoly, &df, s, DEFAULT_PREC)
                    .ok_or_else(|| Error::invalid("roots", "root isolation failed"))?,
            );
        }
        if !boxes_disjoint(&balls) {
            return Err(Error::invalid("roots", "root isolation failed (overlapping boxes)"));
        }
        for b in &balls {
            if b.im.contains_zero() {
                return Err(Error::invalid("no real roots", "minimal polynomial has a real root"));
            }
        }
        let mut upper: Vec<CBall> = balls.into_iter().filter(|b| b.im.mid.is_positive()).collect();
        if upper.len() * 2 != d {
            return Err(Error::invalid("no real roots", "roots are not paired by conjugation"));
        }
        upper.sort_by(|a, b| b.re.mid.cmp(&a.re.mid).then_with(|| b.im.mid.cmp(&a.im.mid)));
        let mut root_starts: Vec<CQ> = upper.iter().map(|b| (b.re.mid.clone(), b.im.mid.clone())).collect();
        for i in 0..d / 2 {
            let (r, im) = root_starts[i].clone();
            root_starts.push((r, -im));
        }
        let mut ordered = upper.clone();
        for b in &upper {
            ordered.push(b.conj());
        }
        check_irreducible(&spec.min_poly, &ordered)?;

        // integral basis
        if spec.basis.len() != d || spec.basis.iter().any(|r| r.len() != d) {
            return Err(Error::malformed(format!("basis must have {} elements of {} coordinates", d, d)));
        }
        let basis = linalg::transpose(&spec.basis);
        let basis_inv = linalg::inverse(&basis)
            .ok_or_else(|| Error::invalid("integral basis", "basis is not linearly independent"))?;

        let mut field = CMField {
            name: spec.name.clone(),
            var: spec.var.clone(),
            min_poly: spec.min_poly.clone(),
            g: d / 2,
            fpoly,
            basis,
            basis_inv,
            conj: linalg::identity(d),
            power_sums: vec![],
            reduce_tab: vec![],
            root_starts,
            root_cache: Mutex::new(vec![(DEFAULT_PREC, ordered)]),
            real_gen: Elem(vec![]),
            real_minpoly: vec![],
        };
        field.init_tables();
        field.check_basis_ring()?;
        let conj = match &spec.sigma {
            Some(s) => {
                if s.len() != d || s.iter().any(|r| r.len() != d) {
                    return Err(Error::malformed("sigma must be a d x d matrix"));
                }
                linalg::transpose(s)
            }
            None => field.infer_sigma()?,
        };
        field.conj = conj;
        field.check_sigma()?;
        field.init_real_subfield()?;
        Ok(field)
    }

    pub fn parse(text: &str) -> Result<CMField> {
        CMField::from_spec(&FieldSpec::parse(text)?)
    }

    pub fn degree(&self) -> usize {
        2 * self.g
    }

    fn init_tables(&mut self) {
        let d = self.degree();
        // x^k reduced mod f for k < 2d
        let mut tab: Vec<Vec<Q>> = vec![];
        let mut cur = vec![Q::zero(); d];
        cur[0] = Q::one();
        for _ in 0..2 * d {
            tab.push(cur.clone());
            // multiply by x
            let top = cur[d - 1].clone();
            let mut next = vec![Q::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for (i, nx) in next.iter_mut().enumerate() {
                *nx -= &top * &self.fpoly[i];
            }
            cur = next;
        }
        self.reduce_tab = tab;
        // power sums Tr(x^k) = trace of multiplication-by-x^k matrix
        self.power_sums = (0..d)
            .map(|k| {
                let xk = Elem(self.reduce_tab[k].clone());
                let m = self.mult_matrix(&xk);
                (0..d).fold(Q::zero(), |acc, i| acc + &m[i][i])
            })
            .collect();
    }

    fn check_basis_ring(&self) -> Result<()> {
        let w = self.integral_basis();
        if !self.is_integral(&self.one()) {
            return Err(Error::invalid("integral basis", "1 is not in the span of the basis"));
        }
        for a in &w {
            for b in &w {
                if !self.is_integral(&self.mul(a, b)) {
                    return Err(Error::invalid(
                        "integral basis",
                        "basis is not closed under multiplication",
                    ));
                }
            }
        }
        Ok(())
    }

    fn infer_sigma(&self) -> Result<Mat> {
        // find y in O_K with phi_j(y) = conj(phi_j(x)) for all j, numerically then exactly
        let d = self.degree();
        let roots = self.roots(DEFAULT_PREC);
        let w = self.integral_basis();
        // complex system M c = v with M_{jk} = phi_j(w_k)
        let mut m: Vec<Vec<C64>> = vec![];
        for j in 0..d {
            let mut row = vec![];
            for wk in &w {
                let e = self.eval_ball(wk, &roots[j], DEFAULT_PREC);
                let (a, b) = e.to_f64();
                row.push(C64(a, b));
            }
            let (a, b) = roots[j].to_f64();
            row.push(C64(a, -b));
            m.push(row);
        }
        // gaussian elimination with partial pivoting
        for c in 0..d {
            let p = (c..d)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap_or(Ordering::Equal))
                .unwrap_or(c);
            m.swap(c, p);
            if m[c][c].abs() < 1e-300 {
                return Err(Error::invalid("sigma", "could not infer complex conjugation"));
            }
            for i in 0..d {
                if i != c {
                    let f = m[i][c].div(m[c][c]);
                    for k in c..=d {
                        let t = f.mul(m[c][k]);
                        m[i][k] = m[i][k].sub(t);
                    }
                }
            }
        }
        let ints: Vec<Q> = (0..d)
            .map(|i| {
                let v = m[i][d].div(m[i][i]);
                q(v.0.round() as i64)
            })
            .collect();
        let y = self.from_int_coords(&ints);
        // sigma(x^j) = y^j
        let mut cols = vec![];
        let mut cur = self.one();
        for _ in 0..d {
            cols.push(cur.0.clone());
            cur = self.mul(&cur, &y);
        }
        let mat = linalg::transpose(&cols);
        Ok(mat)
    }

    fn check_sigma(&self) -> Result<()> {
        let d = self.degree();
        let s = &self.conj;
        let s2 = linalg::mat_mul(s, s);
        if s2 != linalg::identity(d) {
            return Err(Error::invalid("sigma", "conjugation matrix is not an involution"));
        }
        // ring homomorphism: sigma(x^j) = sigma(x)^j and f(sigma(x)) = 0
        let y = Elem((0..d).map(|i| s[i][1.min(d - 1)].clone()).collect());
        let mut cur = self.one();
        for j in 0..d {
            let col: Vec<Q> = (0..d).map(|i| s[i][j].clone()).collect();
            if col != cur.0 {
                return Err(Error::invalid("sigma", "conjugation matrix is not multiplicative"));
            }
            cur = self.mul(&cur, &y);
        }
        if !self.eval_minpoly(&y).is_zero() {
            return Err(Error::invalid("sigma", "sigma(x) is not a root of the minimal polynomial"));
        }
        let mut diff = s.clone();
        for (i, row) in diff.iter_mut().enumerate() {
            row[i] -= Q::one();
        }
        if linalg::rank(&diff) != self.g {
            return Err(Error::invalid("sigma", "sigma does not fix a subfield of half degree"));
        }
        // compatibility with every embedding: phi_j(sigma x) = conj(phi_j(x))
        for j in 0..d {
            let target = self.conj_index(j);
            let mut prec = DEFAULT_PREC;
            loop {
                let roots = self.roots(prec);
                let b = self.eval_ball(&y, &roots[j], prec);
                let hits: Vec<usize> = (0..d).filter(|&k| roots[k].overlaps(&b)).collect();
                if hits.len() == 1 {
                    if hits[0] != target {
                        return Err(Error::invalid(
                            "sigma",
                            "sigma does not act as complex conjugation under every embedding",
                        ));
                    }
                    break;
                }
                prec *= 2;
                if prec > 1 << 14 {
                    return Err(Error::invalid("sigma", "could not separate embeddings"));
                }
            }
        }
        Ok(())
    }

    fn init_real_subfield(&mut self) -> Result<()> {
        let x = self.gen();
        let cands = [
            self.add(&x, &self.conj(&x)),
            self.mul(&x, &self.conj(&x)),
            self.add(&self.mul(&x, &x), &self.conj(&self.mul(&x, &x))),
        ];
        for c in cands.iter().cloned().chain((1..20).map(|k| {
            let xk = self.add(&x, &self.from_q(&q(k)));
            let t = self.mul(&xk, &xk);
            let t = self.mul(&t, &xk);
            self.add(&t, &self.conj(&t))
        })) {
            let mp = self.minpoly(&c);
            if mp.len() == self.g + 1 {
                self.real_gen = c;
                self.real_minpoly = mp;
                return Ok(());
            }
        }
        Err(Error::invalid("sigma", "could not find a generator of the real subfield"))
    }

    // ---- element arithmetic

    pub fn zero(&self) -> Elem {
        Elem(vec![Q::zero(); self.degree()])
    }
    pub fn one(&self) -> Elem {
        self.from_q(&Q::one())
    }
    pub fn from_q(&self, c: &Q) -> Elem {
        let mut v = vec![Q::zero(); self.degree()];
        v[0] = c.clone();
        Elem(v)
    }
    pub fn from_i64(&self, c: i64) -> Elem {
        self.from_q(&q(c))
    }
    pub fn gen(&self) -> Elem {
        let mut v = vec![Q::zero(); self.degree()];
        v[1] = Q::one();
        Elem(v)
    }
    pub fn elem(&self, coords: &[Q]) -> Result<Elem> {
        if coords.len() != self.degree() {
            return Err(Error::malformed(format!(
                "element needs {} coordinates, got {}",
                self.degree(),
                coords.len()
            )));
        }
        Ok(Elem(coords.to_vec()))
    }
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.iter().map(|x| -x.clone()).collect())
    }
    pub fn scale(&self, a: &Elem, c: &Q) -> Elem {
        Elem(a.0.iter().map(|x| x * c).collect())
    }
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.degree();
        let mut prod = vec![Q::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = vec![Q::zero(); d];
        for (k, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < d {
                out[k] += c;
            } else {
                for (i, t) in self.reduce_tab[k].iter().enumerate() {
                    out[i] += c * t;
                }
            }
        }
        Elem(out)
    }
    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut out = self.one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }
    /// Matrix of multiplication by `a` on the power basis (column j = a * x^j).
    pub fn mult_matrix(&self, a: &Elem) -> Mat {
        let d = self.degree();
        let cols: Vec<Vec<Q>> = (0..d).map(|j| self.mul(a, &Elem(self.reduce_tab[j].clone())).0).collect();
        linalg::transpose(&cols)
    }
    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::invalid("nonzero", "division by zero in K"));
        }
        let m = self.mult_matrix(a);
        let e1 = self.one().0;
        let x = linalg::solve(&m, &e1).ok_or_else(|| Error::invalid("nonzero", "element not invertible"))?;
        Ok(Elem(x))
    }
    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    pub fn conj(&self, a: &Elem) -> Elem {
        Elem(linalg::mat_vec(&self.conj, &a.0))
    }
    pub fn trace(&self, a: &Elem) -> Q {
        a.0.iter().zip(&self.power_sums).fold(Q::zero(), |acc, (c, p)| acc + c * p)
    }
    pub fn norm(&self, a: &Elem) -> Q {
        linalg::det(&self.mult_matrix(a))
    }
    /// Minimal polynomial over Q (monic, low degree first).
    pub fn minpoly(&self, a: &Elem) -> Vec<Q> {
        let d = self.degree();
        let mut pows = vec![self.one()];
        for k in 1..=d {
            let next = self.mul(&pows[k - 1], a);
            pows.push(next);
            // is a^k in the span of lower powers?
            let m = linalg::transpose(&pows[..k].iter().map(|e| e.0.clone()).collect::<Vec<_>>());
            if let Some(c) = linalg::solve_any(&m, &pows[k].0) {
                let check = linalg::mat_vec(&m, &c);
                if check == pows[k].0 {
                    let mut out: Vec<Q> = c.iter().map(|x| -x.clone()).collect();
                    out.push(Q::one());
                    return out;
                }
            }
        }
        unreachable!("every element satisfies a polynomial of degree <= d")
    }
    fn eval_minpoly(&self, y: &Elem) -> Elem {
        let mut acc = self.zero();
        for c in self.fpoly.iter().rev() {
            acc = self.mul(&acc, y);
            acc = self.add(&acc, &self.from_q(c));
        }
        acc
    }

    // ---- integral basis

    pub fn integral_basis(&self) -> Vec<Elem> {
        let d = self.degree();
        (0..d).map(|k| Elem((0..d).map(|i| self.basis[i][k].clone()).collect())).collect()
    }
    pub fn to_int_coords(&self, a: &Elem) -> Vec<Q> {
        linalg::mat_vec(&self.basis_inv, &a.0)
    }
    pub fn from_int_coords(&self, c: &[Q]) -> Elem {
        Elem(linalg::mat_vec(&self.basis, c))
    }
    pub fn is_integral(&self, a: &Elem) -> bool {
        self.to_int_coords(a).iter().all(|c| c.is_integer())
    }
    pub fn basis_matrix(&self) -> &Mat {
        &self.basis
    }
    pub fn conj_matrix(&self) -> &Mat {
        &self.conj
    }

    /// Exact discriminant of the integral basis.
    pub fn discriminant(&self) -> Q {
        let w = self.integral_basis();
        let t: Mat = w.iter().map(|a| w.iter().map(|b| self.trace(&self.mul(a, b))).collect()).collect();
        linalg::det(&t)
    }

    // ---- predicates

    pub fn is_real(&self, a: &Elem) -> bool {
        self.conj(a) == *a
    }
    pub fn is_totally_imaginary(&self, a: &Elem) -> bool {
        self.conj(a) == self.neg(a)
    }

    /// Sign of the real number phi_j(a) for `a` in F, decided exactly.
    pub fn real_sign(&self, a: &Elem, j: usize) -> Result<Ordering> {
        if !self.is_real(a) {
            return Err(Error::invalid("in F", "element is not fixed by sigma"));
        }
        if a.is_zero() {
            return Ok(Ordering::Equal);
        }
        self.refine_sign(|prec| self.embed_at(a, j, prec).re)
    }

    /// Sign of Im phi_j(a), decided exactly.
    pub fn imag_sign(&self, a: &Elem, j: usize) -> Result<Ordering> {
        if self.is_real(a) {
            return Ok(Ordering::Equal);
        }
        // Im phi(a) = 0 iff phi(a) is real iff a in F (embeddings are injective)
        self.refine_sign(|prec| self.embed_at(a, j, prec).im)
    }

    fn refine_sign(&self, f: impl Fn(u32) -> RBall) -> Result<Ordering> {
        let mut prec = DEFAULT_PREC;
        loop {
            if let Some(s) = f(prec).sign() {
                return Ok(s);
            }
            prec *= 2;
            if prec > 1 << 16 {
                return Err(Error::Budget("sign refinement exceeded precision cap".into()));
            }
        }
    }

    pub fn is_totally_positive(&self, a: &Elem) -> Result<bool> {
        if !self.is_real(a) {
            return Err(Error::invalid("in F", "element is not fixed by sigma"));
        }
        if a.is_zero() {
            return Ok(false);
        }
        for j in 0..self.g {
            if self.real_sign(a, j)? != Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sign vector of a nonzero element of F at the g real places.
    pub fn sign_vector(&self, a: &Elem) -> Result<Vec<i8>> {
        (0..self.g)
            .map(|j| {
                Ok(match self.real_sign(a, j)? {
                    Ordering::Greater => 1,
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                })
            })
            .collect()
    }

    // ---- embeddings

    /// Index of the conjugate embedding.
    pub fn conj_index(&self, j: usize) -> usize {
        if j < self.g {
            j + self.g
        } else {
            j - self.g
        }
    }

    /// Certified root boxes at (at least) `prec` bits.
    pub fn roots(&self, prec: u32) -> Vec<CBall> {
        {
            let cache = self.root_cache.lock().expect("root cache poisoned");
            if let Some((_, r)) = cache.iter().find(|(p, _)| *p == prec) {
                return r.clone();
            }
        }
        let df = poly::derivative(&self.fpoly);
        let mut p = prec;
        let roots = loop {
            let upper: Option<Vec<CBall>> =
                (0..self.g).map(|j| certify_root(&self.fpoly, &df, &self.root_starts[j], p)).collect();
            if let Some(upper) = upper {
                let mut all = upper.clone();
                all.extend(upper.iter().map(|b| b.conj()));
                if boxes_disjoint(&all) {
                    break all;
                }
            }
            p += 32;
        };
        let mut cache = self.root_cache.lock().expect("root cache poisoned");
        cache.push((prec, roots.clone()));
        roots
    }

    fn eval_ball(&self, a: &Elem, root: &CBall, prec: u32) -> CBall {
        let mut acc = CBall::zero();
        for c in a.0.iter().rev() {
            acc = acc.mul(root).round(prec + 16);
            acc.re = acc.re.add(&RBall::exact(c.clone()));
        }
        acc
    }

    fn embed_at(&self, a: &Elem, j: usize, prec: u32) -> CBall {
        let roots = self.roots(prec);
        self.eval_ball(a, &roots[j], prec)
    }

    /// phi_j(a) as a box whose radius is at most 2^-prec.
    pub fn embed(&self, a: &Elem, j: usize, prec: u32) -> CBall {
        let target = Q::new(Z::one(), Z::one() << prec);
        let mut p = prec;
        loop {
            let b = self.embed_at(a, j, p);
            if b.max_rad() <= target {
                return b;
            }
            p += 32.max(p / 2);
        }
    }

    pub fn embed_f64(&self, a: &Elem, j: usize) -> (f64, f64) {
        self.embed_at(a, j, 64).to_f64()
    }

    /// All 2^g CM types, ordered by bitmask (bit j set selects the conjugate of j).
    pub fn cm_types(&self) -> Vec<CMType> {
        (0..1usize << self.g).map(|m| self.cm_type(m)).collect()
    }

    pub fn cm_type(&self, mask: usize) -> CMType {
        CMType {
            indices: (0..self.g).map(|j| if mask >> j & 1 == 1 { j + self.g } else { j }).collect(),
        }
    }

    pub fn cm_type_index(&self, t: &CMType) -> usize {
        t.indices.iter().enumerate().fold(0, |m, (j, &i)| if i >= self.g { m | 1 << j } else { m })
    }

    pub fn conj_type(&self, t: &CMType) -> CMType {
        CMType { indices: t.indices.iter().map(|&i| self.conj_index(i)).collect() }
    }

    pub fn validate_type(&self, t: &CMType) -> Result<()> {
        if t.indices.len() != self.g {
            return Err(Error::invalid("cm type", "a CM type has exactly g embeddings"));
        }
        let mut seen = vec![false; self.g];
        for &i in &t.indices {
            if i >= self.degree() {
                return Err(Error::invalid("cm type", "embedding index out of range"));
            }
            let p = i % self.g;
            if seen[p] {
                return Err(Error::invalid("cm type", "two conjugate embeddings selected"));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// Trace-dual pair for the integral basis.
    pub fn trace_dual(&self) -> TraceDualPair {
        let alpha = self.integral_basis();
        let t: Mat = alpha
            .iter()
            .map(|a| alpha.iter().map(|b| self.trace(&self.mul(a, b))).collect())
            .collect();
        let tinv = linalg::inverse(&t).expect("trace form is nondegenerate");
        let beta = (0..alpha.len())
            .map(|j| {
                alpha
                    .iter()
                    .enumerate()
                    .fold(self.zero(), |acc, (k, a)| self.add(&acc, &self.scale(a, &tinv[k][j])))
            })
            .collect();
        TraceDualPair { alpha, beta }
    }

    /// Positive-definite rational Gram matrix of T2(x) = Tr(x x^sigma) on the
    /// given Z-basis.
    pub fn t2_gram(&self, basis: &[Elem]) -> Mat {
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.trace(&self.mul(a, &self.conj(b)))).collect())
            .collect()
    }

    // ---- printing

    pub fn fmt_elem(&self, a: &Elem) -> String {
        poly::to_string(&a.0, &self.var)
    }
}

fn check_irreducible(minpoly: &[Z], roots: &[CBall]) -> Result<()> {
    let d = roots.len();
    let fq: Vec<Q> = minpoly.iter().map(zq).collect();
    for k in 1..=d / 2 {
        for subset in subsets(d, k) {
            let mut coeffs = vec![CBall::one()];
            for &i in &subset {
                // multiply by (X - r_i)
                let mut next = vec![CBall::zero(); coeffs.len() + 1];
                for (j, c) in coeffs.iter().enumerate() {
                    next[j + 1] = next[j + 1].add(c);
                    next[j] = next[j].sub(&c.mul(&roots[i]));
                }
                coeffs = next;
            }
            let mut cand = vec![];
            let mut ok = true;
            for c in &coeffs {
                if !c.im.contains_zero() || c.re.rad > q(1) / q(4) {
                    ok = false;
                    break;
                }
                let n = c.re.mid.round();
                if (&c.re.mid - &n).abs() > c.re.rad {
                    ok = false;
                    break;
                }
                cand.push(n);
            }
            if !ok {
                continue;
            }
            let (_, r) = poly::divrem(&fq, &cand);
            if r.is_empty() {
                return Err(Error::invalid("irreducible", "minimal polynomial is reducible"));
            }
        }
    }
    Ok(())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    fn qi() -> CMField {
        CMField::parse("name = Qi\ngen = i\nminpoly = [1, 0, 1]\nbasis = [[1,0],[0,1]]\n").unwrap()
    }

    #[test]
    fn gaussian_conjugation() {
        let k = qi();
        let i = k.gen();
        assert_eq!(k.conj(&i), k.neg(&i));
        assert_eq!(k.conj(&k.one()), k.one());
    }

    #[test]
    fn trace_dual_gaussian() {
        let k = qi();
        let t = k.trace_dual();
        assert_eq!(t.beta[0], Elem(vec![qf(1, 2), q(0)]));
        assert_eq!(t.beta[1], Elem(vec![q(0), qf(-1, 2)]));
    }

    #[test]
    fn reducible_rejected() {
        let e = CMField::parse("minpoly = [4, 0, 5, 0, 1]\nbasis = [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]")
            .unwrap_err();
        assert_eq!(e.invariant(), Some("irreducible"));
    }

    #[test]
    fn real_root_rejected() {
        let e = CMField::parse("minpoly = [-2, 0, 1]\nbasis = [[1,0],[0,1]]").unwrap_err();
        assert_eq!(e.invariant(), Some("no real roots"));
    }
}
