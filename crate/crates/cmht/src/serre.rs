//! Skew objects and the Serre tensor calculus on pseudo-lattices.
//!
//! A rank-1 skew object (a, zeta) carries the form F(x, y) = x^sigma (-zeta) y
//! on the ideal a; its Riemann form is E(x, y) = Tr(zeta x y^sigma).

use crate::expr::{elem_from_json, elem_to_json, matrix_from_json, matrix_to_json};
use crate::field::{CMField, CMType, Elem};
use crate::herm::{self, KMat};
use crate::ideal::{self, Arith, FracIdeal};
use crate::linalg::{self, zq, Q, Z};
use crate::{Error, Result};
use num_traits::Zero;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewObject1 {
    pub ideal: FracIdeal,
    pub zeta: Elem,
    pub cm_type: CMType,
}

/// Validate (a, zeta) against the polarization conditions for the type.
pub fn make_skew1(ar: &Arith, a: &FracIdeal, zeta: &Elem, t: &CMType) -> Result<SkewObject1> {
    let k = &ar.k;
    k.validate_type(t)?;
    if zeta.is_zero() || !k.is_totally_imaginary(zeta) {
        return Err(Error::invalid("totally imaginary", "zeta^sigma != -zeta"));
    }
    for &j in &t.indices {
        if k.imag_sign(zeta, j)? != Ordering::Greater {
            return Err(Error::invalid("imaginary sign", format!("Im phi_{}(zeta) is not positive", j)));
        }
    }
    let lhs = ideal::scale(k, a, zeta)?;
    let rhs = ideal::inv(k, &ideal::mul(k, &ideal::conj(k, a), &ar.delta));
    if lhs != rhs {
        return Err(Error::invalid("principality", "zeta a != (a^sigma delta_K)^{-1}"));
    }
    Ok(SkewObject1 { ideal: a.clone(), zeta: zeta.clone(), cm_type: t.clone() })
}

impl SkewObject1 {
    /// The conjugate object (a^sigma, -zeta) for the conjugate type.
    pub fn conjugate(&self, k: &CMField) -> SkewObject1 {
        SkewObject1 { ideal: ideal::conj(k, &self.ideal), zeta: k.neg(&self.zeta), cm_type: k.conj_type(&self.cm_type) }
    }

    pub fn as_lattice(&self, k: &CMField) -> SkewLatticeN {
        SkewLatticeN {
            lat: PseudoLattice {
                ideals: vec![self.ideal.clone()],
                basis: vec![vec![k.one()]],
                gram: vec![vec![k.neg(&self.zeta)]],
            },
            cm_type: self.cm_type.clone(),
        }
    }

    pub fn to_json(&self, k: &CMField) -> serde_json::Value {
        serde_json::json!({
            "ideal": self.ideal.to_json(),
            "zeta": elem_to_json(&self.zeta),
            "zeta_str": k.fmt_elem(&self.zeta),
            "type": k.cm_type_index(&self.cm_type),
        })
    }

    pub fn from_json(ar: &Arith, v: &serde_json::Value) -> Result<SkewObject1> {
        let k = &ar.k;
        let a = ideal_field(k, v, "ideal")?;
        let z = elem_from_json(k, v.get("zeta").ok_or_else(|| Error::malformed("missing \"zeta\""))?)?;
        let t = type_field(k, v)?;
        make_skew1(ar, &a, &z, &t)
    }
}

fn ideal_field(k: &CMField, v: &serde_json::Value, key: &str) -> Result<FracIdeal> {
    match v.get(key) {
        Some(serde_json::Value::String(s)) => ideal::parse_ideal(k, s),
        Some(x) => ideal::ideal_from_json(k, x),
        None => Err(Error::malformed(format!("missing \"{}\"", key))),
    }
}

fn type_field(k: &CMField, v: &serde_json::Value) -> Result<CMType> {
    let m = v.get("type").and_then(|t| t.as_u64()).unwrap_or(0) as usize;
    if m >= 1 << k.g {
        return Err(Error::malformed("CM type index out of range"));
    }
    Ok(k.cm_type(m))
}

/// A projective module sum a_i b_i inside K^n with a Gram matrix in standard coordinates.
/// Column i of `basis` is b_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoLattice {
    pub ideals: Vec<FracIdeal>,
    pub basis: KMat,
    pub gram: KMat,
}

pub type HermLattice = PseudoLattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewLatticeN {
    pub lat: PseudoLattice,
    pub cm_type: CMType,
}

impl PseudoLattice {
    pub fn rank(&self) -> usize {
        self.ideals.len()
    }

    pub fn column(&self, i: usize) -> Vec<Elem> {
        self.basis.iter().map(|r| r[i].clone()).collect()
    }

    /// Gram matrix of the pseudo-basis vectors, b_i^* G b_j.
    pub fn local_gram(&self, k: &CMField) -> KMat {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| herm::form(k, &self.gram, &self.column(i), &self.column(j))).collect())
            .collect()
    }

    /// Z-basis of the module in K^n.
    pub fn z_basis(&self, k: &CMField) -> Vec<Vec<Elem>> {
        let mut out = vec![];
        for (i, a) in self.ideals.iter().enumerate() {
            let col = self.column(i);
            for x in a.basis(k) {
                out.push(col.iter().map(|c| k.mul(c, &x)).collect());
            }
        }
        out
    }

    /// Canonical HNF of the underlying Z-lattice (for module equality).
    pub fn module_hnf(&self, k: &CMField) -> (linalg::IMat, Z) {
        let rows: Vec<Vec<Q>> = self.z_basis(k).iter().map(|v| herm::q_coords(v)).collect();
        linalg::rational_lattice(&rows)
    }

    pub fn same_module(&self, k: &CMField, other: &PseudoLattice) -> bool {
        self.module_hnf(k) == other.module_hnf(k)
    }

    /// det(B) prod a_i, the determinant ideal.
    pub fn det_ideal(&self, k: &CMField) -> Result<FracIdeal> {
        let d = herm::det(k, &self.basis);
        let mut out = ideal::principal(k, &d)?;
        for a in &self.ideals {
            out = ideal::mul(k, &out, a);
        }
        Ok(out)
    }

    pub fn to_json(&self, k: &CMField) -> serde_json::Value {
        serde_json::json!({
            "ideals": self.ideals.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
            "basis": matrix_to_json(&self.basis),
            "gram": matrix_to_json(&self.gram),
            "rank": self.rank(),
            "gram_str": self.gram.iter().map(|r| r.iter().map(|x| k.fmt_elem(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(k: &CMField, v: &serde_json::Value) -> Result<PseudoLattice> {
        let gram = matrix_from_json(k, v.get("gram").ok_or_else(|| Error::malformed("missing \"gram\""))?)?;
        let n = gram.len();
        let basis = match v.get("basis") {
            Some(b) => matrix_from_json(k, b)?,
            None => herm::identity(k, n),
        };
        let ideals = match v.get("ideals") {
            Some(serde_json::Value::Array(xs)) => xs
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => ideal::parse_ideal(k, s),
                    _ => ideal::ideal_from_json(k, x),
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::malformed("\"ideals\" must be an array")),
            None => vec![ideal::unit_ideal(k); n],
        };
        if basis.len() != n || ideals.len() != n {
            return Err(Error::malformed("ideals, basis and gram must have the same rank"));
        }
        if herm::det(k, &basis).is_zero() {
            return Err(Error::invalid("full rank", "pseudo-basis is linearly dependent"));
        }
        Ok(PseudoLattice { ideals, basis, gram })
    }
}

impl SkewLatticeN {
    pub fn to_json(&self, k: &CMField) -> serde_json::Value {
        let mut v = self.lat.to_json(k);
        v["type"] = serde_json::json!(k.cm_type_index(&self.cm_type));
        v
    }

    pub fn from_json(k: &CMField, v: &serde_json::Value) -> Result<SkewLatticeN> {
        Ok(SkewLatticeN { lat: PseudoLattice::from_json(k, v)?, cm_type: type_field(k, v)? })
    }
}

fn check_values(k: &CMField, lat: &PseudoLattice, target: &FracIdeal) -> Result<bool> {
    let p = lat.local_gram(k);
    for (i, ai) in lat.ideals.iter().enumerate() {
        let ais = ideal::conj(k, ai);
        for (j, aj) in lat.ideals.iter().enumerate() {
            if p[i][j].is_zero() {
                continue;
            }
            let v = ideal::scale(k, &ideal::mul(k, &ais, aj), &p[i][j])?;
            if !v.is_subset_of(k, target) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// det(b_i^* G b_j) prod a_i^sigma a_i, or None if degenerate.
fn volume(k: &CMField, lat: &PseudoLattice) -> Result<Option<FracIdeal>> {
    let d = herm::det(k, &lat.local_gram(k));
    if d.is_zero() {
        return Ok(None);
    }
    let mut out = ideal::principal(k, &d)?;
    for a in &lat.ideals {
        out = ideal::mul(k, &out, &ideal::mul(k, &ideal::conj(k, a), a));
    }
    Ok(Some(out))
}

/// Validate a hermitian lattice: hermitian, positive-definite, O_K-valued, unimodular.
pub fn validate_herm(ar: &Arith, m: &HermLattice) -> Result<()> {
    let k = &ar.k;
    if !herm::is_hermitian(k, &m.gram) {
        return Err(Error::invalid("hermitian", "h is not hermitian"));
    }
    if !herm::is_positive(k, &m.gram)? {
        return Err(Error::invalid("h not positive-definite", "some leading minor is not totally positive"));
    }
    let ok = ideal::unit_ideal(k);
    if !check_values(k, m, &ok)? {
        return Err(Error::invalid("O_K-valued", "h takes values outside O_K on the lattice"));
    }
    match volume(k, m)? {
        Some(v) if v == ok => Ok(()),
        _ => Err(Error::invalid("nondegenerate", "h: M -> M^dual is not an isomorphism")),
    }
}

/// Validate a skew lattice: skew-hermitian, delta^{-1}-valued, unimodular, negative-definite along the type.
pub fn validate_skew(ar: &Arith, x: &SkewLatticeN) -> Result<()> {
    let k = &ar.k;
    k.validate_type(&x.cm_type)?;
    if !herm::is_skew_hermitian(k, &x.lat.gram) {
        return Err(Error::invalid("skew-hermitian", "f is not skew-hermitian"));
    }
    if !check_values(k, &x.lat, &ar.delta_inv)? {
        return Err(Error::invalid("delta^-1-valued", "f takes values outside the inverse different"));
    }
    let target = ideal::pow(k, &ar.delta_inv, x.lat.rank() as i64);
    match volume(k, &x.lat)? {
        Some(v) if v == target => {}
        _ => return Err(Error::invalid("nondegenerate", "f: H -> H^* is not an isomorphism")),
    }
    if !herm::is_negative_definite_along(k, &x.lat.gram, &x.cm_type)? {
        return Err(Error::invalid("negative-definite along type", "Im phi(f(x, x)) < 0 fails"));
    }
    Ok(())
}

/// (M (x) a, h (x) (-zeta)) without validation.
pub fn tensor_raw(k: &CMField, m: &HermLattice, a: &SkewObject1) -> SkewLatticeN {
    let mz = k.neg(&a.zeta);
    SkewLatticeN {
        lat: PseudoLattice {
            ideals: m.ideals.iter().map(|x| ideal::mul(k, x, &a.ideal)).collect(),
            basis: m.basis.clone(),
            gram: herm::mat_scale(k, &m.gram, &mz),
        },
        cm_type: a.cm_type.clone(),
    }
}

/// Tensor a hermitian lattice with a rank-1 skew object and validate the result.
pub fn tensor(ar: &Arith, m: &HermLattice, a: &SkewObject1) -> Result<SkewLatticeN> {
    if !herm::is_hermitian(&ar.k, &m.gram) {
        return Err(Error::invalid("hermitian", "h is not hermitian"));
    }
    let x = tensor_raw(&ar.k, m, a);
    match validate_skew(ar, &x) {
        Ok(()) => Ok(x),
        Err(Error::Invalid { invariant, detail }) if invariant == "negative-definite along type" => {
            Err(Error::invalid("h not positive-definite (Theorem A)", detail))
        }
        Err(Error::Invalid { invariant, detail }) if invariant == "nondegenerate" => {
            Err(Error::invalid("h degenerate", detail))
        }
        Err(e) => Err(e),
    }
}

/// (H (x) a^{-1}, f / (-zeta)) without validation.
pub fn decompose_raw(k: &CMField, x: &SkewLatticeN, a: &SkewObject1) -> Result<HermLattice> {
    let ainv = ideal::inv(k, &a.ideal);
    let c = k.inv(&k.neg(&a.zeta))?;
    Ok(PseudoLattice {
        ideals: x.lat.ideals.iter().map(|y| ideal::mul(k, y, &ainv)).collect(),
        basis: x.lat.basis.clone(),
        gram: herm::mat_scale(k, &x.lat.gram, &c),
    })
}

pub fn decompose(ar: &Arith, x: &SkewLatticeN, a: &SkewObject1) -> Result<HermLattice> {
    if x.cm_type != a.cm_type {
        return Err(Error::invalid("cm type", "objects have different CM types"));
    }
    let m = decompose_raw(&ar.k, x, a)?;
    validate_herm(ar, &m)?;
    Ok(m)
}

/// Determinant descent for odd rank n = 2m+1: (det(H) delta^m, (-1)^m det f).
pub fn det_descent(ar: &Arith, x: &SkewLatticeN) -> Result<SkewObject1> {
    let k = &ar.k;
    let n = x.lat.rank();
    if n % 2 == 0 {
        return Err(Error::invalid("odd rank", "determinant descent needs odd rank"));
    }
    let m = (n / 2) as i64;
    let a = ideal::mul(k, &x.lat.det_ideal(k)?, &ideal::pow(k, &ar.delta, m));
    let mut g = herm::det(k, &x.lat.gram);
    if m % 2 == 1 {
        g = k.neg(&g);
    }
    make_skew1(ar, &a, &k.neg(&g), &x.cm_type)
}

#[derive(Clone, Debug)]
pub struct HomModuleData {
    pub hom_ideal: FracIdeal,
    /// zeta_A / zeta_B before normalization.
    pub n_raw: Elem,
    pub n: Elem,
    pub herm: HermLattice,
}

/// Normalize an element by totally positive units of F, minimizing the
/// largest log |phi_j|; ties go to the smaller coordinates.
pub fn normalize_by_positive_units(ar: &Arith, x: &Elem) -> Result<Elem> {
    let k = &ar.k;
    let Some(eps) = &ar.units.signs.fundamental_unit else {
        return Ok(x.clone());
    };
    let u = if k.is_totally_positive(eps)? { eps.clone() } else { k.mul(eps, eps) };
    let labs = |y: &Elem, j: usize| -> f64 {
        let (re, im) = k.embed_f64(y, j);
        re.hypot(im).ln()
    };
    let lu = labs(&u, 0);
    let centre = ((labs(x, 1) - labs(x, 0)) / (2.0 * lu)).round() as i64;
    let mut best: Option<(f64, Elem)> = None;
    for e in centre - 2..=centre + 2 {
        let y = k.mul(x, &k.pow(&u, e)?);
        let l = (0..k.g).map(|j| labs(&y, j)).fold(f64::MIN, f64::max);
        let better = match &best {
            None => true,
            Some((bl, by)) => l < bl - 1e-9 || ((l - bl).abs() <= 1e-9 && y.0 < by.0),
        };
        if better {
            best = Some((l, y));
        }
    }
    Ok(best.expect("nonempty candidate set").1)
}

pub fn hom_module(ar: &Arith, a: &SkewObject1, b: &SkewObject1) -> Result<HomModuleData> {
    let k = &ar.k;
    if a.cm_type != b.cm_type {
        return Err(Error::invalid("cm type", "Hom between objects of different CM types is zero"));
    }
    let hom_ideal = ideal::div(k, &b.ideal, &a.ideal);
    let n_raw = k.div(&a.zeta, &b.zeta)?;
    if !k.is_real(&n_raw) || !k.is_totally_positive(&n_raw)? {
        return Err(Error::invalid("N totally positive", "zeta_A / zeta_B is not totally positive"));
    }
    let n = normalize_by_positive_units(ar, &n_raw)?;
    let herm = PseudoLattice { ideals: vec![hom_ideal.clone()], basis: vec![vec![k.one()]], gram: vec![vec![k.inv(&n)?]] };
    validate_herm(ar, &herm)?;
    Ok(HomModuleData { hom_ideal, n_raw, n, herm })
}

/// herm(f, g) = f^sigma g N^{-1}.
pub fn hom_herm(k: &CMField, h: &HomModuleData, f: &Elem, g: &Elem) -> Result<Elem> {
    k.div(&k.mul(&k.conj(f), g), &h.n)
}

/// Rosati dual of phi in Hom(A, B): (zeta_B / zeta_A) phi^sigma in Hom(B, A).
pub fn rosati_dual(ar: &Arith, phi: &Elem, a: &SkewObject1, b: &SkewObject1) -> Result<Elem> {
    let k = &ar.k;
    let hom = ideal::div(k, &b.ideal, &a.ideal);
    if !hom.contains(k, phi) {
        return Err(Error::invalid("hom ideal membership", "phi is not in b a^{-1}"));
    }
    Ok(k.mul(&k.div(&b.zeta, &a.zeta)?, &k.conj(phi)))
}

// ---- Steinitz form

/// Elements u in a, v in b with x u + y v = 1, given x a + y b = O_K.
fn split_one(k: &CMField, a: &FracIdeal, b: &FracIdeal, x: &Elem, y: &Elem) -> Option<(Elem, Elem)> {
    let ba = a.basis(k);
    let bb = b.basis(k);
    let mut gens: Vec<Elem> = ba.iter().map(|e| k.mul(x, e)).collect();
    gens.extend(bb.iter().map(|e| k.mul(y, e)));
    let rows: Vec<Vec<Q>> = gens.iter().map(|g| k.to_int_coords(g)).collect();
    let (ints, den) = linalg::clear_denoms(&rows);
    let (h, u, r) = linalg::hnf_with_transform(&ints);
    // find a combination of the HNF rows equal to den * coords(1)
    let target: Vec<Q> = k.to_int_coords(&k.one()).iter().map(|c| c * zq(&den)).collect();
    let hq: Vec<Vec<Q>> = h[..r].iter().map(|row| row.iter().map(zq).collect()).collect();
    let c = linalg::solve_any(&linalg::transpose(&hq), &target)?;
    if c.iter().any(|t| !t.is_integer()) {
        return None;
    }
    let mut coef = vec![Z::zero(); gens.len()];
    for (i, ci) in c.iter().enumerate() {
        for (j, cj) in coef.iter_mut().enumerate() {
            *cj += ci.to_integer() * &u[i][j];
        }
    }
    let na = ba.len();
    let uu = ba.iter().zip(&coef[..na]).fold(k.zero(), |acc, (e, c)| k.add(&acc, &k.scale(e, &zq(c))));
    let vv = bb.iter().zip(&coef[na..]).fold(k.zero(), |acc, (e, c)| k.add(&acc, &k.scale(e, &zq(c))));
    Some((uu, vv))
}

/// Replace (a, b1), (b, b2) by (O_K, g1), (a b, g2) spanning the same module.
fn merge_two(k: &CMField, a: &FracIdeal, b: &FracIdeal, w1: &[Elem], w2: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let ok = ideal::unit_ideal(k);
    let ainv = ideal::inv(k, a);
    let binv = ideal::inv(k, b);
    let x = ainv.basis(k).into_iter().next().expect("nonempty basis");
    let xa = ideal::scale(k, a, &x)?;
    let bb = binv.basis(k);
    // small elements of b^{-1} until x a + y b = O_K
    let mut tries = 0usize;
    for coeffs in small_vectors(bb.len()) {
        tries += 1;
        if tries > crate::budget() {
            break;
        }
        let y = bb.iter().zip(&coeffs).fold(k.zero(), |acc, (e, c)| k.add(&acc, &k.scale(e, &linalg::q(*c))));
        if y.is_zero() {
            continue;
        }
        let yb = ideal::scale(k, b, &y)?;
        if ideal::add(k, &xa, &yb) != ok {
            continue;
        }
        let (u, v) = split_one(k, a, b, &x, &y).ok_or_else(|| Error::invalid("steinitz", "Bezout split failed"))?;
        let g1: Vec<Elem> = w1.iter().zip(w2).map(|(p, q)| k.add(&k.mul(&u, p), &k.mul(&v, q))).collect();
        let g2: Vec<Elem> = w1.iter().zip(w2).map(|(p, q)| k.sub(&k.mul(&x, q), &k.mul(&y, p))).collect();
        return Ok((g1, g2));
    }
    Err(Error::Budget("Steinitz reduction".into()))
}

fn small_vectors(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (1i64..).flat_map(move |r| {
        let side = (2 * r + 1) as u64;
        (0..side.pow(n as u32)).filter_map(move |mut idx| {
            let mut v = vec![0i64; n];
            for c in v.iter_mut() {
                *c = (idx % side) as i64 - r;
                idx /= side;
            }
            if v.iter().any(|c| c.abs() == r) {
                Some(v)
            } else {
                None
            }
        })
    })
}

/// Steinitz form: ideals (O_K, ..., O_K, c) with c a class-group representative.
pub fn steinitz_form(ar: &Arith, lat: &PseudoLattice) -> Result<PseudoLattice> {
    let k = &ar.k;
    let n = lat.rank();
    let ok = ideal::unit_ideal(k);
    let mut cols: Vec<Vec<Elem>> = (0..n).map(|i| lat.column(i)).collect();
    let mut ideals = lat.ideals.clone();
    for i in 0..n.saturating_sub(1) {
        if ideals[i] == ok {
            // move the trivial ideal out of the way by swapping it forward
            continue;
        }
        let (g1, g2) = merge_two(k, &ideals[i], &ideals[i + 1], &cols[i], &cols[i + 1])?;
        let prod = ideal::mul(k, &ideals[i], &ideals[i + 1]);
        cols[i] = g1;
        cols[i + 1] = g2;
        ideals[i] = ok.clone();
        ideals[i + 1] = prod;
    }
    // last ideal: replace by its class representative
    let last = ideals[n - 1].clone();
    let cg = ar.class_group()?;
    let ci = cg.class_of(k, &ar.units, &last)?;
    let rep = cg.representatives[ci].clone();
    let gamma = ar
        .is_principal(&ideal::div(k, &last, &rep))?
        .ok_or_else(|| Error::invalid("class group", "class representative mismatch"))?;
    cols[n - 1] = cols[n - 1].iter().map(|c| k.mul(c, &gamma)).collect();
    ideals[n - 1] = rep;
    let basis: KMat = (0..n).map(|r| (0..n).map(|i| cols[i][r].clone()).collect()).collect();
    let out = PseudoLattice { ideals, basis, gram: lat.gram.clone() };
    if !out.same_module(k, lat) {
        return Err(Error::invalid("steinitz", "reduction changed the module"));
    }
    Ok(out)
}

/// The transporter pair (c, r) relating two rank-1 objects: b = a c^{-1}, xi = zeta r.
pub fn transporter(ar: &Arith, a: &SkewObject1, b: &SkewObject1) -> Result<(FracIdeal, Elem)> {
    let k = &ar.k;
    let c = ideal::div(k, &a.ideal, &b.ideal);
    let r = k.div(&b.zeta, &a.zeta)?;
    if !k.is_real(&r) {
        return Err(Error::invalid("transporter", "ratio of zetas is not in F"));
    }
    if ideal::mul(k, &c, &ideal::conj(k, &c)) != ideal::principal(k, &r)? {
        return Err(Error::invalid("transporter", "c c^sigma != (r)"));
    }
    Ok((c, r))
}

/// Apply (c, r) to (a, zeta): the type is recomputed from the signs of Im phi(zeta r).
pub fn apply_transporter(ar: &Arith, a: &SkewObject1, c: &FracIdeal, r: &Elem) -> Result<SkewObject1> {
    let k = &ar.k;
    let b = ideal::div(k, &a.ideal, c);
    let xi = k.mul(&a.zeta, r);
    let t = type_of_zeta(k, &xi)?;
    make_skew1(ar, &b, &xi, &t)
}

/// The unique CM type on which Im phi(zeta) > 0, for totally imaginary zeta.
pub fn type_of_zeta(k: &CMField, zeta: &Elem) -> Result<CMType> {
    let mut idx = vec![];
    for j in 0..k.g {
        idx.push(if k.imag_sign(zeta, j)? == Ordering::Greater { j } else { j + k.g });
    }
    Ok(CMType { indices: idx })
}

/// The standard form sum y_i x_i^sigma on O_K^n.
pub fn standard_herm(k: &CMField, n: usize) -> HermLattice {
    PseudoLattice { ideals: vec![ideal::unit_ideal(k); n], basis: herm::identity(k, n), gram: herm::identity(k, n) }
}
