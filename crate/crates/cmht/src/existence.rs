//! Which CM types carry a principally polarized rank-1 object, with witnesses.
//!
//! The admissible types form one orbit under the group of pairs (c, r) with
//! c c^sigma = (r), r in F, acting by (a, zeta) -> (a c^{-1}, zeta r); its
//! order is |U_F/U_F^+| * |N_K/N_K^+|.

use crate::field::{CMType, Elem};
use crate::ideal::{self, Arith, FracIdeal};
use crate::serre::{self, SkewObject1};
use crate::{budget, Error, Result};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct GroupOrderData {
    pub unit_index: usize,
    /// Classes c with c c^sigma generated by an element of F.
    pub n_classes: usize,
    /// Those with a totally positive generator.
    pub n_plus_classes: usize,
    pub y_order: usize,
    pub relative_ramified: bool,
    pub order: usize,
}

#[derive(Clone, Debug)]
pub struct ExistenceReport {
    pub relative_ramified: bool,
    pub group_order: usize,
    pub admissible_types: Vec<CMType>,
    pub witnesses: BTreeMap<usize, SkewObject1>,
    pub non_admissible: Vec<CMType>,
}

/// Units of K modulo U_F: torsion, and torsion times eta when [U_K : W U_F] = 2.
fn unit_reps(ar: &Arith) -> Vec<Elem> {
    let k = &ar.k;
    let mut out = ar.units.torsion.clone();
    if ar.units.index_two {
        let eta = ar.units.free_gen.clone().expect("free generator");
        out.extend(ar.units.torsion.iter().map(|z| k.mul(z, &eta)));
    }
    out
}

/// A generator of the principal ideal c lying in F, if any.
fn real_generator(ar: &Arith, c: &FracIdeal) -> Result<Option<Elem>> {
    let k = &ar.k;
    let Some(g) = ar.is_principal(c)? else {
        return Ok(None);
    };
    for u in unit_reps(ar) {
        let r = k.mul(&g, &u);
        if k.is_real(&r) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn group_order(ar: &Arith) -> Result<GroupOrderData> {
    let k = &ar.k;
    let cg = ar.class_group()?;
    let rr = ideal::relative_ramification(k)?;
    let mut n_classes = 0;
    let mut n_plus = 0;
    for c in &cg.representatives {
        let nc = ideal::mul(k, c, &ideal::conj(k, c));
        if let Some(r) = real_generator(ar, &nc)? {
            n_classes += 1;
            if ar.units.signs.sign_image.contains(&k.sign_vector(&r)?) {
                n_plus += 1;
            }
        }
    }
    let unit_index = ar.units.signs.index;
    let quotient = n_classes / n_plus;
    let order = unit_index * quotient;
    let y_order = (1usize << k.g) / unit_index;
    let expected = if rr.unramified { y_order / 2 } else { y_order };
    if quotient != expected || n_classes % n_plus != 0 {
        return Err(Error::invalid(
            "group order bookkeeping",
            format!(
                "|N_K/N_K^+| = {}/{} from class data but {} from |Y| = {} ({})",
                n_classes,
                n_plus,
                expected,
                y_order,
                if rr.unramified { "unramified" } else { "ramified" }
            ),
        ));
    }
    Ok(GroupOrderData { unit_index, n_classes, n_plus_classes: n_plus, y_order, relative_ramified: !rr.unramified, order })
}

struct Candidate {
    rep: usize,
    zeta: Elem,
}

/// All (class rep, zeta) pairs reached by the search, grouped by the type they polarize.
/// `seed` permutes the enumeration order; the chosen witnesses do not depend on it.
fn search(ar: &Arith, seed: Option<u64>) -> Result<BTreeMap<usize, Vec<Candidate>>> {
    let k = &ar.k;
    let cg = ar.class_group()?;
    let mut reps: Vec<usize> = (0..cg.representatives.len()).collect();
    let mut units = unit_reps(ar);
    let mut signs: Vec<Elem> = ar.units.sign_reps.iter().map(|(_, e)| e.clone()).collect();
    if let Some(s) = seed {
        let mut rng = StdRng::seed_from_u64(s);
        reps.shuffle(&mut rng);
        units.shuffle(&mut rng);
        signs.shuffle(&mut rng);
    }
    let mut out: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
    let mut steps = 0usize;
    for &ri in &reps {
        let a = &cg.representatives[ri];
        let c = ideal::mul(k, &ideal::mul(k, a, &ideal::conj(k, a)), &ar.delta);
        let Some(gamma) = ar.is_principal(&c)? else {
            continue;
        };
        let zinv = k.inv(&gamma)?;
        for u in &units {
            let z = k.mul(&zinv, &k.inv(u)?);
            if !k.is_totally_imaginary(&z) {
                continue;
            }
            for s in &signs {
                steps += 1;
                if steps > budget() {
                    return Err(Error::Budget("witness search".into()));
                }
                let zs = k.mul(&z, s);
                let t = serre::type_of_zeta(k, &zs)?;
                out.entry(k.cm_type_index(&t)).or_default().push(Candidate { rep: ri, zeta: zs });
            }
        }
    }
    Ok(out)
}

/// Canonical witness among the candidates: smallest class index, then the
/// unit-normalized zeta with the smallest coordinates.
fn canonical(ar: &Arith, cands: &[Candidate]) -> Result<SkewObject1> {
    let k = &ar.k;
    let cg = ar.class_group()?;
    let mut best: Option<(usize, Elem)> = None;
    for c in cands {
        let z = serre::normalize_by_positive_units(ar, &c.zeta)?;
        let better = match &best {
            None => true,
            Some((r, bz)) => c.rep < *r || (c.rep == *r && z.0 < bz.0),
        };
        if better {
            best = Some((c.rep, z));
        }
    }
    let (r, z) = best.ok_or_else(|| Error::invalid("witness", "no candidates"))?;
    let t = serre::type_of_zeta(k, &z)?;
    serre::make_skew1(ar, &cg.representatives[r], &z, &t)
}

pub fn admissible_types_seeded(ar: &Arith, seed: Option<u64>) -> Result<ExistenceReport> {
    let k = &ar.k;
    let go = group_order(ar)?;
    let found = search(ar, seed)?;
    let mut witnesses = BTreeMap::new();
    for (ti, cands) in &found {
        witnesses.insert(*ti, canonical(ar, cands)?);
    }
    if witnesses.len() > go.order {
        return Err(Error::invalid(
            "group order bookkeeping",
            format!("{} admissible types exceed the orbit size {}", witnesses.len(), go.order),
        ));
    }
    if witnesses.len() < go.order {
        return Err(Error::Budget(format!(
            "witness search found {} of {} admissible types",
            witnesses.len(),
            go.order
        )));
    }
    let all = k.cm_types();
    let admissible_types: Vec<CMType> = witnesses.keys().map(|&i| all[i].clone()).collect();
    let non_admissible: Vec<CMType> =
        all.iter().enumerate().filter(|(i, _)| !witnesses.contains_key(i)).map(|(_, t)| t.clone()).collect();
    Ok(ExistenceReport { relative_ramified: go.relative_ramified, group_order: go.order, admissible_types, witnesses, non_admissible })
}

pub fn admissible_types(ar: &Arith) -> Result<ExistenceReport> {
    admissible_types_seeded(ar, None)
}

/// Witness for one type, or None when the orbit count excludes it.
pub fn solve(ar: &Arith, t: &CMType) -> Result<Option<SkewObject1>> {
    ar.k.validate_type(t)?;
    let rep = admissible_types(ar)?;
    Ok(rep.witnesses.get(&ar.k.cm_type_index(t)).cloned())
}

impl ExistenceReport {
    /// The pair (c, r) carrying the witness of `from` to the witness of `to`.
    pub fn transporter(&self, ar: &Arith, from: usize, to: usize) -> Result<(FracIdeal, Elem)> {
        let a = self.witnesses.get(&from).ok_or_else(|| Error::invalid("admissible", "source type has no witness"))?;
        let b = self.witnesses.get(&to).ok_or_else(|| Error::invalid("admissible", "target type has no witness"))?;
        serre::transporter(ar, a, b)
    }

    pub fn to_json(&self, ar: &Arith) -> serde_json::Value {
        let k = &ar.k;
        serde_json::json!({
            "field": k.name,
            "relative_ramified": self.relative_ramified,
            "group_order": self.group_order,
            "admissible_types": self.admissible_types.iter().map(|t| k.cm_type_index(t)).collect::<Vec<_>>(),
            "non_admissible_types": self.non_admissible.iter().map(|t| k.cm_type_index(t)).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|(i, w)| (i.to_string(), w.to_json(k))).collect::<serde_json::Map<_, _>>(),
        })
    }
}
