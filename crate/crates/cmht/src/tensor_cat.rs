//! Morphism words in X (x)_C Y for a 2-group C, their reduction to the form
//! omega_a o (phi (x) psi), and evaluation in a concrete lattice model.
//!
//! Parenthesization of objects is flattened: an X-object is a base label with
//! letters of C acting on the right, a Y-object a base label with letters
//! acting on the left. Both sides store letters from the base outward, so a
//! morphism acting on X (resp. Y) keeps its step list when more letters are
//! added on the outside (phi a, a^{-1} psi).

use crate::expr::elem_from_json;
use crate::field::{CMField, Elem};
use crate::herm::{self, KMat};
use crate::ideal::{self, FracIdeal};
use crate::linalg::Q;
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: &str, inv: bool) -> Letter {
        Letter { gen: gen.to_string(), inv }
    }
    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen.clone(), inv: !self.inv }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// Inverse of a word in written order.
pub fn word_inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn fmt_word(w: &[Letter]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    X,
    Y,
}

/// One side of an object: base label and letters stored from the base outward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    pub base: String,
    pub letters: Vec<Letter>,
}

impl Half {
    /// Letters in written order (left to right as printed).
    pub fn written(&self, side: Side) -> Vec<Letter> {
        match side {
            Side::X => self.letters.clone(),
            Side::Y => self.letters.iter().rev().cloned().collect(),
        }
    }

    pub fn fmt(&self, side: Side) -> String {
        let w = self.written(side);
        let mut parts: Vec<String> = w.iter().map(|l| l.to_string()).collect();
        match side {
            Side::X => parts.insert(0, self.base.clone()),
            Side::Y => parts.push(self.base.clone()),
        }
        parts.join(".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj {
    pub x: Half,
    pub y: Half,
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x) {}", self.x.fmt(Side::X), self.y.fmt(Side::Y))
    }
}

fn parse_letter(s: &str) -> Result<Letter> {
    let (g, inv) = match s.strip_suffix("^-1") {
        Some(g) => (g, true),
        None => (s, false),
    };
    if g.is_empty() || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::malformed(format!("bad letter '{}'", s)));
    }
    Ok(Letter::new(g, inv))
}

/// A word of C in written order: `a.b^-1`, or `e` for the unit.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    if s == "e" {
        return Ok(vec![]);
    }
    s.split('.').map(parse_letter).collect()
}

/// `X0.a.b` for side X, `a.b.Y0` for side Y.
pub fn parse_half(s: &str, side: Side) -> Result<Half> {
    let parts: Vec<&str> = s.split('.').collect();
    let (base, rest) = match side {
        Side::X => (parts[0], &parts[1..]),
        Side::Y => (parts[parts.len() - 1], &parts[..parts.len() - 1]),
    };
    if base.is_empty() || base.contains('^') {
        return Err(Error::malformed(format!("bad object '{}'", s)));
    }
    let mut letters: Vec<Letter> = rest.iter().map(|p| parse_letter(p)).collect::<Result<_>>()?;
    if side == Side::Y {
        letters.reverse();
    }
    Ok(Half { base: base.to_string(), letters })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Label(String),
    /// Contract the pair at stored positions i, i+1 (a letter next to its inverse).
    Contract(usize),
    /// Insert the pair (l, l^-1) at stored positions i, i+1.
    Expand(usize, Letter),
}

impl Step {
    fn is_structural(&self) -> bool {
        !matches!(self, Step::Label(_))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Label(n) => write!(f, "{}", n),
            Step::Contract(i) => write!(f, "c@{}", i),
            Step::Expand(i, l) => write!(f, "e@{}:{}", i, l),
        }
    }
}

pub fn fmt_steps(s: &[Step]) -> String {
    if s.is_empty() {
        "id".into()
    } else {
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_steps(s: &str) -> Result<Vec<Step>> {
    if s == "id" {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            if let Some(r) = t.strip_prefix("c@") {
                return Ok(Step::Contract(r.parse().map_err(|_| Error::malformed(format!("bad step '{}'", t)))?));
            }
            if let Some(r) = t.strip_prefix("e@") {
                let (i, l) = r.split_once(':').ok_or_else(|| Error::malformed(format!("bad step '{}'", t)))?;
                let i = i.parse().map_err(|_| Error::malformed(format!("bad step '{}'", t)))?;
                return Ok(Step::Expand(i, parse_letter(l)?));
            }
            if t.is_empty() || !t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::malformed(format!("bad label '{}'", t)));
            }
            Ok(Step::Label(t.to_string()))
        })
        .collect()
}

/// Typing of an atomic morphism: it consumes the `src` prefix and produces `tgt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelDecl {
    pub side: Side,
    pub src: Half,
    pub tgt: Half,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decls {
    pub labels: BTreeMap<String, LabelDecl>,
}

impl Decls {
    fn apply(&self, side: Side, h: &Half, step: &Step) -> Result<Half> {
        let mut out = h.clone();
        match step {
            Step::Label(n) => {
                let d = self.labels.get(n).ok_or_else(|| Error::malformed(format!("undeclared label '{}'", n)))?;
                if d.side != side {
                    return Err(Error::invalid("typing", format!("label '{}' acts on the other side", n)));
                }
                if h.base != d.src.base || !h.letters.starts_with(&d.src.letters) {
                    return Err(Error::invalid(
                        "typing",
                        format!("label '{}' expects {} but the object is {}", n, d.src.fmt(side), h.fmt(side)),
                    ));
                }
                out.base = d.tgt.base.clone();
                out.letters = d.tgt.letters.clone();
                out.letters.extend_from_slice(&h.letters[d.src.letters.len()..]);
            }
            Step::Contract(i) => {
                if *i + 1 >= h.letters.len() || h.letters[*i + 1] != h.letters[*i].inverse() {
                    return Err(Error::invalid("typing", format!("no cancelling pair at {} in {}", i, h.fmt(side))));
                }
                out.letters.drain(*i..*i + 2);
            }
            Step::Expand(i, l) => {
                if *i > h.letters.len() {
                    return Err(Error::invalid("typing", format!("expansion position {} out of range", i)));
                }
                out.letters.insert(*i, l.inverse());
                out.letters.insert(*i, l.clone());
            }
        }
        Ok(out)
    }

    pub fn run(&self, side: Side, h: &Half, steps: &[Step]) -> Result<Half> {
        let mut cur = h.clone();
        for s in steps {
            cur = self.apply(side, &cur, s)?;
        }
        Ok(cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// phi (x) psi given by step lists on each side.
    Pure { x: Vec<Step>, y: Vec<Step> },
    /// alpha_{X,a,Y}: Xa (x) Y -> X (x) aY, moving the written word a.
    Assoc(Vec<Letter>),
    /// alpha'_{X,a,Y}: X (x) aY -> Xa (x) Y.
    AssocInv(Vec<Letter>),
}

impl Symbol {
    fn is_assoc(&self) -> bool {
        !matches!(self, Symbol::Pure { .. })
    }
    fn pure(x: Vec<Step>, y: Vec<Step>) -> Symbol {
        Symbol::Pure { x, y }
    }
    fn id() -> Symbol {
        Symbol::Pure { x: vec![], y: vec![] }
    }
}

fn apply_symbol(d: &Decls, o: &Obj, s: &Symbol) -> Result<Obj> {
    match s {
        Symbol::Pure { x, y } => Ok(Obj { x: d.run(Side::X, &o.x, x)?, y: d.run(Side::Y, &o.y, y)? }),
        Symbol::Assoc(a) => {
            let n = o.x.letters.len();
            if n < a.len() || o.x.letters[n - a.len()..] != a[..] {
                return Err(Error::invalid("typing", format!("associator moves {} but the object is {}", fmt_word(a), o)));
            }
            let mut out = o.clone();
            out.x.letters.truncate(n - a.len());
            out.y.letters.extend(a.iter().rev().cloned());
            Ok(out)
        }
        Symbol::AssocInv(a) => {
            let m = o.y.letters.len();
            let rev: Vec<Letter> = a.iter().rev().cloned().collect();
            if m < a.len() || o.y.letters[m - a.len()..] != rev[..] {
                return Err(Error::invalid("typing", format!("inverse associator moves {} but the object is {}", fmt_word(a), o)));
            }
            let mut out = o.clone();
            out.y.letters.truncate(m - a.len());
            out.x.letters.extend(a.iter().cloned());
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub decls: Decls,
    pub src: Obj,
    pub syms: Vec<Symbol>,
}

impl Word {
    pub fn target(&self) -> Result<Obj> {
        let mut o = self.src.clone();
        for s in &self.syms {
            o = apply_symbol(&self.decls, &o, s)?;
        }
        Ok(o)
    }

    pub fn assoc_count(&self) -> usize {
        self.syms.iter().filter(|s| s.is_assoc()).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, d) in &self.decls.labels {
            let kw = if d.side == Side::X { "xmor" } else { "ymor" };
            out += &format!("{} {} {} -> {}\n", kw, n, d.src.fmt(d.side), d.tgt.fmt(d.side));
        }
        out += &format!("src {} {}\n", self.src.x.fmt(Side::X), self.src.y.fmt(Side::Y));
        let mut o = self.src.clone();
        for s in &self.syms {
            match s {
                Symbol::Pure { x, y } => out += &format!("PT {} {}\n", fmt_steps(x), fmt_steps(y)),
                Symbol::Assoc(a) => {
                    let base = Half { base: o.x.base.clone(), letters: o.x.letters[..o.x.letters.len() - a.len()].to_vec() };
                    out += &format!("A {} {} {}\n", base.fmt(Side::X), fmt_word(a), o.y.fmt(Side::Y));
                }
                Symbol::AssocInv(a) => {
                    let base = Half { base: o.y.base.clone(), letters: o.y.letters[..o.y.letters.len() - a.len()].to_vec() };
                    out += &format!("A' {} {} {}\n", o.x.fmt(Side::X), fmt_word(a), base.fmt(Side::Y));
                }
            }
            o = apply_symbol(&self.decls, &o, s).expect("well-typed word");
        }
        out
    }
}

/// Parse the line-oriented word format:
///
/// ```text
/// xmor f1 X0.a -> X1
/// ymor p1 a.Y0 -> Y1
/// src X0.a Y0            # optional when the first symbol is an associator
/// A X0 a Y0
/// PT f1 p1
/// A' X1 b Y1
/// ```
pub fn parse_word_text(text: &str) -> Result<Word> {
    let mut decls = Decls::default();
    let mut src: Option<Obj> = None;
    let mut syms = vec![];
    let mut first_obj: Option<Obj> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::malformed(format!("line {}: cannot parse '{}'", ln + 1, line));
        match toks[0] {
            "xmor" | "ymor" => {
                let side = if toks[0] == "xmor" { Side::X } else { Side::Y };
                if toks.len() != 5 || toks[3] != "->" {
                    return Err(bad());
                }
                let d = LabelDecl { side, src: parse_half(toks[2], side)?, tgt: parse_half(toks[4], side)? };
                if decls.labels.insert(toks[1].to_string(), d).is_some() {
                    return Err(Error::malformed(format!("label '{}' declared twice", toks[1])));
                }
            }
            "src" => {
                if toks.len() != 3 {
                    return Err(bad());
                }
                src = Some(Obj { x: parse_half(toks[1], Side::X)?, y: parse_half(toks[2], Side::Y)? });
            }
            "PT" => {
                if toks.len() != 3 {
                    return Err(bad());
                }
                syms.push(Symbol::pure(parse_steps(toks[1])?, parse_steps(toks[2])?));
            }
            "A" | "A'" => {
                if toks.len() != 4 {
                    return Err(bad());
                }
                let x = parse_half(toks[1], Side::X)?;
                let a = parse_word(toks[2])?;
                let y = parse_half(toks[3], Side::Y)?;
                let o = if toks[0] == "A" {
                    let mut xs = x.clone();
                    xs.letters.extend(a.iter().cloned());
                    Obj { x: xs, y }
                } else {
                    let mut ys = y.clone();
                    ys.letters.extend(a.iter().rev().cloned());
                    Obj { x, y: ys }
                };
                if syms.is_empty() && first_obj.is_none() {
                    first_obj = Some(o.clone());
                }
                syms.push(if toks[0] == "A" { Symbol::Assoc(a) } else { Symbol::AssocInv(a) });
            }
            _ => return Err(bad()),
        }
    }
    let src = src.or(first_obj).ok_or_else(|| Error::malformed("word needs a 'src' line"))?;
    let w = Word { decls, src, syms };
    // check the written associator objects against the running object
    check_assoc_objects(text, &w)?;
    w.target()?;
    Ok(w)
}

fn check_assoc_objects(text: &str, w: &Word) -> Result<()> {
    let mut o = w.src.clone();
    let mut i = 0;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() || !matches!(toks[0], "PT" | "A" | "A'") {
            continue;
        }
        if toks[0] != "PT" {
            let x = parse_half(toks[1], Side::X)?;
            let a = parse_word(toks[2])?;
            let y = parse_half(toks[3], Side::Y)?;
            let expect = if toks[0] == "A" {
                let mut xs = x;
                xs.letters.extend(a.iter().cloned());
                Obj { x: xs, y }
            } else {
                let mut ys = y;
                ys.letters.extend(a.iter().rev().cloned());
                Obj { x, y: ys }
            };
            if expect != o {
                return Err(Error::invalid("typing", format!("associator source {} does not match {}", expect, o)));
            }
        }
        o = apply_symbol(&w.decls, &o, &w.syms[i])?;
        i += 1;
    }
    Ok(())
}

// ---- structural step lists

/// s[..p] ++ u ++ inv(u reversed) ++ s[p..], in stored order.
fn expand_block(p: usize, u: &[Letter]) -> Vec<Step> {
    u.iter().enumerate().map(|(j, l)| Step::Expand(p + j, l.clone())).collect()
}

/// Remove a block u ++ inv(u reversed) of length 2r starting at p.
fn contract_block(p: usize, r: usize) -> Vec<Step> {
    (0..r).rev().map(|j| Step::Contract(p + j)).collect()
}

/// Leftmost-first contraction sequence of a letter string to its reduced form.
fn reduction_path(s: &[Letter]) -> (Vec<Step>, Vec<Letter>) {
    let mut cur = s.to_vec();
    let mut steps = vec![];
    'outer: loop {
        for i in 0..cur.len().saturating_sub(1) {
            if cur[i + 1] == cur[i].inverse() {
                steps.push(Step::Contract(i));
                cur.drain(i..i + 2);
                continue 'outer;
            }
        }
        return (steps, cur);
    }
}

/// Canonical structural path from s to t (same reduced form required).
fn canonical_path(s: &[Letter], t: &[Letter]) -> Result<Vec<Step>> {
    if s == t {
        return Ok(vec![]);
    }
    let (down, rs) = reduction_path(s);
    let (tdown, rt) = reduction_path(t);
    if rs != rt {
        return Err(Error::invalid("typing", "structural run between words with different reductions"));
    }
    // replay t's reduction backwards as expansions
    let mut states = vec![t.to_vec()];
    let mut cur = t.to_vec();
    for st in &tdown {
        if let Step::Contract(i) = st {
            cur.drain(*i..*i + 2);
            states.push(cur.clone());
        }
    }
    let mut up = vec![];
    for (k, st) in tdown.iter().enumerate().rev() {
        if let Step::Contract(i) = st {
            up.push(Step::Expand(*i, states[k][*i].clone()));
        }
    }
    let mut out = down;
    out.extend(up);
    Ok(out)
}

/// Replace every maximal run of structural steps by the canonical path between its ends.
pub fn canonicalize(d: &Decls, side: Side, src: &Half, steps: &[Step]) -> Result<Vec<Step>> {
    let mut out = vec![];
    let mut cur = src.clone();
    let mut i = 0;
    while i < steps.len() {
        if !steps[i].is_structural() {
            cur = d.apply(side, &cur, &steps[i])?;
            out.push(steps[i].clone());
            i += 1;
            continue;
        }
        let start = cur.clone();
        while i < steps.len() && steps[i].is_structural() {
            cur = d.apply(side, &cur, &steps[i])?;
            i += 1;
        }
        out.extend(canonical_path(&start.letters, &cur.letters)?);
    }
    Ok(out)
}

// ---- normalization

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// omega_{a,X',Y'} o (phi (x) psi)
    Forward,
    /// (phi (x) psi) o omega_{a,X,Y}^{-1}
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub a: Vec<Letter>,
    pub phi: Vec<Step>,
    pub psi: Vec<Step>,
    pub direction: Direction,
    pub src: Obj,
    pub tgt: Obj,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub nf: NormalForm,
    pub trace: Vec<String>,
}

fn omega_symbols(a: &[Letter], y_target_len: usize) -> Vec<Symbol> {
    // (X'.a ; a^-1.Y') -> (X' ; a.a^-1.Y') -> (X' ; Y')
    vec![Symbol::Assoc(a.to_vec()), Symbol::pure(vec![], contract_block(y_target_len, a.len()))]
}

fn omega_inv_symbols(a: &[Letter], y_len: usize) -> Vec<Symbol> {
    // (X ; Y) -> (X ; a.a^-1.Y) -> (X.a ; a^-1.Y)
    let u: Vec<Letter> = word_inverse(a).into_iter().rev().collect();
    vec![Symbol::pure(vec![], expand_block(y_len, &u)), Symbol::AssocInv(a.to_vec())]
}

impl NormalForm {
    pub fn to_word(&self, decls: &Decls) -> Word {
        let mut syms = vec![];
        match self.direction {
            Direction::Forward => {
                syms.push(Symbol::pure(self.phi.clone(), self.psi.clone()));
                syms.extend(omega_symbols(&self.a, self.tgt.y.letters.len()));
            }
            Direction::Reverse => {
                syms.extend(omega_inv_symbols(&self.a, self.src.y.letters.len()));
                syms.push(Symbol::pure(self.phi.clone(), self.psi.clone()));
            }
        }
        Word { decls: decls.clone(), src: self.src.clone(), syms }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": fmt_word(&self.a),
            "phi": fmt_steps(&self.phi),
            "psi": fmt_steps(&self.psi),
            "direction": match self.direction { Direction::Forward => "omega o (phi x psi)", Direction::Reverse => "(phi x psi) o omega^-1" },
            "source": self.src.to_string(),
            "target": self.tgt.to_string(),
        })
    }
}

fn fuse(d: &Decls, src: &Obj, syms: Vec<Symbol>, trace: &mut Vec<String>) -> Result<Vec<Symbol>> {
    let mut out: Vec<Symbol> = vec![];
    for s in syms {
        match (out.last_mut(), &s) {
            (Some(Symbol::Pure { x, y }), Symbol::Pure { x: x2, y: y2 }) => {
                if !(x2.is_empty() && y2.is_empty()) {
                    trace.push("fuse pure tensors (relation I)".into());
                }
                x.extend(x2.iter().cloned());
                y.extend(y2.iter().cloned());
            }
            _ => out.push(s),
        }
    }
    // relation III: alpha followed by its inverse, with nothing between
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..out.len().saturating_sub(1) {
            let cancel = match (&out[i], &out[i + 1]) {
                (Symbol::Assoc(a), Symbol::AssocInv(b)) | (Symbol::AssocInv(a), Symbol::Assoc(b)) => a == b,
                _ => false,
            };
            if cancel {
                trace.push(format!("cancel associator pair on {} (relation III)", fmt_word(out_word(&out[i]))));
                out.drain(i..i + 2);
                changed = true;
                break;
            }
        }
        if changed {
            let merged = std::mem::take(&mut out);
            out = fuse(d, src, merged, trace)?;
        }
    }
    // canonical structural runs
    let mut o = src.clone();
    for s in out.iter_mut() {
        if let Symbol::Pure { x, y } = s {
            *x = canonicalize(d, Side::X, &o.x, x)?;
            *y = canonicalize(d, Side::Y, &o.y, y)?;
        }
        o = apply_symbol(d, &o, s)?;
    }
    Ok(out)
}

fn out_word(s: &Symbol) -> &[Letter] {
    match s {
        Symbol::Assoc(a) | Symbol::AssocInv(a) => a,
        Symbol::Pure { .. } => &[],
    }
}

/// Ensure the word alternates Pure, assoc, Pure, ..., Pure.
fn pad(syms: Vec<Symbol>) -> Vec<Symbol> {
    let mut out = vec![];
    for s in syms {
        let need = match out.last() {
            None => s.is_assoc(),
            Some(p) => s.is_assoc() && Symbol::is_assoc(p),
        };
        if need {
            out.push(Symbol::id());
        }
        out.push(s);
    }
    if out.last().is_none_or(|s| s.is_assoc()) {
        out.push(Symbol::id());
    }
    out
}

/// One redlem step on assoc1, (phi (x) psi), assoc2 starting at object `o`.
/// Returns the replacement Pure, assoc, Pure.
fn redlem(d: &Decls, o: &Obj, a1: &Symbol, mid: &Symbol, a2: &Symbol) -> Result<(Vec<Symbol>, String)> {
    let (phi, psi) = match mid {
        Symbol::Pure { x, y } => (x.clone(), y.clone()),
        _ => unreachable!("middle symbol is pure"),
    };
    let o1 = apply_symbol(d, o, a1)?;
    let o2 = apply_symbol(d, &o1, mid)?;
    let o3 = apply_symbol(d, &o2, a2)?;
    let m = o.y.letters.len();
    let n = o1.x.letters.len();
    Ok(match (a1, a2) {
        (Symbol::Assoc(a), Symbol::Assoc(b)) => {
            let r = a.len();
            let mut y2 = expand_block(m, &a.iter().rev().cloned().collect::<Vec<_>>());
            y2.extend(psi);
            let mut moved = b.clone();
            moved.extend(a.iter().cloned());
            (
                vec![
                    Symbol::pure(phi, y2),
                    Symbol::Assoc(moved),
                    Symbol::pure(vec![], contract_block(o3.y.letters.len() - b.len(), r)),
                ],
                "redlem (alpha, alpha)".into(),
            )
        }
        (Symbol::AssocInv(a), Symbol::AssocInv(b)) => {
            let r = a.len();
            let mut x2 = expand_block(o.x.letters.len(), a);
            x2.extend(phi);
            let mut moved = a.clone();
            moved.extend(b.iter().cloned());
            let xp = o3.x.letters.len() - b.len();
            (
                vec![Symbol::pure(x2, psi), Symbol::AssocInv(moved), Symbol::pure(contract_block(xp, r), vec![])],
                "redlem (alpha', alpha')".into(),
            )
        }
        (Symbol::Assoc(a), Symbol::AssocInv(b)) => {
            let r = a.len();
            let mut y2 = expand_block(m, &a.iter().rev().cloned().collect::<Vec<_>>());
            y2.extend(psi);
            let mut moved = word_inverse(a);
            moved.extend(b.iter().cloned());
            let xp = o2.x.letters.len();
            let _ = n;
            (
                vec![Symbol::pure(phi, y2), Symbol::AssocInv(moved), Symbol::pure(contract_block(xp, r), vec![])],
                "redlem (alpha, alpha')".into(),
            )
        }
        (Symbol::AssocInv(a), Symbol::Assoc(b)) => {
            let r = a.len();
            let mut x2 = expand_block(o.x.letters.len(), a);
            x2.extend(phi);
            let mut moved = b.clone();
            moved.extend(word_inverse(a));
            let yp = o2.y.letters.len();
            (
                vec![Symbol::pure(x2, psi), Symbol::Assoc(moved), Symbol::pure(vec![], contract_block(yp, r))],
                "redlem (alpha', alpha)".into(),
            )
        }
        _ => unreachable!("outer symbols are associators"),
    })
}

pub fn normalize(w: &Word) -> Result<Normalized> {
    normalize_dir(w, Direction::Forward)
}

pub fn normalize_dir(w: &Word, dir: Direction) -> Result<Normalized> {
    let d = &w.decls;
    let tgt = w.target()?;
    let mut trace = vec![];
    let mut syms = fuse(d, &w.src, pad(w.syms.clone()), &mut trace)?;
    syms = pad(syms);
    while syms.iter().filter(|s| s.is_assoc()).count() >= 2 {
        // leftmost assoc, pure, assoc pattern
        let i = (0..syms.len() - 2)
            .find(|&i| syms[i].is_assoc() && !syms[i + 1].is_assoc() && syms[i + 2].is_assoc())
            .expect("padded word has an assoc-pure-assoc pattern");
        let mut o = w.src.clone();
        for s in &syms[..i] {
            o = apply_symbol(d, &o, s)?;
        }
        let (rep, name) = redlem(d, &o, &syms[i], &syms[i + 1], &syms[i + 2])?;
        trace.push(name);
        syms.splice(i..i + 3, rep);
        syms = pad(fuse(d, &w.src, syms, &mut trace)?);
    }
    let nf = absorb(d, &w.src, &tgt, &syms, dir, &mut trace)?;
    Ok(Normalized { nf, trace })
}

fn absorb(d: &Decls, src: &Obj, tgt: &Obj, syms: &[Symbol], dir: Direction, trace: &mut Vec<String>) -> Result<NormalForm> {
    let (p1, assoc, p2) = match syms {
        [Symbol::Pure { x, y }] => ((x.clone(), y.clone()), None, (vec![], vec![])),
        [Symbol::Pure { x: x1, y: y1 }, a, Symbol::Pure { x: x2, y: y2 }] => {
            ((x1.clone(), y1.clone()), Some(a.clone()), (x2.clone(), y2.clone()))
        }
        _ => return Err(Error::invalid("normal form", "reduction left an unexpected shape")),
    };
    let o1 = Obj { x: d.run(Side::X, &src.x, &p1.0)?, y: d.run(Side::Y, &src.y, &p1.1)? };
    let (a, mut phi, mut psi) = match (&assoc, &dir) {
        (None, _) => (vec![], p1.0, p1.1),
        (Some(Symbol::Assoc(a)), Direction::Forward) => {
            let mut psi = p1.1;
            psi.extend(expand_block(o1.y.letters.len(), &a.iter().rev().cloned().collect::<Vec<_>>()));
            psi.extend(p2.1.clone());
            let mut phi = p1.0;
            phi.extend(p2.0.clone());
            (a.clone(), phi, psi)
        }
        (Some(Symbol::AssocInv(a)), Direction::Forward) => {
            let mut phi = p1.0;
            phi.extend(expand_block(o1.x.letters.len(), a));
            phi.extend(p2.0.clone());
            let mut psi = p1.1;
            psi.extend(p2.1.clone());
            (word_inverse(a), phi, psi)
        }
        (Some(Symbol::Assoc(a)), Direction::Reverse) => {
            // omega_{a^-1}^{-1}: (X ; Y) -> (X.a^-1 ; a.Y)
            let r = a.len();
            let mut phi = p1.0;
            phi.extend(contract_block(o1.x.letters.len() - r, r));
            phi.extend(p2.0.clone());
            let mut psi = p1.1;
            psi.extend(p2.1.clone());
            (word_inverse(a), phi, psi)
        }
        (Some(Symbol::AssocInv(a)), Direction::Reverse) => {
            let r = a.len();
            let mut phi = p1.0;
            phi.extend(p2.0.clone());
            let mut psi = p1.1;
            psi.extend(contract_block(o1.y.letters.len() - r, r));
            psi.extend(p2.1.clone());
            (a.clone(), phi, psi)
        }
        _ => unreachable!(),
    };
    if assoc.is_some() || !a.is_empty() {
        trace.push(format!("absorb associator into omega for a = {}", fmt_word(&a)));
    }
    // freely reduce a, moving each cancelled pair into phi and psi
    let mut a = a;
    let mut cuts: Vec<(usize, Letter)> = vec![];
    while let Some(i) = (0..a.len().saturating_sub(1)).find(|&i| a[i + 1] == a[i].inverse()) {
        cuts.push((i, a[i].clone()));
        a.drain(i..i + 2);
    }
    if !cuts.is_empty() {
        trace.push(format!("reduce omega object to {}", fmt_word(&a)));
        match dir {
            Direction::Forward => {
                let (nx, ny) = (tgt.x.letters.len(), tgt.y.letters.len());
                for (i, _) in &cuts {
                    phi.push(Step::Contract(nx + i));
                    psi.push(Step::Contract(ny + i));
                }
            }
            Direction::Reverse => {
                let (nx, ny) = (src.x.letters.len(), src.y.letters.len());
                let mut px = vec![];
                let mut py = vec![];
                for (i, l) in cuts.iter().rev() {
                    px.push(Step::Expand(nx + i, l.clone()));
                    py.push(Step::Expand(ny + i, l.inverse()));
                }
                px.extend(phi);
                py.extend(psi);
                phi = px;
                psi = py;
            }
        }
    }
    // canonical structural runs on the pure part
    let pure_src = match dir {
        Direction::Forward => src.clone(),
        Direction::Reverse => {
            let mut o = src.clone();
            for s in omega_inv_symbols(&a, src.y.letters.len()) {
                o = apply_symbol(d, &o, &s)?;
            }
            o
        }
    };
    phi = canonicalize(d, Side::X, &pure_src.x, &phi)?;
    psi = canonicalize(d, Side::Y, &pure_src.y, &psi)?;
    let nf = NormalForm { a, phi, psi, direction: dir, src: src.clone(), tgt: tgt.clone() };
    let back = nf.to_word(d).target()?;
    if back != *tgt {
        return Err(Error::invalid("normal form", "normal form does not reach the word's target"));
    }
    Ok(nf)
}

/// Concatenate two words, fusing pure tensors and cancelling inverse associators.
pub fn compose(w1: &Word, w2: &Word) -> Result<Word> {
    if w1.target()? != w2.src {
        return Err(Error::invalid("typing", "target of the first word is not the source of the second"));
    }
    let mut decls = w1.decls.clone();
    for (k, v) in &w2.decls.labels {
        match decls.labels.get(k) {
            Some(old) if old != v => return Err(Error::invalid("typing", format!("label '{}' declared differently", k))),
            _ => {
                decls.labels.insert(k.clone(), v.clone());
            }
        }
    }
    let mut syms = w1.syms.clone();
    syms.extend(w2.syms.iter().cloned());
    let mut trace = vec![];
    let syms = fuse(&decls, &w1.src, syms, &mut trace)?;
    // drop identity pure tensors
    let syms: Vec<Symbol> = syms.into_iter().filter(|s| *s != Symbol::id()).collect();
    let syms = fuse(&decls, &w1.src, syms, &mut trace)?;
    Ok(Word { decls, src: w1.src.clone(), syms })
}

// ---- evaluation model

/// Concrete data: letters are ideals with a chosen inverse ideal and the
/// contraction x (x) y -> c x y; X-bases are O_K^n, Y-bases ideals; labels
/// are matrices (X) and scalars (Y).
#[derive(Debug)]
pub struct Model {
    pub k: CMField,
    pub letters: BTreeMap<String, LetterData>,
    pub rank: usize,
    pub y_bases: BTreeMap<String, FracIdeal>,
    pub xmor: BTreeMap<String, KMat>,
    pub ymor: BTreeMap<String, Elem>,
}

#[derive(Clone, Debug)]
pub struct LetterData {
    pub ideal: FracIdeal,
    pub inverse: FracIdeal,
    /// I_a: a (x) a^-1 -> e is x (x) y -> c x y.
    pub c: Elem,
    /// I_{a^-1}: a^-1 (x) a -> e; compatible with I_a when equal to c.
    pub c_inv: Elem,
}

impl Model {
    pub fn from_json(v: &serde_json::Value) -> Result<Model> {
        let fname = v.get("field").and_then(|x| x.as_str()).ok_or_else(|| Error::malformed("model needs \"field\""))?;
        let k = crate::db::resolve(fname)?;
        let mut letters = BTreeMap::new();
        if let Some(ls) = v.get("letters").and_then(|x| x.as_object()) {
            for (name, d) in ls {
                let id = ideal::parse_ideal(&k, d.get("ideal").and_then(|x| x.as_str()).unwrap_or("OK"))?;
                let inv = match d.get("inverse").and_then(|x| x.as_str()) {
                    Some(s) => ideal::parse_ideal(&k, s)?,
                    None => ideal::conj(&k, &id),
                };
                let c = match d.get("c") {
                    Some(x) => elem_from_json(&k, x)?,
                    None => k.one(),
                };
                let c_inv = match d.get("c_inv") {
                    Some(x) => elem_from_json(&k, x)?,
                    None => c.clone(),
                };
                letters.insert(name.clone(), LetterData { ideal: id, inverse: inv, c, c_inv });
            }
        }
        let rank = v.get("rank").and_then(|x| x.as_u64()).unwrap_or(1) as usize;
        let mut y_bases = BTreeMap::new();
        if let Some(ys) = v.get("y_bases").and_then(|x| x.as_object()) {
            for (name, s) in ys {
                let s = s.as_str().ok_or_else(|| Error::malformed("y_bases values are ideal strings"))?;
                y_bases.insert(name.clone(), ideal::parse_ideal(&k, s)?);
            }
        }
        let mut xmor = BTreeMap::new();
        if let Some(xs) = v.get("xmor").and_then(|x| x.as_object()) {
            for (name, m) in xs {
                let mm = crate::expr::matrix_from_json(&k, m)?;
                if mm.len() != rank {
                    return Err(Error::malformed(format!("matrix for '{}' must be {}x{}", name, rank, rank)));
                }
                xmor.insert(name.clone(), mm);
            }
        }
        let mut ymor = BTreeMap::new();
        if let Some(ys) = v.get("ymor").and_then(|x| x.as_object()) {
            for (name, e) in ys {
                ymor.insert(name.clone(), elem_from_json(&k, e)?);
            }
        }
        let m = Model { k, letters, rank, y_bases, xmor, ymor };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let k = &self.k;
        for (n, l) in &self.letters {
            let prod = ideal::mul(k, &l.ideal, &l.inverse);
            for c in [&l.c, &l.c_inv] {
                if ideal::scale(k, &prod, c)? != ideal::unit_ideal(k) {
                    return Err(Error::invalid("contraction", format!("c a a^-1 != O_K for letter '{}'", n)));
                }
            }
        }
        Ok(())
    }

    fn letter(&self, l: &Letter) -> Result<&LetterData> {
        self.letters.get(&l.gen).ok_or_else(|| Error::malformed(format!("model has no letter '{}'", l.gen)))
    }

    fn letter_ideal(&self, l: &Letter) -> Result<FracIdeal> {
        let d = self.letter(l)?;
        Ok(if l.inv { d.inverse.clone() } else { d.ideal.clone() })
    }

    /// c for I_l, where l is the first letter of the pair in written order.
    fn contraction(&self, l: &Letter) -> Result<Elem> {
        let d = self.letter(l)?;
        Ok(if l.inv { d.c_inv.clone() } else { d.c.clone() })
    }

    /// Lattice ideal of a half: product of its letter ideals (times the Y base ideal).
    pub fn half_ideal(&self, side: Side, h: &Half) -> Result<FracIdeal> {
        let k = &self.k;
        let mut out = match side {
            Side::X => ideal::unit_ideal(k),
            Side::Y => self
                .y_bases
                .get(&h.base)
                .cloned()
                .ok_or_else(|| Error::malformed(format!("model has no Y base '{}'", h.base)))?,
        };
        for l in &h.letters {
            out = ideal::mul(k, &out, &self.letter_ideal(l)?);
        }
        Ok(out)
    }

    /// Check that each label maps its source lattice into its target lattice.
    pub fn check_labels(&self, d: &Decls) -> Result<()> {
        let k = &self.k;
        for (n, dl) in &d.labels {
            let hom = ideal::div(k, &self.half_ideal(dl.side, &dl.tgt)?, &self.half_ideal(dl.side, &dl.src)?);
            let vals: Vec<Elem> = match dl.side {
                Side::X => self.xmor.get(n).ok_or_else(|| Error::malformed(format!("no matrix for '{}'", n)))?.iter().flatten().cloned().collect(),
                Side::Y => vec![self.ymor.get(n).ok_or_else(|| Error::malformed(format!("no value for '{}'", n)))?.clone()],
            };
            if vals.iter().any(|v| !v.is_zero() && !hom.contains(k, v)) {
                return Err(Error::invalid("lattice", format!("label '{}' does not map its source lattice into its target", n)));
            }
        }
        Ok(())
    }

    fn eval_steps(&self, d: &Decls, side: Side, h: &Half, steps: &[Step]) -> Result<KMat> {
        let k = &self.k;
        let mut acc = herm::identity(k, self.rank);
        let mut cur = h.clone();
        for s in steps {
            let m = match s {
                Step::Label(n) => match side {
                    Side::X => self.xmor.get(n).cloned().ok_or_else(|| Error::malformed(format!("no matrix for '{}'", n)))?,
                    Side::Y => {
                        let v = self.ymor.get(n).ok_or_else(|| Error::malformed(format!("no value for '{}'", n)))?;
                        herm::mat_scale(k, &herm::identity(k, self.rank), v)
                    }
                },
                Step::Contract(i) => {
                    let first = match side {
                        Side::X => &cur.letters[*i],
                        Side::Y => &cur.letters[*i + 1],
                    };
                    herm::mat_scale(k, &herm::identity(k, self.rank), &self.contraction(first)?)
                }
                Step::Expand(_, l) => {
                    let first = match side {
                        Side::X => l.clone(),
                        Side::Y => l.inverse(),
                    };
                    herm::mat_scale(k, &herm::identity(k, self.rank), &k.inv(&self.contraction(&first)?)?)
                }
            };
            acc = herm::mat_mul(k, &m, &acc);
            cur = d.apply(side, &cur, s)?;
        }
        Ok(acc)
    }

    /// The K-linear map on K^n realizing a word.
    pub fn eval_word(&self, w: &Word) -> Result<KMat> {
        self.check_labels(&w.decls)?;
        self.eval_word_unchecked(w)
    }

    /// Evaluation without the lattice check on labels.
    pub fn eval_word_unchecked(&self, w: &Word) -> Result<KMat> {
        let k = &self.k;
        let mut acc = herm::identity(k, self.rank);
        let mut o = w.src.clone();
        for s in &w.syms {
            if let Symbol::Pure { x, y } = s {
                let mx = self.eval_steps(&w.decls, Side::X, &o.x, x)?;
                let my = self.eval_steps(&w.decls, Side::Y, &o.y, y)?;
                acc = herm::mat_mul(k, &herm::mat_mul(k, &mx, &my), &acc);
            }
            o = apply_symbol(&w.decls, &o, s)?;
        }
        Ok(acc)
    }

    pub fn eval_normal_form(&self, nf: &NormalForm, d: &Decls) -> Result<KMat> {
        self.eval_word(&nf.to_word(d))
    }
}

// ---- random words

fn random_letters<R: Rng>(rng: &mut R, gens: &[&str], max: usize) -> Vec<Letter> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| Letter::new(gens[rng.gen_range(0..gens.len())], rng.gen_bool(0.5))).collect()
}

/// The bundled evaluation model over Q(sqrt -5): a = (2, 1 + x) with inverse
/// a^sigma and c = 1/2, b = (3, 1 + x) with c = 1/3, o = O_K with c = 1.
pub fn standard_model(rank: usize) -> Result<Model> {
    let v = serde_json::json!({
        "field": "Qsqrt-5",
        "rank": rank,
        "letters": {
            "a": {"ideal": "(2, 1+x)", "c": "1/2"},
            "b": {"ideal": "(3, 1+x)", "c": "1/3"},
            "o": {"ideal": "OK", "c": "1"}
        },
        "y_bases": {"Y0": "OK", "Y1": "(2, 1+x)", "Y2": "(3, 1-x)"}
    });
    Model::from_json(&v)
}

fn random_in_ideal<R: Rng>(k: &CMField, rng: &mut R, id: &FracIdeal) -> Elem {
    loop {
        let mut acc = k.zero();
        for b in id.basis(k) {
            acc = k.add(&acc, &k.scale(&b, &Q::from_integer(rng.gen_range(-2i64..=2).into())));
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// A random well-typed word with the requested numbers of associators and pure
/// tensors, together with label values in `model` (which is extended).
pub fn random_word<R: Rng>(rng: &mut R, model: &mut Model, n_assoc: usize, n_pure: usize) -> Result<Word> {
    let gens = ["a", "b", "o"];
    let xb = ["X0", "X1"];
    let yb = ["Y0", "Y1", "Y2"];
    let mut decls = Decls::default();
    let src = Obj {
        x: Half { base: xb[rng.gen_range(0..2)].into(), letters: random_letters(rng, &gens, 3) },
        y: Half { base: yb[rng.gen_range(0..3)].into(), letters: random_letters(rng, &gens, 2) },
    };
    let mut kinds: Vec<bool> = vec![true; n_assoc];
    kinds.extend(vec![false; n_pure]);
    for i in (1..kinds.len()).rev() {
        let j = rng.gen_range(0..=i);
        kinds.swap(i, j);
    }
    let mut o = src.clone();
    let mut syms = vec![];
    let mut counter = model.xmor.len() + model.ymor.len();
    let mut xnew = vec![];
    let mut ynew = vec![];
    for is_assoc in kinds {
        if is_assoc {
            let to_y = if o.x.letters.is_empty() {
                false
            } else if o.y.letters.is_empty() {
                true
            } else {
                rng.gen_bool(0.5)
            };
            let s = if to_y {
                let r = rng.gen_range(1..=o.x.letters.len().min(3));
                Symbol::Assoc(o.x.letters[o.x.letters.len() - r..].to_vec())
            } else if !o.y.letters.is_empty() {
                let r = rng.gen_range(1..=o.y.letters.len().min(3));
                let moved: Vec<Letter> = o.y.letters[o.y.letters.len() - r..].iter().rev().cloned().collect();
                Symbol::AssocInv(moved)
            } else {
                // nothing to move: add a letter through a pure tensor first
                let l = Letter::new(gens[rng.gen_range(0..3)], false);
                let st = vec![Step::Expand(o.x.letters.len(), l.clone())];
                let p = Symbol::pure(st, vec![]);
                o = apply_symbol(&decls, &o, &p)?;
                syms.push(p);
                Symbol::Assoc(vec![l.inverse()])
            };
            o = apply_symbol(&decls, &o, &s)?;
            syms.push(s);
        } else {
            // fresh labels on random prefixes
            counter += 1;
            let fx = format!("f{}", counter);
            let px = rng.gen_range(0..=o.x.letters.len());
            let xsrc = Half { base: o.x.base.clone(), letters: o.x.letters[..px].to_vec() };
            let xtgt = Half { base: xb[rng.gen_range(0..2)].into(), letters: random_letters(rng, &gens, 2) };
            let k = &model.k;
            let hom = ideal::div(k, &model.half_ideal(Side::X, &xtgt)?, &model.half_ideal(Side::X, &xsrc)?);
            let mut mat;
            loop {
                mat = (0..model.rank).map(|_| (0..model.rank).map(|_| random_in_ideal(k, rng, &hom)).collect()).collect::<KMat>();
                if !herm::det(k, &mat).is_zero() {
                    break;
                }
            }
            xnew.push((fx.clone(), mat));
            decls.labels.insert(fx.clone(), LabelDecl { side: Side::X, src: xsrc, tgt: xtgt });
            counter += 1;
            let py = format!("p{}", counter);
            let qy = rng.gen_range(0..=o.y.letters.len());
            let ysrc = Half { base: o.y.base.clone(), letters: o.y.letters[..qy].to_vec() };
            let ytgt = Half { base: yb[rng.gen_range(0..3)].into(), letters: random_letters(rng, &gens, 2) };
            let hom = ideal::div(k, &model.half_ideal(Side::Y, &ytgt)?, &model.half_ideal(Side::Y, &ysrc)?);
            ynew.push((py.clone(), random_in_ideal(k, rng, &hom)));
            decls.labels.insert(py.clone(), LabelDecl { side: Side::Y, src: ysrc, tgt: ytgt });
            let s = Symbol::pure(vec![Step::Label(fx)], vec![Step::Label(py)]);
            o = apply_symbol(&decls, &o, &s)?;
            syms.push(s);
        }
    }
    model.xmor.extend(xnew);
    model.ymor.extend(ynew);
    Ok(Word { decls, src, syms })
}

pub fn is_identity(k: &CMField, m: &KMat) -> bool {
    *m == herm::identity(k, m.len())
}
