//! `cmht`: JSON front end for the cmht toolkit.
//!
//! Exit codes: 0 success, 1 validation failure (the violated invariant is
//! named in the output), 2 budget exhaustion, 3 malformed input.

use clap::{Args, Parser, Subcommand};
use cmht::expr::{elem_to_json, matrix_from_json, matrix_to_json, parse_elem};
use cmht::field::{CMField, CMType, Elem};
use cmht::herm::{self, LatticeBasis};
use cmht::ideal::{self, Arith, FracIdeal};
use cmht::serre::{self, HermLattice, SkewLatticeN, SkewObject1};
use cmht::tensor_cat::{self as tc, Direction};
use cmht::{db, existence, jphi, suites, Error, Result};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cmht", version, about = "CM fields, skew-hermitian lattices and polarized CM abelian varieties")]
struct Cli {
    /// Compact single-line JSON output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field definitions, embeddings, class group, different
    #[command(subcommand)]
    Field(FieldCmd),
    /// Fractional ideal arithmetic
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Hermitian matrices
    #[command(subcommand)]
    Herm(HermCmd),
    /// Skew-hermitian matrices
    #[command(subcommand)]
    Skew(SkewCmd),
    /// Riemann form dictionary
    #[command(subcommand)]
    Form(FormCmd),
    /// Rank-1 skew objects
    #[command(subcommand)]
    Skew1(Skew1Cmd),
    /// Serre tensor calculus
    #[command(subcommand)]
    Serre(SerreCmd),
    /// Admissible CM types and witnesses
    Exists(ExistsArgs),
    /// The ideal J_Phi and the Lie algebra
    Jphi(JphiArgs),
    /// Morphism words in the tensor product category
    #[command(subcommand)]
    Cat(CatCmd),
    /// Randomized property suites
    Props(PropsArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Parse and validate a field definition
    Check { field: String },
    /// Certified complex embeddings of the generator
    Embeddings {
        field: String,
        /// Precision in bits (default CMHT_PREC or 128)
        #[arg(long)]
        prec: Option<u32>,
    },
    Classgroup { field: String },
    Different { field: String },
}

#[derive(Subcommand)]
enum IdealCmd {
    Mul { field: String, a: String, b: String },
    Inv { field: String, a: String },
    Conj { field: String, a: String },
    /// Principality test with a generator
    Principal { field: String, a: String },
}

#[derive(Subcommand)]
enum HermCmd {
    Posdef { field: String, matrix: String },
}

#[derive(Subcommand)]
enum SkewCmd {
    Negdef {
        field: String,
        matrix: String,
        #[arg(long = "type", default_value_t = 0)]
        ty: usize,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// E -> F -> E on a lattice; input {"E": [[..]], "basis": [[..]] (optional)}
    Roundtrip {
        field: String,
        form: String,
        #[arg(long = "type", default_value_t = 0)]
        ty: usize,
    },
}

#[derive(Subcommand)]
enum Skew1Cmd {
    Make {
        field: String,
        #[arg(long)]
        ideal: String,
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long = "type", default_value_t = 0)]
        ty: usize,
    },
}

#[derive(Subcommand)]
enum SerreCmd {
    /// Hermitian lattice (x) rank-1 skew object
    Tensor { field: String, herm: String, skew1: String },
    /// Skew lattice / rank-1 skew object
    Decompose { field: String, skew: String, skew1: String },
    /// Determinant descent of an odd-rank skew lattice
    DetDescent { field: String, skew: String },
    /// Hom(A, B) for two rank-1 objects
    Hom {
        field: String,
        a: String,
        b: String,
        /// Element of Hom(A, B) to dualize
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
}

#[derive(Args)]
struct ExistsArgs {
    field: String,
    #[arg(long = "type")]
    ty: Option<usize>,
    /// Print only the witness for --type
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct JphiArgs {
    #[command(subcommand)]
    sub: Option<JphiCmd>,
    field: Option<String>,
    #[arg(long = "type", default_value_t = 0)]
    ty: usize,
}

#[derive(Subcommand)]
enum JphiCmd {
    /// Characteristic polynomial of an element of O_K on Lie (x) O_L^n
    Charpoly {
        field: String,
        #[arg(long = "type", default_value_t = 0)]
        ty: usize,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CatCmd {
    Normalize {
        word: String,
        /// Normal form (phi (x) psi) o omega^-1 instead of omega o (phi (x) psi)
        #[arg(long)]
        reverse: bool,
    },
    /// Evaluate a word and its normal form on a model ("standard" for the bundled one)
    Eval {
        word: String,
        model: String,
        #[arg(long)]
        reverse: bool,
    },
}

#[derive(Args)]
struct PropsArgs {
    suite: String,
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (code, out) = match run(cli.cmd) {
        Ok(v) => (0, v),
        Err(e) => {
            eprintln!("cmht: {}", e);
            (exit_code(&e), error_json(&e))
        }
    };
    let text = if cli.json { serde_json::to_string(&out) } else { serde_json::to_string_pretty(&out) };
    println!("{}", text.expect("JSON values serialize"));
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invalid { .. } | Error::Unsupported(_) => 1,
        Error::Budget(_) => 2,
        Error::Malformed(_) => 3,
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Invalid { invariant, detail } => {
            json!({"ok": false, "error": "invalid", "invariant": invariant, "reason": invariant, "detail": detail})
        }
        Error::Unsupported(m) => json!({"ok": false, "error": "unsupported", "detail": m}),
        Error::Budget(m) => json!({"ok": false, "error": "budget", "detail": m}),
        Error::Malformed(m) => json!({"ok": false, "error": "malformed", "detail": m}),
    }
}

fn run(cmd: Cmd) -> Result<Value> {
    match cmd {
        Cmd::Field(c) => field_cmd(c),
        Cmd::Ideal(c) => ideal_cmd(c),
        Cmd::Herm(HermCmd::Posdef { field, matrix }) => {
            let k = db::resolve(&field)?;
            let m = matrix_from_json(&k, &read_json(&matrix)?)?;
            if !herm::is_hermitian(&k, &m) {
                return Err(Error::invalid("hermitian", "matrix is not hermitian"));
            }
            let minors: Vec<String> = herm::leading_minors(&k, &m).iter().map(|x| k.fmt_elem(x)).collect();
            Ok(json!({"field": k.name, "positive": herm::is_positive(&k, &m)?, "leading_minors": minors}))
        }
        Cmd::Skew(SkewCmd::Negdef { field, matrix, ty }) => {
            let k = db::resolve(&field)?;
            let t = cm_type(&k, ty)?;
            let m = matrix_from_json(&k, &read_json(&matrix)?)?;
            if !herm::is_skew_hermitian(&k, &m) {
                return Err(Error::invalid("skew-hermitian", "matrix is not skew-hermitian"));
            }
            Ok(json!({"field": k.name, "type": ty, "negative_definite": herm::is_negative_definite_along(&k, &m, &t)?}))
        }
        Cmd::Form(FormCmd::Roundtrip { field, form, ty }) => form_roundtrip(&field, &form, ty),
        Cmd::Skew1(Skew1Cmd::Make { field, ideal, zeta, ty }) => {
            let ar = arith(&field)?;
            let a = read_ideal(&ar.k, &ideal)?;
            let z = parse_elem(&ar.k, &zeta)?;
            let t = cm_type(&ar.k, ty)?;
            Ok(serre::make_skew1(&ar, &a, &z, &t)?.to_json(&ar.k))
        }
        Cmd::Serre(c) => serre_cmd(c),
        Cmd::Exists(a) => exists_cmd(a),
        Cmd::Jphi(a) => jphi_cmd(a),
        Cmd::Cat(c) => cat_cmd(c),
        Cmd::Props(a) => props_cmd(a),
    }
}

/// Inline JSON, or the path of a JSON file.
fn read_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::malformed(format!("cannot read '{}': {}", arg, e)))?
    };
    serde_json::from_str(&text).map_err(|e| Error::malformed(format!("bad JSON in '{}': {}", arg, e)))
}

fn read_text(arg: &str) -> Result<String> {
    std::fs::read_to_string(arg).map_err(|e| Error::malformed(format!("cannot read '{}': {}", arg, e)))
}

/// Ideal JSON `{"hnf", "denom"}`, a JSON file, or an expression like "(2, 1+x)" or "OK".
fn read_ideal(k: &CMField, arg: &str) -> Result<FracIdeal> {
    let t = arg.trim_start();
    if t.starts_with('{') || std::path::Path::new(arg).is_file() {
        return ideal::ideal_from_json(k, &read_json(arg)?);
    }
    ideal::parse_ideal(k, arg)
}

fn arith(field: &str) -> Result<Arith> {
    Arith::new(db::resolve(field)?)
}

fn cm_type(k: &CMField, ty: usize) -> Result<CMType> {
    if ty >= 1 << k.g {
        return Err(Error::malformed(format!("type index {} out of range (field has {} types)", ty, 1 << k.g)));
    }
    Ok(k.cm_type(ty))
}

fn elem_json(k: &CMField, e: &Elem) -> Value {
    json!({"coords": elem_to_json(e), "str": k.fmt_elem(e)})
}

fn field_cmd(c: FieldCmd) -> Result<Value> {
    match c {
        FieldCmd::Check { field } => {
            let k = db::resolve(&field)?;
            let sha = db::source(&field).ok().map(db::sha256_hex);
            Ok(json!({
                "name": k.name,
                "ok": true,
                "degree": k.degree(),
                "g": k.g,
                "minpoly": k.min_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "discriminant": k.discriminant().to_string(),
                "integral_basis": k.integral_basis().iter().map(|b| k.fmt_elem(b)).collect::<Vec<_>>(),
                "real_subfield_generator": k.fmt_elem(&k.real_gen),
                "sha256": sha,
            }))
        }
        FieldCmd::Embeddings { field, prec } => {
            let k = db::resolve(&field)?;
            let p = prec.unwrap_or_else(cmht::prec);
            if !(16..=1 << 16).contains(&p) {
                return Err(Error::malformed("precision must lie in 16..=65536 bits"));
            }
            let roots: Vec<Value> = k
                .roots(p)
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    let (re, im) = r.to_f64();
                    json!({
                        "index": j,
                        "conjugate": k.conj_index(j),
                        "approx": [re, im],
                        "re": [r.re.lo().to_string(), r.re.hi().to_string()],
                        "im": [r.im.lo().to_string(), r.im.hi().to_string()],
                    })
                })
                .collect();
            Ok(json!({"field": k.name, "prec": p, "embeddings": roots}))
        }
        FieldCmd::Classgroup { field } => {
            let ar = arith(&field)?;
            let cg = ar.class_group()?;
            Ok(json!({
                "field": ar.k.name,
                "order": cg.order,
                "minkowski_bound": cg.bound,
                "generators": cg.generators.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
                "relations": cg.relations.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "representatives": cg.representatives.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
            }))
        }
        FieldCmd::Different { field } => {
            let k = db::resolve(&field)?;
            let d = ideal::different(&k);
            let rr = ideal::relative_ramification(&k)?;
            Ok(json!({
                "field": k.name,
                "different": d.to_json(),
                "norm": d.norm().to_string(),
                "relative_different": rr.relative_different.to_json(),
                "relative_discriminant_norm": rr.relative_discriminant_norm.to_string(),
                "relative_unramified": rr.unramified,
            }))
        }
    }
}

fn ideal_cmd(c: IdealCmd) -> Result<Value> {
    let k = match &c {
        IdealCmd::Mul { field, .. } | IdealCmd::Inv { field, .. } | IdealCmd::Conj { field, .. } | IdealCmd::Principal { field, .. } => {
            db::resolve(field)?
        }
    };
    let r = match c {
        IdealCmd::Mul { a, b, .. } => ideal::mul(&k, &read_ideal(&k, &a)?, &read_ideal(&k, &b)?),
        IdealCmd::Inv { a, .. } => ideal::inv(&k, &read_ideal(&k, &a)?),
        IdealCmd::Conj { a, .. } => ideal::conj(&k, &read_ideal(&k, &a)?),
        IdealCmd::Principal { a, .. } => {
            let a = read_ideal(&k, &a)?;
            let units = ideal::UnitGroup::compute(&k)?;
            let g = ideal::is_principal(&k, &units, &a)?;
            return Ok(json!({
                "ideal": a.to_json(),
                "norm": a.norm().to_string(),
                "principal": g.is_some(),
                "generator": g.as_ref().map(|x| elem_json(&k, x)),
            }));
        }
    };
    let mut v = r.to_json();
    v["norm"] = json!(r.norm().to_string());
    Ok(v)
}

fn form_roundtrip(field: &str, form: &str, ty: usize) -> Result<Value> {
    let k = db::resolve(field)?;
    let t = cm_type(&k, ty)?;
    let v = read_json(form)?;
    let e = rational_matrix(v.get("E").ok_or_else(|| Error::malformed("missing \"E\""))?)?;
    let h = match v.get("basis") {
        Some(b) => {
            let rows = b.as_array().ok_or_else(|| Error::malformed("\"basis\" must be an array of vectors"))?;
            let vecs = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::malformed("basis vectors must be arrays"))?
                        .iter()
                        .map(|x| cmht::expr::elem_from_json(&k, x))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            LatticeBasis::new(&k, vecs)?
        }
        None => {
            if e.is_empty() || e.len() % k.degree() != 0 {
                return Err(Error::malformed("E must be (2g n) x (2g n)"));
            }
            LatticeBasis::standard(&k, e.len() / k.degree())
        }
    };
    if !herm::is_alternating(&e) {
        return Err(Error::invalid("alternating", "E is not alternating"));
    }
    let g = herm::skew_from_alt(&k, &h, &e)?;
    let back = herm::alt_from_skew(&k, &h, &g);
    Ok(json!({
        "field": k.name,
        "type": ty,
        "F": matrix_to_json(&g),
        "skew_hermitian": herm::is_skew_hermitian(&k, &g),
        "E_back": back.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "roundtrip": back == e,
        "riemann": herm::is_riemann(&k, &h, &e, &t)?,
        "riemann_direct": herm::is_riemann_direct(&k, &h, &e, &t)?,
    }))
}

fn rational_matrix(v: &Value) -> Result<Vec<Vec<cmht::linalg::Q>>> {
    let rows = v.as_array().ok_or_else(|| Error::malformed("matrix must be an array of rows"))?;
    let m = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::malformed("matrix rows must be arrays"))?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => cmht::field::parse_q(&n.to_string()),
                    Value::String(s) => cmht::field::parse_q(s),
                    _ => Err(Error::malformed("entries must be rationals")),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::malformed("matrix must be square"));
    }
    Ok(m)
}

fn serre_cmd(c: SerreCmd) -> Result<Value> {
    match c {
        SerreCmd::Tensor { field, herm, skew1 } => {
            let ar = arith(&field)?;
            let m = HermLattice::from_json(&ar.k, &read_json(&herm)?)?;
            let a = SkewObject1::from_json(&ar, &read_json(&skew1)?)?;
            Ok(serre::tensor(&ar, &m, &a)?.to_json(&ar.k))
        }
        SerreCmd::Decompose { field, skew, skew1 } => {
            let ar = arith(&field)?;
            let x = SkewLatticeN::from_json(&ar.k, &read_json(&skew)?)?;
            let a = SkewObject1::from_json(&ar, &read_json(&skew1)?)?;
            Ok(serre::decompose(&ar, &x, &a)?.to_json(&ar.k))
        }
        SerreCmd::DetDescent { field, skew } => {
            let ar = arith(&field)?;
            let x = SkewLatticeN::from_json(&ar.k, &read_json(&skew)?)?;
            serre::validate_skew(&ar, &x)?;
            Ok(serre::det_descent(&ar, &x)?.to_json(&ar.k))
        }
        SerreCmd::Hom { field, a, b, phi } => {
            let ar = arith(&field)?;
            let k = &ar.k;
            let a = SkewObject1::from_json(&ar, &read_json(&a)?)?;
            let b = SkewObject1::from_json(&ar, &read_json(&b)?)?;
            let h = serre::hom_module(&ar, &a, &b)?;
            let mut v = json!({
                "hom_ideal": h.hom_ideal.to_json(),
                "hom_ideal_principal": ar.is_principal(&h.hom_ideal)?.is_some(),
                "N_raw": elem_json(k, &h.n_raw),
                "N": elem_json(k, &h.n),
                "herm": h.herm.to_json(k),
            });
            if let Some(p) = phi {
                let p = parse_elem(k, &p)?;
                let d = serre::rosati_dual(&ar, &p, &a, &b)?;
                let dd = serre::rosati_dual(&ar, &d, &b, &a)?;
                v["rosati_dual"] = elem_json(k, &d);
                v["rosati_involutive"] = json!(dd == p);
            }
            Ok(v)
        }
    }
}

fn exists_cmd(a: ExistsArgs) -> Result<Value> {
    let ar = arith(&a.field)?;
    let rep = existence::admissible_types_seeded(&ar, a.seed)?;
    match a.ty {
        None if a.witness => Err(Error::malformed("--witness needs --type")),
        None => Ok(rep.to_json(&ar)),
        Some(ty) => {
            let t = cm_type(&ar.k, ty)?;
            let w = rep.witnesses.get(&ty);
            if a.witness {
                return match w {
                    Some(w) => Ok(w.to_json(&ar.k)),
                    None => Err(Error::invalid("admissible", format!("type {} admits no principally polarized object", ty))),
                };
            }
            Ok(json!({
                "field": ar.k.name,
                "type": ty,
                "embeddings": t.indices,
                "admissible": w.is_some(),
                "group_order": rep.group_order,
                "witness": w.map(|w| w.to_json(&ar.k)),
            }))
        }
    }
}

fn jphi_cmd(a: JphiArgs) -> Result<Value> {
    match a.sub {
        Some(JphiCmd::Charpoly { field, ty, elem, n }) => {
            let k = db::resolve(&field)?;
            let t = cm_type(&k, ty)?;
            let x = parse_elem(&k, &elem)?;
            if !k.is_integral(&x) {
                return Err(Error::invalid("integral", "element is not in O_K"));
            }
            let d = jphi::compute_jphi(&k, &t)?;
            let cp = jphi::charpoly_on_lie(&k, &d, &x, n)?;
            let pf = jphi::product_formula(&k, &d.auts, &t, &x, n);
            Ok(json!({
                "field": k.name,
                "type": ty,
                "elem": k.fmt_elem(&x),
                "n": n,
                "charpoly": cp.iter().map(|c| k.fmt_elem(c)).collect::<Vec<_>>(),
                "coefficients_in_reflex": cp.iter().all(|c| jphi::in_reflex(&k, &d, c)),
                "matches_product_formula": cp == pf,
            }))
        }
        None => {
            let field = a.field.ok_or_else(|| Error::malformed("missing field"))?;
            let k = db::resolve(&field)?;
            let t = cm_type(&k, a.ty)?;
            let d = jphi::compute_jphi(&k, &t)?;
            let qs = |v: &[cmht::linalg::Q]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            Ok(json!({
                "field": k.name,
                "type": a.ty,
                "embeddings": t.indices,
                "reflex_degree": d.l_degree(),
                "reflex_stabilizer": d.reflex.stabilizer,
                "reflex_integral_basis": d.reflex.ol_basis.iter().map(|b| k.fmt_elem(b)).collect::<Vec<_>>(),
                "j_rank_over_ol": d.j_rank(),
                "lie_rank_over_ol": d.lie_rank(),
                "j_basis": d.j_basis.iter().map(|x| qs(x)).collect::<Vec<_>>(),
                "lie_basis": d.lie_basis.iter().map(|v| v.iter().map(|e| k.fmt_elem(e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "j_j_sigma_zero": true,
            }))
        }
    }
}

fn cat_cmd(c: CatCmd) -> Result<Value> {
    let dir = |r: bool| if r { Direction::Reverse } else { Direction::Forward };
    match c {
        CatCmd::Normalize { word, reverse } => {
            let w = tc::parse_word_text(&read_text(&word)?)?;
            let n = tc::normalize_dir(&w, dir(reverse))?;
            Ok(json!({
                "source": w.src.to_string(),
                "target": w.target()?.to_string(),
                "associators": w.assoc_count(),
                "normal_form": n.nf.to_json(),
                "normal_word": n.nf.to_word(&w.decls).to_text(),
                "trace": n.trace,
            }))
        }
        CatCmd::Eval { word, model, reverse } => {
            let w = tc::parse_word_text(&read_text(&word)?)?;
            let m = if let Some(r) = model.strip_prefix("standard") {
                let rank = r.strip_prefix(':').map(|s| s.parse::<usize>()).transpose();
                tc::standard_model(rank.map_err(|_| Error::malformed("model 'standard:N' needs an integer rank"))?.unwrap_or(2))?
            } else {
                tc::Model::from_json(&read_json(&model)?)?
            };
            let n = tc::normalize_dir(&w, dir(reverse))?;
            let lhs = m.eval_word(&w)?;
            let rhs = m.eval_normal_form(&n.nf, &w.decls)?;
            if lhs != rhs {
                return Err(Error::invalid("evaluation soundness", "word and normal form evaluate differently"));
            }
            Ok(json!({
                "normal_form": n.nf.to_json(),
                "trace": n.trace,
                "value": matrix_to_json(&lhs),
                "value_str": lhs.iter().map(|r| r.iter().map(|x| m.k.fmt_elem(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "sound": true,
            }))
        }
    }
}

fn props_cmd(a: PropsArgs) -> Result<Value> {
    let (seed, count) = (a.seed, a.count);
    let start = std::time::Instant::now();
    let mut extra = json!({});
    let tally = match a.suite.as_str() {
        "tensor-cat" => {
            let c = suites::tensor_cat(seed, count)?;
            extra = json!({
                "terminated": c.terminated.to_json(),
                "idempotent": c.idempotent.to_json(),
                "sound": c.sound.to_json(),
                "coherence": c.coherence.to_json(),
            });
            let mut t = c.terminated;
            t.merge(c.idempotent);
            t.merge(c.sound);
            t.merge(c.coherence);
            t
        }
        s => {
            let ar = arith(&a.field)?;
            match s {
                "theorem-a" => {
                    let mut t = suites::Tally::default();
                    for n in 1..=3 {
                        t.merge(suites::theorem_a(&ar, seed + n as u64, count, n)?);
                    }
                    t
                }
                "congruence" => suites::congruence(&ar, seed, count)?,
                "property-p" => suites::property_p(&ar, seed, count)?,
                "riemann" => {
                    let mut t = suites::riemann_roundtrip(&ar, seed, count)?;
                    if ar.k.g == 1 {
                        t.merge(suites::riemann_negdef(&ar, seed, count)?);
                    }
                    t
                }
                "det-descent" => suites::det_descent(&ar, seed, count)?,
                "basek" => suites::basek(&ar, seed, count)?,
                "hom" => {
                    let h = suites::hom_pairs(&ar, seed, count)?;
                    extra = json!({"nonprincipal_hom_ideals": h.nonprincipal});
                    h.tally
                }
                "jphi" => suites::jphi_suite(&ar, seed, count)?,
                _ => {
                    return Err(Error::malformed(format!("unknown suite '{}'; expected one of {}", s, suites::SUITES.join(", "))))
                }
            }
        }
    };
    if !tally.passed() {
        return Err(Error::invalid(
            format!("property suite {}", a.suite),
            format!("{} of {} instances failed: {}", tally.exceptions, tally.instances, tally.notes.join("; ")),
        ));
    }
    let mut v = tally.to_json();
    v["suite"] = json!(a.suite);
    v["field"] = json!(a.field);
    v["seed"] = json!(seed);
    v["seconds"] = json!(start.elapsed().as_secs_f64());
    if let Value::Object(m) = extra {
        for (key, val) in m {
            v[key] = val;
        }
    }
    Ok(v)
}
