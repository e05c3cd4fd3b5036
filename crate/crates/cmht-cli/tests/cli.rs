use serde_json::Value;
use std::process::Command;

const SKEW_QI: &str = r#"{"ideal":"OK","zeta":"i/2","type":0}"#;

fn data(name: &str) -> String {
    format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn cmht_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cmht"));
    c.args(args).arg("--json");
    for (k, v) in env {
        c.env(k, v);
    }
    let out = c.output().expect("run cmht");
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(text.trim()).unwrap_or(Value::Null);
    (code, v)
}

fn cmht(args: &[&str]) -> (i32, Value) {
    cmht_env(args, &[])
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = cmht(args);
    assert_eq!(code, 0, "{:?} -> {}", args, v);
    v
}

fn fails(args: &[&str], code: i32) -> Value {
    let (c, v) = cmht(args);
    assert_eq!(c, code, "{:?} -> {}", args, v);
    assert_eq!(v["ok"], false);
    v
}

#[test]
fn exists_qi_reports_two_types() {
    let v = ok(&["exists", "Qi"]);
    assert_eq!(v["admissible_types"], serde_json::json!([0, 1]));
    assert_eq!(v["group_order"], 2);
    assert_eq!(v["witnesses"]["0"]["zeta_str"], "1/2*i");
}

#[test]
fn exists_single_type_and_witness() {
    let v = ok(&["exists", "Qzeta12", "--type", "1"]);
    assert_eq!(v["admissible"], true);
    let v = ok(&["exists", "Qzeta12", "--type", "0"]);
    assert_eq!(v["admissible"], false);
    let w = ok(&["exists", "Qsqrt-5", "--type", "0", "--witness", "--seed", "7"]);
    assert_eq!(w, ok(&["exists", "Qsqrt-5", "--type", "0", "--witness"]));
    let v = fails(&["exists", "Qzeta12", "--type", "0", "--witness"], 1);
    assert_eq!(v["invariant"], "admissible");
    fails(&["exists", "Qi", "--witness"], 3);
}

#[test]
fn skew1_wrong_sign_is_rejected() {
    let v = fails(&["skew1", "make", "Qi", "--ideal", "OK", "--zeta", "-i/2", "--type", "0"], 1);
    assert_eq!(v["reason"], "imaginary sign");
    let v = ok(&["skew1", "make", "Qi", "--ideal", "OK", "--zeta", "i/2", "--type", "0"]);
    assert_eq!(v["type"], 0);
    let v = fails(&["skew1", "make", "Qi", "--ideal", "(2)", "--zeta", "i/2", "--type", "0"], 1);
    assert_eq!(v["invariant"], "principality");
}

#[test]
fn serre_tensor_needs_positive_h() {
    let v = fails(&["serre", "tensor", "Qi", r#"{"gram":[["-1"]]}"#, SKEW_QI], 1);
    assert_eq!(v["reason"], "h not positive-definite (Theorem A)");
}

#[test]
fn serre_tensor_decompose_descent_roundtrip() {
    let h = r#"{"gram":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
    let x = ok(&["serre", "tensor", "Qi", h, SKEW_QI]);
    assert_eq!(x["rank"], 3);
    let xs = x.to_string();
    let m = ok(&["serre", "decompose", "Qi", &xs, SKEW_QI]);
    assert_eq!(m["gram_str"], serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
    let d = ok(&["serre", "det-descent", "Qi", &xs]);
    assert_eq!(d["type"], 0);
    // rank 2 has no determinant descent
    let x2 = ok(&["serre", "tensor", "Qi", r#"{"gram":[["1","0"],["0","1"]]}"#, SKEW_QI]).to_string();
    assert_eq!(fails(&["serre", "det-descent", "Qi", &x2], 1)["invariant"], "odd rank");
}

#[test]
fn serre_hom_and_rosati() {
    let v = ok(&["serre", "hom", "Qi", SKEW_QI, SKEW_QI, "--phi", "1+i"]);
    assert_eq!(v["N"]["str"], "1");
    assert_eq!(v["rosati_involutive"], true);
    let other = r#"{"ideal":"OK","zeta":"-i/2","type":1}"#;
    assert_eq!(fails(&["serre", "hom", "Qi", SKEW_QI, other], 1)["invariant"], "cm type");
}

#[test]
fn field_commands() {
    let v = ok(&["field", "check", "Qzeta5"]);
    assert_eq!(v["degree"], 4);
    assert_eq!(v["discriminant"], "125");
    assert!(v["sha256"].is_string());
    let f = data("Qi_copy.field");
    assert_eq!(ok(&["field", "check", &f])["discriminant"], "-4");
    let e = ok(&["field", "embeddings", "Qi", "--prec", "64"]);
    assert_eq!(e["embeddings"].as_array().unwrap().len(), 2);
    assert_eq!(e["embeddings"][0]["approx"][1], 1.0);
    let v = ok(&["field", "classgroup", "Qsqrt-5"]);
    assert_eq!(v["order"], 2);
    let v = ok(&["field", "different", "Qzeta12"]);
    assert_eq!(v["relative_unramified"], true);
    assert_eq!(v["norm"], "144");
    fails(&["field", "check", "NoSuchField"], 3);
}

#[test]
fn prec_env_sets_default_precision() {
    let (code, v) = cmht_env(&["field", "embeddings", "Qi"], &[("CMHT_PREC", "40")]);
    assert_eq!(code, 0);
    assert_eq!(v["prec"], 40);
}

#[test]
fn budget_exhaustion_exits_2() {
    let (code, v) = cmht_env(&["field", "classgroup", "Qsqrt-5"], &[("CMHT_BUDGET", "1")]);
    assert_eq!(code, 2, "{}", v);
    assert_eq!(v["error"], "budget");
}

#[test]
fn ideal_commands() {
    let p = "(2, 1+x)";
    let v = ok(&["ideal", "mul", "Qsqrt-5", p, "(2, 1-x)"]);
    assert_eq!(v["norm"], "4");
    // JSON ideals round-trip through the commands
    let inv = ok(&["ideal", "inv", "Qsqrt-5", p]);
    let back = ok(&["ideal", "inv", "Qsqrt-5", &inv.to_string()]);
    assert_eq!(back["norm"], "2");
    let c = ok(&["ideal", "conj", "Qsqrt-5", p]);
    assert_eq!(ok(&["ideal", "principal", "Qsqrt-5", &c.to_string()])["principal"], false);
    let v = ok(&["ideal", "principal", "Qsqrt-5", "(3+x)"]);
    assert_eq!(v["principal"], true);
    fails(&["ideal", "inv", "Qsqrt-5", "(2, 1+"], 3);
}

#[test]
fn herm_skew_form_commands() {
    let v = ok(&["herm", "posdef", "Qi", r#"[["2","i"],["-i","1"]]"#]);
    assert_eq!(v["positive"], true);
    let v = ok(&["herm", "posdef", "Qi", r#"[["1","2"],["2","1"]]"#]);
    assert_eq!(v["positive"], false);
    assert_eq!(fails(&["herm", "posdef", "Qi", r#"[["i"]]"#], 1)["invariant"], "hermitian");
    assert_eq!(ok(&["skew", "negdef", "Qi", r#"[["-i"]]"#, "--type", "0"])["negative_definite"], true);
    assert_eq!(ok(&["skew", "negdef", "Qi", r#"[["-i"]]"#, "--type", "1"])["negative_definite"], false);
    let v = ok(&["form", "roundtrip", "Qi", r#"{"E":[["0","1"],["-1","0"]]}"#]);
    assert_eq!(v["roundtrip"], true);
    assert_eq!(v["riemann"], v["riemann_direct"]);
    assert_eq!(fails(&["form", "roundtrip", "Qi", r#"{"E":[["1","0"],["0","1"]]}"#], 1)["invariant"], "alternating");
}

#[test]
fn jphi_commands() {
    let v = ok(&["jphi", "Qzeta5", "--type", "0"]);
    assert_eq!(v["j_rank_over_ol"], 2);
    assert_eq!(v["reflex_degree"], 4);
    let v = ok(&["jphi", "Qzeta12", "--type", "1"]);
    assert_eq!(v["reflex_degree"], 2);
    let v = ok(&["jphi", "charpoly", "Qzeta12", "--type", "1", "--elem", "1+z", "--n", "2"]);
    assert_eq!(v["matches_product_formula"], true);
    assert_eq!(v["charpoly"].as_array().unwrap().len(), 5);
    assert_eq!(fails(&["jphi", "charpoly", "Qi", "--elem", "i/2"], 1)["invariant"], "integral");
}

#[test]
fn cat_commands() {
    let v = ok(&["cat", "normalize", &data("redlem.word")]);
    assert_eq!(v["trace"][0], "redlem (alpha, alpha)");
    assert_eq!(v["normal_form"]["direction"], "omega o (phi x psi)");
    let r = ok(&["cat", "normalize", &data("redlem.word"), "--reverse"]);
    assert_eq!(r["normal_form"]["direction"], "(phi x psi) o omega^-1");
    let p = ok(&["cat", "normalize", &data("pentagon.word")]);
    assert_eq!(p["normal_form"]["a"], "a.b");
    let e = ok(&["cat", "eval", &data("redlem.word"), &data("model.json")]);
    assert_eq!(e["sound"], true);
    let e = ok(&["cat", "eval", &data("pentagon.word"), "standard"]);
    assert_eq!(e["value_str"], serde_json::json!([["1", "0"], ["0", "1"]]));
    // labels without values in the bundled model
    fails(&["cat", "eval", &data("redlem.word"), "standard"], 3);
    fails(&["cat", "normalize", &data("bad.word")], 3);
}

#[test]
fn normal_word_reparses() {
    let v = ok(&["cat", "normalize", &data("redlem.word")]);
    let dir = std::env::temp_dir().join(format!("cmht-nf-{}.word", std::process::id()));
    std::fs::write(&dir, v["normal_word"].as_str().unwrap()).unwrap();
    let again = ok(&["cat", "normalize", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(again["normal_form"], v["normal_form"]);
}

#[test]
fn props_suites_run() {
    for (suite, field) in [
        ("theorem-a", "Qi"),
        ("congruence", "Qsqrt-5"),
        ("property-p", "Qi"),
        ("riemann", "Qi"),
        ("det-descent", "Qi"),
        ("basek", "Qi"),
        ("hom", "Qsqrt-5"),
        ("tensor-cat", "Qsqrt-5"),
        ("jphi", "Qzeta12"),
    ] {
        let v = ok(&["props", suite, field, "--seed", "3", "--count", "3"]);
        assert_eq!(v["exceptions"], 0, "{}", suite);
        assert!(v["instances"].as_u64().unwrap() > 0);
    }
    fails(&["props", "bogus", "Qi"], 3);
}

#[test]
fn malformed_arguments_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_cmht")).args(["nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    fails(&["herm", "posdef", "Qi", "[[1,"], 3);
    fails(&["skew", "negdef", "Qi", r#"[["-i"]]"#, "--type", "5"], 3);
}
