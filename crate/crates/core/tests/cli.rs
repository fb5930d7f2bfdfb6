use std::io::Write;
use std::process::{Command, Stdio};

use drinfeld::cli::{decode_k, decode_poly, encode_k, encode_poly};
use drinfeld::FieldTower;
use serde_json::{json, Value};

const PHI: &str = r#"{"field": {"p": 5, "s": 1, "n": 3}, "module": [[0, 1], 0, 1, [0, 1]]}"#;

fn run(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap().trim_end().to_string())
}

fn job(extra: Value) -> String {
    let mut doc: Value = serde_json::from_str(PHI).unwrap();
    for (k, v) in extra.as_object().unwrap() {
        doc[k] = v.clone();
    }
    doc.to_string()
}

fn json_out(args: &[&str], stdin: &str) -> Value {
    let (code, out) = run(args, stdin);
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn pretty_strings() {
    let (_, out) = run(&["--pretty", "info"], PHI);
    assert!(out.starts_with("Drinfeld module defined by T |--> z*t^3 + t^2 + z"));
    assert!(out.contains("characteristic: T^3 + 3*T + 3"));
    let (_, out) = run(&["--pretty", "frobenius-charpoly"], PHI);
    assert_eq!(out, "X^3 + (T + 1)*X^2 + (2*T + 3)*X + 2*T^3 + T + 1");
    let (_, out) = run(&["--pretty", "norm"], &job(json!({"frobenius": true})));
    assert_eq!(out, "(T^3 + 3*T + 3)");
    let (_, out) = run(&["--pretty", "norm"], &job(json!({"frobenius": true, "as_ideal": false})));
    assert_eq!(out, "3*T^3 + 4*T + 4");
    let (_, out) = run(&["--pretty", "charpoly"], &job(json!({"scalar": "T"})));
    assert_eq!(out, "X^3 + 2*T*X^2 + 3*T^2*X + 4*T^3");
    let doc = r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0, 1, 1], "a": "T^2 + 1"}"#;
    let (_, out) = run(&["--pretty", "eval"], doc);
    assert_eq!(out, "t^6 + 2*t^5 + t^4 + 2*z*t^3 + (3*z^2 + z + 1)*t^2 + z^2 + 1");
}

#[test]
fn hom_commands() {
    let out = json_out(&["hom"], &job(json!({"ore": [1, 1]})));
    let psi = out["codomain"].clone();
    assert_eq!(psi, json!([[0, 1, 0], [4, 3, 2], [2, 2, 3], [4, 4, 2]]));
    let with_other = job(json!({"other": psi}));
    let basis = json_out(&["hom-basis"], &job(json!({"other": psi, "degree": 5})));
    assert_eq!(basis.as_array().unwrap().len(), 4);
    let iso = json_out(&["an-isogeny"], &with_other);
    assert_eq!(iso, json!([[1, 0, 0], [1, 0, 0]]));
    assert_eq!(json_out(&["is-isogenous"], &with_other), json!(true));
    assert_eq!(json_out(&["is-isomorphic"], &with_other), json!(false));
    let (code, out) = run(&["hom"], &job(json!({"ore": [1], "other": psi})));
    assert_eq!(code, 1);
    let err: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(err["code"], "NotAMorphism");
}

#[test]
fn isogeny_cap_from_environment() {
    let other = job(json!({"other": [[0, 1], 0, 1, [0, 0, 1]]}));
    let out = Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(["--job", &other, "an-isogeny"])
        .env("DRINFELD_ISOGENY_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "null");
    let out = Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(["--job", &other, "an-isogeny"])
        .env("DRINFELD_ISOGENY_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn j_invariant_commands() {
    let rank4 = r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0, 1, [0, 1], [0, 0, 1]]}"#;
    let (_, out) = run(&["--pretty", "jinv"], &job(json!({"module": [[0, 1], [0, 0, 1], [2, 2, 0]]})));
    assert_eq!(out, "4*z^2 + 4");
    let out = json_out(&["jinv-params", "--rank", "4", "--q", "5", "--count-only"], "");
    assert_eq!(out, json!(3402));
    let out = json_out(&["jinv-params", "--nonzero"], rank4);
    assert_eq!(out.as_array().unwrap().len(), 16);
    assert!(out.as_array().unwrap().contains(&json!([[2, 3], [21, 6, 2]])));
    let doc = r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0, 1, [0, 1], [0, 0, 1]], "k": 3}"#;
    let (_, out) = run(&["--pretty", "jinv"], doc);
    assert_eq!(out, "3*z");
    let doc = r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0, 1, [0, 1], [0, 0, 1]], "param": {"ks": [2, 3], "ds": [1, 30], "d": 6}}"#;
    let (_, out) = run(&["--pretty", "jinv"], doc);
    assert_eq!(out, "4*z^2 + 2*z + 1");
}

#[test]
fn series_commands() {
    let doc = r#"{"field": {"p": 2, "s": 2}, "module": ["T", "T + 1", "T^2 - T + 1"]}"#;
    let out = json_out(&["exp", "--hi", "17"], doc);
    let coeffs = out["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 17);
    assert_eq!(coeffs[4], json!({"num": [[1, 0]], "den": [[0, 0], [1, 0], [1, 0], [1, 0]]}));
    let (_, out) = run(&["--pretty", "log", "--hi", "5"], r#"{"field": {"p": 2, "s": 2}, "module": ["T", 1]}"#);
    assert_eq!(out, "z^1: 1\nz^4: 1/(T^4 + T)");
    let (code, _) = run(&["exp"], r#"{"field": {"p": 2, "s": 2}, "module": ["T + 1", 1]}"#);
    assert_eq!(code, 2);
}

#[test]
fn malformed_input() {
    for (args, stdin) in [
        (vec!["info"], "not json"),
        (vec!["info"], r#"{"module": [1, 1]}"#),
        (vec!["info"], r#"{"field": {"p": 4, "n": 2}, "module": [1, 1]}"#),
        (vec!["info"], r#"{"field": {"p": 5, "n": 2}, "module": [[1, 2, 3], 1]}"#),
        (vec!["eval"], &job(json!({"a": "T^^2"}))),
        (vec!["bogus"], ""),
    ] {
        let (code, out) = run(&args, stdin);
        assert_eq!(code, 2, "{args:?} {stdin}");
        let err: Value = serde_json::from_str(&out).unwrap();
        assert!(err["code"].is_string() && err["message"].is_string());
    }
    let (code, out) = run(&["info"], r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0]}"#);
    assert_eq!(code, 2);
    assert!(out.contains("ZeroLeadingCoefficient"));
    let (code, _) = run(&["charpoly"], &job(json!({"ore": [1, 1]})));
    assert_eq!(code, 1);
}

#[test]
fn json_round_trip() {
    let t = FieldTower::new(5, 1, 3).unwrap();
    let outputs = [
        json_out(&["eval"], &job(json!({"a": "T^2 + 1"}))),
        json_out(&["hom"], &job(json!({"ore": [1, 1]})))["codomain"].clone(),
        json_out(&["info"], PHI)["module"].clone(),
    ];
    for doc in &outputs {
        for x in doc.as_array().unwrap() {
            assert_eq!(&encode_k(&decode_k(&t, x).unwrap()), x);
        }
    }
    let cp = json_out(&["frobenius-charpoly"], PHI);
    for c in cp.as_array().unwrap() {
        assert_eq!(&encode_poly(&decode_poly(&t, c).unwrap()), c);
    }
    let t4 = FieldTower::new(2, 2, 2).unwrap();
    let doc = r#"{"field": {"p": 2, "s": 2, "n": 2}, "module": [[0, 1], [[1, 1]], 1]}"#;
    let out = json_out(&["info"], doc);
    for x in out["module"].as_array().unwrap() {
        assert_eq!(&encode_k(&decode_k(&t4, x).unwrap()), x);
    }
    assert_eq!(out["module"], json!([[[0, 0], [1, 0]], [[1, 1], [0, 0]], [[1, 0], [0, 0]]]));
}

#[test]
fn bench_csv() {
    let args = ["bench", "--grid", "3:2,4:2", "--q", "5", "--trials", "3", "--seed", "7"];
    let (code, out) = run(&args, "");
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,r,algorithm,median_ms");
    assert_eq!(lines.len(), 5);
    let structure = |s: &str| s.lines().skip(1).map(|l| l.rsplitn(2, ',').nth(1).unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(structure(&out), ["3,2,motive", "3,2,gekeler", "4,2,motive", "4,2,gekeler"]);
    for l in &lines[1..] {
        let ms: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ms >= 0.0);
    }
    let (_, again) = run(&args, "");
    assert_eq!(structure(&again), structure(&out));
}
