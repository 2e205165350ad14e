use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .current_dir(fixtures())
        .env_remove("WORKBENCH_GB_DEGREE_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn json_out(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = bin(&full);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{:?}: {} in {}", args, e, stdout(&o)));
    (o.status.code().expect("exit code"), v)
}

fn schema(name: &str) -> jsonschema::Validator {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{}.schema.json", name));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

#[test]
fn sl2_jacobi_passes() {
    let (code, v) = json_out(&["gamma", "check", "gammas/sl2.json", "--jacobi"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "PASS");
    let checks = v["data"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["verdict"] != "FAIL"));
}

#[test]
fn idempotent_epsilon_is_not_local() {
    let o = bin(&["algebra", "validate", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL [NOT_LOCAL]"), "{}", stdout(&o));
}

#[test]
fn riccati_realisation_prints_jets() {
    let (code, v) = json_out(&["kernel", "realize", "kernels/riccati.json", "--r", "2", "--order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["criterion"]["holds"], true);
    let jets = v["data"]["jets"].as_array().unwrap();
    assert_eq!(jets.len(), 7);
    assert_eq!(jets[0]["status"], "free");
    assert!(jets[1..].iter().all(|j| j["status"] == "determined"));
}

#[test]
fn check_point_accepts_negative_values() {
    let o = bin(&["kernel", "check-point", "kernels/riccati.json", "--values", "-1/t"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(&["kernel", "check-point", "kernels/riccati.json", "--values", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("REJECT"));
}

#[test]
fn validator_failures_carry_witnesses() {
    let (code, v) = json_out(&["gamma", "check", "gammas/not_skew.json"]);
    assert_eq!((code, v["code"].as_str()), (1, Some("JACOBI_FAIL")));
    let (code, v) = json_out(&["algebra", "validate", "algebras/rank_fail.json"]);
    assert_eq!((code, v["code"].as_str()), (1, Some("RANK_FAIL")));
    let (code, v) = json_out(&["kernel", "prolong", "kernels/hs_2_2_stuck.json"]);
    assert_eq!((code, v["code"].as_str()), (1, Some("NO_PROLONGATION")));
    let (code, v) = json_out(&["kernel", "leaders", "kernels/inseparable_f2.json"]);
    assert_eq!((code, &v["data"]["separable"]), (0, &json!(false)));
    let (code, v) = json_out(&["kernel", "prolong", "kernels/inseparable_f2.json"]);
    assert_eq!((code, v["code"].as_str()), (1, Some("INSEPARABLE_KERNEL")));
}

#[test]
fn malformed_input_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(&p, "{\"char\": 0,\n \"dim\": }").unwrap();
    let o = bin(&["algebra", "validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("m.json:2:9"), "{}", stdout(&o));

    std::fs::write(&p, r#"{"char": 4, "dim": 1}"#).unwrap();
    let o = bin(&["algebra", "validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("char"));

    assert_eq!(bin(&["algebra", "explode"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn degree_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .current_dir(fixtures())
        .env("WORKBENCH_GB_DEGREE_CAP", "1")
        .args(["kernel", "realize", "kernels/riccati.json", "--r", "2", "--order", "6"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("DEGREE_CAP"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--format", "json", "kernel", "prolong", "kernels/mixed_f2.json", "--steps", "2"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn json_reports_match_the_schema() {
    let report = schema("report");
    let runs: &[&[&str]] = &[
        &["algebra", "validate", "algebras/hs_f2_2.json"],
        &["algebra", "tensor", "algebras/hs_f2_1.json", "algebras/hs_f2_1.json"],
        &["gamma", "check", "gammas/mixed_f2.json"],
        &["gamma", "check", "gammas/hs_3_1_perturbed.json"],
        &["gamma", "reduce", "gammas/hs_2_1.json", "gammas/hs_2_1.json"],
        &["dfield", "validate", "fields/char2_counterexample.json", "--gamma", "gammas/char2_counterexample.json"],
        &["dfield", "apply", "fields/q_t.json", "--op", "1,1", "--expr", "t^3"],
        &["free", "table", "--gamma", "gammas/sl2.json", "--order", "2"],
        &["kernel", "leaders", "kernels/late_leader.json"],
        &["kernel", "prolong", "kernels/hs_2_2.json", "--steps", "1"],
        &["kernel", "realize", "kernels/exp_two_derivations.json", "--r", "1", "--order", "3"],
        &["kernel", "check-point", "kernels/riccati.json", "--values", "-1/t"],
        &["algebra", "validate", "missing.json"],
    ];
    for args in runs {
        let (_, v) = json_out(args);
        let errs: Vec<String> = report.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errs.is_empty(), "{:?}: {:?}", args, errs);
    }
}

#[test]
fn written_outputs_reload() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = bin(&["kernel", "prolong", "kernels/riccati.json", "--steps", "2", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["r"], 3);
    assert!(schema("kernel").is_valid(&v));
    let o = bin(&["kernel", "leaders", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let t = dir.path().join("t.json");
    let o = bin(&["algebra", "tensor", "algebras/hs_f2_1.json", "algebras/hs_f2_2.json", "-o", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(&["algebra", "validate", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn omitted_zeros_stay_omitted() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    let fields = fixtures().join("fields/q_d2.json");
    let g = json!({"field": fields, "lie": [{"i": 1, "j": 1, "l": 1, "c": "0"}], "hs": []});
    std::fs::write(&p, g.to_string()).unwrap();
    let o = bin(&["fmt", p.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lie"], json!([]));
}

fn spaced(src: &str, gaps: &[bool]) -> String {
    let mut out = String::new();
    for (k, ch) in src.chars().enumerate() {
        if ch != ' ' {
            out.push(ch);
        }
        if gaps.get(k).copied().unwrap_or(false) && matches!(ch, '-' | '+' | '^' | '*') {
            out.push(' ');
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relation_whitespace_is_canonicalized(gaps in proptest::collection::vec(any::<bool>(), 40)) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("k.json");
        let gamma = fixtures().join("gammas/derivation.json");
        let field = fixtures().join("fields/q_t.json");
        let rel = spaced("x1_[1,1] - 2*x1_[]^2 + t*x1_[]", &gaps);
        let k = json!({"gamma": gamma, "dfield": field, "n": 1, "r": 1, "relations": [rel]});
        std::fs::write(&p, k.to_string()).unwrap();
        let o = bin(&["fmt", p.to_str().unwrap()]);
        prop_assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let first = v["relations"][0].as_str().unwrap().to_string();
        std::fs::write(&p, stdout(&o)).unwrap();
        let again = bin(&["fmt", p.to_str().unwrap()]);
        prop_assert_eq!(stdout(&again), stdout(&o));
        let plain = json!({"gamma": gamma, "dfield": field, "n": 1, "r": 1, "relations": ["x1_[1,1]-2*x1_[]^2+t*x1_[]"]});
        std::fs::write(&p, plain.to_string()).unwrap();
        let base: Value = serde_json::from_str(&stdout(&bin(&["fmt", p.to_str().unwrap()]))).unwrap();
        prop_assert_eq!(base["relations"][0].as_str().unwrap(), first.as_str());
    }
}
