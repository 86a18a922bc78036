use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn llv_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_llv-lab"))
        .args(args)
        .env_remove("LLV_LAB_SEED")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("llv-lab-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn failing(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = llv_lab(&["validate", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(llv_lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(llv_lab(&["verbitsky", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        llv_lab(&["verbitsky", "--rank", "5", "--n", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        llv_lab(&["llv", "k3-rank3", "--generators", "1,0"]).status.code(),
        Some(2)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_llv-lab"))
        .args(["prim", "k3-rank3"])
        .env("LLV_LAB_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = scratch("bad.json", "{\"name\": 3}");
    assert_eq!(llv_lab(&["validate", &bad]).status.code(), Some(2));
}

#[test]
fn validate_fixtures_and_corruption() {
    let out = llv_lab(&["validate", &fixture("k3.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["dims"], serde_json::json!([1, 22, 1]));

    // Breaking graded commutativity of one product.
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture("k3.json")).unwrap()).unwrap();
    let products = doc["products"].as_array_mut().unwrap();
    let entry = products
        .iter_mut()
        .find(|p| p["deg_a"] == 2 && p["deg_b"] == 2 && p["idx_a"] != p["idx_b"])
        .unwrap();
    entry["value"] = serde_json::json!(["7"]);
    let path = scratch("broken.json", &doc.to_string());
    let out = llv_lab(&["validate", &path, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(failing(&json_of(&out)).contains(&"graded commutativity".to_string()));
}

#[test]
fn verbitsky_rank5_dims() {
    let out = llv_lab(&["verbitsky", "--rank", "5", "--n", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["dims"], serde_json::json!([1, 5, 15, 5, 1]));
    for c in report["checks"].as_array().unwrap() {
        for key in ["name", "passed", "expected", "actual", "paper_ref"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
}

#[test]
fn verbitsky_gram_file() {
    let gram = scratch("gram.json", r#"{"gram": [[0, 1, 0], [1, 0, 0], [0, 0, "-2"]]}"#);
    let out = llv_lab(&["verbitsky", "--gram", &gram, "--n", "3", "--json", "--llv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json_of(&out);
    // Sym^k of rank 3 up to k = 3, then mirrored.
    assert_eq!(report["dims"], serde_json::json!([1, 3, 6, 10, 6, 3, 1]));
    assert_eq!(report["closure_dim"], 10);
    let mismatch = llv_lab(&["verbitsky", "--gram", &gram, "--rank", "4", "--n", "2"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn size_limit_is_a_failed_check() {
    let out = llv_lab(&["verbitsky", "--rank", "23", "--n", "2", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(failing(&report), vec!["construction"]);
    assert_eq!(report["expected_dims"], serde_json::json!([1, 23, 276, 23, 1]));
}

#[test]
fn quaternion_report() {
    let out = llv_lab(&["quaternion", "--json"]);
    let report = json_of(&out);
    assert_eq!(report["closure_dim"], 10);
    // Only the literal K–K relation fails; see the Jacobi-consistent check.
    assert_eq!(failing(&report), vec!["[K_λμ, K_μν] = K_λν"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn llv_on_file_uses_pairing_form() {
    let out = llv_lab(&["llv", &fixture("k3.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["closure_dim"], 276);
    assert_eq!(report["g0_derived_dim"], 231);
}

#[test]
fn explicit_generators() {
    let out = llv_lab(&["llv", "k3-rank3", "--generators", "1,1,0;1,-1,0;1,0,1/2", "--json"]);
    let report = json_of(&out);
    assert_eq!(report["generators"], 3);
    assert_eq!(report["closure_dim"], 10);
    assert_eq!(out.status.code(), Some(0));
    let iso = llv_lab(&["llv", "k3-rank3", "--generators", "1,0,0"]);
    assert_eq!(iso.status.code(), Some(1));
}

#[test]
fn prim_seed_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_llv-lab"))
        .args(["prim", "verbitsky-5-2", "--json"])
        .env("LLV_LAB_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["witness"]["seed"], 7);
}
