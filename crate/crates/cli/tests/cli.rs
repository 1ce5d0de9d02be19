use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

const GOLDEN_F_FROBENIUS: &str = include_str!("golden/f_frobenius_subalg_K_power_3_1.json");

fn hopfkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("HOPFKIT_CACHE")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scratch() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn corrupted_antipode_fails_verification() {
    let dir = scratch();
    let spec = hopfkit(dir.path(), &["builtin", "cyclic", "--param", "m=3"]);
    assert!(spec.status.success());
    let mut h: Value = serde_json::from_slice(&spec.stdout).unwrap();
    // S = id instead of g ↦ g^2
    h["antipode"] = json!([[0, 0, "1"], [1, 1, "1"], [2, 2, "1"]]);
    fs::write(dir.path().join("bad.json"), h.to_string()).unwrap();
    fs::write(dir.path().join("good.json"), &spec.stdout).unwrap();

    let out = hopfkit(dir.path(), &["verify", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["ok"], false);
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.iter().any(|n| n.contains("antipode")), "{failed:?}");
    assert!(!r["witnesses"].as_array().unwrap().is_empty());

    let out = hopfkit(dir.path(), &["verify", "good.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["dim"], 3);
}

#[test]
fn classify_k_power_subalgebra() {
    let out = hopfkit(&std::env::temp_dir(), &["classify-map", "subalg_K_power(3, 1)"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["schema"], "hopfkit.report.v1");
    assert_eq!(r["result"]["frobenius"], true);
    assert_eq!(r["result"]["tensor_frobenius"], false);
    assert_eq!(r["result"]["perfect"], "perfect");
}

#[test]
fn invariants_of_uqsl2_3() {
    let out = hopfkit(&std::env::temp_dir(), &["invariants", "uqsl2(3)", "--pivot", "K", "--pivot", "E"]);
    assert!(out.status.success());
    let r = report(&out)["result"].clone();
    assert_eq!(r["unimodular"], true);
    assert_eq!(r["g"], "K^2");
    assert_eq!(r["radford_ok"], true);
    assert_eq!(r["pivotal"][0], json!({"candidate": "K", "pivotal": true}));
    assert_eq!(r["pivotal"][1]["pivotal"], false);
}

#[test]
fn taft_alpha_exponent_is_recorded() {
    let out = hopfkit(&std::env::temp_dir(), &["invariants", "taft(3)"]);
    assert!(out.status.success());
    let r = report(&out)["result"].clone();
    assert_eq!(r["unimodular"], false);
    let k = r["alpha_root_exponents"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p[0] == "K")
        .unwrap()
        .clone();
    // a primitive cube root: exponent 1 or 2
    assert!(k[1] == 1 || k[1] == 2, "{k}");
}

#[test]
fn f_frobenius_golden() {
    let out = hopfkit(
        &std::env::temp_dir(),
        &["f-frobenius", "subalg_K_power(3, 1)", "regular_comodule(k_power(3, 1))"],
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), GOLDEN_F_FROBENIUS);
}

#[test]
fn cached_reports_are_byte_identical() {
    let dir = scratch();
    let args = ["f-frobenius", "subalg_K_power(3, 1)", "regular_comodule(k_power(3, 1))", "--seed", "7"];
    let fresh = hopfkit(dir.path(), &args);
    let mut with_cache = args.to_vec();
    with_cache.extend(["--cache-dir", "cache"]);
    let first = hopfkit(dir.path(), &with_cache);
    let second = hopfkit(dir.path(), &with_cache);
    assert!(fresh.status.success() && first.status.success() && second.status.success());
    assert_eq!(first.stdout, fresh.stdout);
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    let entries: Vec<_> = fs::read_dir(dir.path().join("cache")).unwrap().collect();
    assert_eq!(entries.len(), 1);

    // a different seed is a different entry
    let mut other = with_cache.clone();
    other[4] = "8";
    assert!(hopfkit(dir.path(), &other).status.success());
    assert_eq!(fs::read_dir(dir.path().join("cache")).unwrap().count(), 2);
}

#[test]
fn env_cache_dir_overrides_flag() {
    let dir = scratch();
    let out = Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .args(["verify", "cyclic(2)", "--cache-dir", "flag"])
        .current_dir(dir.path())
        .env("HOPFKIT_CACHE", dir.path().join("env"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_dir(dir.path().join("env")).unwrap().count(), 1);
    assert!(!dir.path().join("flag").exists());
}

#[test]
fn parse_errors_carry_locations() {
    let dir = scratch();
    fs::write(dir.path().join("broken.json"), "{\n  \"field\": \"rational\",\n  \"dim\": \n}").unwrap();
    let out = hopfkit(dir.path(), &["verify", "broken.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json:4:1"), "{err}");

    let spec = hopfkit(dir.path(), &["builtin", "cyclic(2)"]);
    let mut h: Value = serde_json::from_slice(&spec.stdout).unwrap();
    h["mult"][1][3] = json!("1/0");
    fs::write(dir.path().join("bad_coeff.json"), h.to_string()).unwrap();
    let out = hopfkit(dir.path(), &["verify", "bad_coeff.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mult[1]"));
}

#[test]
fn builtin_map_file_round_trips() {
    let dir = scratch();
    let spec = hopfkit(dir.path(), &["builtin", "inclusion_taft", "--param", "n=3", "--out", "incl.json"]);
    assert!(spec.status.success());
    let from_file = report(&hopfkit(dir.path(), &["classify-map", "incl.json"]));
    let from_builtin = report(&hopfkit(dir.path(), &["classify-map", "inclusion_taft(3)"]));
    assert_eq!(from_file["result"]["frobenius"], false);
    assert_eq!(from_file["result"]["chi_f"], from_builtin["result"]["chi_f"]);
    assert_eq!(from_file["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn nat_over_trivial_comodule() {
    let dir = std::env::temp_dir();
    let r = report(&hopfkit(&dir, &["nat", "cyclic(2)", "trivial_comodule(cyclic(2))"]));
    assert_eq!(r["ok"], true);
    assert_eq!(r["result"]["algebra_dim"], 2);
    assert_eq!(r["result"]["form"], "integral");
    assert_eq!(r["result"]["form_report"]["frobenius_axioms"], true);
    assert_eq!(r["result"]["form_report"]["symmetric"], Value::Null);

    let r = report(&hopfkit(&dir, &["nat", "taft(3)", "trivial_comodule(taft(3))", "--pivot", "K"]));
    assert_eq!(r["result"]["algebra_dim"], 9);
    assert_eq!(r["result"]["pairing_rank"], 9);
    assert_eq!(r["result"]["form_report"]["yd_morphism"], false);
}

#[test]
fn text_format_and_multiple_inputs() {
    let dir = std::env::temp_dir();
    let out = hopfkit(&dir, &["verify", "cyclic(2)", "group_algebra(S3)", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("verify cyclic(2): ok\n"));
    assert!(text.contains("verify group_algebra(S3): ok\n"));
    assert!(text.contains("  PASS "));

    let out = hopfkit(&dir, &["verify", "cyclic(2)", "cyclic(3)"]);
    let all = report(&out);
    assert_eq!(all.as_array().unwrap().len(), 2);
    assert_eq!(all[1]["result"]["dim"], 3);
}

#[test]
fn unknown_builtin_is_a_usage_error() {
    let out = hopfkit(&std::env::temp_dir(), &["classify-map", "no_such_map(1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_map"));
}
