use std::process::{Command, Output};

use serde_json::Value;

fn veronese(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .env_remove("VERONESE_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = veronese(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

#[test]
fn generators_example() {
    let (v, code) = json(&["generators", "--n", "3", "--p", "2", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    let mut gens: Vec<String> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_str().unwrap().to_string())
        .collect();
    gens.sort();
    assert_eq!(
        gens,
        [
            "x11*x22 - x12^2",
            "x11*x23 - x12*x13",
            "x11*x33 - x13^2",
            "x12*x23 - x13*x22",
            "x12*x33 - x13*x23",
            "x22*x33 - x23^2"
        ]
    );
}

#[test]
fn points_witness_over_f3() {
    let (v, code) = json(&[
        "points",
        "--n",
        "3",
        "--p",
        "2",
        "--h",
        "1",
        "--r",
        "3",
        "--set",
        "certificate",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"], serde_json::json!([1, 1, 1, 1, 2, 1]));
}

#[test]
fn points_deterministic_across_thread_counts() {
    let args = [
        "points", "--n", "3", "--p", "2", "--h", "1", "--r", "5", "--format", "json",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .env("VERONESE_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .env("VERONESE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn full_ideal_has_no_witness() {
    let (v, code) = json(&[
        "points", "--n", "3", "--p", "2", "--h", "1", "--r", "5", "--set", "full",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["count_V"], v["count_cert"]);
    assert!(v.get("witness").is_none());
}

#[test]
fn budget_exceeded_exit_code() {
    let out = veronese(&[
        "points", "--n", "3", "--p", "2", "--h", "1", "--r", "7", "--budget", "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_exit_code() {
    assert_eq!(veronese(&["generators", "--n", "3"]).status.code(), Some(2));
    assert_eq!(
        veronese(&["generators", "--n", "3", "--p", "4", "--h", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        veronese(&["cohomology", "--q", "9", "--a", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cohomology_q4_a3() {
    let (v, code) = json(&["cohomology", "--q", "4", "--a", "3"]);
    assert_eq!(code, 0);
    for i in 0..=6 {
        assert_eq!(v["orders"][i.to_string()], 2);
    }
}

#[test]
fn verify_sci_and_k_max() {
    let (v, code) = json(&["verify-sci", "--n", "3", "--p", "2", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 6);
    let out = veronese(&[
        "verify-sci",
        "--n",
        "3",
        "--p",
        "2",
        "--h",
        "1",
        "--k-max",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certificate_and_enumerate() {
    let (v, _) = json(&["certificate", "--n", "3", "--p", "3", "--h", "1"]);
    assert_eq!(v["binomials"].as_array().unwrap().len(), 7);
    let (v, _) = json(&["enumerate", "--n", "3", "--p", "2", "--h", "1"]);
    assert_eq!(v["size"], 6);
    assert_eq!(v["entries"][1]["name"], "x12");
    assert_eq!(v["entries"][1]["exponent"], serde_json::json!([1, 1, 0]));
}

#[test]
fn rewrite_from_file() {
    let dir = std::env::temp_dir().join(format!("veronese-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(
        &path,
        r#"{"n":3,"p":2,"h":1,"blocks":[[1,2],[1,3],[2,3]],"sigma":[1,3,2,4,5,6]}"#,
    )
    .unwrap();
    let (v, code) = json(&["rewrite", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["steps"][0]["quadratic"], "x11*x23 - x12*x13");
    assert_eq!(v["steps"][0]["cofactor"], "x23");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn gluing_tree_json() {
    let (v, code) = json(&["gluing", "--n", "3", "--p", "2", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["validated"], true);
    assert_eq!(v["tree"]["kind"], "node");
}

#[test]
fn jacobian_and_fibers() {
    let (v, code) = json(&[
        "jacobian", "--n", "3", "--p", "2", "--h", "1", "--r", "5", "--u", "0,1,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["permutation"], serde_json::json!([2, 1, 3]));
    let (v, code) = json(&[
        "fibers", "--n", "3", "--p", "2", "--h", "1", "--r", "5", "--u", "1,2,3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["equal"], true);
    let out = veronese(&[
        "fibers", "--n", "3", "--p", "3", "--h", "1", "--r", "5", "--u", "1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_paper_passes() {
    let out = veronese(&["reproduce-paper"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("[PASS]").count(), 11, "{text}");
    assert_eq!(out.status.code(), Some(0));
}
