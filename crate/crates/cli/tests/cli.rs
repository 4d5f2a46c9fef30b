//! End-to-end CLI checks: exit codes, JSON round trips, cross-method
//! agreement.

use std::path::PathBuf;
use std::process::{Command, Output};

fn penrose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_penrose"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("penrose-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn generate_step_zero_is_the_seed() {
    let out = penrose(&["generate", "--method", "substitution", "--steps", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tiles"].as_array().unwrap().len(), 5);
}

#[test]
fn generate_methods_agree_on_overlap() {
    let sub = penrose(&["generate", "--method", "substitution", "--steps", "8"]);
    let cut = penrose(&[
        "generate",
        "--method",
        "cutproject",
        "--intercept",
        "1/5",
        "--radius",
        "8",
    ]);
    assert!(sub.status.success() && cut.status.success());
    let read = |o: &Output| -> Vec<serde_json::Value> {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["tiles"].as_array().unwrap().clone()
    };
    let sub_tiles: std::collections::HashSet<String> =
        read(&sub).iter().map(|t| t.to_string()).collect();
    // every cut-and-project tile well inside radius 8 appears in σ⁸(sun)
    let mut shared = 0;
    for t in read(&cut) {
        if sub_tiles.contains(&t.to_string()) {
            shared += 1;
        }
    }
    assert!(shared > 100, "only {shared} shared tiles");
}

#[test]
fn atlas_counts_and_cross_check() {
    let out = penrose(&["atlas", "--method", "subst", "-k", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "15");
    let out = penrose(&["atlas", "--method", "regions", "-k", "0", "--labelled"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "8");
}

#[test]
fn invalid_flags_exit_2() {
    let out = penrose(&["atlas", "--method", "bogus", "-k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = penrose(&["generate", "--method", "cutproject", "--intercept", "1/3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = penrose(&["verify", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_and_label_round_trip() {
    let patch_file = tmp("patch.json");
    let out = penrose(&[
        "generate",
        "--method",
        "substitution",
        "--steps",
        "4",
        "--out",
        patch_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // labelled verification passes at k = 1
    let out = penrose(&["verify", patch_file.to_str().unwrap(), "-k", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // labelling an erased patch round-trips
    let text = std::fs::read_to_string(&patch_file).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for t in v["tiles"].as_array_mut().unwrap() {
        t.as_object_mut().unwrap().remove("labels");
    }
    let erased_file = tmp("erased.json");
    std::fs::write(&erased_file, serde_json::to_string(&v).unwrap()).unwrap();
    let labelled_file = tmp("labelled.json");
    let out = penrose(&[
        "label",
        erased_file.to_str().unwrap(),
        "--out",
        labelled_file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let relabelled: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&labelled_file).unwrap()).unwrap();
    let original: serde_json::Value = serde_json::from_str(&text).unwrap();
    let set: std::collections::HashSet<String> = original["tiles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.to_string())
        .collect();
    let mut matched = 0;
    for t in relabelled["tiles"].as_array().unwrap() {
        if t.get("labels").is_some() && set.contains(&t.to_string()) {
            matched += 1;
        }
    }
    assert!(matched > 200, "only {matched} tiles matched the original labels");
    for f in [patch_file, erased_file, labelled_file] {
        let _ = std::fs::remove_file(f);
    }
}

#[test]
fn frequencies_seven_rows_summing_to_one() {
    let out = penrose(&["frequencies", "-k", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classes"], 7);
    assert_eq!(v["sum"], "1");
}

#[test]
fn constants_pass() {
    let out = penrose(&["constants"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn appendix_claim_holds() {
    let out = penrose(&["appendix", "--n", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["claim_holds"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn render_produces_svg() {
    let patch_file = tmp("render.json");
    penrose(&[
        "generate",
        "--method",
        "substitution",
        "--steps",
        "2",
        "--out",
        patch_file.to_str().unwrap(),
    ]);
    let out = penrose(&["render", patch_file.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = String::from_utf8_lossy(&out.stdout);
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polygon"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let _ = std::fs::remove_file(patch_file);
}

#[test]
fn shipped_fixtures_match_regeneration() {
    // the committed data files carry checksums; regeneration must agree
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let committed = std::fs::read_to_string(data.join("CHECKSUMS")).expect("fixtures committed");
    let dir = tmp("fixtures");
    let out = penrose(&["fixtures", "--dir", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let regenerated = std::fs::read_to_string(dir.join("CHECKSUMS")).unwrap();
    assert_eq!(committed, regenerated);
    let _ = std::fs::remove_dir_all(dir);
}
