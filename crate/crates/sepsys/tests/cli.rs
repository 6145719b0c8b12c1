//! Black-box tests of the installed binary: exit codes, file handling and
//! the environment override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn sepsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepsys")).args(args).output().expect("spawn sepsys")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sepsys-it-{}-{name}", std::process::id()))
}

#[test]
fn tot_then_verify_round_trips() {
    let out = sepsys(&["tot", &fixture("inst-2tri")]);
    assert!(out.status.success());
    let tree_path = tmp("2tri-tree.json");
    std::fs::write(&tree_path, &out.stdout).unwrap();
    let check = sepsys(&["verify", &fixture("inst-2tri"), tree_path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stdout));
    assert!(String::from_utf8_lossy(&check.stdout).contains("all checks passed"));
}

#[test]
fn corrupted_tree_file_fails_with_witness() {
    let out = sepsys(&["tot", &fixture("inst-set4")]);
    assert!(out.status.success());
    let mut tree: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // drop every tree element but keep the profiles: distinguishers go missing
    tree["tree"] = serde_json::json!([]);
    tree["certificates"] = serde_json::json!([]);
    let tree_path = tmp("set4-corrupt.json");
    std::fs::write(&tree_path, serde_json::to_vec(&tree).unwrap()).unwrap();
    let check = sepsys(&["verify", &fixture("inst-set4"), tree_path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&check.stdout).contains("VIOLATION"));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(sepsys(&["profiles", "nonexistent.json"]).status.code(), Some(2));
    let junk = tmp("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(sepsys(&["tot", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn limits_env_override_is_honored() {
    let run = |limits: &str| {
        Command::new(env!("CARGO_BIN_EXE_sepsys"))
            .args(["profiles", &fixture("inst-set4"), "--max-order", "1"])
            .env("SEPSYS_LIMITS", limits)
            .output()
            .expect("spawn sepsys")
    };
    assert_eq!(run("powerset_n=3").status.code(), Some(2), "limit below n=4 must reject");
    assert_eq!(run("powerset_n=12").status.code(), Some(0));
    assert_eq!(run("bogus_key=1").status.code(), Some(2));
}

#[test]
fn dot_export_names_orientation_classes() {
    let dot_path = tmp("set4.dot");
    let out = sepsys(&["tot", &fixture("inst-set4"), "--dot", dot_path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("graph"));
    // one node per involution pair: the two orientations share a node
    assert!(dot.contains("label=\"{1} | {2,3,4}\""));
}
