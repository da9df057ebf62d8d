use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn flagperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagperm"))
        .args(args)
        .env_remove("FLAGPERM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flagperm-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn rootsys_report_a2() {
    let out = flagperm(&["rootsys", "report", "--type", "A", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["positive_roots"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["weyl_order"], 6);
    assert_eq!(v["config"]["type"], "A2");
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn flagmod_build_partition() {
    let out = flagperm(&["flagmod", "build", "--type", "A2", "--q", "2", "--coeff", "F5", "--J", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["dims"], serde_json::json!([1, 6, 6, 8]));
    assert_eq!(v["result"]["partition_total"], 21);
    assert_eq!(v["result"]["formula_total"], 21);
    let repro = v["reproduce"].as_str().unwrap();
    assert!(repro.starts_with("flagperm flagmod build") && repro.contains("--coeff F5"));
}

#[test]
fn flagmod_over_rationals() {
    let v = json(&flagperm(&["flagmod", "build", "--type", "A1", "--q", "3", "--coeff", "Q"]));
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["dims"], serde_json::json!([1, 3]));
}

#[test]
fn usage_errors_exit_two() {
    let out = flagperm(&["flagmod", "build", "--type", "A2", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["verdict"], "error");
    assert_eq!(v["kind"], "usage");
    assert!(v["message"].as_str().unwrap().contains("prime power"));
    assert!(v["reproduce"].as_str().unwrap().contains("--q 6"));

    let out = flagperm(&["charp", "pipeline", "--type", "A2", "--p", "2", "--coeff", "F5", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["message"].as_str().unwrap().contains("char 2"));

    let out = flagperm(&["augment", "search", "--type", "A2", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn randomized_reports_are_byte_identical() {
    let args = ["augment", "search", "--type", "A2", "--q", "2", "--coeff", "F5", "--trials", "20", "--seed", "9"];
    let a = flagperm(&args);
    let b = flagperm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = flagperm(&["augment", "search", "--type", "A2", "--q", "2", "--coeff", "F5", "--trials", "20", "--seed", "10"]);
    assert_ne!(json(&a)["config_hash"], json(&c)["config_hash"]);
}

#[test]
fn selfenc_commands() {
    let v = json(&flagperm(&["selfenc", "closure", "--type", "A2", "--q", "4", "--gens", "1,0,0;0,1,0", "--orders", "exhaustive"]));
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["orders_checked"], 6);
    assert_eq!(v["result"]["order"], 8);

    let v = json(&flagperm(&["selfenc", "tower", "--type", "A2", "--q", "16", "--exponents", "2,4,4"]));
    assert_eq!(v["result"]["order"], 1024);
    assert_eq!(v["result"]["root_factor_sizes"], serde_json::json!([4, 16, 16]));

    let out = flagperm(&["selfenc", "tower", "--type", "A2", "--q", "16", "--exponents", "4,4,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["kind"], "invalid-input");
}

#[test]
fn charp_pipeline_reports_completion() {
    let out = flagperm(&["charp", "pipeline", "--type", "A2", "--p", "2", "--J", "I", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["coeff"], "F2");
    assert_eq!(v["result"]["per_J"][0]["completed"], 5);
}

#[test]
fn export_then_factor() {
    let dir = scratch("export");
    let path = dir.join("steinberg.json");
    let out = flagperm(&["modengine", "export", "--type", "A2", "--q", "2", "--coeff", "F2", "--J", "I", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = flagperm(&["modengine", "factors", "--input", path.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["result"]["dims"], serde_json::json!([8]));
    assert_eq!(v["checks"][1]["detail"]["confirmed"], 1);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cache_directory_is_used() {
    let dir = scratch("cache");
    let out = Command::new(env!("CARGO_BIN_EXE_flagperm"))
        .args(["modengine", "export", "--type", "A1", "--q", "3", "--coeff", "F5"])
        .env("FLAGPERM_CACHE_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n == "constants-A1.json"), "{names:?}");
    assert!(names.iter().any(|n| n.starts_with("module-")), "{names:?}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn export_without_destination_is_rejected() {
    let out = flagperm(&["modengine", "export", "--type", "A1", "--q", "2", "--coeff", "F5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_a2() {
    let out = flagperm(&["verify", "all", "--type", "A2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for suite in ["rootsys.", "chevalley.", "flagmod.", "selfenc.", "augment.", "charp.", "modengine."] {
        assert!(names.iter().any(|n| n.starts_with(suite)), "missing {suite}");
    }
}
