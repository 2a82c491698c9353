use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sl213(cache: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sl213"));
    cmd.env_remove("SL213_ORDER").env("SL213_CACHE_DIR", cache);
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    (status.code().expect("exit code"), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn strip_timings(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("millis");
    }
    v
}

#[test]
fn expand_forms_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(sl213(dir.path()).args(["expand", "A0"]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("q^{1/4}: 1"));

    let (_, out, _) = run(sl213(dir.path()).args(["expand", "D11"]));
    assert_eq!(out.lines().next(), Some("q^{75/104}: -4"));

    let (_, out, _) = run(sl213(dir.path()).args(["expand", "j"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(&lines[..2], ["q^{-1}: 1", "q^0: 744"]);
    // Oracle: the published coefficient c(12) of j.
    assert_eq!(lines.last(), Some(&"q^{12}: 874313719685775360"));
}

#[test]
fn expand_phi01_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(sl213(dir.path()).args(["expand", "Phi:0,1"]));
    assert_eq!(code, 0);
    assert_eq!(out, "0\n");
}

#[test]
fn expand_phix_matches_delta() {
    let dir = tempfile::tempdir().unwrap();
    let (_, phi, _) = run(sl213(dir.path()).args(["expand", "PhiX:3,0", "--order", "4"]));
    let (_, delta, _) = run(sl213(dir.path()).args(["expand", "Delta", "--order", "4"]));
    assert_eq!(phi, delta);
    assert!(delta.starts_with("q^1: 1\nq^2: -24\nq^3: 252\n"));
}

#[test]
fn order_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (_, out, _) = run(sl213(dir.path()).env("SL213_ORDER", "1").args(["expand", "j"]));
    assert_eq!(out, "q^{-1}: 1\nq^0: 744\nq^1: 196884\n");
    // The flag wins over the environment.
    let (code, out, _) = run(sl213(dir.path()).env("SL213_ORDER", "1").args(["expand", "j", "--order", "0"]));
    assert_eq!((code, out.as_str()), (2, ""));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(sl213(dir.path()).args(["expand", "A9"])).0, 2);
    assert_eq!(run(sl213(dir.path()).args(["verify", "bogus"])).0, 2);
    assert_eq!(run(sl213(dir.path()).args(["verify", "theta", "--draws", "0"])).0, 2);
    assert_eq!(run(sl213(dir.path()).args(["verify", "--format", "yaml"])).0, 2);
    assert_eq!(run(sl213(dir.path()).args(["expand", "Phi:5,5", "--degree-budget", "30"])).0, 2);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("report.json");
    let (code, _, err) = run(sl213(dir.path()).args(["verify", "theta", "--out"]).arg(&out));
    assert_eq!(code, 3, "{err}");
}

#[test]
fn verify_theta_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(run(sl213(dir.path()).args(["verify", "prop32", "--out"]).arg(&a)).0, 0);
    assert_eq!(run(sl213(dir.path()).args(["verify", "theta", "--out"]).arg(&b)).0, 0);
    let va: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    let vb: Value = serde_json::from_str(&fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(va["parameters"]["seed"], 20130013);
    assert_eq!(va["checks"].as_array().unwrap().len(), 8);
    let keys: Vec<&String> = va["checks"][0].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
    assert_eq!(serde_json::to_string(&strip_timings(va)).unwrap(), serde_json::to_string(&strip_timings(vb)).unwrap());
}

#[test]
fn verify_group_reports_order_and_fails_on_relations() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = run(sl213(dir.path()).args(["verify", "group"]));
    assert_eq!(code, 1);
    assert!(out.contains("2184 elements"));
    assert!(err.contains("FAIL (ST)^3 = I: (ST)^3 = -I"));
}

#[test]
fn singularity_draws_control_tuple_count() {
    let dir = tempfile::tempdir().unwrap();
    let (_, out, _) = run(sl213(dir.path()).args(["verify", "singularities", "--draws", "2", "--seed", "7", "--order", "6"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let tuples = |prefix: &str| {
        let mut t: Vec<&str> = names.iter().filter(|n| n.starts_with(prefix)).filter_map(|n| n.split(" at ").nth(1)).map(|t| t.trim_end_matches(" (derived normalization)")).collect();
        t.sort();
        t.dedup();
        t.len()
    };
    assert_eq!(tuples("E8:"), 2);
    assert_eq!(tuples("Q18:"), 2);
    assert_eq!(v["parameters"]["draws"], 2);
}

#[test]
fn markdown_report_has_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(sl213(dir.path()).args(["verify", "icosahedral", "--format", "markdown", "--order", "4"]));
    assert_eq!(code, 1);
    assert!(out.contains("## icosahedral baseline"));
    assert!(out.contains("| T = -(1/20) Jacobian(f, H) | FAIL |"));
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let (code, out, _) = run(sl213(&cache).args(["cache", "status"]));
    assert_eq!(code, 0);
    assert!(out.starts_with("0 entries"));

    let (code, out, _) = run(sl213(&cache).args(["cache", "warm", "--degree-budget", "20"]));
    assert_eq!(code, 0);
    // (m, n) with 4m + 6n <= 20, excluding (0, 0).
    assert!(out.starts_with("stored 13, reused 0"), "{out}");

    let foreign = cache.join("notes.txt");
    fs::write(&foreign, "keep").unwrap();
    fs::write(cache.join("phi-1-0-n1.mpoly"), "MPOLY v1 6 1\nbroken\n").unwrap();
    let (code, out, err) = run(sl213(&cache).args(["cache", "status"]));
    assert_eq!(code, 0);
    assert!(out.contains("13 entries (1 corrupt)"));
    assert!(err.contains("corrupt cache entry"));

    let (code, out, err) = run(sl213(&cache).args(["expand", "Phi:1,0"]));
    assert_eq!(code, 0);
    assert!(err.contains("skipping corrupt cache entry phi-1-0-n1.mpoly"));
    let fresh = dir.path().join("fresh");
    let (_, rebuilt, _) = run(sl213(&fresh).args(["expand", "Phi:1,0"]));
    assert_eq!(out, rebuilt);
    assert!(out.starts_with("-52*z1^3*z6 + 156*z1*z2*z4*z5"));
    let (_, out, _) = run(sl213(&cache).args(["cache", "status"]));
    assert!(out.contains("13 entries (0 corrupt)"));

    let (code, out, _) = run(sl213(&cache).args(["cache", "clear"]));
    assert_eq!(code, 0);
    assert!(out.starts_with("removed 13 entries"));
    assert!(foreign.exists());
}

#[test]
fn cache_on_a_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    assert_eq!(run(sl213(&file).args(["cache", "warm", "--degree-budget", "12"])).0, 3);
}
