use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qcensus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcensus"))
        .args(args)
        .env_remove("QC_CONFIG")
        .env_remove("QC_SHARDS")
        .env_remove("QC_FORMAT")
        .env_remove("QC_X")
        .output()
        .expect("run qcensus")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcensus-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_examples() {
    let v = json(&qcensus(&["classify", "1,0,0,0,-2"]));
    assert_eq!(v["galois"], "d4");
    assert_eq!(v["r2"], 1);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["families"][0]["conductor"], "-256");
    let v = json(&qcensus(&["classify", "1,0,0,0,1"]));
    assert_eq!(v["galois"], "v4");
    let out = qcensus(&["classify", "0,0,0,0,1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("a4"));
}

#[test]
fn family_and_decompose() {
    let v = json(&qcensus(&["family", "1:1,0,-2"]));
    assert_eq!(v["form"], "1,0,0,0,-2");
    assert_eq!(v["conductor"], "-256");
    let v = json(&qcensus(&["decompose", "1,0,0,0,-2"]));
    assert!(v["h"].is_array() && v["J"].is_array());
    let v = json(&qcensus(&["maximal", "1:4,0,1", "--p", "2"]));
    assert_eq!(v["maximal"], false);
}

#[test]
fn validate_modes() {
    let v = json(&qcensus(&["validate", "--box", "5", "--pmax", "5"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["mismatches"], 0);
    let out = qcensus(&["validate", "--box", "5", "--pmax", "5", "--inject-bug"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["mismatches"].as_u64().unwrap() > 0);
    let v = json(&qcensus(&["validate", "--box", "0", "--pmax", "5"]));
    assert_eq!(v["cases"], 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn integer_inputs() {
    let out = qcensus(&["census", "conductor", "--x", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&qcensus(&["census", "conductor", "--x", "2e4"]));
    assert_eq!(v["x"], 20000);
    assert!(v["total"].as_u64().unwrap() > 0);
}

#[test]
fn densities_csv() {
    let out = qcensus(&["densities", "--kind", "rho2", "--a", "1,2", "--m", "3"]);
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "kind,a,m,rho,space,closed_form,match");
    assert_eq!(lines[1], "rho2,1,3,15,81,15,true");
    assert_eq!(lines.len(), 3);
}

#[test]
fn constants_json() {
    let v = json(&qcensus(&["constants", "--which", "integrals", "--json"]));
    let q = v["elliptic_plus"]["quadrature"].as_f64().unwrap();
    let c = v["elliptic_plus"]["closed_form"].as_f64().unwrap();
    assert!((q - c).abs() < 1e-9);
}

#[test]
fn shard_count_does_not_change_output() {
    let mut hashes = Vec::new();
    for k in ["1", "8"] {
        let m = tmp(&format!("m{k}.json"));
        let e = tmp(&format!("r{k}.csv"));
        let out = qcensus(&[
            "census", "conductor", "--x", "3e5", "--shards", k, "--emit", e.to_str().unwrap(), "--manifest", m.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let man: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
        hashes.push((man["outputs"]["stdout"].clone(), man["outputs"][e.to_str().unwrap()].clone()));
    }
    assert_eq!(hashes[0], hashes[1]);
}

#[test]
fn config_precedence() {
    let cfg = tmp("qc.conf");
    std::fs::write(&cfg, "# defaults\nx = 1000\nshards = 2\nformat = csv\n").unwrap();
    let m = tmp("prec.json");
    let run = |extra: &[&str], env: Option<(&str, &str)>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qcensus"));
        c.args(["census", "conductor", "--config", cfg.to_str().unwrap(), "--manifest", m.to_str().unwrap()]).args(extra);
        for k in ["QC_CONFIG", "QC_SHARDS", "QC_FORMAT", "QC_X"] {
            c.env_remove(k);
        }
        if let Some((k, v)) = env {
            c.env(k, v);
        }
        let out = c.output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let man: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
        (String::from_utf8(out.stdout).unwrap(), man)
    };
    let (text, man) = run(&[], None);
    assert!(text.starts_with("x,mode"));
    assert_eq!(man["config"]["x"]["source"], "file");
    assert_eq!(man["shards"], 2);
    let (_, man) = run(&[], Some(("QC_X", "2000")));
    assert_eq!(man["config"]["x"]["value"], "2000");
    assert_eq!(man["config"]["x"]["source"], "env");
    let (text, man) = run(&["--x", "3000", "--format", "json"], Some(("QC_X", "2000")));
    assert_eq!(man["config"]["x"]["source"], "flag");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["x"], 3000);
}
