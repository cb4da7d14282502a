use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhom")).args(args).output().expect("binary runs")
}

fn qhom_env(args: &[&str], key: &str, val: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhom")).args(args).env(key, val).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn links(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", "links", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn quandle_summary_and_table_round_trip() {
    let v = json_of(&qhom(&["--json", "quandle", "dihedral:3", "--table"]));
    assert_eq!(v["order"], 3);
    assert_eq!(v["connected"], true);
    assert_eq!(v["inn"]["order"], 6);

    let text = qhom(&["quandle", "dihedral:3", "--table"]);
    let s = String::from_utf8(text.stdout).unwrap();
    let table = &s[s.find("quandle v1").unwrap()..];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d3.txt");
    std::fs::write(&path, table).unwrap();
    let spec = format!("table:{}", path.display());
    let v = json_of(&qhom(&["--json", "quandle", &spec]));
    assert_eq!(v["inn_order"], 6);

    std::fs::write(&path, "quandle v1\nn=2\n0 0\n1 1\n").unwrap();
    let v = json_of(&qhom(&["--json", "quandle", &spec]));
    assert_eq!(v["components"], 2);
    // x*y = y is not idempotent
    std::fs::write(&path, "quandle v1\nn=2\n0 1\n0 1\n").unwrap();
    assert_eq!(qhom(&["quandle", &spec]).status.code(), Some(2));
}

#[test]
fn homology_json_schema() {
    let v =
        json_of(&qhom(&["--json", "homology", "dihedral:3", "--degree", "2", "--variant", "R", "--coefficients", "X"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["coefficients", "degree", "quandle", "rank", "torsion", "variant"]);
    assert_eq!(v["quandle"], "dihedral:3");
    assert_eq!(v["variant"], "R");
    assert_eq!(v["coefficients"], "X");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["torsion"], serde_json::json!([3]));

    let v = json_of(&qhom(&["--json", "homology", "gf:3^2:t^2+1:omega=t", "--degree", "3"]));
    assert_eq!(v["torsion"], serde_json::json!([3, 3, 3]));
    let v = json_of(&qhom(&["--json", "homology", "dihedral:3", "--degree", "3", "--mod", "3"]));
    assert_eq!(v["dimension"], 1);
    let v = json_of(&qhom(&[
        "--json",
        "homology",
        "dihedral:3",
        "--degree",
        "2",
        "--variant",
        "R",
        "--coefficients",
        "Inn",
    ]));
    assert_eq!(v["coefficients"], "Inn");
}

#[test]
fn homotopy_reports_derivation() {
    let v = json_of(&qhom(&["--json", "homotopy", "pi2q", "gf:3^2:t^2+1:omega=t"]));
    assert_eq!(v["value"]["group"], "(Z/3)^3");
    assert_eq!(v["derivation"], "exterior-split");
    let v = json_of(&qhom(&["--json", "homotopy", "pi3q", "dihedral:5"]));
    assert_eq!(v["value"]["group"], "Z/5");
    assert_eq!(v["rack_pi3"]["group"], "Z/10");
    let v = json_of(&qhom(&["--json", "homotopy", "ranks", "--components", "3"]));
    assert_eq!((v["pi2_rank"].as_u64(), v["pi3_rank"].as_u64()), (Some(3), Some(2)));
    let v = json_of(&qhom(&["--json", "homotopy", "ranks", "--components", "1"]));
    assert_eq!((v["pi2_rank"].as_u64(), v["pi3_rank"].as_u64()), (Some(0), Some(0)));
    // not regular: T = -1 on Z/4 has 1 - T non-invertible
    assert_eq!(qhom(&["homotopy", "pi2q", "dihedral:4"]).status.code(), Some(2));
}

#[test]
fn cocycle_list_verify_eval() {
    let v = json_of(&qhom(&["--json", "cocycles", "list", "--field", "3^2:t^2+1", "--omega", "t"]));
    assert_eq!(v["b2"], 1);
    assert_eq!(v["b3"], 3);
    assert_eq!(v["members"].as_array().unwrap().len(), 4);
    assert!(v["members"][3]["polynomial"].is_null());

    let out = qhom(&["cocycles", "verify", "--field", "3^2:t^2+1", "--omega", "-1", "--independence"]);
    assert!(out.status.success());

    let v = json_of(&qhom(&[
        "--json",
        "cocycles",
        "eval",
        "--field",
        "3",
        "--omega",
        "-1",
        "--cocycle",
        "E1(1,p*1)",
        "--at",
        "0,1,2",
    ]));
    assert_eq!(v["value"], "2");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"terms":[{"e":[2,0,1],"c":"1"}]}"#).unwrap();
    let out = qhom(&["cocycles", "verify", "--field", "3^2:t^2+1", "--omega", "t", "--cocycle", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn link_colorings_and_invariants() {
    let trefoil = links("trefoil.pd");
    let v = json_of(&qhom(&["--json", "link", "color", "--quandle", "dihedral:3", "--diagram", &trefoil]));
    assert_eq!(v["colorings"], 9);
    assert_eq!(v["linear"], "9");
    let v = json_of(&qhom(&["--json", "link", "color", "--quandle", "trivial:2", "--diagram", "braid:2:1,1"]));
    assert_eq!(v["colorings"], 4);

    let out =
        qhom(&["link", "invariant", "--quandle", "gf:3:omega=-1", "--cocycle", "E1(1,p*1)", "--diagram", &trefoil]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "9*[0] + 18*[2]");

    // the same cocycle from a terms file
    let v = json_of(&qhom(&["--json", "cocycles", "list", "--field", "3", "--omega", "-1"]));
    let terms = &v["members"][0]["polynomial"];
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("theta.json");
    std::fs::write(&file, serde_json::json!({ "terms": terms }).to_string()).unwrap();
    let out = qhom(&[
        "link",
        "invariant",
        "--quandle",
        "gf:3:omega=-1",
        "--cocycle",
        file.to_str().unwrap(),
        "--diagram",
        &trefoil,
    ]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "9*[0] + 18*[2]");

    // a zero 2-cocycle from a value table counts colorings
    let zeros = dir.path().join("zero.json");
    std::fs::write(&zeros, serde_json::json!({"arity": 2, "values": vec!["0"; 9]}).to_string()).unwrap();
    let out = qhom(&[
        "link",
        "invariant",
        "--quandle",
        "gf:3:omega=-1",
        "--cocycle",
        zeros.to_str().unwrap(),
        "--diagram",
        &trefoil,
    ]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "9*[0]");
}

#[test]
fn regular_table_passes() {
    let out = qhom(&["--json", "tables", "regular"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn sweep_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "sweep", "--primes", "3,5", "--degrees", "1,2"];
    let first = qhom_env(&args, "QHOM_CACHE_DIR", dir.path());
    assert!(first.status.success());
    let lines: Vec<Value> = first
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    // omega ranges over q - 2 elements per field
    assert_eq!(lines.len(), 1 + 7 + 3 + 23);
    let f9 = lines.iter().find(|r| r["spec"] == "gf:3^2:t^2+1:omega=t").unwrap();
    assert_eq!((f9["b2"].as_u64(), f9["b3"].as_u64(), f9["pi2_dim_mod_p"].as_u64()), (Some(1), Some(3), Some(3)));

    let uncached = qhom(&args);
    assert_eq!(first.stdout, uncached.stdout);
    let second = qhom_env(&args, "QHOM_CACHE_DIR", dir.path());
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.is_empty());

    // tampering with a record is caught by the checksum and the value recomputed
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&entry).unwrap();
    std::fs::write(&entry, text.replacen("\"b3\":", "\"b3\":7", 1)).unwrap();
    let third = qhom_env(&args, "QHOM_CACHE_DIR", dir.path());
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("checksum"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qhom(&["homology", "dihedral:3"]).status.code(), Some(2));
    assert_eq!(qhom(&["quandle", "nonsense:3"]).status.code(), Some(2));
    assert_eq!(
        qhom(&["link", "color", "--quandle", "dihedral:3", "--diagram", "/no/such/file.pd"]).status.code(),
        Some(2)
    );
}
