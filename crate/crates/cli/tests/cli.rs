use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tatekit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatekit")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// A directory holding `F_2[x,y]/(x^2,y^2)` as `B.json` with `k`, `A/(x)`, `A/(y)`.
fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["gen", "--family", "ci", "--powers", "2,2", "--char", "2", "-o", "B.json"][..],
        &["gen", "--family", "residue", "--algebra", "B.json", "-o", "k.json"],
        &["gen", "--family", "cyclic", "--algebra", "B.json", "--ideal", "x", "-o", "x.json"],
        &["gen", "--family", "cyclic", "--algebra", "B.json", "--ideal", "y", "-o", "y.json"],
        &["gen", "--family", "free", "--algebra", "B.json", "--rank", "2", "-o", "free.json"],
    ] {
        let o = tatekit(d, args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    }
    dir
}

#[test]
fn generated_files_reparse_identically() {
    let w = workspace();
    let d = w.path();
    let b = std::fs::read_to_string(d.join("B.json")).unwrap();
    assert_eq!(b.trim(), r#"{"field":{"char":2},"kind":"monomial_ci","vars":["x","y"],"powers":[2,2]}"#);
    let file = tatekit::io::AlgebraFile::parse(&b, "B").unwrap();
    assert_eq!(file.to_json(), b);
    let o = tatekit(d, &["gen", "--family", "structure", "--algebra", "B.json", "-o", "Bsc.json"]);
    assert!(o.status.success());
    let sc = std::fs::read_to_string(d.join("Bsc.json")).unwrap();
    assert_eq!(tatekit::io::parse_algebra(&sc, "sc").unwrap(), file.build().unwrap());
    for name in ["k.json", "x.json", "free.json"] {
        let text = std::fs::read_to_string(d.join(name)).unwrap();
        assert_eq!(tatekit::io::ModuleFile::parse(&text, name).unwrap().to_json(), text);
    }
}

#[test]
fn tate_ext_of_residue_field() {
    let w = workspace();
    let o = tatekit(w.path(), &["tate", "ext", "--algebra", "B.json", "--M", "k.json", "--N", "k.json", "--window", "-8:8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(first, "8 7 6 5 4 3 2 1 1 2 3 4 5 6 7 8 9");
}

#[test]
fn tate_tor_json() {
    let w = workspace();
    let o = tatekit(w.path(), &["tate", "tor", "--algebra", "B.json", "--M", "x.json", "--N", "y.json", "--window", "-2:2", "--json"]);
    assert!(o.status.success());
    let t = tatekit::io::parse_table(stdout(&o).trim(), "out").unwrap();
    assert_eq!(t.dims, vec![0; 5]);
    assert!(t.period.is_some());
}

#[test]
fn profile_and_resolve() {
    let w = workspace();
    let o = tatekit(w.path(), &["profile", "--algebra", "B.json", "--M", "k.json", "--window", "-4:3", "--json"]);
    assert!(o.status.success());
    let p: tatekit::invariants::BettiBassProfile = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p.stable_betti, [4, 3, 2, 1, 1, 2, 3, 4]);
    let o = tatekit(w.path(), &["resolve", "--algebra", "B.json", "--M", "free.json", "--window", "-2:2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stripped_rank"], 2);
    assert_eq!(v["ranks"], serde_json::json!([0, 0, 0, 0, 0]));
}

#[test]
fn link_over_truncated_polynomial_ring() {
    let w = workspace();
    let d = w.path();
    for args in [
        &["gen", "--family", "ci", "--powers", "4", "--char", "3", "-o", "C.json"][..],
        &["gen", "--family", "cyclic", "--algebra", "C.json", "--ideal", "x", "-o", "cx.json"],
        &["gen", "--family", "cyclic", "--algebra", "C.json", "--ideal", "x^3", "-o", "cx3.json"],
    ] {
        assert!(tatekit(d, args).status.success());
    }
    let o = tatekit(d, &["link", "--algebra", "C.json", "--M", "cx.json", "--N", "cx3.json", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["linked"], true);
    assert!(v["forward"].is_array());
    let o = tatekit(d, &["link", "--algebra", "B.json", "--M", "x.json", "--N", "y.json"]);
    assert!(stdout(&o).contains("linked: no"));
}

#[test]
fn verify_all_passes() {
    let w = workspace();
    let o = tatekit(w.path(), &["verify", "all", "--algebra", "B.json", "--corpus", "builtin", "--window", "-8:8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains(" 0 refuted"));
    for check in tatekit::theorems::ALL_CHECKS {
        assert!(out.lines().any(|l| l.starts_with(check)), "no report for {check}");
    }
}

#[test]
fn verify_builtin_runs_negative_controls() {
    let w = workspace();
    let o = tatekit(w.path(), &["verify", "balanced-tor", "--window", "-3:3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let runs = v.as_array().unwrap();
    assert_eq!(runs.len(), 5);
    let controls = runs[4]["negative_controls"].as_array().unwrap();
    assert!(!controls.is_empty());
    assert!(controls.iter().all(|c| c["rejected"] == true));
}

#[test]
fn input_errors_exit_two() {
    let w = workspace();
    let d = w.path();
    std::fs::write(d.join("bad.json"), "{\"field\":{\"char\":2},\n\"kind\":\"monomial_ci\",\"vars\":[\"x\"],\"powers\":[2],}").unwrap();
    let o = tatekit(d, &["info", "--algebra", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json:2:"), "{}", stderr(&o));
    let o = tatekit(d, &["tate", "ext", "--algebra", "B.json", "--M", "k.json", "--N", "k.json", "--window", "3:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tatekit(d, &["verify", "nonsense", "--algebra", "B.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tatekit(d, &["gen", "--family", "monomial", "--monomials", "x^2,xy,y^2", "-o", "S.json"]);
    assert!(o.status.success());
    let o = tatekit(d, &["verify", "all", "--algebra", "S.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not Gorenstein"));
    let o = tatekit(d, &["tate", "ext", "--algebra", "B.json", "--M", "missing.json", "--N", "k.json"]);
    assert_eq!(o.status.code(), Some(2));
}
