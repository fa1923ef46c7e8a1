use std::process::{Command, Output};

fn tfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfk"))
        .args(args)
        .env_remove("TFK_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_list() {
    let o = tfk(&["catalog-list"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert!(names.contains(&"dp4-3A1".to_string()));
    assert!(names.contains(&"mm-3.21".to_string()));
}

#[test]
fn kstab_on_del_pezzo() {
    let o = tfk(&["kstab", "--catalog", "dp4-3A1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Semistable; destabilizer Q=inf, b=(0, 0)"), "{}", stdout(&o));
}

#[test]
fn soliton_on_threefold() {
    let o = tfk(&["soliton", "--catalog", "mm-3.21"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("exists: true; via symmetry criterion (2); xi=(-6.96"), "{}", stdout(&o));
}

#[test]
fn verdict_does_not_change_exit_code() {
    let o = tfk(&["soliton", "--catalog", "dp4-3A1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("exists: false"));
}

#[test]
fn malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"box": [[-1], [1]], "entries": [{"point": "0", "pieces": [{"slope": ["pi"], "constant": 0}]}]}"#).unwrap();
    let o = tfk(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("entries[0].pieces[0].slope[0]"));

    std::fs::write(&bad, "{\"box\": [[-1], [1]],\n  \"entries\": [\n").unwrap();
    let o = tfk(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = tfk(&["kstab", "--catalog", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tfk(&["kstab"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_box_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.json");
    // the box misses the origin, so deg Psi cannot be positive on it
    std::fs::write(&doc, r#"{"box": [[1], [2]], "entries": [{"point": "0", "pieces": [{"slope": [0], "constant": 0}]}]}"#)
        .unwrap();
    let o = tfk(&["validate", "--input", doc.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn json_output() {
    let o = tfk(&["report", "--catalog", "dp4-3A1", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kstab"]["status"], "Semistable");
    assert_eq!(v["soliton"]["exists"], false);
    assert_eq!(v["precision_digits"], 50);
    assert_eq!(v["fano"]["a"]["inf"], "-1");
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn input_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfk(&["report", "--catalog", "mm-3.21", "--json", "--precision", "20"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let doc = dir.path().join("doc.json");
    std::fs::write(&doc, serde_json::to_string_pretty(&v["input"]).unwrap()).unwrap();
    let p = tfk(&["report", "--input", doc.to_str().unwrap(), "--json", "--precision", "20"]);
    assert_eq!(o.stdout, p.stdout);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_tfk"))
        .args(["soliton", "--catalog", "synthetic-three-half", "--json"])
        .env("TFK_PRECISION", "24")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["precision_digits"], 24);
}

#[test]
fn svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pics");
    let o = tfk(&["candidates", "--catalog", "dp4-3A1", "--svg", out.to_str().unwrap()]);
    assert!(o.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"delta_inf.svg".to_string()), "{names:?}");
    assert!(names.contains(&"psi_0.svg".to_string()), "{names:?}");

    let o = tfk(&["report", "--catalog", "mm-3.21", "--svg", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(out.join("psi_1.svg").exists());
}

#[test]
fn report_is_byte_identical() {
    let a = tfk(&["report", "--catalog", "mm-3.21"]);
    let b = tfk(&["report", "--catalog", "mm-3.21"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = tfk(&["report", "--catalog", "dp4-3A1", "--json"]);
    let b = tfk(&["report", "--catalog", "dp4-3A1", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
