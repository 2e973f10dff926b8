//! End-to-end runs of the `ublocks` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ublocks"));
    c.env_remove("UBLOCKS_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../ublocks/data/golden")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ublocks-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn copy_goldens(to: &Path) {
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

fn cell(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_default()
        .to_string()
}

fn numbers(out: &str) -> Vec<String> {
    out.lines()
        .skip(1)
        .filter_map(|l| l.split('\t').next())
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

#[test]
fn order_examples() {
    let o = run(&["order", "G2", "--q", "5", "--ell", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(cell(&s, "order"), "5859000000");
    assert_eq!(cell(&s, "2-part"), "64");
    let s = stdout(&run(&["order", "Phi1^6"]));
    assert!(cell(&s, "generic").ends_with("Phi1^6"));
    let s = stdout(&run(&["order", "2E6", "--q", "2"]));
    assert_eq!(cell(&s, "simple order"), "76532479683774853939200");
}

#[test]
fn blocks_examples() {
    let s = stdout(&run(&[
        "blocks", "E6ad", "--series", "A5A1", "--ell", "3", "--q", "4",
    ]));
    assert_eq!(numbers(&s), vec!["13"]);
    let s = stdout(&run(&[
        "blocks", "E8", "--series", "o6", "--ell", "5", "--q", "11",
    ]));
    assert_eq!(numbers(&s), vec!["1", "2", "3", "4", "5"]);
    let s = stdout(&run(&[
        "blocks", "E8", "--series", "o6", "--ell", "5", "--q", "2",
    ]));
    assert_eq!(numbers(&s), vec!["6", "7"]);
    assert!(s.contains("Z4xA1") && s.contains("18chars"));
}

#[test]
fn robinson_examples() {
    let o = run(&["robinson", "E6ad", "--ell", "2", "--q", "9"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let principal = s.lines().find(|l| l.contains("principal:E6")).unwrap();
    assert_eq!(principal.split('\t').nth(3), Some("8"));
    let o = run(&["robinson", "E8", "--ell", "2", "--q", "5,7"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(
        rows.iter().all(|l| l.split('\t').nth(4) == Some("true")),
        "{s}"
    );
}

#[test]
fn verify_identical_passes() {
    let o = run(&["verify", "--golden", golden_dir().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_reports_edited_cell() {
    let d = scratch("edit");
    copy_goldens(&d);
    let p = d.join("e6ad.tsv");
    let text = std::fs::read_to_string(&p)
        .unwrap()
        .replacen("A5xA1", "A5xA2", 1);
    std::fs::write(&p, text).unwrap();
    let o = run(&["verify", "--golden", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let all = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(all.contains("e6ad"), "{all}");
}

#[test]
fn verify_missing_file_is_usage_error() {
    let d = scratch("missing");
    copy_goldens(&d);
    std::fs::remove_file(d.join("twins.tsv")).unwrap();
    assert_eq!(
        run(&["verify", "--golden", d.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_and_tsv_agree() {
    for id in ["e6ad", "twins", "sylow2"] {
        let tsv = stdout(&run(&["tables", "--emit", id]));
        let json: serde_json::Value =
            serde_json::from_str(&stdout(&run(&["--format", "json", "tables", "--emit", id])))
                .unwrap();
        let mut lines = tsv.lines();
        let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
        let cols: Vec<&str> = json["columns"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap())
            .collect();
        assert_eq!(header, cols);
        let rows = json["rows"].as_array().unwrap();
        let tsv_rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), tsv_rows.len());
        for (r, line) in rows.iter().zip(tsv_rows) {
            for (c, v) in cols.iter().zip(line.split('\t')) {
                assert_eq!(r[*c].as_str().unwrap(), v, "{id} {c}");
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["tables", "--emit", "e8-l2"]);
    let b = run(&["tables", "--emit", "e8-l2"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["robinson", "E7", "--ell", "2", "--q", "3,5"]);
    let b = run(&["robinson", "E7", "--ell", "2", "--q", "3,5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["order", "X9"]).status.code(), Some(2));
    assert_eq!(run(&["order", "G2", "--q", "6"]).status.code(), Some(2));
    assert_eq!(
        run(&["blocks", "E6ad", "--series", "nope", "--ell", "3", "--q", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_dataset_exits_three() {
    let d = scratch("data");
    let p = d.join("bad.dat");
    std::fs::write(&p, "unip G2 bogus q^9*Phi5 1 cusp:1\n").unwrap();
    let o = bin()
        .env("UBLOCKS_DATA", &p)
        .args(["tables", "--emit", "twins"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "--dataset",
        p.to_str().unwrap(),
        "tables",
        "--emit",
        "twins",
    ]);
    assert_eq!(o.status.code(), Some(3));
}
