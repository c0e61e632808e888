use std::process::{Command, Output};

fn latdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latdeg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sd_json() {
    let o = latdeg(&["sd", "dihedral:8", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sd"], "23/25");
}

#[test]
fn sdstar_reports_section() {
    let o = latdeg(&["sdstar", "alternating:4", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sd_star"], "16/25");
}

#[test]
fn formulas_table() {
    let o = latdeg(&["formulas", "--dihedral", "3", "--schmidt", "2", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("5/6"), "{out}");
    assert!(out.contains("69/125"), "{out}");
}

#[test]
fn limits_strict_q() {
    let o = latdeg(&["formulas", "--limits", "5", "--count", "3", "--strict-q", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let qs: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, [31, 71, 2801]);
}

#[test]
fn schmidt_census() {
    let o = latdeg(&["schmidt", "2", "7", "--report", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn lattice_dump() {
    let o = latdeg(&["lattice", "symmetric:3"]);
    assert!(o.status.success());
    let v: Vec<Vec<usize>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 6);
    assert_eq!(v.iter().map(Vec::len).sum::<usize>(), 1 + 3 * 2 + 3 + 6);
}

#[test]
fn scan_csv_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = latdeg(&[
        "scan",
        "--max-order",
        "16",
        "--families",
        "dihedral,cyclic",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "verdict"));
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[0] == "D8"));
}

#[test]
fn errors_exit_one() {
    assert_eq!(latdeg(&["sd", "nonsense:4"]).status.code(), Some(1));
    assert_eq!(latdeg(&["schmidt", "2", "2"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"label\": 3\n}").unwrap();
    let o = latdeg(&["scan", "--max-order", "4", "--ingest", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
}
