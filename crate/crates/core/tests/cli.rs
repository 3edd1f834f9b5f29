use std::fs;
use std::process::{Command, Output};

fn espart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_espart"))
        .args(args)
        .env_remove("ESPART_OEIS_CACHE")
        .env_remove("ESPART_OEIS_ENDPOINT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_lists_in_decreasing_order() {
    let o = espart(&["enumerate", "--family", "all", "--n", "5", "--min-len", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(3,1,1)\n(2,2,1)\n(2,1,1,1)\n(1,1,1,1,1)\ncount 4\n");
    let o = espart(&["enumerate", "--n", "-3"]);
    assert_eq!(stdout(&o), "count 0\n");
}

#[test]
fn seq_routes_agree_and_render_as_json() {
    let o = espart(&["seq", "--id", "c", "--routes", "all", "--n", "0..40", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 41);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn verify_writes_csv_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let o = espart(&["verify", "--id", "T4f,T3e,L1", "--n", "0..24", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("identity_id,n,lhs,rhs,status\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",PASS")));
}

#[test]
fn failing_conjecture_exits_one_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let o = espart(&["conjecture", "--id", "C9", "--d", "5", "--n", "0..36", "--dump-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let dumped: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(dumped.len(), 1);
    let cx: serde_json::Value = serde_json::from_str(&fs::read_to_string(dumped[0].as_ref().unwrap().path()).unwrap()).unwrap();
    assert_eq!(cx["n"], 2);
}

#[test]
fn shifted_floor_table_passes() {
    let table = concat!(env!("CARGO_MANIFEST_DIR"), "/data/conjectures/c9_d5_shifted.txt");
    let o = espart(&["conjecture", "--id", "C9(d=5)", "--n", "0..36", "--table", table]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injectivity_collision_is_a_failure() {
    let o = espart(&["injectivity", "--k", "3", "--n", "0..22"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(9,2,2)"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("counterexample"));
    let o = espart(&["injectivity", "--family", "binary", "--k", "2", "--n", "0..40"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn oeis_diff_uses_bundled_data_and_fetch_needs_network() {
    let o = espart(&["oeis", "diff", "--seq", "a", "--anum", "A131205", "--offset", "-1", "--n", "2..40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("39 compared, 0 mismatches"));
    let o = espart(&["oeis", "fetch", "--anum", "A227800"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_series_bfile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let o = espart(&["export", "--what", "series", "--gf", "q", "--n", "4", "--path", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(path).unwrap(), "0 1\n1 3\n2 7\n3 13\n4 23\n");
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(espart(&["seq", "--id", "z"]).status.code(), Some(2));
    assert_eq!(espart(&["verify", "--id", "T9z"]).status.code(), Some(2));
    assert_eq!(espart(&["verify", "--config", "/nonexistent/espart.conf"]).status.code(), Some(2));
}
