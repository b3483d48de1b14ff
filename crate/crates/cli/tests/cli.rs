use std::io::Write;
use std::process::{Command, Output};

fn kneser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser")).args(args).env_remove("KNESER_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn k4_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "4 2 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    f
}

#[test]
fn count_complete_graph() {
    let f = k4_file();
    let path = f.path().to_str().unwrap();
    let o = kneser(&["count", "--k", "2", "--ell", "1", path]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "8");
    let o = kneser(&["count", "--k", "3", "--ell", "1", "--method", "chromatic", path]);
    assert_eq!(stdout(&o).trim(), "216");
}

#[test]
fn count_json_uses_decimal_strings() {
    let f = k4_file();
    let o = kneser(&["--json", "count", "--k", "3", "--ell", "1", f.path().to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "216");
    assert_eq!(v["edges"], 6);
}

#[test]
fn cnd_line() {
    let o = kneser(&["formula", "--what=cnd", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "c=2 N=6 D=4");
}

#[test]
fn formula_csv_has_header() {
    let o = kneser(&["--csv", "formula", "--what", "coverage", "--n", "12", "--r", "4", "--ell", "2", "--c", "2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n,r,ell,c,"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn identities_suite_passes() {
    let o = kneser(&["verify", "--suite=identities", "--n", "12", "--r", "4", "--ell", "2", "--c", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass]"));
}

#[test]
fn report_csv_sections() {
    let o = kneser(&["--csv", "verify", "--suite", "k2", "--n", "5", "--r", "3", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("section,name,kind,value,rank\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("row,")).count(), 5);
    assert_eq!(text.lines().filter(|l| l.starts_with("verdict,")).count(), 2);
}

#[test]
fn malformed_input_exits_two() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "4 2 1\n1 9\n").unwrap();
    let o = kneser(&["count", "--k", "2", "--ell", "1", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(kneser(&["count", "--k", "2"]).status.code(), Some(2));
    assert_eq!(kneser(&["formula", "--what", "cnd"]).status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(["verify", "--suite", "k2", "--n", "5", "--r", "3", "--ell", "2"])
        .env("KNESER_BUDGET", "0.0000001")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn construct_round_trips_through_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("star.hg");
    let o = kneser(&["construct", "--family", "star", "--n", "5", "--r", "2", "--ell", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // a star is pairwise intersecting, so every coloring is Kneser
    let o = kneser(&["count", "--k", "3", "--ell", "1", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "81");
}
