use std::process::{Command, Output};

use trl_cli::report::Report;

const H: &str = r#"{"matrix":[["1/2","1/2"],["1/2","-1/2"]],"domain":{"type":"lp","n":2,"p":"inf"},"codomain":{"type":"lp","n":2,"p":1}}"#;

fn trl(args: &[&str], caps: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trl"));
    cmd.args(args).env_remove("TRL_CAPS");
    if let Some(c) = caps {
        cmd.env("TRL_CAPS", c);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Report {
    let mut a = args.to_vec();
    a.push("--json");
    let out = trl(&a, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report json")
}

fn row<'a>(r: &'a Report, name: &str) -> &'a trl_cli::report::Row {
    r.results.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no row {name}"))
}

#[test]
fn nuclear_norm_of_hadamard() {
    let r = json(&["norm", "--kind", "nuclear", "--op", H]);
    let n = row(&r, "nuclear");
    assert_eq!(n.exact.as_deref(), Some("2"));
    assert_eq!(n.status, "certified");
}

#[test]
fn tau_interval_collapses_on_hadamard() {
    let r = json(&["radius", "tau", "--op", H]);
    let t = row(&r, "tau_infty");
    assert!(t.certified);
    assert!((t.lower.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!((t.upper.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(row(&r, "tau_3").exact.as_deref(), Some("(5/2)^(1/3)"));
}

#[test]
fn rho_of_l1_plane() {
    let r = json(&["radius", "rho", "--space", r#"{"type":"lp","n":2,"p":1}"#]);
    assert_eq!(row(&r, "rho_infty").exact.as_deref(), Some("sqrt(2)"));
}

#[test]
fn output_is_deterministic() {
    let a = trl(&["radius", "tau", "--op", H, "--json", "--seed", "5"], None);
    let b = trl(&["radius", "tau", "--op", H, "--json", "--seed", "5"], None);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn heuristic_results_are_labeled() {
    let r = json(&["radius", "tau", "--op", H, "--k", "2", "--method", "heuristic"]);
    let t = row(&r, "tau_2");
    assert!(!t.certified);
    assert_eq!(t.status, "heuristic");
    let table = trl(&["radius", "tau", "--op", H, "--k", "2", "--method", "heuristic"], None);
    assert!(String::from_utf8_lossy(&table.stdout).contains("heuristic"));
}

#[test]
fn csv_and_table_formats() {
    let out = trl(&["radius", "rho", "--space", r#"{"type":"lp","n":2,"p":1}"#, "--csv"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "name");
    assert!(rdr.records().any(|r| &r.unwrap()[0] == "rho_infty"));

    let out = trl(&["norm", "--kind", "nuclear", "--op", H, "--rational"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("name") && l.contains("exact")));
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("trl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.json");
    std::fs::write(&path, H).unwrap();
    let a = json(&["norm", "--kind", "operator", "--op", path.to_str().unwrap()]);
    let b = json(&["norm", "--kind", "operator", "--op", H]);
    assert_eq!(a.inputs_digest, b.inputs_digest);
    assert_eq!(row(&a, "operator").exact.as_deref(), Some("1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(trl(&["norm", "--kind", "nuclear", "--op", "{bad"], None).status.code(), Some(2));
    let mismatch = r#"{"matrix":[[1,2,3]],"domain":{"type":"lp","n":2,"p":1},"codomain":{"type":"lp","n":1,"p":1}}"#;
    assert_eq!(trl(&["norm", "--kind", "nuclear", "--op", mismatch], None).status.code(), Some(2));
    assert_eq!(trl(&["reproduce", "nosuch"], None).status.code(), Some(2));
    assert_eq!(trl(&["norm", "--kind", "nuclear", "--op", H], Some("garbage")).status.code(), Some(2));
    assert_eq!(trl(&["radius", "tau", "--op", H, "--k", "3"], Some("tensor_entries=4")).status.code(), Some(3));
    let capped = trl(&["radius", "tau", "--op", H, "--k", "3", "--method", "vertex"], Some("sign_log2=2"));
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds cap"));
}

#[test]
fn reproduce_passes_goldens() {
    let r = json(&["reproduce", "hadamard"]);
    assert!(r.passed());
    assert!(r.results.iter().any(|x| x.pass == Some(true)));
}
