use marked_groups::ball::{ball, BallOptions};
use marked_groups::{parse_group, MarkedGroup};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn mgroups(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgroups")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mgroups-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ball_writes_certificate() {
    let path = scratch("ball.json");
    let p = path.to_str().unwrap();
    let o = mgroups(&["ball", "Z^2", "--gens", "e1,e2", "-R", "2", "-o", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let file = std::fs::read_to_string(&path).unwrap();
    let lib = ball(&MarkedGroup::parse(parse_group("Z^2").unwrap(), "e1,e2").unwrap(), 2, &BallOptions::default()).unwrap();
    assert_eq!(file, lib.to_json());
    assert!(stdout(&o).contains("nu=13"));
}

#[test]
fn witness_abelian_step_agrees() {
    let o = mgroups(&["witness", "abelian_step", "--k", "2", "--l", "3", "-R", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agree=true"));
}

#[test]
fn order_abelian_verdicts() {
    let o = mgroups(&["order-abelian", "Z x Z/6", "Z^2 x Z/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("true"));
    let o = mgroups(&["order-abelian", "Z^2 x Z/2", "Z x Z/6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("false"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(mgroups(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mgroups(&["ball", "Q", "-R", "2"]).status.code(), Some(2));
    assert_eq!(mgroups(&["witness", "no_such_case", "-R", "2"]).status.code(), Some(2));
    let o = mgroups(&["ball", "F2", "-R", "12", "--max-states", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_echoes_config() {
    let o = mgroups(&["compare", "Z^2", "(Z)x(Z/7)", "-R", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"], "compare");
    assert_eq!(v["result"]["agree"], true);
    assert!(v.get("timings").is_some());
    let o = mgroups(&["compare", "Z^2", "(Z)x(Z/2)", "-R", "2", "--format", "json", "--omit-timings"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("timings").is_none());
}

#[test]
fn in_process_matches_binary() {
    let args = ["mgroups", "growth", "Grig", "-R", "4", "--format", "csv"];
    let o = mgroups(&args[1..]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("growth.csv");
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["-o", path.to_str().unwrap()]);
    let argv: Vec<String> = with_out.iter().map(|s| s.to_string()).collect();
    assert_eq!(marked_groups::cli::run(&argv), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&o));
}

#[test]
fn identity_search_exit_codes() {
    let ok = mgroups(&["discriminate", "identity", "--group", "N2_2/3", "--words", "[x,y]^3", "-R", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = mgroups(&["discriminate", "identity", "--group", "N2_2/5", "--words", "[x,y]^3", "-R", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    let s = mgroups(&["sentence", "commtrans", "--group", "(Z)x(F2)", "--rho", "2"]);
    assert_eq!(s.status.code(), Some(1));
}

#[test]
fn alpha_and_csv_outputs() {
    let o = mgroups(&["alpha"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.76742"));
    let o = mgroups(&["order-abelian", "--catalog", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("A,B,verdict,method"));
    assert_eq!(out.lines().count(), 1 + 70 * 70);
}
