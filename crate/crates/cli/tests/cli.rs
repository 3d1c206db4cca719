use std::path::PathBuf;
use std::process::{Command, Output};

use equijac::report::ReportJson;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equijac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn lowest_grade_verifies() {
    let o = run(&["verify", "--grade", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("records=4 "), "{out}");
    assert!(out.contains("scalar_relations=10"), "{out}");
    assert!(out.contains("failed=0"));
}

#[test]
fn repairs_need_the_flag() {
    assert_eq!(run(&["verify", "--grade", "5,4"]).status.code(), Some(1));
    let o = run(&["verify", "--grade", "5,4", "--allow-repairs"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("AuditRepaired"));
}

#[test]
fn json_round_trips_and_agrees_with_text() {
    let text = stdout(&run(&["verify", "--grade", "4,4", "--orbit"]));
    let o = run(&["verify", "--grade", "4,4", "--orbit", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: ReportJson = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.schema, "equijac-report/1");
    let again: ReportJson = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
    for r in &report.records {
        let line = text.lines().find(|l| l.starts_with(&r.id)).unwrap();
        assert!(line.contains(&r.status), "{line}");
    }
}

#[test]
fn poles_of_top_component() {
    let o = run(&["poles", "[P5 @ P5]_9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "div=4 diag=4");
    assert_eq!(stdout(&run(&["poles", "[P5 @ P5]_7"])).trim(), "zero");
}

#[test]
fn parse_failures_exit_two() {
    assert_eq!(run(&["poles", "[P5 @ P5"]).status.code(), Some(2));
    assert_eq!(run(&["poles", "[P5 @ P5]_4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["audit", "--id", "nope"]).status.code(), Some(2));
    let bad = scratch(
        "bad.cov",
        "[P5 @ P5]_1 = 1/144 # id=x1 grade=(0,0)\n[P5 @ = 0\n",
    );
    assert_eq!(
        run(&["verify", "--catalog", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn custom_catalog_with_wrong_constant() {
    let cat = scratch(
        "wrong.cov",
        "[P5 @ P5]_5 + 1/7 * P5 = 0  # id=t1 grade=(2,2) dim=5\n",
    );
    let path = cat.to_str().unwrap();
    let o = run(&["verify", "--catalog", path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("coefficients=[1, 1/(2^2*3)]"),
        "{}",
        stdout(&o)
    );
    let o = run(&["audit", "--id", "t1", "--catalog", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nullspace_dim=1"));
}

#[test]
fn rank_is_full() {
    let o = run(&["rank", "--seed", "1", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.lines().any(|l| l == "rank=72 profile=3,4,4,4,4,1,1"),
        "{out}"
    );
    assert_eq!(out.matches("block(6,4)=10").count(), 3);
}

#[test]
fn rank_at_a_given_curve() {
    let curve = scratch("curve.txt", "[1, 0, -3, 0, 2, 0, 1]\n");
    let o = run(&["rank", "--curve", curve.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank=72"));
    let short = scratch("short.txt", "1 2 3\n");
    assert_eq!(
        run(&["rank", "--curve", short.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn kummer_holds() {
    let o = run(&["kummer"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for id in ["k0", "k1", "k2", "k3"] {
        assert!(out.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
}

#[test]
fn table_reports_invariant_class() {
    let o = run(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("class I computed=(3,1) printed=(1,3)"));
    assert!(out.contains("discrepancy I:"));
    assert!(out.contains("P5 x P5 9:(4,4) 7:0 5:(2,2) 3:0 1:(0,0)"));
}

#[test]
fn derive_one_grade() {
    let o = run(&["derive", "--dim", "2", "--grade", "0,0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rels: Vec<&str> = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_str().unwrap())
        .collect();
    assert!(rels.contains(&"[P5 @ P4]_2 = 0"), "{rels:?}");
    assert_eq!(run(&["derive", "--dim", "2"]).status.code(), Some(2));
}
