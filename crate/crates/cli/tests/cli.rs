//! End-to-end tests of the `wlpcheck` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use wlpcheck::linsys::{cremona_reduce, CremonaTrace};
use wlpcheck::wlp::VerdictRecord;
use wlpcheck::LinearSystem;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlpcheck")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["check", "--n", "4", "--d", "4"]), 0);
    assert_eq!(code(&["check", "--n", "2", "--d", "2"]), 2);
    assert_eq!(code(&["scan", "--n", "2..2", "--d", "2..2"]), 2);
    assert_eq!(code(&["check", "--n", "1", "--d", "4"]), 1);
    assert_eq!(code(&["check", "--n", "4"]), 1);
    assert_eq!(code(&["check", "--n", "4", "--d", "4", "--trials", "0"]), 1);
    assert_eq!(code(&["linsys", "L_2(2; 2^3)", "cremona"]), 1);
    assert_eq!(code(&["linsys", "garbage", "vdim"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["reproduce", "hvectors"]), 0);
    assert_eq!(code(&["oracle", "duality", "--vars", "4", "--exponents", "4^6", "--at", "7"]), 0);
}

#[test]
fn check_json_round_trips() {
    let text = stdout(&["check", "--n", "4", "--d", "4", "--json"]);
    let rec: VerdictRecord = serde_json::from_str(&text).unwrap();
    assert_eq!((rec.n, rec.d, rec.j), (4, 4, 13));
    assert_eq!(rec.e, "-2200");
    assert_eq!(rec.d_lower, "40");
    assert_eq!(rec.certificate_tag, "prop32");
    assert_eq!(rec.verdict, "FailsWLP");
    assert_eq!(serde_json::to_string_pretty(&rec).unwrap() + "\n", text);
}

#[test]
fn boundary_case_notes() {
    let rec: VerdictRecord = serde_json::from_str(&stdout(&["check", "--n", "2", "--d", "4", "--json"])).unwrap();
    assert_eq!(rec.e, "0");
    assert!(rec.notes.iter().any(|n| n.contains("max(E, 0) = 0 < D")));
}

#[test]
fn reduce_trace_round_trips() {
    let text = stdout(&["linsys", "L_3(7; 4^6)", "reduce", "--json"]);
    let trace: CremonaTrace = serde_json::from_str(&text).unwrap();
    let sys: LinearSystem = "L_3(7; 4^6)".parse().unwrap();
    assert_eq!(trace, cremona_reduce(&sys).1);
    assert_eq!(trace.final_system.to_string(), "L_3(1; 0^6)");
}

#[test]
fn scan_rows() {
    let text = stdout(&["scan", "--n", "2..15", "--d", "4..4", "--csv"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "schema,n,d,j,E,D_lower,certificate_tag,verdict,notes");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r.contains(",FailsWLP,")));
}

#[test]
fn output_files_are_reproducible() {
    let (a, b) = (scratch("scan_a.json"), scratch("scan_b.json"));
    for path in [&a, &b] {
        let p = path.to_str().unwrap();
        let args = ["scan", "--n", "2..3", "--d", "2..5", "--oracle", "--json", "--out", p, "--seed", "7"];
        assert!(matches!(code(&args), 0 | 2));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let rows: Vec<VerdictRecord> = serde_json::from_slice(&x).unwrap();
    assert_eq!(rows.len(), 2 * 4);
}

#[test]
fn oracle_commands() {
    assert!(stdout(&["oracle", "fatpoints", "L_2(4; 2^5)"]).contains('1'));
    let text = stdout(&["oracle", "power", "--vars", "3", "--exponents", "2^4", "--at", "2", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["dimension"], 2);
}

#[test]
fn reproduce_cn_scan() {
    let text = stdout(&["reproduce", "cn-scan", "--cn-max", "40"]);
    assert!(text.contains("c_2: PASS (-26)"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn linsys_vdim() {
    assert_eq!(stdout(&["linsys", "L_3(4; 2^6)", "vdim"]).trim(), "11");
}
