use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_betamatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn matching_two_branch_example() {
    let v = stdout_json(&run(&["matching", "--multinacci", "3", "--alpha", "1/10"]));
    assert_eq!(v["kappa"], 3);
    assert_eq!(v["result"]["outcome"]["kind"], "Matched");
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 4);
}

#[test]
fn matching_trace_csv_and_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = run(&[
        "matching",
        "--multinacci",
        "3",
        "--alpha",
        "0.47",
        "--mode",
        "both",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    let v = stdout_json(&o);
    assert_eq!(v["agree"], true);
    let text = std::fs::read_to_string(trace).unwrap();
    assert!(text.starts_with("n,sign,e,d_float,d_exact"));
}

#[test]
fn qseq_closed_form() {
    let v = stdout_json(&run(&["qseq", "genbeta:alpha=0.3,beta=1.9", "-n", "40"]));
    let q40 = v["values"][39].as_f64().unwrap();
    let b: f64 = 1.9;
    assert!((q40 - (1.0 - b.powi(-40)) / (b - 1.0)).abs() < 1e-10);
}

#[test]
fn sweep_config_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = run(&[
            "sweep",
            "--config",
            config("fig2.cfg").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 401);
}

#[test]
fn sweep_from_flags_as_json_lines() {
    let o = run(&[
        "sweep",
        "--field",
        "multinacci(3)",
        "--alpha-lo",
        "0.45",
        "--alpha-hi",
        "0.5",
        "--grid",
        "3",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["index"], 2);
}

#[test]
fn per_point_failures_exit_one() {
    let o = run(&[
        "sweep",
        "--field",
        "multinacci(3)",
        "--alpha-lo",
        "0.45",
        "--alpha-hi",
        "0.5",
        "--grid",
        "2",
        "--starts",
        "near-fixed(9/10,011)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("error"));
}

#[test]
fn usage_errors_are_machine_readable() {
    for args in [
        vec!["matching", "--multinacci", "3", "--alpha", "x"],
        vec!["orbit", "cubic:alpha=0,beta=2", "--x0", "0", "-n", "3"],
        vec!["nonsense"],
        vec!["sweep"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let v: Value = serde_json::from_slice(&o.stderr).expect("json on stderr");
        assert_eq!(v["error"], "usage");
    }
}

#[test]
fn orbit_windows_attractor() {
    let o = run(&[
        "orbit",
        "skewtent:alpha=0.4,beta=0.9",
        "--x0",
        "0.4",
        "-n",
        "3",
        "--mode",
        "exact",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,x,x_exact,branch"));
    assert!(text.contains("1,0.9,9/10,C"));
    let v = stdout_json(&run(&["windows", "genbeta:alpha=2/5,beta=multinacci(3)", "-n", "12"]));
    assert_eq!(v["residual_lo_zero"], true);
    assert!(v["lo"].as_f64().unwrap() <= 0.4 && 0.4 <= v["hi"].as_f64().unwrap());
    let v = stdout_json(&run(&["attractor", "genbeta:alpha=0.2,beta=1.5"]));
    assert!(v["components"].as_array().unwrap().len() >= 1);
    let o = run(&["attractor", "genbeta:alpha=0.2,beta=1.5", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(2));
}
