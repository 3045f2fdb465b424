use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsep")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_str(stdout(out).lines().last().expect("a report line")).unwrap()
}

fn file_with(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn qbinom_examples() {
    let out = qsep(&["qbinom", "3", "1", "1/2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("7/4"));
    let out = qsep(&["--json", "qbinom", "4", "2", "1"]);
    assert_eq!(report(&out)["payload"]["value"], "6");
    assert_eq!(stdout(&out).lines().count(), 1);
    assert_eq!(code(&qsep(&["qbinom", "3", "5", "1/2"])), 2);
    assert_eq!(code(&qsep(&["qbinom", "3", "1", "3/2"])), 2);
    assert_eq!(code(&qsep(&["qbinom", "3", "1", "half"])), 2);
}

#[test]
fn check_lc_examples() {
    let pass = file_with("[1, 2, 1]", ".json");
    let out = qsep(&["check-lc", pass.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["outcome"], "PASS");

    let fail = file_with(r#"["1/2","1/3","1/2"]"#, ".json");
    let out = qsep(&["check-lc", "--json", fail.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["outcome"], "FAIL");
    assert_eq!(r["payload"]["failing_index"], 1);

    let mixed = file_with("1,-2,1\n", ".csv");
    let out = qsep(&["check-lc", "--plus", mixed.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["payload"]["mixed_signs"], true);

    let broken = file_with("[1, \"x\"]", ".json");
    assert_eq!(code(&qsep(&["check-lc", broken.path().to_str().unwrap()])), 2);
    assert_eq!(code(&qsep(&["check-lc", "/nonexistent/seq.json"])), 2);
}

#[test]
fn csv_and_json_inputs_share_a_digest() {
    let a = file_with(r#"[1, "3/2", 1]"#, ".json");
    let b = file_with("1, 3/2, 1", ".csv");
    let ra = report(&qsep(&["--json", "check-lc", a.path().to_str().unwrap()]));
    let rb = report(&qsep(&["--json", "check-lc", b.path().to_str().unwrap()]));
    assert_eq!(ra["inputs_digest"], rb["inputs_digest"]);
    assert_eq!(ra["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn find_q_certificates() {
    let seq = file_with("[1, 3, 1]", ".json");
    let out = qsep(&["--json", "find-q", seq.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cert = &report(&out)["payload"]["certificate"];
    assert_eq!(cert["q"], "1");
    assert_eq!(cert["poly"], serde_json::json!(["1", "6", "1"]));

    let flat = file_with("[1, 1, 1]", ".json");
    let out = qsep(&["--json", "find-q", flat.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["payload"]["not_log_concave"]["failing_index"], 1);

    assert_eq!(code(&qsep(&["find-q", "--floor", "2", seq.path().to_str().unwrap()])), 2);
}

#[test]
fn certificates_hold_no_floats() {
    fn no_floats(v: &Value) -> bool {
        match v {
            Value::Number(n) => !n.is_f64(),
            Value::Array(a) => a.iter().all(no_floats),
            Value::Object(m) => m.values().all(no_floats),
            _ => true,
        }
    }
    let seq = file_with(r#"["1/3", 2, 5, 2, "1/7"]"#, ".json");
    let out = qsep(&["--json", "find-q", seq.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(no_floats(&report(&out)));
}

#[test]
fn verify_runs_and_repeats_exactly() {
    let args = ["--json", "verify", "q-rolle", "--seed", "7", "--trials", "20", "--nmax", "7"];
    let first = qsep(&args);
    assert_eq!(code(&first), 0);
    let r = report(&first);
    assert_eq!(r["outcome"], "PASS");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["payload"]["trials_run"], 20);
    assert_eq!(first.stdout, qsep(&args).stdout);

    let single = Command::new(env!("CARGO_BIN_EXE_qsep")).args(args).env("QSEP_THREADS", "1").output().unwrap();
    assert_eq!(first.stdout, single.stdout);

    assert_eq!(code(&qsep(&["verify", "no-such-theorem"])), 2);
    assert_eq!(code(&qsep(&["verify", "q-rolle", "--qset", "1/2,2"])), 2);
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_qsep")).args(args).env("QSEP_THREADS", "0").output().unwrap();
    assert_eq!(code(&bad_threads), 2);
}

#[test]
fn verify_all_aggregates() {
    let out = qsep(&["--json", "verify", "all", "--trials", "3", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["payload"]["reports"].as_array().unwrap().len(), 10);
    assert_eq!(r["payload"]["pass"], true);
}

#[test]
fn riemann_sections() {
    let args = ["--json", "riemann", "--N", "5", "--bits", "96", "--q", "1/2"];
    let out = qsep(&args);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["outcome"], "PASS");
    assert_eq!(r["payload"]["exploratory_outcome"], "EXPLORATORY");
    assert_eq!(r["payload"]["log_concavity"].as_array().unwrap().len(), 4);
    assert_eq!(out.stdout, qsep(&args).stdout);
    assert_eq!(code(&qsep(&["riemann", "--N", "1"])), 2);
    assert_eq!(code(&qsep(&["riemann", "--bits", "8"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&qsep(&[])), 2);
    assert_eq!(code(&qsep(&["frobnicate"])), 2);
    assert_eq!(code(&qsep(&["qbinom", "3"])), 2);
}
