//! End-to-end tests of the `qgauss` binary: flags, stdin/stdout and file
//! I/O, formats, and the exit-code contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qgauss(args: &[&str], stdin: Option<&str>) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_qgauss"));
    command
        .args(args)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    command.stdin(if stdin.is_some() {
        Stdio::piped()
    } else {
        Stdio::null()
    });
    let mut child = command.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .expect("stdin piped")
            .write_all(text.as_bytes())
            .unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn moment_job_reads_stdin_and_writes_stdout() {
    let out = qgauss(
        &[],
        Some(
            r#"{"command": "moment", "q": "1/2", "covariance": [["1", "1/2"], ["1/2", "1"]], "word": "X1 X2"}"#,
        ),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("expectation: 1/2"), "{text}");
    assert!(text.contains("float: 0.5"), "{text}");
}

#[test]
fn excluded_covariance_exits_two() {
    let out = qgauss(
        &["--format", "json"],
        Some(
            r#"{"command": "bell", "q": "1/4", "covariance": [["1", "-1/5", "3/5"], ["-1/5", "1", "3/5"], ["3/5", "3/5", "1"]]}"#,
        ),
    );
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["verdict"], "NO_CLASSICAL_VERSION");
    assert_eq!(doc["branch"], "sub-Markov");
    assert_eq!(doc["bell_satisfied"], false);
}

#[test]
fn file_input_and_output_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let job_path = dir.path().join("job.json");
    let report_path = dir.path().join("report.txt");
    std::fs::write(
        &job_path,
        r#"{"command": "bell", "q": "0", "covariance": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}"#,
    )
    .unwrap();
    let out = qgauss(
        &[
            "--input",
            job_path.to_str().unwrap(),
            "--output",
            report_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "report went to the file");
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("verdict: NOT_EXCLUDED"), "{report}");
}

#[test]
fn scan_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let job = r#"{"command": "scan", "q": "-1/2",
        "grid": {"rho": {"start": "0", "stop": "4/5", "steps": 5},
                 "fg":  {"start": "-1/2", "stop": "1/2", "steps": 5}}}"#;
    let mut bodies = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("scan{run}.csv"));
        let out = qgauss(
            &["--format", "csv", "--output", path.to_str().unwrap()],
            Some(job),
        );
        assert_eq!(out.status.code(), Some(0));
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let text = String::from_utf8(bodies[0].clone()).unwrap();
    assert!(text.starts_with("rho,fg,q,"), "{text}");
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn unknown_json_field_is_an_input_error() {
    let out = qgauss(
        &[],
        Some(r#"{"command": "bell", "quapproximation": "1/2"}"#),
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("quapproximation"),
        "diagnostic names the field: {err}"
    );
}

#[test]
fn malformed_json_is_an_input_error() {
    let out = qgauss(&[], Some(r#"{"command": "#));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_an_input_error_not_exit_two() {
    // Exit 2 is reserved for NO_CLASSICAL_VERSION, so flag errors must be
    // remapped to the general input-error code.
    let out = qgauss(&["--frmt", "text"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = qgauss(&["--help"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("--input"));
}

#[test]
fn verify_exit_codes_track_the_fault_fixture() {
    let out = qgauss(&[], Some(r#"{"command": "verify", "depth": 2}"#));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("verdict: PASS"));

    let out = qgauss(
        &[],
        Some(r#"{"command": "verify", "depth": 2, "inject_fault": true}"#),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_of(&out).contains("verdict: FAIL"));
}

#[test]
fn decimal_q_is_parsed_by_literal_digits() {
    // 0.9 as a double is not 9/10; the report echoing q = 9/10 shows the
    // decimal crossed the boundary exactly.
    let out = qgauss(
        &[],
        Some(r#"{"command": "moment", "q": 0.9, "covariance": [["1"]], "word": "X1 X1"}"#),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("q: 9/10"), "{text}");
    assert!(text.contains("expectation: 1"), "{text}");
}
