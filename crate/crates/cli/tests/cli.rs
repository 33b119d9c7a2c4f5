//! End-to-end tests of the `conic-nets` binary: exit codes, document
//! round-trips, table and audit output, and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conic-nets"));
    cmd.args(args);
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    } else {
        cmd.stdin(Stdio::null());
    }
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(input) = stdin {
        child
            .stdin
            .take()
            .expect("stdin piped")
            .write_all(input.as_bytes())
            .expect("stdin accepts input");
    }
    child.wait_with_output().expect("binary exits")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is JSON ({e}): {:?}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| {
        panic!(
            "stderr is JSON ({e}): {:?}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn error_kind(out: &Output) -> String {
    stderr_json(out)["error"]["kind"]
        .as_str()
        .expect("error kind is a string")
        .to_string()
}

#[test]
fn classify_net_of_squares_q5() {
    let doc = r#"{"q":5,"forms":[[1,0,0,0,0,0],[0,0,0,1,0,0],[0,0,0,0,0,1]]}"#;
    let out = run(&["classify", "--kind", "net", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 0, "{:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], json!(1));
    assert_eq!(v["label"], json!("Sigma2"));
    assert_eq!(v["distribution"], json!([3, 6, 6, 16]));
    assert_eq!(v["warnings"], json!([]));
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));

    // The same document from a file, twice: identical bytes on stdout.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    std::fs::write(&path, doc).unwrap();
    let args = ["classify", "--kind", "net", "--q", "5", "--input"];
    let a = run(&[&args[..], &[path.to_str().unwrap()]].concat(), None);
    let b = run(&[&args[..], &[path.to_str().unwrap()]].concat(), None);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, out.stdout);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn classify_plane_of_conics_through_a_triangle_q3() {
    let doc = r#"{"q":3,"rows":[[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0]]}"#;
    let out = run(&["classify", "--kind", "plane", "--q", "3", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["label"], json!("Sigma7"));
}

#[test]
fn classify_line_q3() {
    let doc = r#"{"q":3,"rows":[[1,0,0,0,0,0],[0,0,1,1,0,0]]}"#;
    let out = run(&["classify", "--kind", "line", "--q", "3", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["label"], json!("o9"));
    assert_eq!(v["distribution"], json!([1, 0, 0, 3]));
}

#[test]
fn classify_rejects_bad_inputs_with_exit_1() {
    // Linearly dependent forms.
    let doc = r#"{"q":5,"forms":[[1,0,0,0,0,0],[1,0,0,0,0,0],[0,0,0,0,0,1]]}"#;
    let out = run(&["classify", "--kind", "net", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "DependentForms");
    assert!(out.stdout.is_empty());

    // A net whose members are never repeated lines.
    let doc = r#"{"q":5,"forms":[[0,1,0,0,0,0],[0,0,1,0,0,0],[0,0,0,0,1,0]]}"#;
    let out = run(&["classify", "--kind", "net", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "NotRankOne");

    // Even field order.
    let doc = r#"{"q":4,"forms":[[1,0,0,0,0,0],[0,0,0,1,0,0],[0,0,0,0,0,1]]}"#;
    let out = run(&["classify", "--kind", "net", "--q", "4", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "InvalidOrder");

    // Document q disagrees with --q.
    let doc = r#"{"q":7,"forms":[[1,0,0,0,0,0],[0,0,0,1,0,0],[0,0,0,0,0,1]]}"#;
    let out = run(&["classify", "--kind", "net", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "MalformedInput");

    // Not JSON at all.
    let out = run(&["classify", "--kind", "net", "--q", "5", "--input", "-"], Some("nope"));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "MalformedInput");

    // A plane needs three independent rows.
    let doc = r#"{"q":5,"rows":[[1,0,0,0,0,0],[2,0,0,0,0,0],[0,1,0,0,0,0]]}"#;
    let out = run(&["classify", "--kind", "plane", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "DependentRows");

    // Two rows are a line, not a plane.
    let doc = r#"{"q":5,"rows":[[1,0,0,0,0,0],[0,1,0,0,0,0]]}"#;
    let out = run(&["classify", "--kind", "plane", "--q", "5", "--input", "-"], Some(doc));
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "NotAPlane");

    // Unknown flags are usage errors, not crashes.
    let out = run(&["classify", "--kind", "net", "--q", "5"], None);
    assert_eq!(code(&out), 1);
}

#[test]
fn rep_emits_parameters_and_round_trips() {
    // The two-secant family needs c with -3c a nonzero square and the
    // associated ratio not a cube; at q = 7 the canonical choice is c = 2.
    let out = run(&["rep", "--label", "Sigma14", "--q", "7"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["label"], json!("Sigma14"));
    assert_eq!(v["parameters"], json!({"c": 2}));
    assert_eq!(v["distribution"], json!([1, 3, 3, 50]));

    // Feeding the emitted representative back reproduces the label.
    let flat = json!({"q": 7, "rows": v["representative"]}).to_string();
    let back = run(&["classify", "--kind", "plane", "--q", "7", "--input", "-"], Some(&flat));
    assert_eq!(code(&back), 0);
    assert_eq!(stdout_json(&back)["label"], json!("Sigma14"));

    // Sigma14 does not exist in characteristic 3.
    let out = run(&["rep", "--label", "Sigma14", "--q", "9"], None);
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "LabelUnavailableForCharacteristic");

    // A table-backed label at a prime order.
    let out = run(&["rep", "--label", "o5", "--q", "11"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["label"], json!("o5"));
    assert_eq!(v["distribution"], json!([2, 5, 5, 0]));

    // A parametrised line label round-trips too (commas and all).
    let out = run(&["rep", "--label", "o13,2", "--q", "7"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["parameters"]["epsilon"], json!(3));
    let flat = json!({"q": 7, "rows": v["representative"]}).to_string();
    let back = run(&["classify", "--kind", "line", "--q", "7", "--input", "-"], Some(&flat));
    assert_eq!(code(&back), 0);
    assert_eq!(stdout_json(&back)["label"], json!("o13,2"));

    let out = run(&["rep", "--label", "no-such-orbit", "--q", "7"], None);
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "UnknownLabel");
}

#[test]
fn rep_round_trips_over_an_extension_field() {
    // Representative entries over F_9 are coordinate lists; they must be
    // readable by classify unchanged.
    let out = run(&["rep", "--label", "Sigma13", "--q", "9"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let flat = json!({"q": 9, "rows": v["representative"]}).to_string();
    assert!(flat.contains('['));
    let back = run(&["classify", "--kind", "plane", "--q", "9", "--input", "-"], Some(&flat));
    assert_eq!(code(&back), 0);
    assert_eq!(stdout_json(&back)["label"], json!("Sigma13"));

    // Plain integers still work there and reduce to constants.
    let doc = r#"{"q":9,"rows":[[1,0,0,0,0,0],[0,[1,1],0,0,0,0],[0,0,0,5,0,0]]}"#;
    let back = run(&["classify", "--kind", "plane", "--q", "9", "--input", "-"], Some(doc));
    assert_eq!(code(&back), 0);
    assert_eq!(stdout_json(&back)["label"], json!("Sigma1"));
}

#[test]
fn tables_reproduce_the_closed_forms() {
    let out = run(&["tables", "--q", "5", "--kind", "plane-distributions"], None);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "label,n1,n2,n3,n4,expected_n1,expected_n2,expected_n3,expected_n4,consistent"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows.iter().any(|r| r.starts_with("Sigma14,")));
    assert!(!text.contains("Sigma14'"));
    assert!(rows.contains(&"Sigma2,3,6,6,16,3,6,6,16,true"));

    // Characteristic 3 swaps the exceptional two-secant family.
    let out = run(&["tables", "--q", "9", "--kind", "plane-distributions"], None);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Sigma14'"));
    assert_eq!(text.lines().count(), 16);

    let out = run(&["tables", "--q", "7", "--kind", "line-distributions"], None);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.contains("o9,1,0,0,7,1,0,0,7,true"));
    assert!(text.contains("\"o8,1\",1,1,0,6,1,1,0,6,true"));

    let out = run(&["tables", "--q", "4", "--kind", "plane-distributions"], None);
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "InvalidOrder");
}

#[test]
fn audit_q3_writes_consistent_reports() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("report.csv");
    let out = run(
        &["audit", "--q", "3", "--workers", "2", "--out", base.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 0, "{:?}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("all audits pass"));
    // Timing goes to stderr, never stdout.
    assert!(!text.contains("ms"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ms"));

    let planes = std::fs::read_to_string(dir.path().join("report.planes.csv")).unwrap();
    assert!(planes
        .starts_with("label,tally,expected_orbit_size,stabilizer_order,consistent\n"));
    assert_eq!(planes.lines().count(), 16);
    assert!(planes.contains("Sigma1,13,13,432,true"));
    let lines_csv = std::fs::read_to_string(dir.path().join("report.lines.csv")).unwrap();
    assert_eq!(lines_csv.lines().count(), 16);
    assert!(lines_csv.contains("\"o8,1\","));
    assert!(dir.path().join("report.points.csv").is_file());
    assert!(dir.path().join("report.conic.csv").is_file());

    // The tallies and the summary are independent of the worker count.
    let dir2 = tempfile::tempdir().unwrap();
    let base2 = dir2.path().join("report.csv");
    let rerun = run(
        &["audit", "--q", "3", "--workers", "1", "--out", base2.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&rerun), 0);
    let scrub = |s: &[u8]| String::from_utf8_lossy(s).replace(dir.path().to_str().unwrap(), "").replace(dir2.path().to_str().unwrap(), "");
    assert_eq!(scrub(&out.stdout), scrub(&rerun.stdout));
    assert_eq!(
        planes,
        std::fs::read_to_string(dir2.path().join("report.planes.csv")).unwrap()
    );

    // Beyond the exhaustive budget the audit refuses.
    let out = run(
        &["audit", "--q", "17", "--out", dir.path().join("x.csv").to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "SearchBudgetExceeded");
}

#[test]
fn witness_finds_or_refutes_conjugacy() {
    let rep = |label: &str| -> String {
        let out = run(&["rep", "--label", label, "--q", "3"], None);
        assert_eq!(code(&out), 0);
        json!({"q": 3, "rows": stdout_json(&out)["representative"]}).to_string()
    };
    let dir = tempfile::tempdir().unwrap();
    let s8 = dir.path().join("s8.json");
    let s9 = dir.path().join("s9.json");
    let o9 = dir.path().join("o9.json");
    std::fs::write(&s8, rep("Sigma8")).unwrap();
    std::fs::write(&s9, rep("Sigma9")).unwrap();
    std::fs::write(&o9, rep("o9")).unwrap();

    // Sigma8 and Sigma9 share their point-class distribution at q = 3, so
    // only the exhaustive search can (and does) refute conjugacy.
    let out = run(
        &["witness", "--q", "3", "--left", s8.to_str().unwrap(), "--right", s9.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"schema": 1, "witness": null}));

    // A flat is conjugate to itself; the witness is normalized and correct.
    let out = run(
        &["witness", "--q", "3", "--left", s9.to_str().unwrap(), "--right", s9.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 0);
    let w = stdout_json(&out);
    assert!(w["witness"].is_array());

    // Mixed dimensions are a user error.
    let out = run(
        &["witness", "--q", "3", "--left", s9.to_str().unwrap(), "--right", o9.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 1);
    assert_eq!(error_kind(&out), "DimensionMismatch");
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["classify", "--help"][..]] {
        let out = run(args, None);
        assert_eq!(code(&out), 0);
        assert!(!out.stdout.is_empty());
    }
}
