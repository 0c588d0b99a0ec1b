use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiweyl"))
        .args(args)
        .output()
        .unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_semiweyl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn normalform_prints_text_then_json() {
    let o = run(&["normalform", "--algebra", "Wn", "--n", "1", "x2*x1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x1*x2 + 1"));
    let json: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(json["algebra"], "Wn");
    assert_eq!(json["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn documented_examples() {
    assert_eq!(
        stdout(&run(&["bracket", "--n", "1", "x1^2", "x2"]))
            .lines()
            .next(),
        Some("-2*x1")
    );
    assert_eq!(
        stdout(&run(&[
            "normalform",
            "--algebra",
            "Bn",
            "--n",
            "1",
            "x2*x1"
        ]))
        .lines()
        .next(),
        Some("x1*x2")
    );
    assert_eq!(
        stdout(&run(&[
            "normalform",
            "--algebra",
            "Aq=2",
            "--n",
            "1",
            "x2*x1"
        ]))
        .lines()
        .next(),
        Some("x1*x2 + 2")
    );
    assert_eq!(
        stdout(&run(&["count", "--n", "1", "--d", "3"])).trim(),
        "10"
    );
}

#[test]
fn exit_codes() {
    let o = run(&["normalform", "--algebra", "Wn", "--n", "1", "x3*x1"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "UnknownVariable");
    let o = run(&["bracket", "--n", "1", "h", "x1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["normalform", "--algebra", "Wn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn morphism_pipeline_over_stdin() {
    let corpus = stdout(&run(&["corpus", "--n", "1", "--seed", "4", "--size", "3"]));
    let list: Vec<serde_json::Value> = serde_json::from_str(&corpus).unwrap();
    assert_eq!(list.len(), 3);
    assert!(list
        .iter()
        .all(|m| m["validated"] == true && m["word"].is_array()));

    let pair = r#"[{"kind":"WeylEndo","n":1,"algebra":"Wn","images":["x1 + x2^2","x2"],"validated":true},
                   {"kind":"WeylEndo","n":1,"algebra":"Wn","images":["x1","x2 + x1^2"],"validated":true}]"#;
    let composed = run_with_stdin(&["morphism", "compose"], pair);
    assert!(composed.status.success());
    let c: serde_json::Value = serde_json::from_slice(&composed.stdout).unwrap();
    assert_eq!(c["images"][1], "x2^4 + 2*x1*x2^2 + x1^2 + 3*x2");

    let t = run_with_stdin(&["morphism", "psi-transport"], &stdout(&composed));
    assert!(t.status.success());
    let t: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert_eq!(t["clearing"], serde_json::json!([2, 3]));
    assert_eq!(t["morphism"]["validated"], false);
    assert_eq!(t["morphism"]["witness"]["found"], "3");

    let applied = run_with_stdin(
        &["morphism", "apply", "x2*x1"],
        &serde_json::to_string(&list[0]).unwrap(),
    );
    assert!(applied.status.success());

    let shear = r#"{"kind":"AHatEndo","n":1,"algebra":"Aqhat","images":["x1","x2 + h*x1^2"],"validated":true}"#;
    let phi = run_with_stdin(&["morphism", "varphi"], shear);
    let phi: serde_json::Value = serde_json::from_slice(&phi.stdout).unwrap();
    assert_eq!(phi["images"], serde_json::json!(["x1", "x2"]));
    assert_eq!(phi["validated"], true);

    let invalid =
        r#"{"kind":"WeylEndo","n":1,"algebra":"Wn","images":["x1","x1"],"validated":false}"#;
    let v: serde_json::Value =
        serde_json::from_slice(&run_with_stdin(&["morphism", "validate"], invalid).stdout).unwrap();
    assert_eq!(v["validated"], false);
    assert_eq!(v["witness"]["found"], "0");
    let o = run_with_stdin(&["morphism", "apply", "x1"], invalid);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn audit_writes_report() {
    let dir = std::env::temp_dir().join(format!("semiweyl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("c.json");
    let report = dir.join("r.json");
    std::fs::write(
        &corpus,
        stdout(&run(&["corpus", "--n", "2", "--seed", "9", "--size", "5"])),
    )
    .unwrap();
    let o = run(&[
        "audit",
        "--corpus",
        corpus.to_str().unwrap(),
        "--claims",
        "C3,C4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["claims"], serde_json::json!(["C3", "C4"]));
    assert_eq!(r["summary"]["C3"]["fail"], 0);
    let o = run(&[
        "audit",
        "--corpus",
        corpus.to_str().unwrap(),
        "--claims",
        "C7",
    ]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_and_bench() {
    let o = run(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
    let o = run(&["bench", "--max-degree", "2", "--trials", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 2);
}
