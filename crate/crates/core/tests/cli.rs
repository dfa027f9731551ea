use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_l2torsion"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn result(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"].clone()
}

const GENUS2: &str = r#"{"domain_rank":2,"codomain_rank":2,"images":["x1","x2"]}"#;

#[test]
fn replay_is_byte_identical() {
    let cases: &[(&[&str], &str)] = &[
        (&["--seed", "3", "--json", "chainlink", "3"], ""),
        (&["--seed", "5", "--n", "64", "--trials", "4", "fk-det"], r#"{"rank":2,"element":"2 + x1 - x2"}"#),
        (&["torsion-hom"], GENUS2),
        (&["--json", "stallings"], r#"{"rank":2,"words":["x1^2","x2","x1 x2 x1^-1"]}"#),
    ];
    for (args, input) in cases {
        let a = run(args, input);
        let b = run(args, input);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn chainlink_report() {
    let r = result(&run(&["--json", "chainlink", "3"], ""));
    assert_eq!(r["taut"], Value::Bool(true));
    assert_eq!(r["product"], Value::Bool(false));
    assert_eq!(r["element_matches"], Value::Bool(true));
}

#[test]
fn taut_and_product_verdicts() {
    let id = r#"{"domain_rank":2,"codomain_rank":2,"images":["x1","x2"]}"#;
    assert_eq!(result(&run(&["check-product"], id))["product"], Value::Bool(true));
    let square = r#"{"domain_rank":1,"codomain_rank":1,"images":["x1^2"]}"#;
    assert_eq!(result(&run(&["check-product"], square))["product"], Value::Bool(false));
}

#[test]
fn input_from_file() {
    let path = std::env::temp_dir().join(format!("l2torsion-cli-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"rank":2,"element":"1 + x1 + x2"}"#).unwrap();
    let from_file = run(&["--json", "polytope", path.to_str().unwrap()], "");
    let from_stdin = run(&["--json", "polytope", "-"], r#"{"rank":2,"element":"1 + x1 + x2"}"#);
    std::fs::remove_file(&path).ok();
    assert!(from_file.status.success());
    assert_eq!(result(&from_file), result(&from_stdin));
}

#[test]
fn exit_codes() {
    let bad_json = run(&["torsion-hom"], "{not json");
    assert_eq!(bad_json.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&bad_json.stderr).unwrap();
    assert!(err["error"]["kind"].is_string());

    let mismatch = run(&["check-taut"], r#"{"domain_rank":2,"codomain_rank":1,"images":["x1","x2"]}"#);
    assert_eq!(mismatch.status.code(), Some(2));

    let small = run(&["--n", "8", "fk-det"], r#"{"rank":1,"element":"2 + x1"}"#);
    assert_eq!(small.status.code(), Some(2));

    let singular = run(&["restrict"], r#"{"quotient":{"rank":2,"degree":1,"perms":[[1],[1]]},"rank":2,"element":"x1 x2 - x2 x1"}"#);
    assert_eq!(singular.status.code(), Some(3));

    let unknown = run(&["no-such-command"], "");
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn quick_selftest_passes() {
    let out = run(&["--json", "selftest", "--level", "quick"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
