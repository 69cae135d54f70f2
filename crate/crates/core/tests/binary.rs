use std::process::{Command, Output};

fn lagrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagrange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["coeffs", "1/(1-x)", "--order", "4"], 0),
        (&["coeffs", "1/x"], 2),
        (&["coeffs", "1 +"], 2),
        (&["inverse", "1+x"], 2),
        (&["lif-sj", "x - x^2", "3", "4"], 2),
        (&["verify", "--trials", "0"], 2),
        (&["gallery", "motzkin"], 2),
        (&["bogus"], 2),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        assert_eq!(lagrange(args).status.code(), Some(*code), "{args:?}");
    }
}

#[test]
fn input_errors_go_to_stderr_with_a_caret() {
    let o = lagrange(&["coeffs", "1/x"]);
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not divisible"), "{err}");
    assert!(err.contains("^^^"), "{err}");
}

#[test]
fn json_outputs_parse() {
    let o = lagrange(&["inverse", "x - x^2", "--order", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["truncation"], 5);
    assert_eq!(
        v["coeffs"],
        serde_json::json!(["0", "1", "1", "2", "5", "14"])
    );

    let o = lagrange(&[
        "lif-functional",
        "x^2",
        "x - x^2",
        "4",
        "--cross-check",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"value": "5", "oracle": "5", "agree": true})
    );

    let o = lagrange(&[
        "verify", "--trials", "2", "--checks", "inverse", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["check"], "inverse#1");
}

#[test]
fn verify_is_deterministic_under_a_seed() {
    let args = [
        "verify",
        "--order",
        "8",
        "--trials",
        "4",
        "--seed",
        "11",
        "--inject-fault",
        "3",
    ];
    let a = lagrange(&args);
    let b = lagrange(&args);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("FAIL inverse#0 index=3"));
}
