use std::path::Path;
use std::process::Command;

use conjalg_cli::schema::validate;
use serde_json::{json, Value};

fn conj(args: &[&str], env_seed: Option<&str>) -> (Value, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conj"));
    cmd.args(args).env_remove("CONJ_SEED");
    if let Some(s) = env_seed {
        cmd.env("CONJ_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("UTF-8 output");
    let report: Value =
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    let code = out.status.code().expect("exit code");
    assert_eq!(report["exit_code"], json!(code));
    validate(&report).unwrap_or_else(|e| panic!("schema: {e}\n{report:#}"));
    (report, code)
}

fn write(dir: &Path, name: &str, v: Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn finite_conjugacy_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", json!({"n": 4, "map": [1, 2, 0, 0]}));
    let b = write(dir.path(), "b.json", json!({"n": 4, "map": [1, 2, 0, 2]}));
    let (r, code) = conj(&["finite", &a, &b], None);
    assert_eq!(code, 0);
    assert_eq!(r["conjugate"], json!(true));
    let w: Vec<usize> = serde_json::from_value(r["witness"].clone()).unwrap();
    let (ma, mb) = ([1, 2, 0, 0], [1, 2, 0, 2]);
    assert!((0..4).all(|i| w[ma[i]] == mb[w[i]]));

    let c = write(dir.path(), "c.json", json!({"n": 2, "map": [1, 0]}));
    let d = write(dir.path(), "d.json", json!({"n": 2, "map": [0, 1]}));
    let (r, code) = conj(&["finite", &c, &d], None);
    assert_eq!(
        (code, &r["conjugate"], &r["witness"]),
        (0, &json!(false), &Value::Null)
    );
}

#[test]
fn canon_and_char_space() {
    let (r, _) = conj(&["canon", r#"{"n": 3, "map": [0, 0, 1]}"#], None);
    assert_eq!(r["fixed_points"], json!([0]));
    assert_eq!(r["orbit_structure"]["cycles"], json!([[0]]));
    let (r, _) = conj(
        &[
            "char-space",
            r#"{"n": 3, "map": [0, 0, 1]}"#,
            "--radius",
            "2",
        ],
        None,
    );
    assert_eq!(
        r["points"],
        json!([{"x": 0, "kind": "disc", "r": 2.0}, {"x": 1, "kind": "point"}, {"x": 2, "kind": "point"}])
    );
}

#[test]
fn norms_with_system_reference() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "swap.json", json!({"n": 2, "map": [1, 0]}));
    let p = write(
        dir.path(),
        "p.json",
        json!({"system": "swap.json", "coeffs": [[[3.0, 0.0], [0.0, -4.0]]]}),
    );
    let (r, code) = conj(&["norms", &p, "--trunc", "8"], None);
    assert_eq!(code, 0);
    assert!((r["estimate"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert_eq!((&r["N"], &r["monotone_check"]), (&json!(8), &json!(true)));
    let (r, _) = conj(&["norms", &p, "--convention", "forward"], None);
    assert_eq!(r["convention"], json!("forward"));
    let (_, code) = conj(&["norms", &p, "--convention", "sideways"], None);
    assert_eq!(code, 2);
}

#[test]
fn pencil_check_and_preconditions() {
    let chain = r#"{"n": 4, "map": [0, 0, 1, 0]}"#;
    let (r, code) = conj(
        &["pencil-check", chain, "--x", "1", "--z", "0.3,-0.2"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(r["homomorphism"], json!(true));
    assert_eq!(r["characters"][1]["x"], json!(0));
    assert_eq!(r["second_over_eta_x"], json!(true));

    let (r, code) = conj(&["pencil-check", chain, "--x", "2", "--z", "0"], None);
    assert_eq!((code, &r["error"]["code"]), (3, &json!("NotPreperiodic")));
    let (r, code) = conj(&["pencil-check", chain, "--x", "1", "--z", "1,0"], None);
    assert_eq!((code, &r["error"]["code"]), (3, &json!("OnBoundary")));
    let (r, code) = conj(&["pencil-check", chain, "--x", "0", "--z", "0"], None);
    assert_eq!((code, &r["error"]["code"]), (3, &json!("FixedPoint")));
}

#[test]
fn disk_subcommands() {
    let rot = |re: f64, im: f64| json!({"preset": "rotation", "c": [re, im]}).to_string();
    let (r, _) = conj(&["disk", "iso", &rot(0.6, 0.8), &rot(0.6, -0.8)], None);
    assert_eq!(r["verdict"], json!("InverseConjugate"));
    let (r, _) = conj(&["disk", "iso", &rot(0.6, 0.8), &rot(0.6, 0.8)], None);
    assert_eq!(r["verdict"], json!("Conjugate"));
    let (r, _) = conj(&["disk", "iso", "remark_eta1", "remark_eta2"], None);
    assert_eq!(r["verdict"], json!("NotIsomorphic"));

    let (r, _) = conj(&["disk", "classify", "remark_eta1"], None);
    assert_eq!(r["kind"], json!("Hyperbolic"));
    assert!((r["normal_form"]["ratio"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);

    let half = json!({"preset": "dilation", "lambda": [0.5, 0.0]}).to_string();
    let quarter = json!({"preset": "dilation", "lambda": [0.25, 0.0]}).to_string();
    let (r, _) = conj(&["disk", "conjugate", &half, &quarter], None);
    assert_eq!(r["conjugate"], json!(false));
    let (r, _) = conj(
        &["disk", "verify-witness", "radial_square", &half, &quarter],
        None,
    );
    assert!(r["deviation"].as_f64().unwrap() <= 1e-12);

    // point maps are witnesses only
    let (r, code) = conj(&["disk", "classify", "radial_square"], None);
    assert_eq!((code, &r["error"]["code"]), (3, &json!("NotDecidable")));
    // z -> 2z leaves the disk
    let (r, code) = conj(
        &[
            "disk",
            "classify",
            r#"{"preset": "dilation", "lambda": [2.0, 0.0]}"#,
        ],
        None,
    );
    assert_eq!((code, &r["error"]["code"]), (3, &json!("NotDiskSelfMap")));
}

#[test]
fn parse_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let (r, code) = conj(&["canon", bad.to_str().unwrap()], None);
    assert_eq!((code, &r["error"]["code"]), (2, &json!("Parse")));
    let (_, code) = conj(&["canon", r#"{"n": 2, "map": [0, 7]}"#], None);
    assert_eq!(code, 2);
    let (_, code) = conj(&["canon", "/nonexistent/sys.json"], None);
    assert_eq!(code, 2);
    let (_, code) = conj(
        &["char-space", r#"{"n": 1, "map": [0]}"#, "--radius", "-1"],
        None,
    );
    assert_eq!(code, 2);
    let (_, code) = conj(&["frobnicate"], None);
    assert_eq!(code, 2);
    let (r, code) = conj(&["canon", r#"{"n": 1, "map": [0]}"#], Some("not-a-number"));
    assert_eq!((code, &r["error"]["code"]), (2, &json!("Parse")));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["verify-suite", "--max-n", "5", "--scale", "0.05"];
    let run = |seed: Option<&str>| {
        let out = Command::new(env!("CARGO_BIN_EXE_conj"))
            .args(args)
            .env("CONJ_SEED", seed.unwrap_or("17"))
            .output()
            .unwrap();
        (out.stdout, out.status.code())
    };
    let (a, code) = run(None);
    let (b, _) = run(None);
    assert_eq!(code, Some(0));
    assert_eq!(a, b);
    let (c, _) = run(Some("18"));
    assert_ne!(a, c);
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["seed"], json!(17));
    assert_eq!(report["passed"], json!(true));
    // the flag wins over the environment
    let (r, _) = conj(
        &[
            "--seed",
            "5",
            "pencil-check",
            r#"{"n": 2, "map": [0, 0]}"#,
            "--x",
            "1",
            "--z",
            "0.1",
        ],
        Some("9"),
    );
    assert_eq!(r["seed"], json!(5));
}

#[test]
fn reports_validate_through_the_tool() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = conj(&["disk", "iso", "remark_eta1", "remark_eta1"], None);
    let path = write(dir.path(), "report.json", r);
    let (v, code) = conj(&["validate-report", &path], None);
    assert_eq!(
        (code, &v["valid"], &v["report_command"]),
        (0, &json!(true), &json!("disk iso"))
    );
    let broken = write(
        dir.path(),
        "broken.json",
        json!({"command": "disk iso", "exit_code": 0}),
    );
    let (v, code) = conj(&["validate-report", &broken], None);
    assert_eq!((code, &v["valid"]), (1, &json!(false)));
}
