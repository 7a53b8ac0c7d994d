use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

/// Runs the binary with `stdin` piped in; returns the report and exit code.
fn opalg(args: &[&str], stdin: &str) -> (Value, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_opalg"))
        .args(args)
        .arg("--no-timing")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad report {e}: {text}"));
    (report, out.status.code().unwrap())
}

fn text(v: &Value) -> String {
    serde_json::to_string(v).unwrap()
}

fn fixture(name: &str) -> String {
    text(&opalg(&["fixture", name], "").0)
}

fn verify(report: &Value) -> (Value, i32) {
    opalg(&["verify"], &text(report))
}

#[test]
fn mirsky_on_the_unordered_gap_example() {
    let (r, code) = opalg(&["qposet", "mirsky"], &fixture("unordered-gap"));
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"]["r"], 4);
    assert_eq!(r["verdicts"]["chain_length"], 4);
    assert_eq!(r["verdicts"]["equal"], true);
    let (v, code) = verify(&r);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdicts"]["checks"]["chain_valid"], true);
}

#[test]
fn triangular_matrices_are_antisymmetric() {
    let tn = text(&opalg(&["family", "tn", "--n", "3"], "").0);
    let (r, code) = opalg(&["antisym"], &tn);
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"]["antisymmetric"], true);
    assert_eq!(r["backend"], "exact");
}

#[test]
fn full_subquotient_obstructs_triangularization() {
    let (r, code) = opalg(&["triangularize"], &fixture("full-subquotient"));
    assert_eq!(code, 1);
    assert_eq!(r["status"], "negative");
    assert_eq!(r["verdicts"]["outcome"], "obstruction");
    assert_eq!(r["verdicts"]["support_dim"], 2);
    assert_eq!(r["verdicts"]["compressed_dim"], 4);
    let (v, code) = verify(&r);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn full_subquotient_is_antisymmetric_but_not_hereditarily() {
    let input = fixture("full-subquotient");
    let (r, code) = opalg(&["antisym"], &input);
    assert_eq!((code, r["verdicts"]["antisymmetric"].as_bool()), (0, Some(true)));
    let (r, code) = opalg(&["hereditary"], &input);
    assert_eq!(code, 1);
    assert!(r["verdicts"]["counterexample"].is_object());
    assert_eq!(verify(&r).1, 0);

    let (r, code) = opalg(
        &["antisym"],
        &text(
            &opalg(
                &["close"],
                r#"{"n": 2, "unital": false, "generators": [{"n": 2, "entries": [[1, 0], [0, 0]]}]}"#,
            )
            .0,
        ),
    );
    assert_eq!(code, 1);
    assert!(r["verdicts"]["witness"].is_object());
    assert_eq!(verify(&r).1, 0);
}

#[test]
fn output_is_deterministic() {
    let input = fixture("wide-antichain");
    for args in [
        &["qposet", "dilworth"][..],
        &["hereditary"],
        &["--seed", "7", "channels", "traps"],
    ] {
        let stdin = if args.contains(&"channels") {
            fixture("block-channel")
        } else {
            input.clone()
        };
        let a = text(&opalg(args, &stdin).0);
        let b = text(&opalg(args, &stdin).0);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn reports_pipe_through_their_artifact() {
    let closed = opalg(&["close"], &fixture("wide-antichain")).0;
    let (r, code) = opalg(&["qposet", "antichains"], &text(&closed));
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"]["width_lower_bound"], 3);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn exit_codes() {
    let (r, code) = opalg(&["close"], "{\"n\": 2");
    assert_eq!(
        (code, r["status"].as_str(), r["detail"].as_str()),
        (2, Some("error"), Some("parse"))
    );

    let (r, code) = opalg(&["hereditary"], &fixture("wide-antichain"));
    assert_eq!((code, r["status"].as_str()), (2, Some("unknown")));

    let (_, code) = opalg(
        &["--tolerance", "eps_abs=-1", "close"],
        &fixture("wide-antichain"),
    );
    assert_eq!(code, 2);

    let (r, code) = opalg(&["qposet", "chains"], &fixture("full-subquotient"));
    assert_eq!((code, r["detail"].as_str()), (2, Some("precondition")));
}

#[test]
fn idempotent_of_a_jordan_block() {
    let (r, code) = opalg(&["idempotent", "--lambda", "2"], &fixture("jordan-block"));
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"]["rank"], 2);
    assert_eq!(r["verdicts"]["in_generated_algebra"], true);
    assert_eq!(verify(&r).1, 0);

    let (r, code) = opalg(
        &["--backend", "numeric", "idempotent", "--lambda", "-1"],
        &fixture("jordan-block"),
    );
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["backend"], "numeric");
    assert_eq!(r["verdicts"]["rank"], 1);
    assert_eq!(verify(&r).1, 0);
}

#[test]
fn channel_transitions_and_traps() {
    let ch = fixture("block-channel");
    let (r, code) = opalg(&["channels", "validate"], &ch);
    assert_eq!((code, r["verdicts"]["all_valid"].as_bool()), (0, Some(true)));

    let (r, code) = opalg(
        &[
            "channels",
            "transition",
            "--from",
            "[1, 0, 0]",
            "--to",
            "[0, 0, 1]",
        ],
        &ch,
    );
    assert_eq!(code, 1);
    assert_eq!(verify(&r).1, 0);
    let (r, code) = opalg(
        &[
            "channels",
            "transition",
            "--from",
            "[1, 0, 0]",
            "--to",
            "[0, 1, 0]",
        ],
        &ch,
    );
    assert_eq!(code, 0);
    assert_eq!(verify(&r).1, 0);

    let (r, code) = opalg(&["channels", "traps"], &ch);
    assert_eq!(code, 0);
    assert!(r["verdicts"]["nontrivial"].as_u64().unwrap() >= 2);
    assert_eq!(verify(&r).1, 0);

    let bad = r#"{"n": 1, "kraus": [{"n": 1, "entries": [["2"]]}]}"#;
    let (r, code) = opalg(&["channels", "validate"], bad);
    assert_eq!(code, 1);
    assert_eq!(r["verdicts"]["channels"][0]["cptp_residual"], 3.0);
}

#[test]
fn tampered_certificates_fail_verification() {
    let (mut r, _) = opalg(&["triangularize"], &fixture("full-subquotient"));
    let e2 = r["verdicts"]["e2"].clone();
    r["verdicts"]["e1"] = e2;
    let (v, code) = verify(&r);
    assert_eq!(code, 1, "{v}");

    let tn = text(&opalg(&["family", "tn", "--n", "3"], "").0);
    let (mut r, _) = opalg(&["triangularize"], &tn);
    let basis = r["verdicts"]["basis"]["vectors"].as_array_mut().unwrap();
    basis.reverse();
    assert_eq!(verify(&r).1, 1);
}

#[test]
fn families_round_trip_through_the_tag() {
    let (r, code) = opalg(
        &["family", "preorder"],
        r#"{"n": 3, "pairs": [[0, 1], [1, 2], [0, 2]]}"#,
    );
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["verdicts"]["dim"], 6);
    let (c, code) = opalg(&["close"], &text(&r));
    assert_eq!(code, 0);
    assert_eq!(c["verdicts"]["dim"], 6);
    assert_eq!(verify(&r).1, 0);
}

#[test]
fn numeric_input_selects_the_numeric_backend() {
    let doc = r#"{"n": 2, "generators": [{"n": 2, "entries": [[0.5, 1], [0, 0.25]]}], "unital": true}"#;
    let (r, code) = opalg(&["close"], doc);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["backend"], "numeric");
    assert_eq!(r["verdicts"]["dim"], 2);
    assert!(r["tolerance"].is_object());
}
