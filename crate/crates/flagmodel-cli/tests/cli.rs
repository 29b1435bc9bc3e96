//! End-to-end behavior of the `flagmodel` binary: exit codes, the
//! machine-readable mirror, and model-file loading.

use std::io::Write as _;
use std::process::Command;

use flagclean_core::builtin::{builtin_fixture_vars, builtin_fixtures, builtin_sl2};
use flagmodel_cli::model_text::{parse_model, serialize_model};

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_flagmodel"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
        out.status.code().expect("exit code"),
    )
}

fn builtin_file() -> tempfile::NamedTempFile {
    let text = serialize_model(&builtin_sl2(), &builtin_fixture_vars(), &builtin_fixtures());
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(text.as_bytes()).expect("write");
    f
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: clean
    let (_, _, code) = run(&[
        "check",
        "--builtin",
        "--set",
        "Lambda=0",
        "kappa=0",
        "mu_-1=1/2",
        "mu_0=1/3",
    ]);
    assert_eq!(code, 0);

    // 3: not clean
    let (stdout, _, code) = run(&[
        "check",
        "--builtin",
        "--set",
        "Lambda=0",
        "kappa=0",
        "mu_-1=0",
        "mu_0=1/2",
    ]);
    assert_eq!(code, 3);
    assert!(stdout.contains("NOT CLEAN"));

    // 2: window too small for the oracle
    let (_, stderr, code) = run(&["oracle", "simple", "--mu", "5/2,1/3", "--window", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("window"), "stderr: {stderr}");

    // 3: not simple
    let (_, _, code) = run(&["oracle", "simple", "--mu", "2,1/2", "--window", "8"]);
    assert_eq!(code, 3);

    // 1: unreadable model
    let (_, _, code) = run(&["derive", "--model", "/nonexistent/model.txt"]);
    assert_eq!(code, 1);

    // 0: full verification of the builtin
    let (_, _, code) = run(&["verify", "--builtin"]);
    assert_eq!(code, 0);
}

#[test]
fn json_mirror_is_byte_deterministic() {
    for args in [
        vec!["derive", "--builtin", "--json"],
        vec![
            "check",
            "--builtin",
            "--set",
            "mu_-1=1/2",
            "mu_0=1/3",
            "Lambda=1/5",
            "kappa=0",
            "--json",
        ],
        vec!["transitions", "--builtin", "--json"],
        vec!["linebundle", "--builtin", "--json"],
        vec!["oracle", "simple", "--mu", "1/2", "--window", "4", "--json"],
        vec!["verify", "--builtin", "--json"],
    ] {
        let (a, _, _) = run(&args);
        let (b, _, _) = run(&args);
        assert_eq!(a, b, "non-deterministic output for {args:?}");
        let parsed: serde_json::Value = serde_json::from_str(&a).expect("valid json");
        assert!(parsed.is_object());
    }
}

#[test]
fn json_carries_the_witnesses() {
    let (stdout, _, code) = run(&["derive", "--builtin", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let forms = v["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 4);
    assert_eq!(forms[0]["form"], "mu_-1");
    let witnesses = forms[0]["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 2);
    assert_eq!(witnesses[0]["chart"], "1");
    assert_eq!(witnesses[0]["coordinate"], "x");
}

#[test]
fn model_files_round_trip_through_the_binary() {
    let file = builtin_file();
    let path = file.path().to_str().unwrap();

    let (from_file, _, code) = run(&["derive", "--model", path]);
    assert_eq!(code, 0);
    let (from_builtin, _, _) = run(&["derive", "--builtin"]);
    assert_eq!(from_file, from_builtin);

    // the full verification, fixtures included, passes from the file too
    let (stdout, _, code) = run(&["verify", "--model", path]);
    assert_eq!(code, 0, "verify output:\n{stdout}");
    assert!(stdout.contains("11 of 11 passed"));

    // library-level round trip equality
    let text = std::fs::read_to_string(path).unwrap();
    let loaded = parse_model(&text).unwrap();
    assert_eq!(loaded.model, builtin_sl2());
}

#[test]
fn validation_errors_carry_locations_and_exit_1() {
    let text = serialize_model(&builtin_sl2(), &[], &[])
        .replace("  row -1 0\n  row -2 1", "  row -2 0\n  row -2 1");
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let (_, stderr, code) = run(&["derive", "--model", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        stderr.contains("transition 1 2") && stderr.contains("unimodular"),
        "stderr: {stderr}"
    );
    // the diagnostic points at the transition header line in the file
    let located = stderr.lines().any(|l| {
        l.strip_prefix("error: ")
            .and_then(|rest| rest.split(':').next())
            .is_some_and(|n| n.parse::<usize>().is_ok_and(|n| n > 0))
    });
    assert!(located, "stderr: {stderr}");
}

#[test]
fn degree_two_line_model_derives_and_verifies() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/p1-degree2.txt");

    let (stdout, _, code) = run(&["derive", "--model", path]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().collect::<Vec<_>>(), ["mu", "mu + 2*kappa"]);

    let (stdout, _, code) = run(&["verify", "--model", path]);
    assert_eq!(code, 0, "{stdout}");

    // mu + 2*kappa = 1 is the violated form at (1/2, 1/4)
    let (stdout, _, code) = run(&["check", "--model", path, "--set", "mu=1/2", "kappa=1/4"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("mu + 2*kappa = 1 (integral)"), "{stdout}");

    // the oracle agrees with the criterion on a full small grid
    let (stdout, _, code) = run(&[
        "oracle",
        "grid",
        "--model",
        path,
        "--denominator-bound",
        "3",
        "--range",
        "2",
        "--max-cases",
        "1500",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("agreement: 100%"), "{stdout}");
}

#[test]
fn fixture_failures_exit_3() {
    // flip one expected verdict so the fixture report fails semantically
    let text = serialize_model(&builtin_sl2(), &builtin_fixture_vars(), &builtin_fixtures())
        .replace(
            "fixture central-torus-defect\n  subgroup Iu\n  expect no",
            "fixture central-torus-defect\n  subgroup Iu\n  expect yes",
        );
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let (stdout, _, code) = run(&["verify", "--model", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stdout.contains("central-torus-defect: FAIL"), "{stdout}");
}

#[test]
fn standalone_fixture_files_work() {
    // split the builtin file into a model part and a fixtures part
    let full = serialize_model(&builtin_sl2(), &builtin_fixture_vars(), &builtin_fixtures());
    let split_at = full.find("fixture_vars").unwrap();
    let (model_part, fixture_part) = full.split_at(split_at);
    let mut mf = tempfile::NamedTempFile::new().unwrap();
    mf.write_all(model_part.as_bytes()).unwrap();
    let mut ff = tempfile::NamedTempFile::new().unwrap();
    ff.write_all(fixture_part.as_bytes()).unwrap();

    let (stdout, _, code) = run(&[
        "verify",
        "--model",
        mf.path().to_str().unwrap(),
        "--fixtures",
        ff.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("11 of 11 passed"), "{stdout}");
}

#[test]
fn shipped_sample_model_is_current() {
    // models/builtin-sl2.txt must stay in sync with the builtin constructor
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/builtin-sl2.txt");
    let text = std::fs::read_to_string(path).expect("sample model file exists");
    let expected = serialize_model(&builtin_sl2(), &builtin_fixture_vars(), &builtin_fixtures());
    assert_eq!(text, expected, "regenerate models/builtin-sl2.txt");
    let loaded = parse_model(&text).unwrap();
    assert_eq!(loaded.model, builtin_sl2());
}

#[test]
fn oracle_grid_small_run_agrees() {
    let (stdout, _, code) = run(&[
        "oracle",
        "grid",
        "--builtin",
        "--denominator-bound",
        "2",
        "--range",
        "1",
        "--max-cases",
        "400",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("agreement: 100%"), "{stdout}");
}

#[test]
fn oracle_clean_disagrees_never_on_the_builtin() {
    let (stdout, _, code) = run(&[
        "oracle",
        "clean",
        "--builtin",
        "--set",
        "Lambda=1/2",
        "kappa=0",
        "mu_-1=1/2",
        "mu_0=1/2",
        "--window",
        "16",
    ]);
    assert_eq!(code, 3); // not clean is a semantic negative
    assert!(stdout.contains("AGREE"), "{stdout}");
    assert!(stdout.contains("chart 4"), "{stdout}");
}
