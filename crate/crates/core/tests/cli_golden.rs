//! End-to-end binary checks: golden JSON reports, determinism, exit codes,
//! and text summaries.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo_root() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infocoh"))
        .args(args)
        .current_dir(repo_root())
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

const GOLDEN_CASES: &[(&[&str], &str)] = &[
    (
        &[
            "h1",
            "--alpha",
            "1",
            "--N",
            "4",
            "--format",
            "json",
            "data/two_binary_full.json",
        ],
        "h1_two_binary_n4.json",
    ),
    (
        &["limit", "--format", "json", "data/inverse_limit.json"],
        "limit_inverse.json",
    ),
    (&["modular-check", "--format", "json"], "modular_check.json"),
    (
        &["funceq", "--alpha", "1", "--N", "5", "--format", "json"],
        "funceq_n5.json",
    ),
    (
        &[
            "h0",
            "--alpha",
            "1,2",
            "--N",
            "3",
            "--format",
            "json",
            "data/two_binary_full.json",
        ],
        "h0_two_binary.json",
    ),
    (
        &[
            "predict-h1",
            "--alpha",
            "1",
            "--format",
            "json",
            "data/irreducible_chain.json",
        ],
        "predict_irreducible.json",
    ),
];

#[test]
fn reports_match_the_golden_files() {
    for (args, name) in GOLDEN_CASES {
        let out = run(args);
        assert!(out.status.success(), "{args:?}: {}", stdout(&out));
        assert_eq!(stdout(&out), golden(name), "{args:?}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec![
            "h1", "--alpha", "1", "--N", "3", "--format", "json", "--seed", "9",
            "data/two_binary_full.json",
        ],
        vec!["funceq", "--alpha", "2", "--N", "5", "--format", "json", "--seed", "9"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "h1",
        "--alpha",
        "1",
        "--N",
        "4",
        "--out",
        path.to_str().unwrap(),
        "data/two_binary_full.json",
    ]);
    assert!(out.status.success());
    // Text summary on stdout, full JSON in the file.
    assert!(stdout(&out).contains("prediction finite, dimension 1"));
    assert_eq!(std::fs::read_to_string(path).unwrap(), golden("h1_two_binary_n4.json"));
}

#[test]
fn text_summaries_state_the_headline_numbers() {
    let limit = run(&["limit", "data/inverse_limit.json"]);
    assert!(stdout(&limit).contains("sections: 5"));

    let modular = run(&["modular-check"]);
    assert!(stdout(&modular).contains("7/7"));

    let h1 = run(&["h1", "--alpha", "1", "--N", "4", "data/two_binary_full.json"]);
    let text = stdout(&h1);
    assert!(text.contains("prediction finite, dimension 1"), "{text}");
    assert!(text.contains("entropy in nullspace: true"), "{text}");
}

#[test]
fn failing_axioms_exit_two_and_name_the_axiom() {
    let out = run(&["validate", "crates/core/tests/fixtures/non_surjective.json"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("FAIL strict-surjections"), "{text}");
    assert!(text.contains("misses value"), "{text}");
}

#[test]
fn input_errors_exit_two() {
    let missing = run(&["limit", "data/no_such_file.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let non_coprime = run(&["orbit", "2", "4"]);
    assert_eq!(non_coprime.status.code(), Some(2));

    let bad_alpha = run(&["entropy", "--alpha", "-1", "data/two_binary_full.json"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
}
