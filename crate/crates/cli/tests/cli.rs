//! End-to-end tests of the `conevol` binary: command output, exit codes,
//! and byte-level reproducibility of seeded runs.

use std::process::{Command, Output};

fn conevol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conevol"))
        .args(args)
        .env_remove("CONEVOL_THREADS")
        .output()
        .expect("the binary launches")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is one JSON document")
}

#[test]
fn degrees_prints_the_table_order_and_root_count() {
    let out = conevol(&["degrees", "H3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("degrees 2 6 10"), "{text}");
    assert!(text.contains("group order 120"), "{text}");
    assert!(text.contains("positive roots 15"), "{text}");

    let out = conevol(&["degrees", "A2"]);
    let text = stdout(&out);
    assert!(text.contains("degrees 2 3"), "{text}");
    assert!(text.contains("group order 6"), "{text}");
    assert!(text.contains("positive roots 3"), "{text}");

    // The bare-I2 spelling reaches labels with no exact realization.
    let out = conevol(&["degrees", "I2", "--m", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("degrees 2 7"), "{text}");
    assert!(text.contains("group order 14"), "{text}");
    assert!(text.contains("positive roots 7"), "{text}");

    let out = conevol(&["degrees", "I2(12)", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["degrees"], serde_json::json!([2, 12]));
    assert_eq!(v["group_order"], 24);
}

#[test]
fn volume_reports_exact_values_without_sampling() {
    let out = conevol(&["volume", "H4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("exact 6061/14400"));

    let out = conevol(&["volume", "A1"]);
    assert!(stdout(&out).contains("exact 1/2"));

    let out = conevol(&["volume", "A2", "--json"]);
    assert_eq!(json(&out)["exact"], "1/3");
}

#[test]
fn seeded_volume_runs_are_byte_identical_and_thread_invariant() {
    let args = ["volume", "A2", "--mc", "200000", "--seed", "7", "--json"];
    let first = conevol(&args);
    assert!(first.status.success());
    let second = conevol(&args);
    assert_eq!(first.stdout, second.stdout);

    let threaded = conevol(&[
        "volume", "A2", "--mc", "200000", "--seed", "7", "--json", "--threads", "3",
    ]);
    assert_eq!(first.stdout, threaded.stdout);

    let via_env = Command::new(env!("CARGO_BIN_EXE_conevol"))
        .args(args)
        .env("CONEVOL_THREADS", "5")
        .output()
        .expect("the binary launches");
    assert_eq!(first.stdout, via_env.stdout);

    let v = json(&first);
    assert_eq!(v["exact"], "1/3");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["samples"], 200_000);
    assert_eq!(v["seed"], 7);
}

#[test]
fn count_verifies_small_types_and_skips_over_cap_types() {
    let out = conevol(&["count", "A2", "--trials", "100", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("expected 2"), "{text}");
    assert!(text.contains("status pass"), "{text}");

    let out = conevol(&["count", "H3", "--trials", "50", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("expected 45"));

    // Over the enumeration cap: explained and skipped, but not a failure.
    let out = conevol(&["count", "E8", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("status skipped"), "{text}");
    assert!(text.contains("696729600"), "{text}");

    let out = conevol(&["count", "E8", "--seed", "1", "--json"]);
    let v = json(&out);
    assert_eq!(v["status"], "skipped");
    assert_eq!(v["expected_count"], 215_656_441u64);

    // Seeded reruns match byte for byte.
    let args = ["count", "B2", "--trials", "20", "--seed", "9", "--json"];
    let first = conevol(&args);
    let second = conevol(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn count_rejects_unrealizable_dihedral_labels() {
    let out = conevol(&["count", "I2(7)", "--seed", "1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unsupported edge label 7"));

    let out = conevol(&["count", "I2(7)", "--seed", "1", "--json"]);
    assert!(!out.status.success());
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn poincare_factors_and_counts_chambers() {
    let out = conevol(&["poincare", "A2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("poincare 1 + 3t + 2t^2"), "{text}");
    assert!(text.contains("exponents 1 2"), "{text}");
    assert!(text.contains("chambers 6"), "{text}");
    assert!(text.contains("top coefficient 2"), "{text}");

    let out = conevol(&["poincare", "H3", "--json"]);
    let v = json(&out);
    assert_eq!(v["exponents"], serde_json::json!([1, 5, 9]));
    assert_eq!(v["poincare"], serde_json::json!([1, 15, 59, 45]));
    assert_eq!(v["chambers"], 120);
    assert_eq!(v["sliced_bounded"], 45);

    let out = conevol(&["poincare", "F4", "--json"]);
    assert_eq!(json(&out)["top_coefficient"], 385);
}

#[test]
fn identity_passes_for_crystallographic_types_and_rejects_h3() {
    let out = conevol(&["identity", "G2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("term 5/12"), "{text}");
    assert!(text.contains("term 1/4"), "{text}");
    assert!(text.contains("term 1/3"), "{text}");
    assert!(text.contains("total 1/1"), "{text}");

    let out = conevol(&["identity", "--all-crystallographic", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["reports"].as_array().unwrap().len(), 23);

    let out = conevol(&["identity", "H3"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("not crystallographic"));

    let out = conevol(&["identity"]);
    assert!(!out.status.success());
}

#[test]
fn search_ext_passes_in_both_modes() {
    for base in ["H3", "H4"] {
        let out = conevol(&["search-ext", base]);
        assert!(out.status.success(), "{base}");
        assert!(stdout(&out).contains("status pass"), "{base}");

        let out = conevol(&["search-ext", base, "--allow-finite-total", "--json"]);
        assert!(out.status.success(), "{base}");
        let v = json(&out);
        assert_eq!(v["all_sums_differ_from_one"], true, "{base}");
        let candidates = v["candidates"].as_array().unwrap();
        assert!(!candidates.is_empty(), "{base}");
        for c in candidates {
            assert_ne!(c["sum"], "1/1", "{base}: {c}");
        }
    }
}

#[test]
fn alcove_partition_passes_and_rejects_noncrystallographic_input() {
    let out = conevol(&["alcove", "B2", "--trials", "50", "--seed", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("status pass"));

    let args = ["alcove", "A2", "--trials", "25", "--seed", "11", "--json"];
    let first = conevol(&args);
    let second = conevol(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let out = conevol(&["alcove", "H3", "--trials", "5", "--seed", "1"]);
    assert!(!out.status.success());
}

#[test]
fn classify_reads_the_diagram_grammar() {
    let out = conevol(&["classify", "4; 1 2 5; 2 3 3; 3 4 3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("type H4"), "{text}");
    assert!(text.contains("group order 14400"), "{text}");

    let out = conevol(&["classify", "3; 1 2 3; 2 3 3; 1 3 3", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["finite"], false);
    assert_eq!(v["type"], "not finite");
}

#[test]
fn bad_selectors_fail_with_nonzero_exit() {
    let out = conevol(&["degrees", "Z9"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("invalid type selector"));

    let out = conevol(&["degrees", "I2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("needs --m"));

    let out = conevol(&["volume", "A2", "--seed", "3"]);
    assert!(!out.status.success());

    let out = conevol(&["volume", "A2", "--mc", "1000"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--seed"));
}
