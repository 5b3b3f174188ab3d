use necklace_cli::{run, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("necklace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = invoke(&full);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

#[test]
fn necklace_count_text() {
    assert_eq!(invoke(&["necklace", "--a", "2", "--n", "4"]), (EXIT_OK, "3\n".into(), String::new()));
}

#[test]
fn necklace_table_text() {
    let (code, out, _) = invoke(&["necklace", "table", "--a", "2", "--degree", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1  2\n2  1\n3  2\n4  3\n");
}

#[test]
fn mobius_text() {
    assert_eq!(invoke(&["mobius", "--n", "30"]).1, "-1\n");
    assert_eq!(invoke(&["mobius", "--n", "12"]).1, "0\n");
}

#[test]
fn large_values_print_in_full() {
    let (_, out, _) = invoke(&["necklace", "--a", "10", "--n", "40"]);
    // (10^40 - 10^20 - 10^8 + 10^4) / 40, no exponent notation.
    assert_eq!(out.trim(), "249999999999999999997499999999997500250");
}

#[test]
fn every_subcommand_emits_schema_tagged_json() {
    let cases: &[(&[&str], &str)] = &[
        (&["mobius", "--n", "7"], "necklace/mobius/v1"),
        (&["necklace", "--a", "3", "--n", "3"], "necklace/necklace-count/v1"),
        (&["necklace", "table", "--a", "3", "--degree", "3"], "necklace/necklace-table/v1"),
        (&["expand", "--a", "2", "--degree", "8"], "necklace/expansion/v1"),
        (&["expand", "raw", "--exponents", "1,1,1"], "necklace/expansion/v1"),
        (&["field", "count", "--p", "2", "--k", "2", "--n", "2"], "necklace/irreducible-count/v1"),
        (&["verify", "symbolic", "--a", "2", "--degree", "32"], "necklace/symbolic-report/v1"),
        (&["verify", "numeric", "--a", "2", "--z", "0.25,0", "--degree", "40"], "necklace/numeric-report/v1"),
        (&["verify", "bridge", "--p", "5", "--k", "1", "--n-max", "1"], "necklace/bridge-report/v1"),
    ];
    for (args, schema) in cases {
        assert_eq!(json(args)["schema"], *schema, "{args:?}");
    }
}

#[test]
fn json_payloads() {
    let doc = json(&["verify", "symbolic", "--a", "2", "--degree", "32"]);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["coefficients"][1], "-2");
    assert_eq!(doc["coefficients"].as_array().unwrap().len(), 33);

    let doc = json(&["necklace", "table", "--a", "3", "--degree", "3"]);
    assert_eq!(doc["values"], serde_json::json!(["3", "3", "8"]));

    let doc = json(&["expand", "--a", "2", "--degree", "8", "--method", "direct"]);
    assert_eq!(doc["coefficients"], serde_json::json!(["1", "-2", "0", "0", "0", "0", "0", "0", "0"]));
    assert_eq!(doc["method"], "direct");

    let doc = json(&["field", "count", "--p", "3", "--k", "2", "--n", "1"]);
    assert_eq!(doc["field"]["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(doc["count"], "9");

    let doc = json(&["verify", "numeric", "--a", "3", "--z", "0.1,0.1", "--degree", "50"]);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["z"], serde_json::json!({"re": 0.1, "im": 0.1}));
    let target = &doc["target"];
    assert!((target["re"].as_f64().unwrap() - 0.7).abs() < 1e-15);
    assert!((target["im"].as_f64().unwrap() + 0.3).abs() < 1e-15);
}

#[test]
fn raw_expansion_accepts_negative_exponents() {
    let (code, out, err) = invoke(&["expand", "raw", "--exponents", "-1,2,0,1"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, "1 1 -1 -1 -1\n");
    let (_, direct, _) = invoke(&["expand", "raw", "--exponents=-1,2,0,1", "--method", "direct"]);
    assert_eq!(direct, out);
}

#[test]
fn negative_real_part_parses() {
    let doc = json(&["verify", "numeric", "--a", "2", "--z", "-0.2,0.1", "--degree", "30"]);
    assert_eq!(doc["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    let bad: &[&[&str]] = &[
        &["verify", "symbolic", "--a", "0", "--degree", "8"],
        &["frobnicate"],
        &[],
        &["necklace", "--a", "2"],
        &["mobius", "--n", "0"],
        &["verify", "numeric", "--a", "2", "--z", "0.6,0", "--degree", "10"],
        &["verify", "numeric", "--a", "2", "--z", "0.1", "--degree", "10"],
        &["verify", "numeric", "--a", "1", "--z", "0.1,0", "--degree", "10"],
        &["field", "count", "--p", "4", "--n", "2"],
        &["field", "count", "--p", "2", "--n", "30"],
        &["field", "count", "--p", "2", "--n", "3", "--budget", "0"],
        &["field", "count", "--p", "2", "--n", "3", "--workers", "0"],
        &["verify", "bridge", "--p", "2", "--n-max", "12", "--budget", "1000"],
        &["expand", "raw", "--exponents", "1,x"],
        &["verify", "symbolic", "--a", "2", "--degree", "8", "--bogus"],
    ];
    for args in bad {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}: {out}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn refusal_messages_are_specific() {
    let (_, _, err) = invoke(&["verify", "bridge", "--p", "2", "--n-max", "12", "--budget", "1000"]);
    assert!(err.contains("budget of 1000") && err.contains("largest feasible degree is 9"), "{err}");
    let (_, _, err) = invoke(&["verify", "numeric", "--a", "2", "--z", "0.6,0", "--degree", "10"]);
    assert!(err.contains("|z| < 1/s"), "{err}");
}

#[test]
fn quiet_suppresses_output_but_keeps_status() {
    assert_eq!(
        invoke(&["verify", "symbolic", "--a", "3", "--degree", "10", "--quiet"]),
        (EXIT_OK, String::new(), String::new())
    );
    assert_eq!(invoke(&["--quiet", "mobius", "--n", "6"]).1, "");
}

#[test]
fn json_output_is_deterministic_across_worker_counts() {
    let base = ["verify", "bridge", "--p", "3", "--n-max", "6", "--json"];
    let (_, one, _) = invoke(&base);
    for workers in ["2", "5"] {
        let mut args = base.to_vec();
        args.extend(["--workers", workers]);
        assert_eq!(invoke(&args).1, one);
    }
    let count = ["field", "count", "--p", "2", "--n", "12", "--test", "trial", "--json"];
    let (_, first, _) = invoke(&count);
    let (_, again, _) = invoke(&[&count[..], &["--workers", "3"]].concat());
    assert_eq!(first, again);
}

#[test]
fn help_goes_to_stdout_with_success() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_necklace");
    let status = std::process::Command::new(bin)
        .args(["verify", "symbolic", "--a", "0", "--degree", "8"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
    let ok = std::process::Command::new(bin)
        .args(["necklace", "--a", "2", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "3\n");
}
