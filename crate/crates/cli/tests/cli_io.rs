//! End-to-end checks of the binary: exit codes, JSON envelopes, literal
//! round-trips, and --out handling.

use std::process::{Command, Output};

fn sumsetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn payload(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    v["payload"].clone()
}

#[test]
fn nk_value_and_exit_zero() {
    let out = sumsetlab(&["nk", "--group", "5,5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["value"], 7);
    assert_eq!(p["constant"], "Nk");
    assert!(!p["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn nk_budget_refusal_exits_two() {
    let out = sumsetlab(&["nk", "--group", "5,5,5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "error");
    let msg = v["error"].as_str().unwrap();
    assert!(msg.contains("budget"), "explanation missing: {msg}");
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = sumsetlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mk_brute_agrees() {
    let out = sumsetlab(&["mk", "--group", "10", "--k", "2", "--brute"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["value"], 5);
    assert_eq!(p["formula_value"], 5);
}

#[test]
fn lp_cert_all_margins_positive() {
    let out = sumsetlab(&["lp-cert"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    let certs = p["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 10);
    for c in certs {
        assert!(c["margin"].as_f64().unwrap() > 0.0);
        assert_eq!(c["verdict"], "ok");
        assert_eq!(c["coefficients"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn construct_verify_roundtrip() {
    let out = sumsetlab(&["construct", "--kind", "x22", "--n", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["size"], 7);
    assert_eq!(p["all_pass"], true);
    // every emitted literal parses back to the same set
    let hex = p["hex"].as_str().unwrap();
    let lit = p["set"].as_str().unwrap();
    let g = sumsetlab::format::parse_group(p["group"].as_str().unwrap()).unwrap();
    let from_hex = sumsetlab::format::parse_set(hex, None).unwrap();
    let from_lit = sumsetlab::format::parse_set(lit, Some(&g)).unwrap();
    assert_eq!(from_hex, from_lit);
    assert_eq!(from_hex.len(), 7);
}

#[test]
fn harness_clean_run_exits_zero() {
    let out = sumsetlab(&[
        "harness", "--suite", "kneser", "--group", "12", "--trials", "200", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn harness_runs_are_deterministic() {
    let run = || {
        let out = sumsetlab(&[
            "harness", "--suite", "props", "--group", "5,5", "--trials", "50", "--seed", "9",
        ]);
        assert_eq!(out.status.code(), Some(0));
        payload(&out)
    };
    assert_eq!(run(), run());
}

#[test]
fn spectral_reports_witness_when_applicable() {
    // {1} in Z_5 has 0 outside its triple sumset
    let out = sumsetlab(&["spectral", "--set", "{(1)}", "--group", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert!((p["alpha"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!((p["witness"]["re_z"].as_f64().unwrap() - 0.195_629_520_146_761_13).abs() < 1e-9);
    assert_eq!(p["witness"]["zeta"], "omega");
}

#[test]
fn table_csv_shape() {
    let out = sumsetlab(&["table", "--groups", "5;7;3,3", "--kmax", "3", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "group,k,known,source,search,agree");
    assert_eq!(lines.len(), 1 + 9);
    // N_3(Z_7) row: known and searched both 2, agreeing
    let row: Vec<&str> = lines
        .iter()
        .find(|l| l.starts_with("7,3,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(row[2], "2");
    assert_eq!(row[4], "2");
    assert_eq!(row[5], "true");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = sumsetlab(&[
        "diam", "--group", "2,6", "--brute", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["payload"]["diam_plus"], 6);
    assert_eq!(v["payload"]["agree"], true);
}

#[test]
fn table_agreement_over_reference_groups() {
    let out = sumsetlab(&[
        "table",
        "--groups",
        "5;7;3,3;2,2,2,2;5,5;1",
        "--kmax",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    let rows = p["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 24);
    for row in rows {
        // wherever both a closed form and a search ran, they agree
        assert_ne!(row["agree"], false, "disagreement: {row}");
    }
    // the trivial group rows are all zero by the max-of-empty convention
    for row in rows.iter().filter(|r| r["group"] == "1") {
        assert_eq!(row["known"], 0);
        assert_eq!(row["search"], 0);
    }
    // N_3(Z_13) spot value via the same path
    let out = sumsetlab(&["table", "--groups", "13", "--kmax", "3", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "13,3,4,cyclic-exact,4,true"));
    // the mod-3 divisor case carries the same value on its own turf
    let out = sumsetlab(&["table", "--groups", "7,7", "--kmax", "3", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("7,7,3,16,divisors-one-mod-three")));
}

#[test]
fn threads_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(["nk", "--group", "3,3", "--k", "2"])
        .env("SUMSETLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["value"], 4);
}

#[test]
fn threads_flag_does_not_change_results() {
    let run = |threads: &str| {
        let out = sumsetlab(&[
            "nk", "--group", "2,2,2,2", "--k", "3", "--threads", threads,
        ]);
        assert_eq!(out.status.code(), Some(0));
        let p = payload(&out);
        (p["value"].clone(), p["witnesses"].clone(), p["nodes"].clone())
    };
    assert_eq!(run("1"), run("4"));
}
