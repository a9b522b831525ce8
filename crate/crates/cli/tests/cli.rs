//! End-to-end tests of the binary: exit codes, payload shapes, byte-for-byte
//! determinism, and the datum round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.pop();
    path.pop();
    path.push("fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn mutheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutheta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn no_args_is_usage_error() {
    let out = mutheta(&[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_command_is_usage_error() {
    let out = mutheta(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn polygon_inert21() {
    let out = mutheta(&["polygon", "--datum", &fixture("fix_inert21.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["orbits"][0]["slopes"], serde_json::json!(["0", "1/2", "1"]));
    assert_eq!(v["ordinary"], serde_json::json!(false));
}

#[test]
fn classify_inert21() {
    let out = mutheta(&[
        "classify",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["flags"]["scalar"], serde_json::json!(true));
    assert_eq!(v["flags"]["good"], serde_json::json!(true));
    assert_eq!(v["flags"]["simple"], serde_json::json!(false));
}

#[test]
fn datum_dump_round_trip() {
    let path = fixture("fix_inert21.toml");
    let first = mutheta(&["datum", "dump", "--datum", &path]);
    assert_eq!(first.status.code(), Some(0));
    let json_text = stdout(&first);
    // Re-parse the canonical JSON through a temp file; dump must be
    // byte-identical.
    let tmp = std::env::temp_dir().join("mutheta_dump_roundtrip.json");
    std::fs::write(&tmp, &json_text).unwrap();
    let second = mutheta(&["datum", "dump", "--datum", tmp.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&second), json_text);
}

#[test]
fn deterministic_output() {
    let args = [
        "theta",
        "apply",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
        "--op",
        "theta-tilde@lambda=tau:1,0;taustar:1",
    ];
    let a = mutheta(&args);
    let b = mutheta(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["target_text"], serde_json::json!("tau:10,10;taustar:17"));
}

#[test]
fn parse_error_exit_code() {
    let out = mutheta(&["polygon", "--datum", "/nonexistent/file.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exit_code() {
    // Signature mismatch: structural parse succeeds, validation fails.
    let tmp = std::env::temp_dir().join("mutheta_bad_datum.toml");
    std::fs::write(
        &tmp,
        r#"
case = "A"
n = 3
p = 3
orbits = [["tau", "taustar"]]
cm_type = ["tau"]
[star]
tau = "taustar"
taustar = "tau"
[signature]
tau = 2
taustar = 2
"#,
    )
    .unwrap();
    let out = mutheta(&["polygon", "--datum", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("signature mismatch"));
}

#[test]
fn inapplicable_operator_is_domain_error() {
    let out = mutheta(&[
        "theta",
        "apply",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
        "--op",
        "theta@lambda=tau:1,0;taustar:1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not good"));
}

#[test]
fn cycles_dot_output() {
    let out = mutheta(&[
        "theta",
        "cycles",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "0",
        "--gen",
        "hasse@sigma=tau",
        "--depth",
        "2",
        "--format",
        "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("digraph {"));
    assert!(text.contains("\"0\" -> \"tau:8,8\" [label=\"HasseMult(tau)\"]"));
}

#[test]
fn crystal_verify_all_fixtures() {
    for name in ["fix_split.toml", "fix_inert21.toml", "fix_inert11.toml", "fix_def.toml"] {
        let out = mutheta(&["crystal", "verify", "--datum", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["pass"], serde_json::json!(true), "{name}");
    }
    // Case C is outside the crystal construction.
    let out = mutheta(&["crystal", "verify", "--datum", &fixture("fix_c.toml")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn crystal_show_lemma_literal_reports_discrepancy() {
    let out = mutheta(&[
        "crystal",
        "show",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--lemma-literal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lit = &v["orbits"][0]["lemma_literal"]["tau"];
    assert_eq!(lit["agrees"], serde_json::json!(false));
    assert_eq!(lit["value"], serde_json::json!(0));
    assert_eq!(v["orbits"][0]["c"]["tau"], serde_json::json!(1));
}

#[test]
fn schur_subcommands() {
    let out = mutheta(&["schur", "dim", "--rank", "3", "--tuple", "2,1,0", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], serde_json::json!("8"));
    assert_eq!(v["brute_force_matches"], serde_json::json!(true));
    assert_eq!(v["det_power_check"], serde_json::json!(true));

    let out = mutheta(&["schur", "cauchy", "--power", "2", "--rank-a", "2", "--rank-b", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["multiplicity_free"], serde_json::json!(true));
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    let out = mutheta(&["schur", "plethysm", "--power", "2", "--rank", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    let out = mutheta(&["schur", "branch", "--tuple", "1,1,0", "--parts", "2,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["canonical_quotient"], serde_json::json!([[1, 1], [0]]));

    let out = mutheta(&[
        "schur",
        "admissible",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:1,0;taustar:1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["depth"], serde_json::json!(1));
}

#[test]
fn galois_orbit_depth_one() {
    let out = mutheta(&[
        "galois",
        "orbit",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
        "--gen",
        "theta-tilde@lambda=tau:1,0;taustar:1",
        "--depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 2);
    assert_eq!(states[1]["exponent"], serde_json::json!(1));
    assert_eq!(
        states[1]["weight_text"],
        serde_json::json!("tau:10,10;taustar:17")
    );
    assert_eq!(v["conditional_on_nonvanishing"], serde_json::json!(true));
}

#[test]
fn theta_check_reports_reason() {
    let out = mutheta(&[
        "theta",
        "check",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
        "--op",
        "theta@lambda=tau:1,0;taustar:1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["applicable"], serde_json::json!(false));
    assert_eq!(
        v["reason"],
        serde_json::json!("lambda and lambda-delta(tau) not good")
    );
}

#[test]
fn theta_compare_and_closure() {
    let out = mutheta(&[
        "theta",
        "compare",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "taustar:2",
        "--tau-bar",
        "tau",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["consistent"], serde_json::json!(true));

    let out = mutheta(&[
        "theta",
        "closure",
        "--datum",
        &fixture("fix_inert21.toml"),
        "--weight",
        "tau:2,2;taustar:5",
        "--tau-bar",
        "tau",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["closed"], serde_json::json!(true));
}

#[test]
fn node_budget_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_mutheta"))
        .env("THETA_NODE_BUDGET", "2")
        .args([
            "theta",
            "cycles",
            "--datum",
            &fixture("fix_inert21.toml"),
            "--weight",
            "0",
            "--gen",
            "hasse@sigma=tau",
            "--depth",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["truncated"], serde_json::json!(true));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
}
