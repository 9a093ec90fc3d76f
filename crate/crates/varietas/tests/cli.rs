//! End-to-end tests of the command-line binary: exit codes, JSON output and
//! the documented file formats.

use std::path::Path;
use std::process::{Command, Output};

use varietas::bimodule::{BimoduleJson, LatticeBimodule};
use varietas::qfa::{parity_machine, KwqfaJson};
use varietas::recognition::UQuotientJson;

fn varietas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varietas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_string_lossy().to_string()
}

#[test]
fn syntactic_sizes() {
    let out = varietas(&["syntactic", "(aa)*"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("size: 2"), "{}", stdout(&out));

    let out = varietas(&["syntactic", "a*"]);
    assert!(stdout(&out).contains("size: 1"));

    // machine-readable form
    let out = varietas(&["--json", "syntactic", "(a|b)*a"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["monoid"]["size"], 3);
}

#[test]
fn empty_input_is_a_usage_error() {
    let out = varietas(&["syntactic", ""]);
    assert_eq!(out.status.code(), Some(2));

    let out = varietas(&["syntactic", "(a"]);
    assert_eq!(out.status.code(), Some(2));

    let out = varietas(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closure_and_pipeline() {
    let out = varietas(&["--json", "closure", "(aa)*"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["languages"].as_array().unwrap().len(), 2);

    let out = varietas(&["--json", "pipeline", "(aa)*"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["closure_size"], 2);
    assert_eq!(v["dual_lattice_size"], 4);
    assert_eq!(v["round_trip"], true);

    // the empty language walks the degenerate pipeline
    let out = varietas(&["--json", "pipeline", "∅"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["closure_size"], 1);
    assert_eq!(v["dual_lattice_size"], 2);
    assert_eq!(v["round_trip"], true);
}

#[test]
fn dualize_and_rec_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = varietas(&["--json", "closure", "(a|b)*a"]);
    let variety_path = dir.path().join("variety.json");
    std::fs::write(&variety_path, stdout(&out)).unwrap();

    let out = varietas(&["--json", "dualize", variety_path.to_str().unwrap()]);
    assert!(out.status.success());
    let dual: UQuotientJson = serde_json::from_str(&stdout(&out)).unwrap();
    let dual_path = write_json(dir.path(), "dual.json", &dual);

    let out = varietas(&["--json", "rec", &dual_path]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let langs = v["languages"].as_array().unwrap();
    let closure: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&variety_path).unwrap()).unwrap();
    assert_eq!(langs.len(), closure["languages"].as_array().unwrap().len());

    let out = varietas(&["verify-duality", variety_path.to_str().unwrap()]);
    assert!(out.status.success());

    // dualize straight from a pattern
    let out = varietas(&["dualize", "(ab)*", "--from-lang"]);
    assert!(out.status.success());
}

#[test]
fn check_and_reduce_bimodules() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_json(
        dir.path(),
        "diamond.json",
        &BimoduleJson::from(&LatticeBimodule::diamond_example()),
    );
    let out = varietas(&["check", &good]);
    assert!(out.status.success());

    // corrupt one action cell: check fails with the law name, exit 1
    let mut corrupted = LatticeBimodule::diamond_example();
    corrupted.act_left[1][1] = 3;
    let bad = write_json(
        dir.path(),
        "corrupted.json",
        &BimoduleJson::from(&corrupted),
    );
    let out = varietas(&["check", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("translate_left"), "{}", stdout(&out));

    let out = varietas(&["--json", "reduce", &good]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["collapsed_monoid"], false);

    // malformed table shapes are a parse-level error, not a panic
    let mut malformed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    malformed["iota"] = serde_json::json!([1]);
    let path = write_json(dir.path(), "malformed.json", &malformed);
    let out = varietas(&["check", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qfa_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let machine = write_json(
        dir.path(),
        "parity.json",
        &KwqfaJson::from(&parity_machine()),
    );

    let out = varietas(&["qfa", "validate", &machine]);
    assert!(out.status.success());

    let out = varietas(&["qfa", "run", &machine, "aa"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1.000000000"), "{}", stdout(&out));

    let out = varietas(&["qfa", "run", &machine, "a", "--mode", "basis"]);
    assert!(stdout(&out).contains("0.000000000"));

    let out = varietas(&[
        "--json",
        "qfa",
        "margin",
        &machine,
        "(aa)*",
        "--max-len",
        "6",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["min_accept"], 1.0);
    assert_eq!(v["max_accept_complement"], 0.0);

    let out = varietas(&[
        "qfa",
        "probe",
        &machine,
        "--context",
        "a:",
        "--max-len",
        "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("not conclusive"));

    // wrong-alphabet margin is a usage error
    let out = varietas(&["qfa", "margin", &machine, "(ab)*"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rec_rejects_invalid_quotients() {
    // a machine whose recognized singleton is not derivative-closed
    let dir = tempfile::tempdir().unwrap();
    let l = varietas::lang::RegularLanguage::from_regex("(a|b)*a").unwrap();
    let dfa = l.dfa();
    let e = varietas::recognition::UQuotient {
        alphabet: l.alphabet().clone(),
        states: dfa.states,
        init: dfa.init,
        delta: dfa.delta.clone(),
        val: dfa.finals.iter().map(|&f| usize::from(f)).collect(),
        lattice: varietas::order::Fdl::two(),
        provenance: varietas::recognition::Provenance::External,
    };
    let path = write_json(dir.path(), "bad-quotient.json", &UQuotientJson::from(&e));
    let out = varietas(&["rec", &path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suites() {
    let out = varietas(&["verify", "--suite", "qfa"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("criterion 9"));

    let out = varietas(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));

    // JSON output is machine readable and carries criterion ids
    let out = varietas(&["--json", "verify", "--suite", "order", "--seed", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|c| c["criterion"] == 1));
}

#[test]
fn lattice_bound_env_var_is_honored() {
    // with the generator bound forced to zero, the canonical monoid
    // recognizer cannot be built and the recognition criterion fails
    let out = Command::new(env!("CARGO_BIN_EXE_varietas"))
        .args(["verify", "--suite", "recognition"])
        .env("VARIETAS_MAX_LATTICE", "0")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"), "{}", stdout(&out));
}

#[test]
fn check_cotheory_file() {
    let dir = tempfile::tempdir().unwrap();
    // build the sample through the CLI-facing JSON shape
    let closure_ab = varietas(&["--json", "closure", "(ab)*"]);
    let sigma_var: serde_json::Value = serde_json::from_str(&stdout(&closure_ab)).unwrap();
    // Δ-family: the preimage-generated variety, obtained through the library
    let g = varietas::lang::FreeMonoidHom::new(
        varietas::lang::Alphabet::new("c").unwrap(),
        varietas::lang::Alphabet::new("ab").unwrap(),
        vec!["ab".into()],
    )
    .unwrap();
    let sigma = varietas::varieties::derivative_closure(
        &varietas::lang::RegularLanguage::from_regex("(ab)*").unwrap(),
    )
    .variety;
    let preimages: Vec<_> = sigma
        .languages()
        .iter()
        .map(|l| l.preimage(&g).unwrap())
        .collect();
    let delta_var = varietas::varieties::generated_local_variety(
        varietas::lang::Alphabet::new("c").unwrap(),
        preimages,
    )
    .unwrap();
    let sample = serde_json::json!({
        "families": [
            { "alphabet": "ab", "varieties": [sigma_var] },
            { "alphabet": "c", "varieties": [varietas::varieties::VarietyJson::from(&delta_var)] },
        ],
        "homs": [ { "source": "c", "target": "ab", "image": { "c": "ab" } } ],
    });
    let path = write_json(dir.path(), "sample.json", &sample);
    let out = varietas(&["check-cotheory", &path]);
    assert!(out.status.success(), "{}", stdout(&out));

    // dropping the Δ-family member breaks preimage coverage: exit 1
    let broken = serde_json::json!({
        "families": [
            { "alphabet": "ab", "varieties": [serde_json::from_str::<serde_json::Value>(&stdout(&closure_ab)).unwrap()] },
            { "alphabet": "c", "varieties": [] },
        ],
        "homs": [ { "source": "c", "target": "ab", "image": { "c": "ab" } } ],
    });
    let path = write_json(dir.path(), "broken.json", &broken);
    let out = varietas(&["check-cotheory", &path]);
    assert_eq!(out.status.code(), Some(1));
}
