//! End-to-end checks of the command-line interface: exit codes, the
//! JSON output contract, and input diagnostics.

use std::io::Write;
use std::process::{Command, Output};

use sumsq::admissibility::{check_direct, check_shifted, Triple, Verdict};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn formula_path(name: &str) -> String {
    format!("{}/../../formulas/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn check_exit_codes_and_text() {
    let forbidden = run(&["check", "13", "13", "16"]);
    assert_eq!(forbidden.status.code(), Some(1));
    let text = stdout(&forbidden);
    assert!(text.contains("FORBIDDEN"));
    assert!(text.contains("characteristic != 2"));

    let vacuous = run(&["check", "2", "2", "2"]);
    assert_eq!(vacuous.status.code(), Some(0));
    assert!(stdout(&vacuous).contains("no constraints (vacuous)"));

    let admissible = run(&["check", "8", "8", "8"]);
    assert_eq!(admissible.status.code(), Some(0));
    assert!(stdout(&admissible).contains("ADMISSIBLE"));
}

#[test]
fn check_json_round_trips_the_verdicts() {
    let output = run(&["check", "13", "13", "16", "--json"]);
    assert_eq!(output.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["admissible"], false);

    let direct: Verdict = serde_json::from_value(doc["direct"].clone()).unwrap();
    let shifted: Verdict = serde_json::from_value(doc["shifted"].clone()).unwrap();
    let t = Triple::new(13, 13, 16).unwrap();
    assert_eq!(direct, check_direct(&t));
    assert_eq!(shifted, check_shifted(&t));
}

#[test]
fn json_output_is_deterministic() {
    let a = run(&["check", "12", "20", "21", "--json"]);
    let b = run(&["check", "12", "20", "21", "--json"]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = run(&["table", "--rmax", "5", "--smax", "7", "--json"]);
    let d = run(&["table", "--rmax", "5", "--smax", "7", "--json"]);
    assert_eq!(stdout(&c), stdout(&d));
}

#[test]
fn minimal_n_and_table() {
    let out = run(&["minimal-n", "13", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("17"));

    let json = run(&["minimal-n", "13", "13", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["minimal_n"], 17);

    let table = run(&["table", "--rmax", "4", "--smax", "4", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&table)).unwrap();
    assert_eq!(
        doc["rows"],
        serde_json::json!([[1, 2, 3, 4], [2, 2, 3, 4], [3, 3, 4, 4], [4, 4, 4, 4]])
    );
}

#[test]
fn gamma_subcommand() {
    let out = run(&["gamma", "13", "13", "16"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("Z[nu]/(2^6 nu"));
    assert!(text.contains("VIOLATED"));

    let json = run(&["gamma", "8", "8", "8", "--json"]);
    assert_eq!(json.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["obstructed"], false);
    assert_eq!(doc["modulus_exponent"], 3);
    // series coefficient t^1 of (1+t*nu)^-8 is -8*nu = 0 mod 2^3
    assert_eq!(doc["series"][1]["nu"], "0");
    assert_eq!(doc["constraints"].as_array().unwrap().len(), 3);
}

#[test]
fn ring_subcommands() {
    let out = run(&["ring", "deleted-quadric", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Z ⊕ Z/4"), "{text}");
    assert!(text.contains("relation t² = 2t"), "{text}");

    let json = run(&["ring", "deleted-quadric", "9", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["group"], "Z ⊕ Z/16");
    assert_eq!(doc["relation_t_squared_equals_two_t"], true);
    assert_eq!(doc["torsion"], serde_json::json!(["16"]));

    let ideal = run(&["ring", "ideal-check", "7"]);
    assert_eq!(ideal.status.code(), Some(0));
    assert!(stdout(&ideal).contains("="));
}

#[test]
fn verify_subcommand() {
    for name in ["trivial", "two_square", "four_square", "eight_square"] {
        let out = run(&["verify", &formula_path(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let text = stdout(&out);
        assert!(text.contains("verified"), "{name}: {text}");
        assert!(text.contains("consistent"), "{name}: {text}");
    }

    let json = run(&["verify", &formula_path("eight_square"), "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["orthogonality"], true);
    assert_eq!(doc["consistency"], "consistent");
    assert_eq!(doc["field"], "Q");

    // a char-2 formula is exempt from the cross-check
    let mut char2 = tempfile_with(
        r#"{"r": 3, "s": 3, "n": 1, "field": {"prime": 2},
            "coeffs": [[[1, 1, 1], [1, 1, 1], [1, 1, 1]]]}"#,
    );
    let out = run(&["verify", char2.path_str(), "--char2-note"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("char2-exempt"));
    assert!(text.contains("characteristic != 2"));
    char2.cleanup();
}

#[test]
fn verify_rejects_broken_formulas_and_files() {
    // perturbed two-square formula: well-formed file, failed identity
    let mut broken = tempfile_with(
        r#"{"r": 2, "s": 2, "n": 2, "field": "rational",
            "coeffs": [[["1", "0"], ["0", "-1"]], [["0", "1"], ["2", "0"]]]}"#,
    );
    let out = run(&["verify", broken.path_str()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILED"));
    broken.cleanup();

    // malformed document: exit 2 with a line diagnostic
    let mut bad = tempfile_with(r#"{"r": 2, "s": 2,"#);
    let out = run(&["verify", bad.path_str()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "{err}");
    bad.cleanup();

    // unknown field: exit 2 naming the field
    let mut unknown = tempfile_with(
        r#"{"r": 1, "s": 1, "n": 1, "field": "rational",
            "coeffs": [[["1"]]], "comment": "nope"}"#,
    );
    let out = run(&["verify", unknown.path_str()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("comment"), "{err}");
    unknown.cleanup();

    let out = run(&["verify", "/nonexistent/formula.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["check", "0", "2", "2"]).status.code(), Some(2));
    assert_eq!(run(&["check", "2", "2"]).status.code(), Some(2));
    assert_eq!(run(&["check", "20001", "2", "2"]).status.code(), Some(2));
    assert_eq!(run(&["ring", "deleted-quadric", "201"]).status.code(), Some(2));
    assert_eq!(run(&["ring", "deleted-quadric", "0"]).status.code(), Some(2));
    assert_eq!(run(&["gamma", "2", "1026", "1026"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--rmax", "300", "--smax", "2"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

struct TempFile {
    path: std::path::PathBuf,
}

impl TempFile {
    fn path_str(&self) -> &str {
        self.path.to_str().unwrap()
    }

    fn cleanup(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

fn tempfile_with(contents: &str) -> TempFile {
    let path = std::env::temp_dir().join(format!(
        "sumsq-test-{}-{:x}.json",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    TempFile { path }
}
