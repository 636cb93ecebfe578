use std::process::{Command, Output};

use milnor_core::{decorate, decorated_isomorphic, MultiplicityVector, PlumbingGraph};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn milnor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let out = milnor(&full);
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?}, stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (code(&out), report)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&milnor(&["check", &data("e8.json")])), 0);
    assert_eq!(code(&milnor(&["check", &data("single_zero.json")])), 2);
    assert_eq!(code(&milnor(&["check", &data("affine_e8.json")])), 2);
    let malformed = milnor(&["check", &data("malformed.json")]);
    assert_eq!(code(&malformed), 1);
    assert!(stderr(&malformed).contains("line 2"), "{}", stderr(&malformed));
    assert!(malformed.stdout.is_empty());
    assert_eq!(code(&milnor(&["check", &data("missing.json")])), 1);
}

#[test]
fn usage_errors_are_input_errors() {
    assert_eq!(code(&milnor(&[])), 1);
    assert_eq!(code(&milnor(&["frobnicate"])), 1);
    assert_eq!(code(&milnor(&["check", &data("e8.json"), "--bogus"])), 1);
    assert_eq!(code(&milnor(&["openbook", &data("e8.json"), "--emit", "svg"])), 1);
    assert_eq!(code(&milnor(&["--help"])), 0);
    assert_eq!(code(&milnor(&["--version"])), 0);
}

#[test]
fn divisor_reports() {
    let (c, report) = structured(&["divisor", &data("chain2.json")]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["divisor"], serde_json::json!([1, 1]));
    assert_eq!(report["result"]["multiplicities"], serde_json::json!([1, 1]));

    let (c, report) = structured(&["divisor", &data("d4.json"), "--oracle", "--bound", "12"]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["divisor"], serde_json::json!([9, 5, 5, 5]));
    assert_eq!(report["result"]["oracle"]["agrees"], Value::Bool(true));
    assert_eq!(report["config"]["bound"], 12);

    assert_eq!(code(&milnor(&["divisor", &data("single_zero.json")])), 2);
    let small = milnor(&["divisor", &data("d4.json"), "--oracle", "--bound", "3"]);
    assert_eq!(code(&small), 1);
    assert!(stderr(&small).contains("<= 3"));
}

#[test]
fn reports_carry_version_and_configuration() {
    let (_, report) = structured(&["check", &data("e8.json")]);
    assert_eq!(report["tool"], "milnor");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["format"], "structured");

    let (_, report) = structured(&["contact", "reeb", "--ambient", "2", "--samples", "5"]);
    let config = &report["config"];
    for key in ["check", "variety", "f", "epsilon", "eta", "c", "samples", "mesh", "seed", "format"] {
        assert!(config.get(key).is_some(), "missing {key} in {config}");
    }
    assert_eq!(config["epsilon"], 0.01);
    assert_eq!(config["mesh"], 10_000);
    assert_eq!(config["seed"], 0);

    let text = String::from_utf8(milnor(&["check", &data("e8.json")]).stdout).unwrap();
    assert!(text.contains(&format!("version: {}", env!("CARGO_PKG_VERSION"))));
    assert!(text.contains("milnor_fillable: true"));
}

fn decorated_from_report(report: &Value) -> milnor_core::DecoratedLinkGraph {
    let graph = PlumbingGraph::from_json(&report["result"]["graph"].to_string()).unwrap();
    let counts: Vec<i64> = serde_json::from_value(report["result"]["multiplicities"].clone()).unwrap();
    decorate(&graph, &MultiplicityVector::new(counts)).unwrap()
}

#[test]
fn openbook_reports() {
    let (c, report) = structured(&["openbook", &data("single_m2.json")]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["multiplicities"], serde_json::json!([2]));
    assert_eq!(report["result"]["binding_components"], 2);

    let (c, e8) = structured(&["openbook", &data("e8.json")]);
    assert_eq!(c, 0);
    assert_eq!(e8["result"]["aut_invariant"], Value::Bool(true));
    assert_eq!(e8["result"]["binding_components"], 14);
    assert_eq!(e8["result"]["determined_by_decoration"], Value::Bool(true));

    let (c, relabeled) = structured(&["openbook", &data("e8_relabeled.json")]);
    assert_eq!(c, 0);
    assert!(decorated_isomorphic(&decorated_from_report(&e8), &decorated_from_report(&relabeled)));

    let dot = milnor(&["openbook", &data("chain2.json"), "--emit", "graph"]);
    assert_eq!(code(&dot), 0);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("graph decorated_link {"));
    assert!(text.contains("v0 -- v1;"));

    assert_eq!(code(&milnor(&["openbook", &data("affine_e8.json")])), 2);
}

#[test]
fn contact_examples() {
    let (c, spsh) = structured(&[
        "contact", "spsh", "--hypersurface", "z0^2+z1^3+z2^5", "--epsilon", "0.01", "--samples", "500", "--seed", "7",
    ]);
    assert_eq!(c, 0);
    assert!(spsh["result"]["min_levi_quotient"].as_f64().unwrap() > 0.0);
    assert_eq!(spsh["config"]["variety"]["kind"], "hypersurface");
    assert_eq!(spsh["config"]["variety"]["ambient"], 3);

    let (c, identity) = structured(&["contact", "identity", "--ambient", "2", "--f", "z0*z1", "--c", "1", "--samples", "100"]);
    assert_eq!(c, 0);
    assert!(identity["result"]["max_residual"].as_f64().unwrap() <= 1e-6);

    let (c, adapt) = structured(&["contact", "adapt", "--ambient", "2", "--f", "z0", "--epsilon", "0.01", "--mesh", "10000"]);
    assert_eq!(c, 0);
    assert_eq!(adapt["result"]["c"], 0.0);
    assert_eq!(adapt["result"]["verified"], Value::Bool(true));
}

#[test]
fn contact_with_a_chart() {
    let (c, report) = structured(&["contact", "reeb", "--ambient", "2", "--map", "z0, z1, z0^2 + z1^2", "--samples", "50"]);
    assert_eq!(c, 0);
    assert_eq!(report["config"]["variety"]["kind"], "chart");
    assert!(report["result"]["max_alpha_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn failed_numerical_checks_exit_with_four() {
    let (c, report) = structured(&["contact", "criterion", "--ambient", "2", "--f", "1", "--mesh", "50"]);
    assert_eq!(c, 4);
    assert_eq!(report["verdict"], "fail");
    // (z0^2, z0^3) ignores z1, so it is nowhere an immersion
    let out = milnor(&["contact", "reeb", "--ambient", "2", "--map", "z0^2,z0^3", "--samples", "5"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("sampling failed"));
}

#[test]
fn contact_input_errors() {
    let bad = milnor(&["contact", "spsh", "--hypersurface", "z0^2 + + z1"]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("position"), "{}", stderr(&bad));
    assert_eq!(code(&milnor(&["contact", "identity", "--ambient", "2"])), 1);
    assert_eq!(code(&milnor(&["contact", "spsh", "--ambient", "2", "--epsilon", "-1"])), 1);
    assert_eq!(code(&milnor(&["contact", "spsh"])), 1);
    assert_eq!(code(&milnor(&["contact", "adapt", "--ambient", "2", "--f", "z0", "--mesh", "0"])), 1);
    assert_eq!(code(&milnor(&["contact", "identity", "--ambient", "2", "--f", "z5"])), 1);
    assert_eq!(code(&milnor(&["contact", "spsh", "--hypersurface", "z0^2+z1^3", "--map", "z0"])), 1);
}

#[test]
fn text_output_is_deterministic() {
    let args = ["contact", "cone", "--ambient", "2", "--f", "z0^2+z1^3", "--samples", "30", "--seed", "4"];
    let a = milnor(&args);
    let b = milnor(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), 0);
}
