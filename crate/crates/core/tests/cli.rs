use coprime_metric::cli::{self, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let argv = std::iter::once("coprime-metric").chain(args.iter().copied()).map(String::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut out, &mut err, false);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let r = run(&full);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

/// Every number in the document must be a real; integers travel as strings.
fn assert_no_json_integers(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_f64(), "integer {n} emitted as a JSON number"),
        Value::Array(items) => items.iter().for_each(assert_no_json_integers),
        Value::Object(map) => map.values().for_each(assert_no_json_integers),
        _ => {}
    }
}

#[test]
fn fib_negative_range() {
    let v = json(&["fib", "--k", "1", "--from", "-5", "--to", "5"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let at = |n: &str| rows.iter().find(|r| r["n"] == n).unwrap()["value"].clone();
    assert_eq!(at("-4"), "-3");
    assert_eq!(at("-5"), "5");
    assert_eq!(at("5"), "5");
    assert_no_json_integers(&v);
}

#[test]
fn fib_pell_csv() {
    let r = run(&["fib", "--k", "2", "--from", "0", "--to", "6", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout, "n,value\n0,0\n1,1\n2,2\n3,5\n4,12\n5,29\n6,70\n");
}

#[test]
fn fib_large_index_is_exact() {
    let v = json(&["fib", "--from", "100", "--to", "100"]);
    assert_eq!(v["rows"][0]["value"], "354224848179261915075");
}

#[test]
fn fib_usage_errors() {
    assert_eq!(run(&["fib", "--k", "0", "--from", "0", "--to", "3"]).code, EXIT_USAGE);
    assert_eq!(run(&["fib", "--from", "5", "--to", "1"]).code, EXIT_USAGE);
    assert_eq!(run(&["fib", "--from", "x", "--to", "1"]).code, EXIT_USAGE);
}

#[test]
fn q_examples() {
    let v = json(&["q", "--tuple", "5,8", "--target", "1"]);
    assert_eq!(v["value"], "5");
    assert_eq!(v["witness"], serde_json::json!(["-3", "2"]));
    assert_no_json_integers(&v);

    assert_eq!(json(&["q", "--tuple", "3,5", "--target", "1"])["value"], "3");
    assert_eq!(json(&["q", "--tuple", "1,2,3", "--target", "7"])["value"], "3");
    // Unsorted input is normalised.
    assert_eq!(json(&["q", "--tuple", "8,5", "--target", "1"])["value"], "5");
}

#[test]
fn q_rejects_bad_input() {
    let r = run(&["q", "--tuple", "4,6", "--target", "2"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("not coprime"), "{}", r.stderr);
    assert_eq!(run(&["q", "--tuple", "5,8", "--target", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["q", "--tuple", "5,-8", "--target", "1"]).code, EXIT_USAGE);
    assert_eq!(run(&["q", "--tuple", "", "--target", "1"]).code, EXIT_USAGE);
}

#[test]
fn dist_examples() {
    let v = json(&["dist", "--a", "2,3", "--b", "5,8"]);
    assert_eq!(v["distance"]["max_q"], "3");
    let d = v["distance"]["log_value"].as_f64().unwrap();
    assert!((d - 3f64.ln() / ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-10);

    let v = json(&["dist", "--a", "2,3", "--b", "2,3"]);
    assert_eq!(v["distance"]["max_q"], "1");
    assert_eq!(v["distance"]["log_value"].as_f64(), Some(0.0));

    let v = json(&["dist", "--a", "2,3", "--b", "5,8", "--base", "real:3"]);
    assert!((v["distance"]["log_value"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let v = json(&["dist", "--a", "2,3", "--b", "5,8", "--base", "metallic:2"]);
    assert_eq!(v["config"]["base"], "metallic:2");

    assert_eq!(run(&["dist", "--a", "2,3", "--b", "5,8", "--base", "real:1"]).code, EXIT_USAGE);
    assert_eq!(run(&["dist", "--a", "2,3", "--b", "5,8", "--base", "silver"]).code, EXIT_USAGE);
}

#[test]
fn verify_qi_passes_and_reports() {
    let r = run(&["verify-qi", "--k", "1", "--ell", "2", "--max-index", "10", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], cli::QI_CSV_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 55);
    assert!(r.stderr.contains("all_pass=true"));

    let v = json(&["verify-qi", "--k", "3", "--ell", "2", "--max-index", "6"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["config"]["base"], "metallic:3");
    assert_eq!(v["rows"].as_array().unwrap().len(), 21);
    assert_no_json_integers(&v);
}

#[test]
fn verify_qi_contract() {
    let r = run(&["verify-qi", "--k", "2", "--ell", "3", "--max-index", "5"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("experimental"));
    let r = run(&["verify-qi", "--k", "2", "--ell", "3", "--max-index", "5", "--experimental"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(run(&["verify-qi", "--ell", "1", "--max-index", "5"]).code, EXIT_USAGE);
    assert_eq!(run(&["verify-qi", "--max-index", "0"]).code, EXIT_USAGE);
}

#[test]
fn verify_qi_output_independent_of_threads() {
    let base = ["verify-qi", "--k", "2", "--max-index", "12", "--format", "json"];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let four = run(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one.code, EXIT_OK);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn axioms_examples() {
    let v = json(&["axioms", "--samples", "100", "--max-value", "40", "--ell", "2", "--seed", "42"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["tallies"]["submultiplicativity"]["checked"], "600");
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    assert_no_json_integers(&v);

    let v = json(&["axioms", "--samples", "0", "--max-value", "10", "--seed", "1"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["tallies"]["triangle"]["checked"], "0");

    assert_eq!(run(&["axioms", "--samples", "5", "--max-value", "0"]).code, EXIT_USAGE);
}

#[test]
fn axioms_entropy_seed_is_reported() {
    let r = run(&["axioms", "--samples", "3", "--max-value", "20"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stderr.contains("seed"), "{}", r.stderr);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["axioms", "--samples", "50", "--max-value", "30", "--ell", "3", "--seed", "9", "--format", "json"][..],
        &["verify-qi", "--ell", "3", "--max-index", "8", "--format", "csv"][..],
        &["dist", "--a", "3,7,11", "--b", "13,21", "--format", "table"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn writes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pell.csv");
    let r = run(&["fib", "--k", "2", "--from", "0", "--to", "3", "--format", "csv", "-o", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,value\n0,0\n1,1\n2,2\n3,5\n");

    let bad = dir.path().join("missing").join("x.csv");
    let r = run(&["fib", "--from", "0", "--to", "3", "-o", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(run(&["--help"]).code, EXIT_OK);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&[]).code, EXIT_USAGE);
}
