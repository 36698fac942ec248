use apxalg::scenario::{parse_suite, run_suite, Scenario, Suite, PAPER_EXAMPLES};
use apxalg::{run, Output};
use serde_json::Value;

fn apx(args: &[&str]) -> Output {
    run(std::iter::once("apxalg").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = apx(&a);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn spec_examples() {
    let (code, v) = json(&["spec", "--ring", "Z", "--closure", "shift:J=30"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["result"]["primes"],
        serde_json::json!(["(2)", "(3)", "(5)"])
    );
    let (_, v) = json(&[
        "vset",
        "--ring",
        "Z",
        "--closure",
        "shift:J=30",
        "--ideal",
        "12",
    ]);
    assert_eq!(v["result"]["primes"], serde_json::json!(["(2)", "(3)"]));
    let (_, v) = json(&[
        "dset",
        "--ring",
        "Z",
        "--closure",
        "shift:J=30",
        "--ideal",
        "12",
    ]);
    assert_eq!(v["result"]["primes"], serde_json::json!(["(5)"]));
    let (code, v) = json(&[
        "axioms",
        "--ring",
        "Zn:12",
        "--closure",
        "shift:J=4",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 6);
}

#[test]
fn report_schema_is_frozen() {
    let (_, v) = json(&["product", "--ring", "Zn:12", "--ideal", "2", "--ideal", "3"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "command",
            "counterexamples",
            "result",
            "tool-version",
            "verdicts"
        ]
    );
    assert_eq!(v["result"]["product"], "(6)");
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &[
            "topology",
            "--ring",
            "Zn:12",
            "--closure",
            "shift:J=4",
            "--format",
            "json",
        ][..],
        &[
            "axioms", "--ring", "Zn:24", "--mode", "sampled", "--seed", "7", "--format", "json",
        ],
        &["scenario", "--suite", "paper-examples"],
    ] {
        let a = apx(args);
        let b = apx(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(apx(&["spec", "--ring", "Zn:12"]).code, 0);
    // C4a read as a Minkowski sum fails for the ideal shift
    let out = apx(&[
        "axioms",
        "--ring",
        "Zn:12",
        "--closure",
        "shift:J=4",
        "--sum",
        "minkowski",
    ]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(out.stdout.contains("FAIL  C4a"), "{}", out.stdout);
    let out = apx(&[
        "modules",
        "--module",
        "Z/8",
        "--check",
        "iso1",
        "--map",
        "table:[0,7,0,3,0,5,0,3]",
    ]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert_eq!(apx(&["frobnicate"]).code, 2);
    assert_eq!(apx(&["spec"]).code, 2);
    assert_eq!(
        apx(&["is-prime", "--ring", "Zn:12", "--ideal", "1"]).code,
        2
    );
    let out = apx(&["spec", "--ring", "Zn:5000"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("resource limit"));
    let member = [
        "member", "--ring", "Zn:5000", "--elem", "7", "--set", "1", "--guard", "8192",
    ];
    assert_eq!(apx(&member).code, 0);
    assert_eq!(apx(&["--help"]).code, 0);
}

#[test]
fn parse_errors_carry_positions() {
    let out = apx(&["spec", "--ring", "Z", "--closure", "shift:J=4,x"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("position 10"), "{}", out.stderr);
    let out = apx(&["spec", "--ring", "prod:[Z,Q]"]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("parse error at position"),
        "{}",
        out.stderr
    );
}

#[test]
fn nullstellensatz_requires_hypotheses() {
    // ESEP fails for a sampling closure that forgets a point.
    let out = apx(&[
        "nullstellensatz",
        "--ring",
        "Fun:p=2,n=1",
        "--closure",
        "sample:[{0}]",
    ]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("hypothesis not established"),
        "{}",
        out.stderr
    );
}

#[test]
fn scenario_round_trip() {
    let entries = parse_suite(PAPER_EXAMPLES).unwrap();
    let suite = Suite {
        scenario: entries.into_iter().map(Result::unwrap).collect(),
    };
    let text = suite.to_toml();
    let again: Suite = toml::from_str(&text).unwrap();
    assert_eq!(suite, again);
    assert!(suite.scenario.iter().any(|s| s.name == "gray-pixel"));
}

#[test]
fn empty_suite_passes() {
    let rep = run_suite(parse_suite("").unwrap(), None);
    assert!(rep.all_pass());
    assert_eq!(rep.result["count"], 0);
}

#[test]
fn wrong_expectation_gives_diff() {
    let dir = std::env::temp_dir().join(format!("apxalg-scn-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.toml");
    std::fs::write(
        &path,
        r#"
[[scenario]]
name = "b-wrong"
ring = "Z"
closure = "shift:J=30"
operation = "spec"
expect = { primes = ["(2)", "(3)", "(7)"] }

[[scenario]]
name = "a-right"
ring = "Z"
closure = "shift:J=30"
operation = "is-prime"
params = { ideal = "3" }
expect = { prime = true }

[[scenario]]
name = "c-broken"
operation = 5
"#,
    )
    .unwrap();
    let out = apx(&["scenario", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.contains("expected [\"(2)\",\"(3)\",\"(7)\"]"),
        "{}",
        out.stdout
    );
    assert!(out.stdout.contains("parse error"), "{}", out.stdout);
    let a = out.stdout.find("a-right").unwrap();
    let b = out.stdout.find("b-wrong").unwrap();
    assert!(a < b);
    assert!(out.stdout.contains("1/3 scenarios passed"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scenario_argv() {
    let s: Scenario = toml::from_str(
        r#"
name = "x"
operation = "modules"
params = { module = "Z/12", check = "iso2", sub = ["2", "3"], grid = true }
"#,
    )
    .unwrap();
    assert_eq!(
        s.argv().unwrap(),
        [
            "apxalg", "modules", "--check", "iso2", "--grid", "--module", "Z/12", "--sub", "2",
            "--sub", "3"
        ]
    );
}

#[test]
fn modules_family_file() {
    let dir = std::env::temp_dir().join(format!("apxalg-fam-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fam.toml");
    std::fs::write(
        &path,
        r#"
[[instance]]
module = "Z/12"
closure = "shift:N=4"
case = { theorem = "iso2", n = "2", k = "3" }

[[instance]]
module = "Z/2xZ/4"
closure = "gen"
case = { theorem = "iso1", map = "mul:2" }
"#,
    )
    .unwrap();
    let (code, v) = json(&[
        "modules",
        "--check",
        "family",
        "--file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["instances"], 2);
    std::fs::remove_dir_all(dir).unwrap();
}
