//! Named scenarios in TOML: one command line each, with optional expected results.

use std::path::Path;

use approx_algebra::closure::axioms::{Counterexample, Verdict};
use approx_algebra::{Error, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::Report;
use crate::{Cli, ScenarioArgs};

pub const PAPER_EXAMPLES: &str = include_str!("../scenarios/paper-examples.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<String>,
    /// A subcommand such as `spec` or `member`.
    pub operation: String,
    /// Further flags, `key = value`; arrays repeat the flag and `true` sets a switch.
    #[serde(default)]
    pub params: toml::Table,
    /// Keys of the report's `result`, plus `pass` for the verdicts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<toml::Table>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    #[serde(default)]
    pub scenario: Vec<Scenario>,
}

impl Suite {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("suite serializes")
    }
}

/// A scenario that parsed, or the error for an entry that did not.
pub type Entry = std::result::Result<Scenario, (String, String)>;

/// Parses a suite, keeping malformed entries as errors so the rest still run.
pub fn parse_suite(text: &str) -> Result<Vec<Entry>> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::parse(e.span().map_or(0, |s| s.start), e.message()))?;
    let list = match table.get("scenario") {
        None => return Ok(Vec::new()),
        Some(toml::Value::Array(a)) => a.clone(),
        Some(_) => return Err(Error::parse(0, "`scenario` must be an array of tables")),
    };
    Ok(list
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let name = v
                .get("name")
                .and_then(|n| n.as_str())
                .map_or_else(|| format!("#{}", i + 1), str::to_string);
            Scenario::deserialize(v).map_err(|e| (name, e.message().to_string()))
        })
        .collect())
}

impl Scenario {
    pub fn argv(&self) -> Result<Vec<String>> {
        let mut argv = vec!["apxalg".to_string(), self.operation.clone()];
        if let Some(r) = &self.ring {
            argv.extend(["--ring".into(), r.clone()]);
        }
        if let Some(c) = &self.closure {
            argv.extend(["--closure".into(), c.clone()]);
        }
        for (k, v) in &self.params {
            let flag = format!("--{k}");
            match v {
                toml::Value::Boolean(true) => argv.push(flag),
                toml::Value::Boolean(false) => {}
                toml::Value::Array(items) => {
                    for it in items {
                        argv.extend([flag.clone(), scalar(k, it)?]);
                    }
                }
                other => argv.extend([flag, scalar(k, other)?]),
            }
        }
        Ok(argv)
    }

    pub fn execute(&self) -> Result<Report> {
        let cli =
            Cli::try_parse_from(self.argv()?).map_err(|e| Error::precondition(e.to_string()))?;
        crate::execute(&cli)
    }
}

fn scalar(key: &str, v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => Err(Error::precondition(format!(
            "param {key}: unsupported value {v}"
        ))),
    }
}

/// Differences between expectations and a report, one line each.
pub fn diff(expect: &toml::Table, rep: &Report) -> Vec<String> {
    let mut out = Vec::new();
    for (k, want) in expect {
        let want = serde_json::to_value(want).unwrap_or(Value::Null);
        let got = if k == "pass" {
            Value::Bool(rep.all_pass())
        } else {
            rep.result.get(k).cloned().unwrap_or(Value::Null)
        };
        if got != want {
            out.push(format!("{k}: expected {want}, got {got}"));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<String>,
}

fn outcome(entry: &Entry) -> Outcome {
    match entry {
        Err((name, msg)) => Outcome {
            name: name.clone(),
            pass: false,
            diff: vec![format!("parse error: {msg}")],
        },
        Ok(s) => match s.execute() {
            Err(e) => Outcome {
                name: s.name.clone(),
                pass: false,
                diff: vec![format!("error: {e}")],
            },
            Ok(rep) => {
                let d = match &s.expect {
                    Some(x) => diff(x, &rep),
                    None if rep.all_pass() => Vec::new(),
                    None => vec!["a verdict failed".into()],
                };
                Outcome {
                    name: s.name.clone(),
                    pass: d.is_empty(),
                    diff: d,
                }
            }
        },
    }
}

fn entry_name(e: &Entry) -> &str {
    match e {
        Ok(s) => &s.name,
        Err((n, _)) => n,
    }
}

/// Runs every entry, ordered by name.
pub fn run_suite(mut entries: Vec<Entry>, only: Option<&str>) -> Report {
    entries.retain(|e| only.is_none_or(|f| entry_name(e).contains(f)));
    entries.sort_by(|a, b| entry_name(a).cmp(entry_name(b)));
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| s.spawn(move || outcome(e)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread"))
            .collect()
    });
    let mut rep = Report::new("scenario");
    for o in &outcomes {
        rep.line(format!(
            "{}  {}",
            if o.pass { "ok  " } else { "FAIL" },
            o.name
        ));
        for d in &o.diff {
            rep.line(format!("      {d}"));
        }
        let ce = (!o.pass).then(|| Counterexample::note(o.name.clone(), o.diff.join("; ")));
        rep.push(Verdict::from_check(o.name.clone(), 1, "scenario", ce));
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    rep.line(format!("{passed}/{} scenarios passed", outcomes.len()));
    rep.set("count", outcomes.len());
    rep.set("passed", passed);
    rep.set("scenarios", &outcomes);
    rep
}

pub fn bundled(name: &str) -> Result<&'static str> {
    match name {
        "paper-examples" => Ok(PAPER_EXAMPLES),
        other => Err(Error::precondition(format!(
            "unknown suite {other:?}; available: paper-examples"
        ))),
    }
}

pub fn load(path: &Path) -> Result<Vec<Entry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::precondition(format!("{}: {e}", path.display())))?;
    parse_suite(&text)
}

pub(crate) fn run_command(_cli: &Cli, args: &ScenarioArgs) -> Result<Report> {
    let entries = match (&args.path, &args.suite) {
        (Some(p), None) => load(p)?,
        (None, Some(s)) => parse_suite(bundled(s)?)?,
        (None, None) => parse_suite(PAPER_EXAMPLES)?,
        (Some(_), Some(_)) => return Err(Error::precondition("give a path or --suite, not both")),
    };
    Ok(run_suite(entries, args.only.as_deref()))
}
