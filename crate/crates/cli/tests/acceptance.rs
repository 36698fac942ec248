//! One test per acceptance criterion; each prints a PASS/FAIL line.

use std::time::{Duration, Instant};

use approx_algebra::ideal_theory::{int_prime_closed_form, int_prime_residue_search};
use apxalg::scenario::{parse_suite, run_suite, PAPER_EXAMPLES};
use serde_json::{json, Value};

type Check = Result<String, String>;

fn cli(args: &[&str]) -> Result<(i32, Value), String> {
    let out = apxalg::run(
        ["apxalg"]
            .iter()
            .chain(args)
            .chain(["--format", "json"].iter())
            .copied(),
    );
    if !out.stderr.is_empty() {
        return Err(format!("{args:?}: {}", out.stderr.trim()));
    }
    let v = serde_json::from_str(&out.stdout).map_err(|e| format!("{args:?}: {e}"))?;
    Ok((out.code, v))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v["verdicts"]
        .as_array()?
        .iter()
        .find(|x| x["axiom"] == name)
}

fn passes(v: &Value, name: &str) -> bool {
    verdict(v, name).is_some_and(|x| x["verdict"] == true)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn principal(ds: &[u64]) -> Value {
    json!(ds.iter().map(|d| format!("({d})")).collect::<Vec<_>>())
}

/// `(d)` under `cl(A) = ⟨A⟩ + mℤ`: some `x, y ∉ (d)` have `xy ∈ (gcd(d, m))`.
/// Residues mod `d` decide both conditions.
fn brute_prime(d: u64, m: u64) -> bool {
    let g = gcd(d, m);
    if g == 1 {
        return false;
    }
    !(1..d).any(|x| (1..d).any(|y| (x * y) % g == 0))
}

fn check_1() -> Check {
    let start = Instant::now();
    for m in 2..=120u64 {
        let closure = format!("shift:J={m}");
        let (code, v) = cli(&["spec", "--ring", "Z", "--closure", &closure])?;
        let want = principal(&prime_factors(m));
        ensure(code == 0 && v["result"]["primes"] == want, || {
            format!("m={m}: got {} want {want}", v["result"]["primes"])
        })?;
        let cross = verdict(&v, "closed-form-agrees")
            .ok_or(format!("m={m}: no enumeration cross-check"))?;
        let bound = 1000.max(m);
        ensure(
            cross["verdict"] == true && cross["checked"] == bound + 1,
            || format!("m={m}: enumeration {cross}"),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!(
        "m = 2..120 exact, enumeration to max(1000,m) agrees, {:.2}s",
        t.as_secs_f64()
    ))
}

fn check_2() -> Check {
    let primes: Vec<u64> = (2..=100).filter(|&p| prime_factors(p) == [p]).collect();
    let mut n = 0;
    for m in 2..=60u64 {
        for &p in &primes {
            let want = m % p == 0;
            let closed = int_prime_closed_form(p, m);
            let search = int_prime_residue_search(p, gcd(p, m)).is_none();
            let brute = brute_prime(p, m);
            let (_, v) = cli(&[
                "is-prime",
                "--ring",
                "Z",
                "--closure",
                &format!("shift:J={m}"),
                "--ideal",
                &p.to_string(),
            ])?;
            let tool = v["result"]["prime"] == true;
            ensure(
                [closed, search, brute, tool].iter().all(|&b| b == want),
                || {
                    format!("p={p} m={m}: closed {closed} search {search} brute {brute} cli {tool}, want {want}")
                },
            )?;
            n += 1;
        }
    }
    Ok(format!(
        "{n} (p, m) pairs agree across closed form, search and brute force"
    ))
}

fn check_3() -> Check {
    let start = Instant::now();
    let cases: &[(&str, &[&str])] = &[
        (
            "Zn:12",
            &[
                "shift:J=4",
                "shift:J=6",
                "shift:J=3",
                "setshift:J=4",
                "setshift:J=6",
                "setshift:J=3",
            ],
        ),
        (
            "prod:[Zn:2,Zn:2]",
            &[
                "shift:J=(1,0)",
                "shift:J=(1,1)",
                "setshift:J=(1,0)",
                "setshift:J=(0,1)",
            ],
        ),
    ];
    let names = ["C1", "C2", "C3", "C4a", "C4b", "absorption"];
    let mut n = 0;
    for (ring, closures) in cases {
        for c in *closures {
            let (code, v) = cli(&[
                "axioms",
                "--ring",
                ring,
                "--closure",
                c,
                "--mode",
                "exhaustive",
            ])?;
            for name in names {
                let ok = verdict(&v, name).is_some_and(|x| {
                    x["verdict"] == true
                        && x["domain"]
                            .as_str()
                            .unwrap_or("")
                            .starts_with("all subsets")
                });
                ensure(ok, || format!("{ring} {c}: {name} {:?}", verdict(&v, name)))?;
            }
            ensure(code == 0 && v["counterexamples"] == json!([]), || {
                format!("{ring} {c}: violations")
            })?;
            n += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "{n} closures, zero violations, {:.2}s",
        t.as_secs_f64()
    ))
}

fn check_4() -> Check {
    let cases: &[(&str, &str, Option<bool>)] = &[
        ("Zn:12", "shift:J=4", None),
        ("Zn:12", "shift:J=6", None),
        ("Zn:12", "setshift:J=4", None),
        ("Zn:12", "setshift:J=6", None),
        ("Z", "shift:J=12", Some(true)),
        ("Z", "shift:J=30", Some(true)),
        ("Z", "gen", Some(false)),
    ];
    for &(ring, c, t1) in cases {
        let (_, v) = cli(&["topology", "--ring", ring, "--closure", c])?;
        for law in ["intersection-law", "union-law", "T0", "T1-criterion"] {
            ensure(passes(&v, law), || {
                format!("{ring} {c}: {law} {:?}", verdict(&v, law))
            })?;
        }
        ensure(v["result"]["t0"] == true, || {
            format!("{ring} {c}: T0 false")
        })?;
        if let Some(t1) = t1 {
            ensure(v["result"]["t1"] == t1, || {
                format!("{ring} {c}: T1 {} want {t1}", v["result"]["t1"])
            })?;
        }
    }
    Ok("laws hold on all pairs; T0 everywhere; T1 on modular Z, not on classical Z".into())
}

fn check_5() -> Check {
    let (code, v) = cli(&[
        "localize",
        "--ring",
        "Z",
        "--closure",
        "shift:J=30",
        "--mult-set",
        "2",
    ])?;
    // primes dividing 30 that miss S = {2^k}
    let want: Vec<u64> = prime_factors(30).into_iter().filter(|&p| p != 2).collect();
    let bases: Vec<Value> = v["result"]["bijection"]
        .as_array()
        .ok_or("no bijection")?
        .iter()
        .map(|p| p["base"].clone())
        .collect();
    ensure(json!(bases) == principal(&want), || {
        format!("bijection bases {bases:?}")
    })?;
    for name in [
        "extension",
        "contraction",
        "order-bijection",
        "transfer-C1",
        "transfer-C2",
        "transfer-C3",
        "transfer-C4a",
        "transfer-C4b",
        "representative-independence",
    ] {
        ensure(passes(&v, name), || {
            format!("{name}: {:?}", verdict(&v, name))
        })?;
    }
    ensure(code == 0, || "a localization verdict failed".into())?;
    Ok(
        "ext-contr bijection onto {(3),(5)}, transferred axioms, representative independence"
            .into(),
    )
}

fn check_6() -> Check {
    for n in 2..=60u64 {
        let (_, v) = cli(&["radical", "--ring", &format!("Zn:{n}")])?;
        let r: u64 = prime_factors(n).iter().product();
        let want = if r == n {
            "(0)".to_string()
        } else {
            format!("({r})")
        };
        ensure(
            v["result"]["radical"] == want.as_str() && passes(&v, "radical-equals-nilradical"),
            || format!("Z/{n}: rad {} want {want}", v["result"]["radical"]),
        )?;
    }
    for m in 2..=120u64 {
        let (_, v) = cli(&[
            "radical",
            "--ring",
            "Z",
            "--closure",
            &format!("shift:J={m}"),
        ])?;
        let want = format!("({})", prime_factors(m).iter().product::<u64>());
        ensure(
            v["result"]["radical"] == want.as_str() && passes(&v, "radical-equals-nilradical"),
            || format!("Z mod {m}: rad {} want {want}", v["result"]["radical"]),
        )?;
    }
    let (_, v) = cli(&[
        "localize",
        "--ring",
        "Z",
        "--closure",
        "shift:J=30",
        "--mult-set",
        "2",
    ])?;
    ensure(passes(&v, "radical-equals-nilradical"), || {
        "localized instance".into()
    })?;
    Ok("Z/n for n <= 60, modular Z for m <= 120, localized instance".into())
}

fn check_7() -> Check {
    let (code, v) = cli(&["modules", "--check", "family"])?;
    let rows = v["result"]["results"].as_array().ok_or("no results")?;
    ensure(rows.len() >= 20, || format!("{} instances", rows.len()))?;
    for r in rows {
        ensure(r["left-classes"] == r["right-classes"], || {
            format!("class counts differ: {r}")
        })?;
    }
    let label = |r: &Value| r["instance"].as_str().unwrap_or("").to_string();
    for module in ["Z/8 ", "Z/12 ", "Z/24 ", "Z/2xZ/4 "] {
        for closure in ["gen", "shift:", "setshift:"] {
            ensure(
                rows.iter().any(|r| {
                    label(r).starts_with(module) && label(r).contains(&format!(" {closure}"))
                }),
                || format!("no {module}{closure} instance"),
            )?;
        }
    }
    for th in ["iso1", "iso2", "iso3"] {
        ensure(rows.iter().any(|r| label(r).contains(th)), || {
            format!("no {th} instance")
        })?;
    }
    ensure(code == 0, || "an isomorphism verdict failed".into())?;
    Ok(format!(
        "{} instances, all bijective with equal class counts",
        rows.len()
    ))
}

fn check_8() -> Check {
    let mut counts = Vec::new();
    for ring in ["Fun:p=2,n=1", "Fun:p=2,n=2"] {
        let (code, v) = cli(&["nullstellensatz", "--ring", ring])?;
        let names: Vec<&str> = v["verdicts"]
            .as_array()
            .ok_or("no verdicts")?
            .iter()
            .filter_map(|x| x["axiom"].as_str())
            .collect();
        ensure(names == ["ESEP", "PP", "rad-equals-vanishing"], || {
            format!("{ring}: verdict order {names:?}")
        })?;
        ensure(code == 0, || format!("{ring}: failed"))?;
        // Boolean function rings: every ideal is radical and equals I(V(I)).
        let rows = v["result"]["rows"].as_array().ok_or("no rows")?;
        for r in rows {
            ensure(
                r["radical"] == r["ideal"] && r["vanishing"] == r["ideal"],
                || format!("{ring}: {r}"),
            )?;
        }
        counts.push(rows.len());
    }
    ensure(counts[0] == 4 && counts[1] >= 10, || {
        format!("ideal counts {counts:?}")
    })?;
    let (_, v) = cli(&["nullstellensatz", "--ring", "Fun:p=2,n=1", "--grid"])?;
    let g = verdict(&v, "balanced-rule").ok_or("no grid")?;
    ensure(g["verdict"] == true && g["checked"] == 100, || {
        format!("grid {g}")
    })?;
    Ok(format!(
        "{} + {} ideals, ESEP and PP first; tolerance grid 100/100",
        counts[0], counts[1]
    ))
}

fn check_9() -> Check {
    let rep = run_suite(
        parse_suite(PAPER_EXAMPLES).map_err(|e| e.to_string())?,
        None,
    );
    for name in ["gray-pixel", "noisy-codeword"] {
        let v = rep
            .verdicts
            .iter()
            .find(|v| v.axiom == name)
            .ok_or(format!("no {name}"))?;
        ensure(v.verdict, || format!("{name} failed"))?;
    }
    let (_, v) = cli(&[
        "member",
        "--ring",
        "prod:[Z,Z,Z]",
        "--closure",
        "setshift:J=(5,5,5)",
        "--elem",
        "(130,135,125)",
        "--set",
        "(130,130,130)",
    ])?;
    ensure(v["result"]["member"] == true, || "gray pixel".into())?;
    // c = x^4+x^3+1 with the x coefficient flipped differs by x, a multiple of x
    let (_, v) = cli(&[
        "member",
        "--ring",
        "GF:2/x^8",
        "--closure",
        "setshift:J=x",
        "--elem",
        "x^4+x^3+x+1",
        "--set",
        "x^4+x^3+1",
    ])?;
    ensure(v["result"]["member"] == true, || "noisy codeword".into())?;
    ensure(rep.all_pass(), || "bundled suite has failures".into())?;
    Ok(format!("{} bundled scenarios pass", rep.verdicts.len()))
}

fn report(n: u32, name: &str, result: Check) {
    match result {
        Ok(msg) => println!("criterion {n}: PASS  {name}: {msg}"),
        Err(msg) => {
            println!("criterion {n}: FAIL  {name}: {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

macro_rules! criteria {
    ($($test:ident => $n:literal, $name:literal, $check:ident;)*) => {
        $(
            #[test]
            fn $test() {
                report($n, $name, $check());
            }
        )*
    };
}

criteria! {
    criterion_1_spectrum_closed_form => 1, "spectrum closed form on Z", check_1;
    criterion_2_approximate_primes => 2, "approximate primes of Z", check_2;
    criterion_3_axiom_suites => 3, "axiom suites", check_3;
    criterion_4_topology_laws => 4, "topology laws", check_4;
    criterion_5_localization => 5, "localization", check_5;
    criterion_6_radicals => 6, "radicals", check_6;
    criterion_7_module_isomorphisms => 7, "module isomorphism theorems", check_7;
    criterion_8_nullstellensatz => 8, "nullstellensatz schema", check_8;
    criterion_9_worked_examples => 9, "worked examples as scenarios", check_9;
}
