use std::sync::Arc;

use approx_algebra::closure::axioms::{
    check_axioms_with, AxiomOptions, AxiomReport, Mode, SumRule,
};
use approx_algebra::closure::{ClosureRef, ClosureSpec};
use approx_algebra::ideal::{render_subset, IdealRep};
use approx_algebra::ideal_theory::{approx_product, is_approx_prime, quotient_ring};
use approx_algebra::localization::{
    check_ext_contr_bijection, check_iota_functorial, check_rad_eq_nil,
    check_representative_independence, check_transfer_axioms, localize, radical,
};
use approx_algebra::modules::{
    check_cm_axioms, is_approx_submodule, iso1, iso2, iso3, iso_family, module_quotient, ApproxHom,
    IsoInstance, IsoReport, ModClosure, Module, Scalars,
};
use approx_algebra::nullstellensatz::{
    all_ideals, check_ans, check_galois, search_esep_without_pp, tolerance_grid,
};
use approx_algebra::ring::grammar::{parse_elem_list, parse_ring};
use approx_algebra::spectrum::{spectrum, spectrum_bounded, topology_check, Spectrum};
use approx_algebra::{Error, Result, Ring, Subset};
use serde::Deserialize;

use crate::report::Report;
use crate::{scenario, Cli, Cmd, ModArgs, ModCheck, ModeArg, NullArgs, RingArgs, SumArg};

pub fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::Axioms(a) => axioms(cli, a),
        Cmd::Spec(a) => spec(cli, a),
        Cmd::Vset(a) => vset(cli, &a.rc, &a.ideal, false),
        Cmd::Dset(a) => vset(cli, &a.rc, &a.ideal, true),
        Cmd::IsPrime(a) => is_prime(cli, &a.rc, &a.ideal),
        Cmd::Product(a) => product(cli, &a.rc, &a.ideal),
        Cmd::Quotient(a) => quotient(cli, &a.rc, &a.ideal),
        Cmd::Topology(a) => topology(cli, a),
        Cmd::Localize(a) => localization(cli, &a.rc, &a.mult_set),
        Cmd::Radical(a) => rad(cli, &a.rc, a.ideal.as_deref()),
        Cmd::Modules(a) => modules(cli, a),
        Cmd::Nullstellensatz(a) => nullstellensatz(cli, a),
        Cmd::Scenario(a) => scenario::run_command(cli, a),
        Cmd::Member(a) => member(cli, &a.rc, &a.elem, &a.set),
    }
}

fn mode(cli: &Cli) -> Mode {
    match cli.mode {
        ModeArg::Auto => Mode::Auto,
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Subgroups => Mode::Subgroups,
        ModeArg::Sampled => Mode::Sampled {
            seed: cli.seed,
            count: cli.samples,
        },
    }
}

fn sum_rule(cli: &Cli) -> SumRule {
    match cli.sum {
        SumArg::Span => SumRule::Span,
        SumArg::Minkowski => SumRule::Minkowski,
    }
}

fn ring(cli: &Cli, src: &str) -> Result<Ring> {
    let r = parse_ring(src)?;
    if let Some(n) = r.cardinality() {
        if n > cli.guard as u64 {
            return Err(Error::resource("ring size", cli.guard as u128, n));
        }
    }
    Ok(r)
}

fn load(cli: &Cli, rc: &RingArgs) -> Result<(Ring, ClosureRef)> {
    let r = ring(cli, &rc.ring)?;
    let cl = ClosureSpec::parse(&r, &rc.closure)?;
    Ok((r, Arc::new(cl)))
}

fn ideal(r: &Ring, src: &str) -> Result<Subset> {
    let body = src.trim();
    let body = body
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(body);
    let gens = parse_elem_list(r, body)?;
    Ok(IdealRep::generated(r, &gens)?.canonical().clone())
}

fn header(rep: &mut Report, r: &Ring, cl: &ClosureRef) {
    rep.set("ring", r.to_string());
    rep.set("closure", cl.describe());
    rep.line(format!("ring     {r}"));
    rep.line(format!("closure  {}", cl.describe()));
}

fn axiom_report(rep: &mut Report, ar: AxiomReport) {
    rep.line(format!("mode     {}", ar.mode));
    rep.set("mode", &ar.mode);
    if let Some(s) = ar.seed {
        rep.set("seed", s);
    }
    rep.extend(ar.verdicts);
}

fn axioms(cli: &Cli, rc: &RingArgs) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let mut rep = Report::new("axioms");
    header(&mut rep, &r, &cl);
    let mut opts = AxiomOptions {
        mode: mode(cli),
        sum: sum_rule(cli),
        ..AxiomOptions::default()
    };
    if let Some(b) = cli.bound {
        opts.int_bound = b;
    }
    axiom_report(&mut rep, check_axioms_with(cl.as_ref(), &opts)?);
    Ok(rep)
}

fn load_spec(cli: &Cli, cl: ClosureRef) -> Result<Spectrum> {
    match cli.bound {
        Some(b) => spectrum_bounded(cl, b),
        None => spectrum(cl),
    }
}

fn spec(cli: &Cli, rc: &RingArgs) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let sp = load_spec(cli, cl.clone())?;
    let mut rep = Report::new("spec");
    header(&mut rep, &r, &cl);
    let primes = sp.render_primes(&sp.all());
    rep.line(format!(
        "method   {}",
        serde_json::to_value(sp.method)
            .unwrap_or_default()
            .to_string()
            .trim_matches('"')
    ));
    rep.line(format!("primes   {}", primes.join(" ")));
    rep.set("method", sp.method);
    rep.set("primes", &primes);
    if let Some(v) = &sp.cross_check {
        rep.push(v.clone());
    }
    Ok(rep)
}

fn vset(cli: &Cli, rc: &RingArgs, src: &str, complement: bool) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let i = ideal(&r, src)?;
    let sp = load_spec(cli, cl.clone())?;
    let v = sp.v_set(&i)?;
    let idx: Vec<usize> = if complement {
        sp.all().into_iter().filter(|k| !v.contains(k)).collect()
    } else {
        v
    };
    let name = if complement { "dset" } else { "vset" };
    let mut rep = Report::new(name);
    header(&mut rep, &r, &cl);
    let shown = sp.render_primes(&idx);
    rep.line(format!("ideal    {}", render_subset(&r, &i)));
    rep.line(format!(
        "{}({})  {{{}}}",
        if complement { "D" } else { "V" },
        render_subset(&r, &i),
        shown.join(", ")
    ));
    rep.set("ideal", render_subset(&r, &i));
    rep.set("primes", &shown);
    Ok(rep)
}

fn is_prime(cli: &Cli, rc: &RingArgs, src: &str) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let p = ideal(&r, src)?;
    let v = is_approx_prime(cl.as_ref(), &p)?;
    let mut rep = Report::new("is-prime");
    header(&mut rep, &r, &cl);
    rep.line(format!("ideal    {}", render_subset(&r, &p)));
    rep.line(format!("prime    {}", v.verdict));
    if let Some(ce) = &v.counterexample {
        rep.line(format!("         {}", ce.detail));
    }
    rep.set("ideal", render_subset(&r, &p));
    rep.set("prime", v.verdict);
    rep.set("check", &v);
    Ok(rep)
}

fn product(cli: &Cli, rc: &RingArgs, srcs: &[String]) -> Result<Report> {
    if srcs.len() != 2 {
        return Err(Error::precondition("product needs --ideal twice"));
    }
    let (r, cl) = load(cli, rc)?;
    let a = ideal(&r, &srcs[0])?;
    let b = ideal(&r, &srcs[1])?;
    let p = approx_product(cl.as_ref(), &a, &b)?;
    let mut rep = Report::new("product");
    header(&mut rep, &r, &cl);
    let (sa, sb, sp) = (
        render_subset(&r, &a),
        render_subset(&r, &b),
        render_subset(&r, &p),
    );
    rep.line(format!("{sa} * {sb} = {sp}"));
    rep.set("left", sa);
    rep.set("right", sb);
    rep.set("product", sp);
    Ok(rep)
}

fn quotient(cli: &Cli, rc: &RingArgs, src: &str) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let i = ideal(&r, src)?;
    let q = quotient_ring(cl.as_ref(), &i)?;
    let mut rep = Report::new("quotient");
    header(&mut rep, &r, &cl);
    let classes = q.render_classes();
    rep.line(format!("ideal    {}", render_subset(&r, &i)));
    match q.class_count() {
        Some(n) => rep.line(format!("classes  {n}")),
        None => rep.line("classes  infinite"),
    }
    for c in &classes {
        rep.line(format!("  {c}"));
    }
    rep.set("ideal", render_subset(&r, &i));
    rep.set("class-count", q.class_count());
    rep.set("classes", &classes);
    rep.extend(q.checks);
    Ok(rep)
}

fn topology(cli: &Cli, rc: &RingArgs) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let sp = load_spec(cli, cl.clone())?;
    let t = topology_check(&sp)?;
    let mut rep = Report::new("topology");
    header(&mut rep, &r, &cl);
    let primes = sp.render_primes(&sp.all());
    rep.line(format!("primes   {}", primes.join(" ")));
    rep.line(format!("T0 {}  T1 {}  discrete {}", t.t0, t.t1, t.discrete));
    rep.set("primes", &primes);
    rep.set("t0", t.t0);
    rep.set("t1", t.t1);
    rep.set("discrete", t.discrete);
    rep.set("primes-closed", t.primes_closed);
    rep.extend(t.verdicts);
    Ok(rep)
}

fn localization(cli: &Cli, rc: &RingArgs, src: &str) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let gens = parse_elem_list(&r, src)?;
    let loc = localize(cl.clone(), &gens)?;
    let mut rep = Report::new("localize");
    header(&mut rep, &r, &cl);
    rep.line(format!("S        {}", loc.mult_set().render()));
    rep.line(format!("classes  {}", loc.class_count()));
    rep.set("mult-set", loc.mult_set().render());
    rep.set("class-count", loc.class_count());
    rep.extend(loc.checks.clone());
    let ax = check_transfer_axioms(&loc, mode(cli))?;
    rep.extend(ax.verdicts.into_iter().map(|mut v| {
        v.axiom = format!("transfer-{}", v.axiom);
        v
    }));
    rep.push(check_representative_independence(&loc)?);
    rep.extend(check_iota_functorial(&loc)?);
    let b = check_ext_contr_bijection(&loc)?;
    for p in &b.pairs {
        rep.line(format!("  {} <-> {}", p.base, p.local));
    }
    if !b.meeting_s.is_empty() {
        rep.line(format!("meeting S  {}", b.meeting_s.join(" ")));
    }
    rep.set("bijection", &b.pairs);
    rep.set("meeting-s", &b.meeting_s);
    rep.extend(b.verdicts);
    let nil = check_rad_eq_nil(loc.closure_ref())?;
    rep.push(nil);
    Ok(rep)
}

fn rad(cli: &Cli, rc: &RingArgs, src: Option<&str>) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let i = match src {
        Some(s) => ideal(&r, s)?,
        None => Subset::zero(&r),
    };
    let (out, k) = radical(cl.as_ref(), &i)?;
    let mut rep = Report::new("radical");
    header(&mut rep, &r, &cl);
    let (si, so) = (render_subset(&r, &i), render_subset(&r, &out));
    rep.line(format!("rad({si}) = {so}"));
    rep.set("ideal", si);
    rep.set("radical", so);
    rep.set("max-exponent", k);
    let zero = match &i {
        Subset::Finite(s) => s.count() == 1,
        _ => approx_algebra::ideal_theory::int_gen(&i) == Some(0),
    };
    if zero {
        rep.push(check_rad_eq_nil(cl)?);
    }
    Ok(rep)
}

fn member(cli: &Cli, rc: &RingArgs, elem: &str, set: &str) -> Result<Report> {
    let (r, cl) = load(cli, rc)?;
    let x = r.parse_elem(elem)?;
    let body = set.trim();
    let body = body
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(body);
    let a = Subset::from_elems(&r, &parse_elem_list(&r, body)?);
    let hit = cl.member(&x, &a)?;
    let mut rep = Report::new("member");
    header(&mut rep, &r, &cl);
    let (sx, sa) = (r.fmt_elem(&x), render_subset(&r, &a));
    rep.line(format!("{sx} in cl({sa}): {hit}"));
    rep.set("elem", sx);
    rep.set("set", sa);
    rep.set("member", hit);
    Ok(rep)
}

#[derive(Deserialize)]
struct IsoFile {
    #[serde(default)]
    instance: Vec<IsoInstance>,
}

fn iso_lines(rep: &mut Report, r: &IsoReport) {
    rep.line(format!(
        "{}: {} ({} classes) ~ {} ({} classes)",
        r.theorem, r.left, r.left_classes, r.right, r.right_classes
    ));
    for (a, b) in &r.map {
        rep.line(format!("  {a} -> {b}"));
    }
    for n in &r.notes {
        rep.line(format!("  {n}"));
    }
}

fn sub(m: &Module, args: &ModArgs, i: usize) -> Result<u64> {
    let src = args
        .sub
        .get(i)
        .ok_or_else(|| Error::precondition(format!("--sub must be given {} time(s)", i + 1)))?;
    Ok(m.span(m.parse_set(src)?))
}

fn modules(cli: &Cli, args: &ModArgs) -> Result<Report> {
    let mut rep = Report::new("modules");
    if args.check == ModCheck::Family {
        let list = match &args.file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::precondition(format!("{}: {e}", p.display())))?;
                toml::from_str::<IsoFile>(&text)
                    .map_err(|e| Error::parse(e.span().map_or(0, |s| s.start), e.message()))?
                    .instance
            }
            None => iso_family(),
        };
        let mut rows = Vec::new();
        for (i, inst) in list.iter().enumerate() {
            let r = inst.run()?;
            let ok = r.all_pass() && r.left_classes == r.right_classes;
            rep.line(format!(
                "{}  #{i:<3} {}  {} = {}",
                if ok { "ok  " } else { "FAIL" },
                inst.label(),
                r.left_classes,
                r.right_classes
            ));
            for v in &r.verdicts {
                let mut v = v.clone();
                v.axiom = format!("#{i} {}", v.axiom);
                rep.push(v);
            }
            rows.push(serde_json::json!({
                "instance": inst.label(),
                "left-classes": r.left_classes,
                "right-classes": r.right_classes,
            }));
        }
        rep.set("instances", list.len());
        rep.set("results", rows);
        return Ok(rep);
    }
    let group = args
        .module
        .as_deref()
        .ok_or_else(|| Error::precondition("--module is required"))?;
    let m = Module::parse(group, Scalars::parse(&args.scalars)?)?;
    let cl = ModClosure::parse(&m, &args.closure)?;
    rep.set("module", group);
    rep.set("closure", cl.describe());
    rep.line(format!("module   {group} over {}", args.scalars));
    rep.line(format!("closure  {}", cl.describe()));
    let map = |cl: &ModClosure| -> Result<ApproxHom> {
        let src = args
            .map
            .as_deref()
            .ok_or_else(|| Error::precondition("--map is required"))?;
        let tgt = match &args.target_closure {
            Some(t) => ModClosure::parse(&m, t)?,
            None => cl.clone(),
        };
        ApproxHom::parse(cl, &tgt, src)
    };
    match args.check {
        ModCheck::Axioms => axiom_report(&mut rep, check_cm_axioms(&cl, mode(cli), sum_rule(cli))?),
        ModCheck::Submodule => {
            let n = sub(&m, args, 0)?;
            rep.line(format!("N        {}", m.render_set(n)));
            rep.set("submodule", m.render_set(n));
            rep.push(is_approx_submodule(&cl, n)?);
        }
        ModCheck::Quotient => {
            let n = sub(&m, args, 0)?;
            let q = module_quotient(&cl, n)?;
            rep.line(format!("{}: {} classes", q.label, q.len()));
            let classes: Vec<String> = (0..q.len()).map(|c| q.render_class(&m, c)).collect();
            for c in &classes {
                rep.line(format!("  {c}"));
            }
            rep.set("class-count", q.len());
            rep.set("classes", classes);
            rep.push(q.well_defined.clone());
        }
        ModCheck::Kernel => {
            let f = map(&cl)?;
            rep.line(format!("ker f    {}", m.render_set(f.kernel())));
            rep.line(format!("im f     {}", m.render_set(f.image_of(m.full()))));
            rep.set("kernel", m.render_set(f.kernel()));
            rep.set("image", m.render_set(f.image_of(m.full())));
            rep.set("additive-mod-zero", f.additive_mod_zero());
            rep.push(f.is_image_morphic());
        }
        ModCheck::Iso1 | ModCheck::Iso2 | ModCheck::Iso3 => {
            let r = match args.check {
                ModCheck::Iso1 => iso1(&map(&cl)?)?,
                ModCheck::Iso2 => iso2(&cl, sub(&m, args, 0)?, sub(&m, args, 1)?)?,
                _ => iso3(&cl, sub(&m, args, 0)?, sub(&m, args, 1)?)?,
            };
            iso_lines(&mut rep, &r);
            rep.set("left-classes", r.left_classes);
            rep.set("right-classes", r.right_classes);
            rep.set("iso", &r);
            rep.extend(r.verdicts);
        }
        ModCheck::Family => unreachable!(),
    }
    Ok(rep)
}

fn nullstellensatz(cli: &Cli, args: &NullArgs) -> Result<Report> {
    let (r, cl) = load(
        cli,
        &RingArgs {
            ring: args.ring.clone(),
            closure: args.closure.clone(),
        },
    )?;
    let mut rep = Report::new("nullstellensatz");
    header(&mut rep, &r, &cl);
    let family = if args.ideal.is_empty() {
        all_ideals(&r)?
    } else {
        args.ideal
            .iter()
            .map(|s| ideal(&r, s))
            .collect::<Result<Vec<_>>>()?
    };
    let ans = check_ans(cl.as_ref(), &family)?;
    for row in &ans.rows {
        rep.line(format!(
            "{}  V = {}  rad = {}  I(V) = {}{}",
            row.ideal,
            row.variety,
            row.radical,
            row.vanishing,
            if row.equal { "" } else { "  MISMATCH" }
        ));
    }
    rep.set("ideals", family.len());
    rep.set("rows", &ans.rows);
    rep.push(ans.esep);
    rep.push(ans.pp);
    rep.push(ans.verdict);
    if args.galois {
        rep.push(check_galois(&r)?);
    }
    if args.grid {
        let g = tolerance_grid()?;
        rep.line(format!(
            "tolerance grid: {} cases, {} non-vacuous",
            g.cases, g.active
        ));
        rep.set("grid-cases", g.cases);
        rep.set("grid-active", g.active);
        rep.push(g.verdict);
    }
    if args.search {
        let found = search_esep_without_pp(&r)?;
        for f in &found {
            rep.line(format!(
                "{}  reverse inclusion fails at {}",
                f.closure,
                f.reverse_fails_at.as_deref().unwrap_or("-")
            ));
        }
        rep.set("esep-without-pp", &found);
    }
    Ok(rep)
}
