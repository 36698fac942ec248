use std::sync::Arc;

use approx_algebra::closure::{check_axioms, ClosureRef, ClosureSpec, Mode};
use approx_algebra::ideal::{
    enumerate_subgroups, int_principal, render_subset, IdealRep, SUBGROUP_GUARD,
};
use approx_algebra::ideal_theory::{
    int_prime_closed_form, int_prime_search, is_approx_ideal, quotient_ring,
};
use approx_algebra::localization::{check_ext_contr_bijection, check_rad_eq_nil, localize};
use approx_algebra::modules::{is_approx_submodule, ApproxHom, ModClosure, Module, Scalars};
use approx_algebra::nullstellensatz::check_galois;
use approx_algebra::ring::grammar::parse_ring;
use approx_algebra::ring::ElemSet;
use approx_algebra::spectrum::{spectrum, topology_check};
use approx_algebra::{Elem, Ring, Subset};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn cl(ring: &Ring, src: &str) -> ClosureRef {
    Arc::new(ClosureSpec::parse(ring, src).unwrap())
}

fn mask_set(ring: &Ring, mask: u64) -> Subset {
    Subset::Finite(ElemSet::from_mask(ring.size().unwrap(), mask))
}

/// Closures of both shift families on `ℤ/n`, one per divisor.
fn finite_closures(n: u64) -> Vec<String> {
    let mut out = vec!["gen".to_string()];
    for d in divisors(n) {
        out.push(format!("shift:J={d}"));
        out.push(format!("setshift:J={d}"));
    }
    out
}

#[test]
fn finite_rings_satisfy_ring_axioms() {
    for src in [
        "Zn:12",
        "Zn:7",
        "prod:[Zn:2,Zn:3]",
        "prod:[Zn:2,Zn:2]",
        "GF:2/x^3",
        "GF:3/x^2+1",
        "Fun:p=2,n=2",
    ] {
        let r = parse_ring(src).unwrap();
        assert_eq!(r.axiom_violation(), None, "{src}");
    }
}

#[test]
fn subgroups_of_cyclic_rings_are_divisor_ideals() {
    for n in 2..=64u64 {
        let r = parse_ring(&format!("Zn:{n}")).unwrap();
        let subs = enumerate_subgroups(&r, SUBGROUP_GUARD).unwrap();
        assert_eq!(subs.len(), divisors(n).len(), "Z/{n}");
        for d in divisors(n) {
            let multiples: Vec<Elem> = (0..n)
                .filter(|x| x % d == 0)
                .map(|x| Elem::Fin(x as u32))
                .collect();
            let want = Subset::from_elems(&r, &multiples);
            assert!(subs.contains(&want), "Z/{n} misses ({d})");
        }
    }
}

#[test]
fn shifted_closures_pass_axioms_exhaustively() {
    for src in [
        "Zn:6",
        "Zn:8",
        "Zn:9",
        "prod:[Zn:2,Zn:2]",
        "prod:[Zn:2,Zn:3]",
    ] {
        let r = parse_ring(src).unwrap();
        let js: Vec<String> = r.elements().unwrap().map(|e| r.fmt_elem(&e)).collect();
        for j in js {
            for fam in ["shift", "setshift"] {
                let c = cl(&r, &format!("{fam}:J={j}"));
                let rep = check_axioms(c.as_ref(), Mode::Exhaustive).unwrap();
                assert!(
                    rep.all_pass(),
                    "{src} {fam}:J={j}: {:?}",
                    rep.failures().next()
                );
            }
        }
    }
}

#[test]
fn approx_prime_closed_form_matches_bounded_search() {
    for m in 2..=60u64 {
        for d in 2..=1000u64 {
            let search = int_prime_search(d, gcd(d, m), 2 * m as i64).is_none();
            assert_eq!(int_prime_closed_form(d, m), search, "d={d} m={m}");
        }
    }
}

#[test]
fn topology_laws_on_cyclic_rings() {
    for n in 2..=16u64 {
        let r = parse_ring(&format!("Zn:{n}")).unwrap();
        for c in finite_closures(n) {
            let sp = spectrum(cl(&r, &c)).unwrap();
            let t = topology_check(&sp).unwrap();
            assert!(
                t.all_pass(),
                "Z/{n} {c}: {:?}",
                t.verdicts.iter().find(|v| !v.verdict)
            );
        }
    }
}

#[test]
fn quotients_are_well_defined() {
    for n in 2..=16u64 {
        let r = parse_ring(&format!("Zn:{n}")).unwrap();
        for c in finite_closures(n) {
            let c = cl(&r, &c);
            for s in enumerate_subgroups(&r, SUBGROUP_GUARD).unwrap() {
                if !is_approx_ideal(c.as_ref(), &s).unwrap().verdict {
                    continue;
                }
                let q = quotient_ring(c.as_ref(), &s).unwrap();
                assert!(
                    q.well_defined(),
                    "Z/{n} {} I={}",
                    c.describe(),
                    render_subset(&r, &s)
                );
            }
        }
    }
}

#[test]
fn localizations_round_trip() {
    let mut cases: Vec<(String, String, u64)> = Vec::new();
    for n in 2..=20u64 {
        for s in 1..n {
            cases.push((format!("Zn:{n}"), "gen".into(), s));
        }
    }
    for m in [6u64, 12, 30, 60] {
        for s in 2..=7 {
            cases.push(("Z".into(), format!("shift:J={m}"), s));
        }
    }
    for (ring, c, s) in cases {
        let r = parse_ring(&ring).unwrap();
        let loc = localize(cl(&r, &c), &[r.from_int(&(s as i64).into())]).unwrap();
        assert!(loc.checks.iter().all(|v| v.verdict), "{ring} {c} S=<{s}>");
        let b = check_ext_contr_bijection(&loc).unwrap();
        assert!(b.all_pass(), "{ring} {c} S=<{s}>: {:?}", b.verdicts);
        assert!(
            check_rad_eq_nil(loc.closure_ref()).unwrap().verdict,
            "{ring} {c} S=<{s}>"
        );
    }
}

#[test]
fn galois_connection_on_small_function_rings() {
    for src in ["Fun:p=2,n=1", "Fun:p=2,n=2", "Fun:p=3,n=1"] {
        let r = parse_ring(src).unwrap();
        assert!(check_galois(&r).unwrap().verdict, "{src}");
    }
}

proptest! {
    #[test]
    fn integer_ideals_are_principal_by_gcd(gens in prop::collection::vec(-500i64..500, 0..5)) {
        let r = Ring::integers();
        let es: Vec<Elem> = gens.iter().map(|&g| Elem::int(g)).collect();
        let g = gens.iter().fold(0u64, |acc, &x| gcd(acc, x.unsigned_abs()));
        let i = IdealRep::generated(&r, &es).unwrap();
        prop_assert_eq!(i.canonical(), &int_principal(g));
    }

    #[test]
    fn generated_ideals_are_extensive_monotone_idempotent(n in 2u64..40, a in any::<u64>(), b in any::<u64>()) {
        let r = parse_ring(&format!("Zn:{n}")).unwrap();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let (a, b) = (a & full, b & full);
        let elems = |m: u64| -> Vec<Elem> { (0..n).filter(|i| m >> i & 1 == 1).map(|i| Elem::Fin(i as u32)).collect() };
        let ia = IdealRep::generated(&r, &elems(a)).unwrap();
        let iab = IdealRep::generated(&r, &elems(a | b)).unwrap();
        for e in elems(a) {
            prop_assert!(ia.contains(&e));
        }
        prop_assert!(ia.canonical().is_subset(&r, iab.canonical()).unwrap());
        let again = IdealRep::generated(&r, &ia.canonical().elements().unwrap()).unwrap();
        prop_assert_eq!(again.canonical(), ia.canonical());
    }

    #[test]
    fn modular_closure_of_principal_ideal(d in 0u64..1000, m in 1u64..120) {
        let r = Ring::integers();
        let c = cl(&r, &format!("shift:J={m}"));
        prop_assert_eq!(c.eval(&int_principal(d)).unwrap(), int_principal(gcd(d, m)));
    }

    #[test]
    fn set_shift_is_idempotent(n in 2u64..40, j in 0u64..40, a in any::<u64>()) {
        let r = parse_ring(&format!("Zn:{n}")).unwrap();
        let c = cl(&r, &format!("setshift:J={}", j % n));
        let full = (1u64 << n) - 1;
        let once = c.eval(&mask_set(&r, a & full)).unwrap();
        prop_assert_eq!(c.eval(&once).unwrap(), once);
    }

    #[test]
    fn sampling_closure_contains_functions_vanishing_on_the_variety(
        fam in prop::collection::vec(prop::collection::btree_set(0usize..4, 0..4), 1..4),
        gens in prop::collection::vec(0u64..16, 0..3),
    ) {
        let r = parse_ring("Fun:p=2,n=2").unwrap();
        let sets: Vec<String> = fam.iter().map(|s| {
            let pts: Vec<String> = s.iter().map(|&j| format!("({},{})", j >> 1, j & 1)).collect();
            format!("{{{}}}", pts.join(","))
        }).collect();
        let c = cl(&r, &format!("sample:[{}]", sets.join(",")));
        let pw = cl(&r, "pointwise");
        let a = Subset::from_elems(&r, &gens.iter().map(|&g| Elem::Fin(g as u32)).collect::<Vec<_>>());
        let vanishing = pw.eval(&a).unwrap();
        for f in vanishing.elements().unwrap() {
            prop_assert!(c.member(&f, &a).unwrap());
        }
    }

    #[test]
    fn image_morphic_maps_have_approx_submodule_kernels(
        group in prop::sample::select(vec!["Z/4", "Z/2xZ/2", "Z/8", "Z/6"]),
        closure in prop::sample::select(vec!["gen", "shift:N=2", "setshift:N=2"]),
        table in prop::collection::vec(0usize..8, 8),
    ) {
        let m = Module::parse(group, Scalars::Integers).unwrap();
        let src = if closure != "gen" && group == "Z/2xZ/2" { "gen" } else { closure };
        let c = ModClosure::parse(&m, src).unwrap();
        let t: Vec<usize> = table.iter().take(m.size()).map(|&y| y % m.size()).collect();
        if let Ok(f) = ApproxHom::new(&c, &c, t) {
            if f.is_image_morphic().verdict {
                prop_assert!(is_approx_submodule(&c, f.kernel()).unwrap().verdict);
            }
        }
    }
}
