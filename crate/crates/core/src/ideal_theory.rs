//! Approximate ideals, primes, products and quotients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closure::axioms::{Counterexample, Verdict};
use crate::closure::functorial::{
    is_phi_image_morphic, is_phi_preimage_continuous, test_subsets, FunctorOptions,
};
use crate::closure::{closure_set, Closure, ClosureKind};
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::ideal::{enumerate_subgroups, int_principal, render_subset, span_ideal, SUBGROUP_GUARD};
use crate::ring::{Elem, ElemSet, IntSet, Ring, Subset, TableRing};

/// Scalar bound for bounded checks on ℤ.
pub const INT_SCALAR_BOUND: i64 = 100;
/// Generator bound for scans over principal ideals of ℤ.
pub const INT_IDEAL_BOUND: u64 = 1000;

/// `d` when `s` is the subgroup `dℤ` and `d` fits in a machine word.
pub fn int_gen(s: &Subset) -> Option<u64> {
    match s {
        Subset::Int(i) => i.principal_generator().and_then(|d| d.to_u64()),
        _ => None,
    }
}

fn is_ideal_closure(cl: &dyn Closure) -> bool {
    matches!(
        cl.spec().map(|s| s.kind()),
        Some(ClosureKind::GeneratedIdeal) | Some(ClosureKind::IdealShift(_))
    )
}

fn fail(name: &str, checked: u64, domain: &str, ce: Counterexample) -> Verdict {
    Verdict::from_check(name, checked, domain, Some(ce))
}

/// Whether `s` is an additive subgroup with `R·s ⊆ cl(s)`.
pub fn is_approx_ideal(cl: &dyn Closure, s: &Subset) -> Result<Verdict> {
    const NAME: &str = "approx-ideal";
    let ring = cl.ring();
    if ring.is_finite() {
        let domain = "all r in R, s in S";
        let elems = s.elements()?;
        if !s.contains(ring, &ring.zero()) {
            let ce =
                Counterexample::note(NAME, "S does not contain 0").with_set("S", s.render(ring));
            return Ok(fail(NAME, 0, domain, ce));
        }
        for a in &elems {
            for b in &elems {
                let d = ring.sub(a, b);
                if !s.contains(ring, &d) {
                    let ce = Counterexample::note(
                        NAME,
                        format!(
                            "not a subgroup: {} - {} = {} is outside S",
                            ring.fmt_elem(a),
                            ring.fmt_elem(b),
                            ring.fmt_elem(&d)
                        ),
                    )
                    .with_set("S", s.render(ring))
                    .with_witness(ring.fmt_elem(&d));
                    return Ok(fail(NAME, 0, domain, ce));
                }
            }
        }
        let c = closure_set(cl, s)?;
        let mut checked = 0;
        for r in ring.elements()? {
            for x in &elems {
                checked += 1;
                let rx = ring.mul(&r, x);
                if !c.contains(ring, &rx) {
                    let ce = Counterexample::note(
                        NAME,
                        format!(
                            "absorption fails: r·s = {} is outside cl(S) = {}",
                            ring.fmt_elem(&rx),
                            c.render(ring)
                        ),
                    )
                    .with_set("S", s.render(ring))
                    .with_scalar(ring.fmt_elem(&r))
                    .with_witness(ring.fmt_elem(x));
                    return Ok(fail(NAME, checked, domain, ce));
                }
            }
        }
        return Ok(Verdict::pass(NAME, checked, domain));
    }
    if ring.is_integers() {
        let set = s.as_int()?;
        let Some(d) = set.principal_generator() else {
            let ce =
                Counterexample::note(NAME, "not a subgroup of Z").with_set("S", s.render(ring));
            return Ok(fail(NAME, 0, "subgroups of Z are dZ", ce));
        };
        let c = closure_set(cl, s)?;
        let cs = c.as_int()?;
        let d = BigInt::from(d);
        if cs.is_subgroup() {
            // R·(d) = (d), which lies in a subgroup iff d does
            let ok = cs.contains(&d);
            let domain = "closed form: (d) inside cl(S) iff d in cl(S)";
            if ok {
                return Ok(Verdict::pass(NAME, 1, domain));
            }
            let ce = Counterexample::note(
                NAME,
                format!(
                    "absorption fails: {d} is outside cl(S) = {}",
                    c.render(ring)
                ),
            )
            .with_set("S", s.render(ring))
            .with_scalar("1")
            .with_witness(d.to_string());
            return Ok(fail(NAME, 1, domain, ce));
        }
        let domain = format!("|r| <= {INT_SCALAR_BOUND}");
        let mut checked = 0;
        for r in -INT_SCALAR_BOUND..=INT_SCALAR_BOUND {
            checked += 1;
            let rd = &d * r;
            if !cs.contains(&rd) {
                let ce =
                    Counterexample::note(NAME, format!("absorption fails: {rd} is outside cl(S)"))
                        .with_set("S", s.render(ring))
                        .with_scalar(r.to_string())
                        .with_witness(d.to_string());
                return Ok(fail(NAME, checked, &domain, ce));
            }
        }
        return Ok(Verdict::pass(NAME, checked, domain));
    }
    // Infinite products: the subgroup is the additive span of the given points.
    if is_ideal_closure(cl) {
        let note = "cl(S) is an ideal containing S, so it contains R·S";
        return Ok(Verdict::pass(NAME, 0, note));
    }
    Err(Error::Unsupported(format!(
        "approximate ideal checks for {} on {ring}",
        cl.describe()
    )))
}

fn require_approx_ideal(cl: &dyn Closure, s: &Subset, what: &str) -> Result<()> {
    let v = is_approx_ideal(cl, s)?;
    if v.verdict {
        Ok(())
    } else {
        let why = v.counterexample.map(|c| c.detail).unwrap_or_default();
        Err(Error::precondition(format!(
            "{what} is not an approximate ideal: {why}"
        )))
    }
}

/// Closed form on ℤ with `cl = ⟨·⟩ + mℤ` (m = 0 for the plain ideal closure):
/// `(d)` is approximate prime iff `d` is prime and `d | m`, or `d = m = 0`.
pub fn int_prime_closed_form(d: u64, m: u64) -> bool {
    if d == 0 {
        return m == 0;
    }
    is_prime_u64(d) && m.is_multiple_of(d)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Brute force over `|x|, |y| ≤ bound` for `(d)` with `cl((d)) = (g)`.
pub fn int_prime_search(d: u64, g: u64, bound: i64) -> Option<(i64, i64)> {
    let inp = |x: i64| {
        if d == 0 {
            x == 0
        } else {
            x.rem_euclid(d as i64) == 0
        }
    };
    let incl = |v: i128| {
        if g == 0 {
            v == 0
        } else {
            v.rem_euclid(g as i128) == 0
        }
    };
    for x in -bound..=bound {
        if inp(x) {
            continue;
        }
        for y in -bound..=bound {
            if !inp(y) && incl(x as i128 * y as i128) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Exact primality search for `(d)` with `cl((d)) = (g)`, `g | d`.
/// Both conditions depend only on residues mod `d`, so `1 ≤ x, y < d` suffice.
pub fn int_prime_residue_search(d: u64, g: u64) -> Option<(u64, u64)> {
    if d == 0 {
        return (g != 0).then_some((g, g));
    }
    for x in 1..d {
        for y in x..d {
            if (x as u128 * y as u128).is_multiple_of(g as u128) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Whether `P ≠ R` is approximate prime: `xy ∈ cl(P) ⇒ x ∈ P or y ∈ P`.
pub fn is_approx_prime(cl: &dyn Closure, p: &Subset) -> Result<Verdict> {
    const NAME: &str = "approx-prime";
    let ring = cl.ring();
    if p.is_full() || (ring.is_integers() && p.as_int()?.is_all()) {
        return Err(Error::precondition("P = R is not a proper ideal"));
    }
    require_approx_ideal(cl, p, "P")?;
    let c = closure_set(cl, p)?;
    if c.is_full() || (ring.is_integers() && c.as_int()?.is_all()) {
        let ce = Counterexample::note(NAME, "cl(P) = R, so 1·1 lies in cl(P) while 1 is outside P")
            .with_set("P", render_subset(ring, p))
            .with_witness("1");
        return Ok(fail(NAME, 1, "cl(P) = R diagnostic", ce));
    }
    if ring.is_finite() {
        let domain = "all x, y in R";
        let n = ring.size()? as u32;
        let mut checked = 0;
        for x in 0..n {
            let ex = Elem::Fin(x);
            if p.contains(ring, &ex) {
                continue;
            }
            for y in 0..n {
                let ey = Elem::Fin(y);
                checked += 1;
                if p.contains(ring, &ey) {
                    continue;
                }
                let xy = Elem::Fin(ring.mul_i(x, y));
                if c.contains(ring, &xy) {
                    let ce = Counterexample::note(
                        NAME,
                        format!(
                            "{}·{} = {} lies in cl(P) = {} but neither factor lies in P",
                            ring.fmt_elem(&ex),
                            ring.fmt_elem(&ey),
                            ring.fmt_elem(&xy),
                            c.render(ring)
                        ),
                    )
                    .with_set("P", render_subset(ring, p))
                    .with_witness(format!(
                        "({}, {})",
                        ring.fmt_elem(&ex),
                        ring.fmt_elem(&ey)
                    ));
                    return Ok(fail(NAME, checked, domain, ce));
                }
            }
        }
        return Ok(Verdict::pass(NAME, checked, domain));
    }
    if ring.is_integers() {
        let d = int_gen(p)
            .ok_or_else(|| Error::resource("ideal generator", u64::MAX as u128, u128::MAX))?;
        let g = int_gen(&c).ok_or_else(|| {
            Error::Unsupported("closure of a principal ideal is not principal".into())
        })?;
        if d != 0 && (g == 0 || d % g != 0) {
            return Err(Error::precondition("cl(P) does not contain P"));
        }
        let modulus = cl.spec().and_then(|s| s.modulus()).and_then(|m| m.to_u64());
        let found = int_prime_residue_search(d, g).map(|(x, y)| (x as i64, y as i64));
        let mut domain = if d == 0 {
            "P = (0): violated iff cl(0) contains a nonzero element".to_string()
        } else {
            format!("all residues x, y mod {d}")
        };
        if let Some(m) = modulus {
            let closed = int_prime_closed_form(d, m);
            if closed == found.is_some() {
                return Err(Error::precondition(format!(
                    "closed form and residue search disagree for ({d}) with m = {m}"
                )));
            }
            domain = format!(
                "closed form (d prime, d | m) with m = {m}; agrees with search over {domain}"
            );
        }
        let checked = d.saturating_mul(d).max(1);
        return Ok(match found {
            None => Verdict::pass(NAME, checked, domain),
            Some((x, y)) => {
                let ce = Counterexample::note(
                    NAME,
                    format!(
                        "{x}·{y} = {} lies in cl(P) = ({g}) but neither factor lies in ({d})",
                        x * y
                    ),
                )
                .with_set("P", format!("({d})"))
                .with_witness(format!("({x}, {y})"));
                fail(NAME, checked, &domain, ce)
            }
        });
    }
    Err(Error::Unsupported(format!("primality checks on {ring}")))
}

/// `AB = cl(⟨ab : a ∈ A, b ∈ B⟩)`.
pub fn approx_product(cl: &dyn Closure, a: &Subset, b: &Subset) -> Result<Subset> {
    let ring = cl.ring();
    let gens = if ring.is_integers() {
        match (int_gen(a), int_gen(b)) {
            (Some(d), Some(e)) => {
                let de = BigUint::from(d) * BigUint::from(e);
                Subset::Int(IntSet::multiples(&de))
            }
            _ => return Err(Error::precondition("products on Z need principal ideals")),
        }
    } else {
        let ea = a.elements()?;
        let eb = b.elements()?;
        let prods: Vec<Elem> = ea
            .iter()
            .flat_map(|x| eb.iter().map(move |y| ring.mul(x, y)))
            .collect();
        span_ideal(ring, &Subset::from_elems(ring, &prods))?
    };
    closure_set(cl, &gens)
}

/// `R/I` under `x ∼ y ⇔ x − y ∈ cl(I)`.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    /// Member sets of the classes, or `None` on ℤ.
    pub classes: Option<Vec<Vec<Elem>>>,
    /// Generator `g` of `cl(I) = gℤ` on ℤ.
    pub modulus: Option<u64>,
    pub ring: Ring,
    pub checks: Vec<Verdict>,
    base: Ring,
}

impl QuotientRing {
    pub fn class_count(&self) -> Option<u64> {
        match (&self.classes, self.modulus) {
            (Some(c), _) => Some(c.len() as u64),
            (None, Some(0)) => None,
            (None, Some(g)) => Some(g),
            _ => None,
        }
    }

    pub fn render_classes(&self) -> Vec<String> {
        match &self.classes {
            Some(cs) => cs
                .iter()
                .map(|c| {
                    let parts: Vec<String> = c.iter().map(|e| self.base.fmt_elem(e)).collect();
                    format!("{{{}}}", parts.join(", "))
                })
                .collect(),
            None => match self.modulus {
                Some(0) => vec!["{x} for every integer x".into()],
                Some(g) => (0..g.min(64)).map(|r| format!("{r} + {g}Z")).collect(),
                None => Vec::new(),
            },
        }
    }

    pub fn well_defined(&self) -> bool {
        self.checks.iter().all(|v| v.verdict)
    }
}

pub fn quotient_ring(cl: &dyn Closure, i: &Subset) -> Result<QuotientRing> {
    let ring = cl.ring();
    require_approx_ideal(cl, i, "I")?;
    let c = closure_set(cl, i)?;
    if ring.is_integers() {
        let g = int_gen(&c).ok_or_else(|| Error::precondition("cl(I) is not a subgroup of Z"))?;
        let q = match g {
            0 => Ring::integers(),
            1 => zero_ring(),
            g => Ring::residue(g)?,
        };
        // Representatives x and x + g·k must give the same class.
        let mut checked = 0;
        let mut bad = None;
        if g > 0 {
            'outer: for x in -20i64..=20 {
                for y in -20i64..=20 {
                    for k in -3i64..=3 {
                        checked += 1;
                        let x2 = x + k * g as i64;
                        let g = g as i64;
                        if (x * y - x2 * y).rem_euclid(g) != 0
                            || (x + y - x2 - y).rem_euclid(g) != 0
                        {
                            bad = Some((x, x2, y));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let domain = "representatives in [-20, 20] shifted by multiples of the modulus";
        let v = match bad {
            None => Verdict::pass("well-defined", checked, domain),
            Some((x, x2, y)) => fail(
                "well-defined",
                checked,
                domain,
                Counterexample::note("well-defined", format!("{x} and {x2} disagree against {y}")),
            ),
        };
        return Ok(QuotientRing {
            classes: None,
            modulus: Some(g),
            ring: q,
            checks: vec![v],
            base: ring.clone(),
        });
    }
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!("quotients of {ring}")));
    }
    let n = ring.size()? as u32;
    let rel = |x: u32, y: u32| c.contains(ring, &Elem::Fin(ring.sub_i(x, y)));
    let mut checks = Vec::new();
    // equivalence relation
    let mut eq_fail = None;
    let mut checked = 0;
    'eq: for x in 0..n {
        checked += 1;
        if !rel(x, x) {
            eq_fail = Some(format!(
                "{} is not related to itself",
                ring.fmt_elem(&Elem::Fin(x))
            ));
            break;
        }
        for y in 0..n {
            if rel(x, y) != rel(y, x) {
                eq_fail = Some("relation is not symmetric".into());
                break 'eq;
            }
            if !rel(x, y) {
                continue;
            }
            for z in 0..n {
                if rel(y, z) && !rel(x, z) {
                    eq_fail = Some("relation is not transitive".into());
                    break 'eq;
                }
            }
        }
    }
    if let Some(why) = eq_fail {
        return Err(Error::precondition(format!(
            "x - y in cl(I) is not an equivalence: {why}"
        )));
    }
    checks.push(Verdict::pass(
        "equivalence",
        checked as u64,
        "all x, y, z in R",
    ));
    let mut class_of = vec![usize::MAX; n as usize];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for x in 0..n {
        if class_of[x as usize] != usize::MAX {
            continue;
        }
        let k = classes.len();
        let members: Vec<u32> = (0..n).filter(|&y| rel(x, y)).collect();
        for &y in &members {
            class_of[y as usize] = k;
        }
        classes.push(members);
    }
    let k = classes.len();
    let mut add = vec![u32::MAX; k * k];
    let mut mul = vec![u32::MAX; k * k];
    let mut bad = None;
    let mut checked = 0u64;
    'wd: for x in 0..n {
        for y in 0..n {
            checked += 1;
            let (cx, cy) = (class_of[x as usize], class_of[y as usize]);
            let s = class_of[ring.add_i(x, y) as usize] as u32;
            let p = class_of[ring.mul_i(x, y) as usize] as u32;
            let slot = cx * k + cy;
            for (tab, v, op) in [(&mut add, s, "+"), (&mut mul, p, "·")] {
                if tab[slot] == u32::MAX {
                    tab[slot] = v;
                } else if tab[slot] != v {
                    bad = Some((x, y, op));
                    break 'wd;
                }
            }
        }
    }
    let domain = "all representative pairs";
    match bad {
        None => checks.push(Verdict::pass("well-defined", checked, domain)),
        Some((x, y, op)) => {
            let ce = Counterexample::note(
                "well-defined",
                format!(
                    "class of {} {op} {} depends on the representatives",
                    ring.fmt_elem(&Elem::Fin(x)),
                    ring.fmt_elem(&Elem::Fin(y))
                ),
            );
            checks.push(fail("well-defined", checked, domain, ce));
            return Err(Error::precondition(
                "quotient operations are not well-defined",
            ));
        }
    }
    let labels: Vec<String> = classes
        .iter()
        .map(|c| format!("[{}]", ring.fmt_elem(&Elem::Fin(c[0]))))
        .collect();
    let q = Ring::from_table(TableRing {
        name: format!("{ring}/~"),
        labels,
        add,
        mul,
        zero: class_of[ring.zero_i() as usize] as u32,
        one: class_of[ring.one_i() as usize] as u32,
    });
    let q = match q {
        Ok(q) => {
            checks.push(Verdict::pass(
                "ring-axioms",
                (k * k * k) as u64,
                "all class triples",
            ));
            q
        }
        Err(Error::InvalidRing(why)) => {
            return Err(Error::precondition(format!(
                "quotient is not a ring: {why}"
            )))
        }
        Err(e) => return Err(e),
    };
    Ok(QuotientRing {
        classes: Some(
            classes
                .into_iter()
                .map(|c| c.into_iter().map(Elem::Fin).collect())
                .collect(),
        ),
        modulus: None,
        ring: q,
        checks,
        base: ring.clone(),
    })
}

fn zero_ring() -> Ring {
    Ring::from_table(TableRing {
        name: "0".into(),
        labels: vec!["0".into()],
        add: vec![0],
        mul: vec![0],
        zero: 0,
        one: 0,
    })
    .expect("zero ring")
}

/// Outcome of the factorization theorem on one triple.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationCheck {
    pub product_matches: bool,
    pub proper: bool,
    pub prime: bool,
    pub closed: bool,
    pub hypotheses_hold: bool,
    pub conclusion: bool,
}

impl FactorizationCheck {
    /// A counterexample to the theorem.
    pub fn violates(&self) -> bool {
        self.hypotheses_hold && !self.conclusion
    }
}

/// `A = BC`, `A` approximate prime and `cl`-closed, conclusion `B ⊆ A` or `C ⊆ A`.
pub fn factorization_check(
    cl: &dyn Closure,
    a: &Subset,
    b: &Subset,
    c: &Subset,
) -> Result<FactorizationCheck> {
    let ring = cl.ring();
    let bc = approx_product(cl, b, c)?;
    let product_matches = bc.set_eq(ring, a)?;
    let proper = !(a.is_full() || (ring.is_integers() && a.as_int()?.is_all()));
    let prime = proper
        && match is_approx_prime(cl, a) {
            Ok(v) => v.verdict,
            Err(Error::Precondition(_)) => false,
            Err(e) => return Err(e),
        };
    let closed = closure_set(cl, a)?.set_eq(ring, a)?;
    let conclusion = b.is_subset(ring, a)? || c.is_subset(ring, a)?;
    Ok(FactorizationCheck {
        product_matches,
        proper,
        prime,
        closed,
        hypotheses_hold: product_matches && proper && prime && closed,
        conclusion,
    })
}

/// Approximate ideals among the subgroups of a finite ring.
pub fn finite_approx_ideals(cl: &dyn Closure) -> Result<Vec<Subset>> {
    let mut out = Vec::new();
    for s in enumerate_subgroups(cl.ring(), SUBGROUP_GUARD)? {
        if is_approx_ideal(cl, &s)?.verdict {
            out.push(s);
        }
    }
    Ok(out)
}

/// Scans the factorization theorem: over all pairs of approximate ideals on
/// finite rings, or principal ideals with generators up to `bound` on ℤ.
pub fn factorization_scan(cl: &dyn Closure, bound: u64) -> Result<Verdict> {
    const NAME: &str = "factorization";
    let ring = cl.ring();
    if ring.is_finite() {
        let ideals = finite_approx_ideals(cl)?;
        let mut checked = 0;
        let mut primes: Vec<Option<bool>> = vec![None; ideals.len()];
        let mut applicable = 0;
        for b in &ideals {
            for c in &ideals {
                checked += 1;
                let a = approx_product(cl, b, c)?;
                let Some(ai) = ideals.iter().position(|x| x == &a) else {
                    continue;
                };
                let f = factorization_check(cl, &a, b, c)?;
                primes[ai] = Some(f.prime);
                if f.hypotheses_hold {
                    applicable += 1;
                }
                if f.violates() {
                    let ce = Counterexample::note(
                        NAME,
                        "A = BC is a closed approximate prime containing neither B nor C",
                    )
                    .with_set("A", a.render(ring))
                    .with_set("B", b.render(ring))
                    .with_set("C", c.render(ring));
                    return Ok(fail(NAME, checked, "pairs of approximate ideals", ce));
                }
            }
        }
        let domain = format!("pairs of approximate ideals; hypotheses held on {applicable}");
        return Ok(Verdict::pass(NAME, checked, domain));
    }
    if ring.is_integers() {
        let m = cl
            .spec()
            .and_then(|s| s.modulus())
            .and_then(|m| m.to_u64())
            .ok_or_else(|| {
                Error::Unsupported("factorization scans on Z need a modular closure".into())
            })?;
        let mut checked = 0;
        let mut applicable = 0;
        for bd in 0..=bound {
            for cd in 0..=bound {
                checked += 1;
                let a = (bd as u128 * cd as u128).gcd(&(m as u128));
                // a = 0 only when m = 0; (0) is prime and closed then
                let a = a as u64;
                if a == 1 || !int_prime_closed_form(a, m) {
                    continue;
                }
                applicable += 1;
                let divides = |x: u64| if a == 0 { x == 0 } else { x.is_multiple_of(a) };
                if !(divides(bd) || divides(cd)) {
                    let ce = Counterexample::note(
                        NAME,
                        "A = BC is a closed approximate prime containing neither B nor C",
                    )
                    .with_set("A", format!("({a})"))
                    .with_set("B", format!("({bd})"))
                    .with_set("C", format!("({cd})"));
                    return Ok(fail(NAME, checked, "principal pairs", ce));
                }
            }
        }
        let domain =
            format!("principal (b), (c) with b, c <= {bound}; hypotheses held on {applicable}");
        return Ok(Verdict::pass(NAME, checked, domain));
    }
    Err(Error::Unsupported(format!("factorization scans on {ring}")))
}

/// Whether `(0)` is approximate prime.
pub fn is_approx_prime_ring(cl: &dyn Closure) -> Result<bool> {
    let ring = cl.ring();
    if ring.is_finite() && ring.size()? == 1 {
        return Ok(false);
    }
    Ok(is_approx_prime(cl, &Subset::zero(ring))?.verdict)
}

/// Both sides of the prime-ring characterization, computed independently.
pub fn check_thm_ring_prime(cl: &dyn Closure) -> Result<Verdict> {
    const NAME: &str = "prime-ring-criterion";
    let ring = cl.ring();
    let lhs = is_approx_prime_ring(cl)?;
    let c0 = closure_set(cl, &Subset::zero(ring))?;
    // rhs: no nonzero a, b with aRb ⊆ cl(0)
    let (rhs, witness, checked, domain) = if ring.is_finite() {
        let n = ring.size()? as u32;
        let z = ring.zero_i();
        let mut w = None;
        let mut checked = 0u64;
        'ab: for a in 0..n {
            for b in 0..n {
                if a == z || b == z {
                    continue;
                }
                checked += 1;
                if (0..n).all(|r| c0.contains(ring, &Elem::Fin(ring.mul_i(ring.mul_i(a, r), b)))) {
                    w = Some(format!(
                        "({}, {})",
                        ring.fmt_elem(&Elem::Fin(a)),
                        ring.fmt_elem(&Elem::Fin(b))
                    ));
                    break 'ab;
                }
            }
        }
        (
            w.is_none(),
            w,
            checked,
            "all nonzero a, b and all r".to_string(),
        )
    } else if ring.is_integers() {
        let g = int_gen(&c0)
            .ok_or_else(|| Error::Unsupported("cl(0) is not a subgroup of Z".into()))?;
        // aZb ⊆ (g) iff g | ab
        let bound = 2 * g.max(1) as i64;
        let mut w = None;
        let mut checked = 0u64;
        'zb: for a in -bound..=bound {
            for b in -bound..=bound {
                if a == 0 || b == 0 {
                    continue;
                }
                checked += 1;
                let ab = a as i128 * b as i128;
                if (g == 0 && ab == 0) || (g != 0 && ab.rem_euclid(g as i128) == 0) {
                    w = Some(format!("({a}, {b})"));
                    break 'zb;
                }
            }
        }
        (
            w.is_none(),
            w,
            checked,
            format!("nonzero |a|, |b| <= {bound}"),
        )
    } else {
        return Err(Error::Unsupported(format!("prime-ring checks on {ring}")));
    };
    let detail = format!("(0) approximate prime: {lhs}; aRb never inside cl(0): {rhs}");
    if lhs == rhs {
        let mut v = Verdict::pass(NAME, checked, domain);
        v.domain = format!("{}; {detail}", v.domain);
        Ok(v)
    } else {
        let mut ce = Counterexample::note(NAME, detail);
        if let Some(w) = witness {
            ce = ce.with_witness(w);
        }
        Ok(fail(NAME, checked, &domain, ce))
    }
}

/// Result of moving an ideal along a ring map.
#[derive(Debug, Clone)]
pub struct Transfer {
    pub result: Subset,
    pub verdicts: Vec<Verdict>,
    pub skipped: Vec<String>,
}

impl Transfer {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == name)
    }
}

fn require_verdict(v: Verdict) -> Result<Verdict> {
    if v.verdict {
        Ok(v)
    } else {
        let why = v
            .counterexample
            .as_ref()
            .map(|c| c.detail.clone())
            .unwrap_or_default();
        Err(Error::precondition(format!(
            "map is not {}: {why}",
            v.axiom
        )))
    }
}

fn prime_or_skip(cl: &dyn Closure, s: &Subset) -> Result<Option<Verdict>> {
    match is_approx_prime(cl, s) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Precondition(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `f⁻¹(J)` with its approximate-ideal and primeness verdicts.
pub fn preimage_transfer(
    f: &Hom,
    cl_r: &dyn Closure,
    cl_s: &dyn Closure,
    j: &Subset,
) -> Result<Transfer> {
    let opts = FunctorOptions::default();
    let mut verdicts = vec![
        require_verdict(is_phi_preimage_continuous(f, cl_r, cl_s, &opts)?)?,
        require_verdict(is_phi_image_morphic(f, cl_r, cl_s, &opts)?)?,
    ];
    require_approx_ideal(cl_s, j, "J")?;
    let pre = f.preimage(j)?;
    verdicts.push(is_approx_ideal(cl_r, &pre)?);
    let mut skipped = Vec::new();
    match prime_or_skip(cl_s, j)? {
        Some(v) if v.verdict => {
            let mut pv = is_approx_prime(cl_r, &pre)?;
            pv.axiom = "preimage-prime".into();
            verdicts.push(pv);
        }
        _ => skipped.push("J is not approximate prime; primeness clause not applicable".into()),
    }
    Ok(Transfer {
        result: pre,
        verdicts,
        skipped,
    })
}

/// `f(I)` for surjective `f`, with the pullback identity `f⁻¹(f(A)) = A + Ker f`.
pub fn image_transfer(
    f: &Hom,
    cl_r: &dyn Closure,
    cl_s: &dyn Closure,
    i: &Subset,
) -> Result<Transfer> {
    if !f.is_surjective()? {
        return Err(Error::precondition("map is not surjective"));
    }
    let opts = FunctorOptions::default();
    let mut verdicts = vec![require_verdict(is_phi_image_morphic(
        f, cl_r, cl_s, &opts,
    )?)?];
    require_approx_ideal(cl_r, i, "I")?;
    let r = f.domain();
    let img = f.image(i)?;
    verdicts.push(is_approx_ideal(cl_s, &img)?);
    let kernel = f.kernel()?;
    let mut skipped = Vec::new();
    let ker_inside = kernel.is_subset(r, i)?;
    let continuous = is_phi_preimage_continuous(f, cl_r, cl_s, &opts)?;
    let i_prime = prime_or_skip(cl_r, i)?.map(|v| v.verdict).unwrap_or(false);
    if !ker_inside {
        skipped.push("Ker f is not inside I; primeness clause skipped".into());
    } else if !continuous.verdict {
        skipped.push("map is not preimage-continuous; primeness clause skipped".into());
    } else if !i_prime {
        skipped.push("I is not approximate prime; primeness clause not applicable".into());
    } else {
        verdicts.push(continuous);
        let mut pv = is_approx_prime(cl_s, &img)?;
        pv.axiom = "image-prime".into();
        verdicts.push(pv);
    }
    verdicts.push(pullback_identity(f)?);
    Ok(Transfer {
        result: img,
        verdicts,
        skipped,
    })
}

/// `f⁻¹(f(A)) = A + Ker f` over the test subsets of the domain.
pub fn pullback_identity(f: &Hom) -> Result<Verdict> {
    const NAME: &str = "pullback-identity";
    let r = f.domain();
    let kernel = f.kernel()?;
    let (sets, label) = test_subsets(r, &FunctorOptions::default())?;
    let mut checked = 0;
    for a in &sets {
        checked += 1;
        let lhs = f.preimage(&f.image(a)?)?;
        let rhs = a.sum(r, &kernel)?;
        if !lhs.set_eq(r, &rhs)? {
            let ce = Counterexample::note(
                NAME,
                format!(
                    "f^-1(f(A)) = {} but A + Ker f = {}",
                    lhs.render(r),
                    rhs.render(r)
                ),
            )
            .with_set("A", a.render(r));
            return Ok(fail(NAME, checked, &label, ce));
        }
    }
    Ok(Verdict::pass(NAME, checked, label))
}

/// Principal ideal `(d)` of ℤ as a subset.
pub fn principal(d: u64) -> Subset {
    int_principal(d)
}

/// The element set of a finite subset (helper for callers building ideals).
pub fn finite_subset(ring: &Ring, elems: &[Elem]) -> Result<Subset> {
    let n = ring.size()?;
    Ok(Subset::Finite(ElemSet::from_indices(
        n,
        elems.iter().map(|e| e.idx() as usize),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::ClosureSpec;
    use crate::ideal::IdealRep;
    use crate::ring::grammar::parse_ring;

    fn ideal(r: &Ring, gens: &[&str]) -> Subset {
        let g: Vec<Elem> = gens.iter().map(|s| r.parse_elem(s).unwrap()).collect();
        IdealRep::generated(r, &g).unwrap().canonical().clone()
    }

    #[test]
    fn modular_primes_on_integers() {
        let cl = ClosureSpec::modular(12);
        assert!(is_approx_prime(&cl, &principal(3)).unwrap().verdict);
        let v5 = is_approx_prime(&cl, &principal(5)).unwrap();
        assert!(!v5.verdict);
        assert!(v5.counterexample.unwrap().detail.contains("cl(P) = R"));
        assert!(!is_approx_prime(&cl, &principal(4)).unwrap().verdict);
        assert!(matches!(
            is_approx_prime(&cl, &principal(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn products() {
        let cl = ClosureSpec::modular(12);
        let p = approx_product(&cl, &principal(2), &principal(3)).unwrap();
        assert_eq!(int_gen(&p), Some(6));
        let z12 = Ring::residue(12).unwrap();
        let g = ClosureSpec::generated(&z12);
        let two = ideal(&z12, &["2"]);
        assert_eq!(
            render_subset(&z12, &approx_product(&g, &two, &two).unwrap()),
            "(4)"
        );
    }

    #[test]
    fn quotients() {
        let cl = ClosureSpec::parse(&Ring::integers(), "shift:J=6").unwrap();
        let q = quotient_ring(&cl, &principal(4)).unwrap();
        assert_eq!(q.class_count(), Some(2));
        let z12 = Ring::residue(12).unwrap();
        let q = quotient_ring(&ClosureSpec::generated(&z12), &ideal(&z12, &["3"])).unwrap();
        assert_eq!(q.class_count(), Some(3));
        assert!(q.well_defined());
        let shift6 = ClosureSpec::parse(&z12, "shift:J=6").unwrap();
        let q = quotient_ring(&shift6, &Subset::zero(&z12)).unwrap();
        assert_eq!(q.class_count(), Some(6));
    }

    #[test]
    fn approx_ideal_examples() {
        let z12 = Ring::residue(12).unwrap();
        let g = ClosureSpec::generated(&z12);
        assert!(is_approx_ideal(&g, &ideal(&z12, &["3"])).unwrap().verdict);
        let s = Subset::from_elems(&z12, &[Elem::Fin(0), Elem::Fin(1)]);
        assert!(!is_approx_ideal(&g, &s).unwrap().verdict);
        let r = parse_ring("prod:[Zn:5,Zn:5,Zn:5]").unwrap();
        let diag: Vec<Elem> = (0..5)
            .map(|c| r.parse_elem(&format!("({c},{c},{c})")).unwrap())
            .collect();
        let gray = Subset::from_elems(&r, &diag);
        // (1,1,1) is a unit, so cl(G) = R under any ideal closure
        assert!(
            is_approx_ideal(&ClosureSpec::generated(&r), &gray)
                .unwrap()
                .verdict
        );
        let bare = ClosureSpec::set_shift(IdealRep::zero(&r));
        let v = is_approx_ideal(&bare, &gray).unwrap();
        assert!(!v.verdict);
        assert!(v.counterexample.unwrap().detail.contains("absorption"));
    }

    #[test]
    fn factorization_examples() {
        let cl = ClosureSpec::modular(30);
        let f = factorization_check(&cl, &principal(3), &principal(3), &principal(7)).unwrap();
        assert!(f.hypotheses_hold && f.conclusion);
        let f = factorization_check(&cl, &principal(3), &principal(3), &principal(1)).unwrap();
        assert!(!f.violates());
        assert!(factorization_scan(&cl, 60).unwrap().verdict);
        let z12 = Ring::residue(12).unwrap();
        let s6 = ClosureSpec::parse(&z12, "shift:J=6").unwrap();
        assert!(factorization_scan(&s6, 0).unwrap().verdict);
    }

    #[test]
    fn prime_ring_criterion() {
        for n in [5u64, 6] {
            let r = Ring::residue(n).unwrap();
            let v = check_thm_ring_prime(&ClosureSpec::generated(&r)).unwrap();
            assert!(v.verdict);
            assert_eq!(
                is_approx_prime_ring(&ClosureSpec::generated(&r)).unwrap(),
                n == 5
            );
        }
        let z = ClosureSpec::generated(&Ring::integers());
        assert!(is_approx_prime_ring(&z).unwrap());
        assert!(check_thm_ring_prime(&z).unwrap().verdict);
    }

    #[test]
    fn transfers_along_reduction() {
        let z12 = Ring::residue(12).unwrap();
        let f = Hom::from_integers(&z12).unwrap();
        let cl_r = ClosureSpec::modular(12);
        let cl_s = ClosureSpec::generated(&z12);
        let t = preimage_transfer(&f, &cl_r, &cl_s, &ideal(&z12, &["3"])).unwrap();
        assert_eq!(int_gen(&t.result), Some(3));
        assert!(t.verdict("preimage-prime").unwrap().verdict);
        let t = preimage_transfer(&f, &cl_r, &cl_s, &Subset::zero(&z12)).unwrap();
        assert_eq!(int_gen(&t.result), Some(12));
        assert!(!is_approx_prime(&cl_r, &t.result).unwrap().verdict);

        let t = image_transfer(&f, &cl_r, &cl_s, &principal(3)).unwrap();
        assert_eq!(render_subset(&z12, &t.result), "(3)");
        assert!(t.verdict("image-prime").unwrap().verdict);
        assert!(t.verdicts.iter().all(|v| v.verdict));
        let t = image_transfer(&f, &cl_r, &cl_s, &principal(5)).unwrap();
        assert!(t.skipped[0].contains("Ker f"));
    }
}
