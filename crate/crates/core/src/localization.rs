//! Localization `S⁻¹R` with the transferred closure, extension and
//! contraction of primes, and the approximate radical.
//!
//! On ℤ with `cl = ⟨·⟩ + mℤ` every condition involved depends only on
//! residues mod `m`, so the construction runs on ℤ/m with the ideal closure
//! and the canonical map is `k ↦ k·1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closure::axioms::{check_axioms, AxiomReport, Counterexample, Mode, Verdict};
use crate::closure::functorial::{
    is_phi_image_morphic, is_phi_preimage_continuous, FunctorOptions,
};
use crate::closure::{closure_set, Closure, ClosureRef, ClosureSpec};
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::ideal::render_subset;
use crate::ideal_theory::int_gen;
use crate::ring::{Elem, ElemSet, IntSet, Ring, Subset, TableRing};
use crate::spectrum::{spectrum, Spectrum};

/// Largest number of pairs `(a, s)` handled.
pub const PAIR_GUARD: usize = 4096;

/// The multiplicative closure of some generators together with 1.
#[derive(Debug, Clone)]
pub struct MultSet {
    ring: Ring,
    gens: Vec<Elem>,
    members: Vec<u32>,
}

impl MultSet {
    /// Saturates `{1} ∪ gens` under multiplication in a finite ring.
    pub fn generated(ring: &Ring, gens: &[Elem]) -> Result<MultSet> {
        for g in gens {
            ring.check(g)?;
        }
        let n = ring.size()?;
        let mut inside = vec![false; n];
        let one = ring.one_i();
        let mut members = vec![one];
        inside[one as usize] = true;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for g in gens {
                let y = ring.mul_i(x, g.idx());
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        // 1 first, then ascending
        members[1..].sort_unstable();
        Ok(MultSet {
            ring: ring.clone(),
            gens: gens.to_vec(),
            members,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.contains(&x)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .members
            .iter()
            .map(|&x| self.ring.fmt_elem(&Elem::Fin(x)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Debug)]
struct LocData {
    model: Ring,
    model_cl: ClosureRef,
    s: Vec<u32>,
    s_index: HashMap<u32, usize>,
    /// class of pair `a * |S| + k` for `(a, s_k)`
    class_of: Vec<u32>,
    /// pair indices per class, canonical representative first
    classes: Vec<Vec<usize>>,
    ring: Ring,
    pull_cache: Mutex<HashMap<(Vec<u64>, usize), Subset>>,
}

impl LocData {
    fn pair(&self, p: usize) -> (u32, u32) {
        let k = self.s.len();
        ((p / k) as u32, self.s[p % k])
    }

    fn class(&self, a: u32, s: u32) -> u32 {
        self.class_of[a as usize * self.s.len() + self.s_index[&s]]
    }

    /// `cl_R({x : x/s ∈ A})`.
    fn pulled(&self, a: &ElemSet, sk: usize) -> Result<Subset> {
        let key = (a.iter().map(|i| i as u64).collect::<Vec<_>>(), sk);
        if let Some(v) = self.pull_cache.lock().expect("cache").get(&key) {
            return Ok(v.clone());
        }
        let n = self.model.size()?;
        let s = self.s[sk];
        let xs = ElemSet::from_indices(
            n,
            (0..n as u32)
                .filter(|&x| a.contains(self.class(x, s) as usize))
                .map(|x| x as usize),
        );
        let c = closure_set(self.model_cl.as_ref(), &Subset::Finite(xs))?;
        self.pull_cache
            .lock()
            .expect("cache")
            .insert(key, c.clone());
        Ok(c)
    }

    /// Membership of the pair `p` in `cl_S(A)` through that representative.
    fn member_via(&self, a: &ElemSet, p: usize) -> Result<bool> {
        let (x, _) = self.pair(p);
        let c = self.pulled(a, p % self.s.len())?;
        Ok(self
            .s
            .iter()
            .any(|&u| c.contains(&self.model, &Elem::Fin(self.model.mul_i(u, x)))))
    }
}

/// The transferred closure on `S⁻¹R`.
#[derive(Debug, Clone)]
pub struct LocalClosure {
    data: Arc<LocData>,
}

impl Closure for LocalClosure {
    fn ring(&self) -> &Ring {
        &self.data.ring
    }

    fn eval(&self, a: &Subset) -> Result<Subset> {
        let a = a.as_finite()?;
        let d = &self.data;
        let mut out = ElemSet::empty(d.classes.len());
        for (c, members) in d.classes.iter().enumerate() {
            if d.member_via(a, members[0])? {
                out.insert(c);
            }
        }
        Ok(Subset::Finite(out))
    }

    fn describe(&self) -> String {
        format!("transferred({})", self.data.model_cl.describe())
    }
}

#[derive(Debug, Clone)]
pub struct Localization {
    base_cl: ClosureRef,
    data: Arc<LocData>,
    mult: MultSet,
    iota: Hom,
    /// ℤ → ℤ/m when the base ring is ℤ.
    reduce: Option<Hom>,
    pub checks: Vec<Verdict>,
}

/// Builds `S⁻¹R` for a finite ring, or for ℤ with a modular closure.
pub fn localize(cl: ClosureRef, gens: &[Elem]) -> Result<Localization> {
    let ring = cl.ring().clone();
    let (model_cl, reduce): (ClosureRef, Option<Hom>) = if ring.is_finite() {
        (cl.clone(), None)
    } else if ring.is_integers() {
        let m = cl
            .spec()
            .and_then(|s| s.modulus())
            .and_then(|m| m.to_u64())
            .filter(|&m| m >= 2)
            .ok_or_else(|| {
                Error::Unsupported("localization on Z needs shift:J=m with m >= 2".into())
            })?;
        let zm = Ring::residue(m)?;
        (
            Arc::new(ClosureSpec::generated(&zm)),
            Some(Hom::from_integers(&zm)?),
        )
    } else {
        return Err(Error::Unsupported(format!("localization of {ring}")));
    };
    let model = model_cl.ring().clone();
    let model_gens: Vec<Elem> = match &reduce {
        Some(h) => gens.iter().map(|g| h.apply(g)).collect(),
        None => gens.to_vec(),
    };
    let mult = MultSet::generated(&model, &model_gens)?;
    let s = mult.members().to_vec();
    let n = model.size()?;
    let k = s.len();
    let npairs = n * k;
    if npairs > PAIR_GUARD {
        return Err(Error::resource(
            "pairs (a, s)",
            PAIR_GUARD as u128,
            npairs as u128,
        ));
    }
    let c0 = closure_set(model_cl.as_ref(), &Subset::zero(&model))?;
    // ok[d]: some u in S has u·d in cl(0)
    let ok: Vec<bool> = (0..n as u32)
        .map(|d| {
            s.iter()
                .any(|&u| c0.contains(&model, &Elem::Fin(model.mul_i(u, d))))
        })
        .collect();
    let pair = |p: usize| ((p / k) as u32, s[p % k]);
    let rel = |p: usize, q: usize| {
        let ((a, s1), (b, t)) = (pair(p), pair(q));
        ok[model.sub_i(model.mul_i(a, t), model.mul_i(b, s1)) as usize]
    };
    let mut checks = Vec::new();
    let rows: Vec<ElemSet> = (0..npairs)
        .map(|p| ElemSet::from_indices(npairs, (0..npairs).filter(|&q| rel(p, q))))
        .collect();
    let render_pair = |p: usize| {
        let (a, s1) = pair(p);
        format!(
            "({}, {})",
            model.fmt_elem(&Elem::Fin(a)),
            model.fmt_elem(&Elem::Fin(s1))
        )
    };
    let mut eq_fail = None;
    for p in 0..npairs {
        if !rows[p].contains(p) {
            eq_fail = Some(format!("{} is not related to itself", render_pair(p)));
            break;
        }
        if let Some(q) = rows[p].iter().find(|&q| !rows[q].contains(p)) {
            eq_fail = Some(format!(
                "{} ~ {} but not conversely",
                render_pair(p),
                render_pair(q)
            ));
            break;
        }
        if let Some(q) = rows[p].iter().find(|&q| !rows[q].is_subset(&rows[p])) {
            eq_fail = Some(format!(
                "transitivity fails through {} and {}",
                render_pair(p),
                render_pair(q)
            ));
            break;
        }
    }
    let eq_domain = "all pairs and triples of (a, s)";
    if let Some(why) = eq_fail {
        return Err(Error::precondition(format!(
            "(a,s) ~ (b,t) is not an equivalence: {why}"
        )));
    }
    checks.push(Verdict::pass(
        "equivalence",
        (npairs * npairs) as u64,
        eq_domain,
    ));
    let mut class_of = vec![u32::MAX; npairs];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    // pairs with s = 1 come first in each class when present
    let order: Vec<usize> = (0..k)
        .flat_map(|j| (0..n).map(move |a| a * k + j))
        .collect();
    for &p in &order {
        if class_of[p] != u32::MAX {
            continue;
        }
        let c = classes.len() as u32;
        let mut members = vec![p];
        for q in rows[p].iter() {
            class_of[q] = c;
            if q != p {
                members.push(q);
            }
        }
        classes.push(members);
    }
    let nc = classes.len();
    let mut add = vec![u32::MAX; nc * nc];
    let mut mul = vec![u32::MAX; nc * nc];
    let s_index: HashMap<u32, usize> = s.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let cls = |a: u32, t: u32| class_of[a as usize * k + s_index[&t]];
    let mut wd_fail = None;
    'wd: for p in 0..npairs {
        for q in 0..npairs {
            let ((a, s1), (b, t)) = (pair(p), pair(q));
            let st = model.mul_i(s1, t);
            let sum = cls(model.add_i(model.mul_i(a, t), model.mul_i(b, s1)), st);
            let prod = cls(model.mul_i(a, b), st);
            let slot = class_of[p] as usize * nc + class_of[q] as usize;
            for (tab, v, op) in [(&mut add, sum, "+"), (&mut mul, prod, "·")] {
                if tab[slot] == u32::MAX {
                    tab[slot] = v;
                } else if tab[slot] != v {
                    wd_fail = Some(format!(
                        "{} {op} {} depends on representatives",
                        render_pair(p),
                        render_pair(q)
                    ));
                    break 'wd;
                }
            }
        }
    }
    if let Some(why) = wd_fail {
        return Err(Error::precondition(format!(
            "localized operations are not well-defined: {why}"
        )));
    }
    checks.push(Verdict::pass(
        "well-defined",
        (npairs * npairs) as u64,
        "all representative pairs",
    ));
    let labels: Vec<String> = classes
        .iter()
        .map(|c| {
            let (a, s1) = pair(c[0]);
            if s1 == model.one_i() {
                model.fmt_elem(&Elem::Fin(a))
            } else {
                format!(
                    "{}/{}",
                    model.fmt_elem(&Elem::Fin(a)),
                    model.fmt_elem(&Elem::Fin(s1))
                )
            }
        })
        .collect();
    let one = model.one_i();
    let lring = Ring::from_table(TableRing {
        name: format!("S^-1({model})"),
        labels,
        add,
        mul,
        zero: cls(model.zero_i(), one),
        one: cls(one, one),
    })
    .map_err(|e| Error::precondition(format!("localized ring fails the ring axioms: {e}")))?;
    checks.push(Verdict::pass(
        "ring-axioms",
        (nc * nc * nc) as u64,
        "all class triples",
    ));
    let iota = match &reduce {
        Some(_) => Hom::from_integers(&lring)?,
        None => Hom::from_table(
            &model,
            &lring,
            (0..n as u32).map(|a| Elem::Fin(cls(a, one))).collect(),
        )?,
    };
    let data = Arc::new(LocData {
        model,
        model_cl,
        s,
        s_index,
        class_of,
        classes,
        ring: lring,
        pull_cache: Mutex::new(HashMap::new()),
    });
    Ok(Localization {
        base_cl: cl,
        data,
        mult,
        iota,
        reduce,
        checks,
    })
}

impl Localization {
    pub fn ring(&self) -> &Ring {
        &self.data.ring
    }

    pub fn base(&self) -> &Ring {
        self.base_cl.ring()
    }

    pub fn base_closure(&self) -> &ClosureRef {
        &self.base_cl
    }

    pub fn closure(&self) -> LocalClosure {
        LocalClosure {
            data: self.data.clone(),
        }
    }

    pub fn closure_ref(&self) -> ClosureRef {
        Arc::new(self.closure())
    }

    pub fn iota(&self) -> &Hom {
        &self.iota
    }

    pub fn mult_set(&self) -> &MultSet {
        &self.mult
    }

    pub fn class_count(&self) -> usize {
        self.data.classes.len()
    }

    /// Each class with its member pairs rendered as `a/s`.
    pub fn class_table(&self) -> Vec<(String, Vec<String>)> {
        let d = &self.data;
        d.classes
            .iter()
            .enumerate()
            .map(|(c, ps)| {
                let label = d.ring.fmt_elem(&Elem::Fin(c as u32));
                let members = ps
                    .iter()
                    .map(|&p| {
                        let (a, s) = d.pair(p);
                        format!(
                            "{}/{}",
                            d.model.fmt_elem(&Elem::Fin(a)),
                            d.model.fmt_elem(&Elem::Fin(s))
                        )
                    })
                    .collect();
                (label, members)
            })
            .collect()
    }

    /// The class of `a/s`, with `a` and `s` in the base ring.
    pub fn fraction(&self, a: &Elem, s: &Elem) -> Result<Elem> {
        let (a, s) = match &self.reduce {
            Some(h) => (h.apply(a), h.apply(s)),
            None => (a.clone(), s.clone()),
        };
        if !self.data.s_index.contains_key(&s.idx()) {
            return Err(Error::precondition(format!(
                "{} is not in S",
                self.data.model.fmt_elem(&s)
            )));
        }
        Ok(Elem::Fin(self.data.class(a.idx(), s.idx())))
    }

    fn to_model(&self, p: &Subset) -> Result<Vec<u32>> {
        Ok(match &self.reduce {
            Some(h) => h.image(p)?.elements()?.iter().map(Elem::idx).collect(),
            None => p.elements()?.iter().map(Elem::idx).collect(),
        })
    }

    /// `P ∩ S ≠ ∅`. On ℤ this is exact when the generator of `P` divides `m`.
    pub fn meets_s(&self, p: &Subset) -> Result<bool> {
        Ok(self.to_model(p)?.iter().any(|&x| self.mult.contains(x)))
    }

    /// `P^e = {a/s : a ∈ P, s ∈ S}`.
    pub fn extend(&self, p: &Subset) -> Result<Subset> {
        let d = &self.data;
        let idx: Vec<usize> = self
            .to_model(p)?
            .iter()
            .flat_map(|&a| d.s.iter().map(move |&s| (a, s)))
            .map(|(a, s)| d.class(a, s) as usize)
            .collect();
        Ok(Subset::Finite(ElemSet::from_indices(d.classes.len(), idx)))
    }

    /// `p^c = ι⁻¹(p)`.
    pub fn contract(&self, p: &Subset) -> Result<Subset> {
        self.iota.preimage(p)
    }

    pub fn render(&self, s: &Subset) -> String {
        render_subset(self.ring(), s)
    }

    pub fn render_base(&self, s: &Subset) -> String {
        render_subset(self.base(), s)
    }
}

/// Axioms C1–C4b for the transferred closure.
pub fn check_transfer_axioms(loc: &Localization, mode: Mode) -> Result<AxiomReport> {
    check_axioms(&loc.closure(), mode)
}

/// Whether `cl_S(A)` is independent of the representative used in its definition.
pub fn check_representative_independence(loc: &Localization) -> Result<Verdict> {
    const NAME: &str = "representative-independence";
    let d = &loc.data;
    let nc = d.classes.len();
    let sets: Vec<u64> = if nc <= 12 {
        (0..1u64 << nc).collect()
    } else {
        crate::ideal::enumerate_subgroups(&d.ring, crate::ideal::SUBGROUP_GUARD)?
            .iter()
            .map(|s| s.as_finite().map(ElemSet::to_mask))
            .collect::<Result<_>>()?
    };
    let domain = if nc <= 12 {
        "all subsets of classes"
    } else {
        "subgroups of the localized ring"
    };
    let mut checked = 0;
    for mask in sets {
        let a = ElemSet::from_mask(nc, mask);
        for (c, members) in d.classes.iter().enumerate() {
            checked += 1;
            let first = d.member_via(&a, members[0])?;
            for &p in &members[1..] {
                if d.member_via(&a, p)? != first {
                    let (x, s) = d.pair(p);
                    let ce = Counterexample::note(
                        NAME,
                        format!(
                            "membership of class {} in cl_S(A) changes with representative {}/{}",
                            d.ring.fmt_elem(&Elem::Fin(c as u32)),
                            d.model.fmt_elem(&Elem::Fin(x)),
                            d.model.fmt_elem(&Elem::Fin(s))
                        ),
                    )
                    .with_set("A", Subset::Finite(a.clone()).render(&d.ring));
                    return Ok(Verdict::from_check(NAME, checked, domain, Some(ce)));
                }
            }
        }
    }
    Ok(Verdict::pass(NAME, checked, domain))
}

/// `ι` is image-morphic and preimage-continuous.
pub fn check_iota_functorial(loc: &Localization) -> Result<Vec<Verdict>> {
    let opts = FunctorOptions::default();
    let lc = loc.closure();
    Ok(vec![
        is_phi_image_morphic(&loc.iota, loc.base_cl.as_ref(), &lc, &opts)?,
        is_phi_preimage_continuous(&loc.iota, loc.base_cl.as_ref(), &lc, &opts)?,
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionPair {
    pub base: String,
    pub local: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub pairs: Vec<BijectionPair>,
    pub meeting_s: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl BijectionReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }
}

/// The extension–contraction correspondence between primes missing `S` and
/// primes of `S⁻¹R`.
pub fn check_ext_contr_bijection(loc: &Localization) -> Result<BijectionReport> {
    let base = loc.base().clone();
    let spec_r = spectrum(loc.base_cl.clone())?;
    let spec_l = spectrum(loc.closure_ref())?;
    let lring = loc.ring().clone();
    let mut avoiding = Vec::new();
    let mut meeting = Vec::new();
    for p in spec_r.primes() {
        if loc.meets_s(p)? {
            meeting.push(loc.render_base(p));
        } else {
            avoiding.push(p.clone());
        }
    }
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    let mut images = Vec::new();
    let mut fail = None;
    for p in &avoiding {
        let e = loc.extend(p)?;
        let back = loc.contract(&e)?;
        pairs.push(BijectionPair {
            base: loc.render_base(p),
            local: loc.render(&e),
        });
        if spec_l.index_of(&e).is_none() {
            fail = fail.or(Some(format!(
                "{}^e = {} is not a prime of the localization",
                loc.render_base(p),
                loc.render(&e)
            )));
        }
        if !back.set_eq(&base, p)? {
            fail = fail.or(Some(format!(
                "({})^ec = {}",
                loc.render_base(p),
                loc.render_base(&back)
            )));
        }
        images.push(e);
    }
    verdicts.push(Verdict::from_check(
        "extension",
        avoiding.len() as u64,
        "primes of R missing S",
        fail.map(|d| Counterexample::note("extension", d)),
    ));
    let mut fail = None;
    for q in spec_l.primes() {
        let c = loc.contract(q)?;
        let back = loc.extend(&c)?;
        if !avoiding
            .iter()
            .any(|p| p.set_eq(&base, &c).unwrap_or(false))
        {
            fail = fail.or(Some(format!(
                "{}^c = {} is not a prime missing S",
                loc.render(q),
                loc.render_base(&c)
            )));
        }
        if !back.set_eq(&lring, q)? {
            fail = fail.or(Some(format!(
                "({})^ce = {}",
                loc.render(q),
                loc.render(&back)
            )));
        }
    }
    verdicts.push(Verdict::from_check(
        "contraction",
        spec_l.len() as u64,
        "primes of the localization",
        fail.map(|d| Counterexample::note("contraction", d)),
    ));
    let mut order_fail = None;
    for (i, p) in avoiding.iter().enumerate() {
        for (j, q) in avoiding.iter().enumerate() {
            let before = p.is_subset(&base, q)?;
            let after = images[i].is_subset(&lring, &images[j])?;
            if before != after {
                order_fail = Some(format!(
                    "inclusion of {} in {} is not preserved",
                    loc.render_base(p),
                    loc.render_base(q)
                ));
            }
        }
    }
    let count_ok = avoiding.len() == spec_l.len();
    let detail = order_fail.or((!count_ok).then(|| {
        format!(
            "{} primes miss S but the localization has {}",
            avoiding.len(),
            spec_l.len()
        )
    }));
    verdicts.push(Verdict::from_check(
        "order-bijection",
        (avoiding.len() * avoiding.len()) as u64,
        "pairs of primes missing S",
        detail.map(|d| Counterexample::note("order-bijection", d)),
    ));
    Ok(BijectionReport {
        pairs,
        meeting_s: meeting,
        verdicts,
    })
}

/// `rad_Φ(I) = {g : gⁿ ∈ cl(I) for some n}` with the largest exponent needed.
pub fn radical(cl: &dyn Closure, i: &Subset) -> Result<(Subset, u64)> {
    let ring = cl.ring();
    let c = closure_set(cl, i)?;
    if ring.is_finite() {
        let n = ring.size()?;
        let mut out = ElemSet::empty(n);
        let mut max_exp = 0;
        for g in 0..n as u32 {
            // walk g, g², … until the sequence repeats
            let mut seen = HashMap::new();
            let mut x = g;
            let mut e = 1u64;
            while !seen.contains_key(&x) {
                if c.contains(ring, &Elem::Fin(x)) {
                    out.insert(g as usize);
                    max_exp = max_exp.max(e);
                    break;
                }
                seen.insert(x, e);
                x = ring.mul_i(x, g);
                e += 1;
            }
        }
        if max_exp > n as u64 {
            return Err(Error::precondition("exponent bound |R| exceeded"));
        }
        return Ok((Subset::Finite(out), max_exp));
    }
    if ring.is_integers() {
        let g =
            int_gen(&c).ok_or_else(|| Error::Unsupported("cl(I) is not a subgroup of Z".into()))?;
        if g == 0 {
            return Ok((Subset::Int(IntSet::multiples(&BigUint::from(0u32))), 1));
        }
        // residues x mod g with some power divisible by g
        let mut res = Vec::new();
        let mut max_exp = 0;
        for x in 0..g {
            let mut y = x % g;
            for e in 1..=g.max(1) {
                if y == 0 {
                    res.push(BigInt::from(x));
                    max_exp = max_exp.max(e);
                    break;
                }
                y = ((y as u128 * x as u128) % g as u128) as u64;
            }
        }
        return Ok((
            Subset::Int(IntSet::periodic(BigUint::from(g), res)?),
            max_exp,
        ));
    }
    Err(Error::Unsupported(format!("radicals on {ring}")))
}

/// `Prim_Φ(R) = ∩ Spec_Φ(R)`.
pub fn prime_radical(spec: &Spectrum) -> Result<Subset> {
    let ring = spec.ring();
    let mut acc = if ring.is_integers() {
        Subset::Int(IntSet::all())
    } else {
        Subset::full(ring)
    };
    for p in spec.primes() {
        acc = acc.intersection(ring, p)?;
    }
    Ok(acc)
}

/// `rad_Φ(0) = ∩ Spec_Φ(R)`.
pub fn check_rad_eq_nil(cl: ClosureRef) -> Result<Verdict> {
    const NAME: &str = "radical-equals-nilradical";
    let ring = cl.ring().clone();
    let (nil, exp) = radical(cl.as_ref(), &Subset::zero(&ring))?;
    let spec = spectrum(cl)?;
    let prim = prime_radical(&spec)?;
    let domain = format!(
        "rad(0) = {}, intersection of {} primes = {}, exponents up to {exp}",
        render_subset(&ring, &nil),
        spec.len(),
        render_subset(&ring, &prim)
    );
    if nil.set_eq(&ring, &prim)? {
        Ok(Verdict::pass(NAME, 1, domain))
    } else {
        let ce = Counterexample::note(
            NAME,
            "the approximate nilradical differs from the prime radical",
        )
        .with_set("rad(0)", render_subset(&ring, &nil))
        .with_set("Prim", render_subset(&ring, &prim));
        Ok(Verdict::from_check(NAME, 1, domain, Some(ce)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::int_principal;

    fn z_mod(m: u64) -> ClosureRef {
        Arc::new(ClosureSpec::modular(m))
    }

    #[test]
    fn integers_mod_30_at_two() {
        let loc = localize(z_mod(30), &[Elem::int(2)]).unwrap();
        assert_eq!(loc.class_count(), 15);
        // 2 is a unit
        let two = loc.iota().apply(&Elem::int(2));
        let inv = loc.fraction(&Elem::int(1), &Elem::int(2)).unwrap();
        assert_eq!(loc.ring().mul(&two, &inv), loc.ring().one());
        let p3 = loc.extend(&int_principal(3)).unwrap();
        assert_eq!(int_gen(&loc.contract(&p3).unwrap()), Some(3));
        assert!(loc.extend(&int_principal(2)).unwrap().is_full());
        let b = check_ext_contr_bijection(&loc).unwrap();
        assert!(b.all_pass(), "{b:?}");
        let bases: Vec<&str> = b.pairs.iter().map(|p| p.base.as_str()).collect();
        assert_eq!(bases, vec!["(3)", "(5)"]);
        assert!(check_iota_functorial(&loc)
            .unwrap()
            .iter()
            .all(|v| v.verdict));
        assert!(check_representative_independence(&loc).unwrap().verdict);
    }

    #[test]
    fn unit_localization_is_a_copy() {
        let r = Ring::residue(12).unwrap();
        let cl: ClosureRef = Arc::new(ClosureSpec::generated(&r));
        let loc = localize(cl.clone(), &[Elem::Fin(5)]).unwrap();
        assert_eq!(loc.class_count(), 12);
        assert!(check_transfer_axioms(&loc, Mode::Exhaustive)
            .unwrap()
            .all_pass());
        let b = check_ext_contr_bijection(&loc).unwrap();
        assert_eq!(b.pairs.len(), 2);
        let loc3 = localize(cl, &[Elem::Fin(3)]).unwrap();
        let b = check_ext_contr_bijection(&loc3).unwrap();
        assert!(b.all_pass());
        assert_eq!(b.pairs.len(), 1);
        assert_eq!(b.pairs[0].base, "(2)");
    }

    #[test]
    fn trivial_mult_set() {
        let r = Ring::residue(12).unwrap();
        let cl: ClosureRef = Arc::new(ClosureSpec::parse(&r, "shift:J=6").unwrap());
        let loc = localize(cl, &[]).unwrap();
        assert_eq!(loc.class_count(), 6);
    }

    #[test]
    fn radicals() {
        let (nil, _) = radical(&ClosureSpec::modular(12), &int_principal(0)).unwrap();
        assert_eq!(int_gen(&nil), Some(6));
        assert!(check_rad_eq_nil(z_mod(12)).unwrap().verdict);
        for n in [12u64, 5, 8] {
            let r = Ring::residue(n).unwrap();
            let v = check_rad_eq_nil(Arc::new(ClosureSpec::generated(&r))).unwrap();
            assert!(v.verdict, "{v:?}");
        }
        let r = Ring::residue(12).unwrap();
        let (nil, _) = radical(&ClosureSpec::generated(&r), &Subset::zero(&r)).unwrap();
        assert_eq!(render_subset(&r, &nil), "(6)");
    }
}
