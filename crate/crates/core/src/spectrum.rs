//! The approximate prime spectrum and its Zariski-type topology.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closure::axioms::{Counterexample, Verdict};
use crate::closure::{closure_set, ClosureRef};
use crate::error::{Error, Result};
use crate::ideal::{enumerate_subgroups, int_principal, render_subset, span_ideal, SUBGROUP_GUARD};
use crate::ideal_theory::{
    approx_product, int_gen, int_prime_closed_form, int_prime_residue_search, is_approx_ideal,
    is_approx_prime,
};
use crate::ring::{Elem, Ring, Subset};

/// Default generator bound for bounded enumeration on ℤ.
pub const INT_SPEC_BOUND: u64 = 1000;
/// Generator bound for topology checks over ideals of ℤ.
pub const INT_TOPOLOGY_BOUND: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecMethod {
    ClosedForm,
    Exhaustive,
    /// Generators up to the bound only.
    Bounded(u64),
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    cl: ClosureRef,
    primes: Vec<Subset>,
    closures: Vec<Subset>,
    pub method: SpecMethod,
    /// Agreement of a closed form with an independent enumeration.
    pub cross_check: Option<Verdict>,
}

fn is_whole(ring: &Ring, s: &Subset) -> bool {
    s.is_full() || matches!(s, Subset::Int(i) if i.is_all()) && ring.is_integers()
}

impl Spectrum {
    pub fn ring(&self) -> &Ring {
        self.cl.ring()
    }

    pub fn closure(&self) -> &ClosureRef {
        &self.cl
    }

    pub fn primes(&self) -> &[Subset] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn render_prime(&self, i: usize) -> String {
        render_subset(self.ring(), &self.primes[i])
    }

    pub fn render_primes(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.render_prime(i)).collect()
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.primes.len()).collect()
    }

    pub fn index_of(&self, p: &Subset) -> Option<usize> {
        let ring = self.ring();
        self.primes
            .iter()
            .position(|q| q.set_eq(ring, p).unwrap_or(false))
    }

    fn cl(&self, s: &Subset) -> Result<Subset> {
        closure_set(self.cl.as_ref(), s)
    }

    /// `V(I) = {P : cl(I) ⊆ cl(P)}`, as indices into [`Spectrum::primes`].
    pub fn v_set(&self, i: &Subset) -> Result<Vec<usize>> {
        let ring = self.ring();
        let ci = self.cl(i)?;
        let mut out = Vec::new();
        for (k, cp) in self.closures.iter().enumerate() {
            if ci.is_subset(ring, cp)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// `D(f)`, the complement of `V(⟨f⟩)`.
    pub fn d_set(&self, f: &Elem) -> Result<Vec<usize>> {
        let ring = self.ring();
        let v = self.v_set(&span_ideal(
            ring,
            &Subset::from_elems(ring, std::slice::from_ref(f)),
        )?)?;
        Ok(self.all().into_iter().filter(|k| !v.contains(k)).collect())
    }

    /// The closure of `{P}`, which is `V(P)`.
    pub fn closure_of_point(&self, p: &Subset) -> Result<Vec<usize>> {
        if self.index_of(p).is_none() {
            return Err(Error::precondition(format!(
                "{} is not in the spectrum",
                render_subset(self.ring(), p)
            )));
        }
        self.v_set(p)
    }
}

/// Enumerates `Spec_Φ(R)`.
pub fn spectrum(cl: ClosureRef) -> Result<Spectrum> {
    spectrum_bounded(cl, INT_SPEC_BOUND)
}

pub fn spectrum_bounded(cl: ClosureRef, int_bound: u64) -> Result<Spectrum> {
    let ring = cl.ring().clone();
    if ring.is_finite() {
        let mut primes = Vec::new();
        for s in enumerate_subgroups(&ring, SUBGROUP_GUARD)? {
            if s.is_full() || !is_approx_ideal(cl.as_ref(), &s)?.verdict {
                continue;
            }
            if is_approx_prime(cl.as_ref(), &s)?.verdict {
                primes.push(s);
            }
        }
        return build(cl, primes, SpecMethod::Exhaustive, None);
    }
    if !ring.is_integers() {
        return Err(Error::Unsupported(format!("spectra of {ring}")));
    }
    let m = cl
        .spec()
        .and_then(|s| s.modulus())
        .ok_or_else(|| Error::Unsupported("spectra on Z need gen or shift:J=m".into()))?
        .to_u64()
        .ok_or_else(|| Error::resource("modulus", u64::MAX as u128, u128::MAX))?;
    let bound = int_bound.max(m);
    // Independent enumeration: evaluate the closure and search residues.
    let mut found = Vec::new();
    for d in 0..=bound {
        if d == 1 {
            continue;
        }
        let c = closure_set(cl.as_ref(), &int_principal(d))?;
        let g = int_gen(&c)
            .ok_or_else(|| Error::Unsupported("closure of (d) is not principal".into()))?;
        if g == 1 || (d != 0 && d % g != 0) {
            continue;
        }
        if int_prime_residue_search(d, g).is_none() {
            found.push(d);
        }
    }
    if m == 0 {
        let primes = found.iter().map(|&d| int_principal(d)).collect();
        return build(cl, primes, SpecMethod::Bounded(bound), None);
    }
    let closed: Vec<u64> = (2..=m).filter(|&p| int_prime_closed_form(p, m)).collect();
    let domain = format!("(d) with 0 <= d <= {bound}");
    let cross = if closed == found {
        Verdict::pass("closed-form-agrees", bound + 1, domain)
    } else {
        let ce = Counterexample::note(
            "closed-form-agrees",
            format!("closed form {closed:?} but enumeration found {found:?}"),
        );
        Verdict::from_check("closed-form-agrees", bound + 1, domain, Some(ce))
    };
    let primes = closed.iter().map(|&p| int_principal(p)).collect();
    build(cl, primes, SpecMethod::ClosedForm, Some(cross))
}

fn build(
    cl: ClosureRef,
    primes: Vec<Subset>,
    method: SpecMethod,
    cross_check: Option<Verdict>,
) -> Result<Spectrum> {
    let closures = primes
        .iter()
        .map(|p| closure_set(cl.as_ref(), p))
        .collect::<Result<_>>()?;
    Ok(Spectrum {
        cl,
        primes,
        closures,
        method,
        cross_check,
    })
}

/// Closed form on ℤ with the modular closure: `V((n)) = {(p) : p | m, p | n}`.
pub fn int_v_closed_form(m: u64, n: u64) -> Vec<u64> {
    (2..=m)
        .filter(|&p| int_prime_closed_form(p, m) && n.is_multiple_of(p))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyReport {
    pub verdicts: Vec<Verdict>,
    pub t0: bool,
    pub t1: bool,
    pub discrete: bool,
    pub primes_closed: bool,
    pub closed_ideals_under_primes: Option<bool>,
}

impl TopologyReport {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == name)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }
}

/// Ideals used to probe the topology laws.
fn probe_ideals(spec: &Spectrum) -> Result<(Vec<Subset>, String)> {
    let cl = spec.cl.as_ref();
    let ring = spec.ring();
    if ring.is_finite() {
        let mut out = Vec::new();
        for s in enumerate_subgroups(ring, SUBGROUP_GUARD)? {
            if is_approx_ideal(cl, &s)?.verdict {
                out.push(s);
            }
        }
        Ok((out, "approximate ideals among all subgroups".into()))
    } else {
        Ok((
            (0..=INT_TOPOLOGY_BOUND).map(int_principal).collect(),
            format!("principal (d) with d <= {INT_TOPOLOGY_BOUND}"),
        ))
    }
}

fn probe_elements(spec: &Spectrum) -> Result<Vec<Elem>> {
    let ring = spec.ring();
    if ring.is_finite() {
        return Ok(ring.elements()?.collect());
    }
    let mut out: Vec<Elem> = (0..=INT_TOPOLOGY_BOUND as i64).map(Elem::int).collect();
    for p in &spec.primes {
        if let Some(d) = int_gen(p) {
            out.push(Elem::int(d as i64));
        }
    }
    Ok(out)
}

fn law(name: &str, checked: u64, domain: &str, ce: Option<Counterexample>) -> Verdict {
    Verdict::from_check(name, checked, domain, ce)
}

/// Checks the closed-set axioms, T₀, the T₁ criterion and quasi-compactness.
pub fn topology_check(spec: &Spectrum) -> Result<TopologyReport> {
    let ring = spec.ring().clone();
    let cl = spec.cl.as_ref();
    let all = spec.all();
    let mut verdicts = Vec::new();
    let r = |i: &Subset| render_subset(&ring, i);
    let names = |v: &[usize]| format!("{{{}}}", spec.render_primes(v).join(", "));

    // V(0) and V(R)
    let v0 = spec.v_set(&Subset::zero(&ring))?;
    let whole = if ring.is_integers() {
        int_principal(1)
    } else {
        Subset::full(&ring)
    };
    let vr = spec.v_set(&whole)?;
    let ce = if v0 != all {
        Some(Counterexample::note(
            "extremes",
            format!("V(0) = {} is not the whole spectrum", names(&v0)),
        ))
    } else if !vr.is_empty() {
        Some(Counterexample::note(
            "extremes",
            format!("V(R) = {} is not empty", names(&vr)),
        ))
    } else {
        None
    };
    verdicts.push(law("extremes", 2, "V(0) and V(R)", ce));

    // intersection and union laws
    let (ideals, label) = probe_ideals(spec)?;
    let vs: Vec<Vec<usize>> = ideals
        .iter()
        .map(|i| spec.v_set(i))
        .collect::<Result<_>>()?;
    let mut inter = None;
    let mut union = None;
    let mut checked = 0u64;
    for (a, ia) in ideals.iter().enumerate() {
        for (b, ib) in ideals.iter().enumerate().skip(a) {
            checked += 1;
            if inter.is_none() {
                let sum = ia.sum(&ring, ib)?;
                let lhs: Vec<usize> = vs[a]
                    .iter()
                    .copied()
                    .filter(|k| vs[b].contains(k))
                    .collect();
                let rhs = spec.v_set(&sum)?;
                if lhs != rhs {
                    inter = Some(
                        Counterexample::note(
                            "intersection-law",
                            format!("V(I) ∩ V(J) = {} but V(I+J) = {}", names(&lhs), names(&rhs)),
                        )
                        .with_set("I", r(ia))
                        .with_set("J", r(ib)),
                    );
                }
            }
            if union.is_none() {
                let prod = approx_product(cl, ia, ib)?;
                let mut lhs: Vec<usize> = vs[a].iter().chain(&vs[b]).copied().collect();
                lhs.sort_unstable();
                lhs.dedup();
                let rhs = spec.v_set(&prod)?;
                if lhs != rhs {
                    union = Some(
                        Counterexample::note(
                            "union-law",
                            format!("V(I) ∪ V(J) = {} but V(IJ) = {}", names(&lhs), names(&rhs)),
                        )
                        .with_set("I", r(ia))
                        .with_set("J", r(ib)),
                    );
                }
            }
        }
    }
    verdicts.push(law(
        "intersection-law",
        checked,
        &format!("pairs of {label}"),
        inter,
    ));
    verdicts.push(law(
        "union-law",
        checked,
        &format!("pairs of {label}, approximate product"),
        union,
    ));

    // T0
    let elems = probe_elements(spec)?;
    let ds: Vec<Vec<usize>> = elems.iter().map(|f| spec.d_set(f)).collect::<Result<_>>()?;
    let mut t0_fail = None;
    let mut pairs = 0u64;
    for p in 0..all.len() {
        for q in p + 1..all.len() {
            pairs += 1;
            if !ds.iter().any(|d| d.contains(&p) != d.contains(&q)) {
                t0_fail = Some(
                    Counterexample::note("T0", "no basic open set separates the pair")
                        .with_set("P", spec.render_prime(p))
                        .with_set("Q", spec.render_prime(q)),
                );
                break;
            }
        }
        if t0_fail.is_some() {
            break;
        }
    }
    let t0 = t0_fail.is_none();
    verdicts.push(law(
        "T0",
        pairs,
        "all pairs of primes, basic opens D(f)",
        t0_fail,
    ));

    // T1 two ways
    let singletons_closed = all
        .iter()
        .map(|&k| Ok(spec.closure_of_point(&spec.primes[k])? == vec![k]))
        .collect::<Result<Vec<bool>>>()?;
    let t1_closed = singletons_closed.iter().all(|&b| b);
    let mut strict = None;
    for p in 0..all.len() {
        for q in 0..all.len() {
            if p != q
                && spec.primes[p].is_subset(&ring, &spec.primes[q])?
                && !spec.primes[q].is_subset(&ring, &spec.primes[p])?
            {
                strict = strict.or(Some((p, q)));
            }
        }
    }
    let t1_max = strict.is_none();
    let detail = format!(
        "singleton closures closed: {t1_closed}; no strict inclusion among primes: {t1_max}"
    );
    let ce = (t1_closed != t1_max).then(|| Counterexample::note("T1-criterion", detail.clone()));
    let mut v = law("T1-criterion", all.len() as u64, "all primes", ce);
    v.domain = format!("{}; {detail}", v.domain);
    if let Some((p, q)) = strict {
        v.domain.push_str(&format!(
            "; {} is strictly inside {}",
            spec.render_prime(p),
            spec.render_prime(q)
        ));
    }
    verdicts.push(v);

    // quasi-compactness: reduce the cover by all probed basic opens
    let covered: Vec<usize> = {
        let mut c: Vec<usize> = ds.iter().flatten().copied().collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let mut sub = Vec::new();
    if covered == all {
        let mut left: Vec<usize> = all.clone();
        while !left.is_empty() {
            let (best, _) = ds
                .iter()
                .enumerate()
                .max_by_key(|(_, d)| d.iter().filter(|k| left.contains(k)).count())
                .expect("nonempty cover");
            left.retain(|k| !ds[best].contains(k));
            sub.push(best);
        }
    }
    let qc_detail =
        if covered == all {
            format!(
            "the basic opens D(f) cover the spectrum; finite subcover of size {} by f in {{{}}}",
            sub.len(),
            sub.iter().map(|&i| ring.fmt_elem(&elems[i])).collect::<Vec<_>>().join(", ")
        )
        } else {
            "the probed basic opens do not cover the spectrum".into()
        };
    let mut v = law(
        "quasi-compact",
        elems.len() as u64,
        "cover by probed basic opens",
        None,
    );
    v.domain = format!("{}; {qc_detail}", v.domain);
    verdicts.push(v);

    // remark hypotheses, reported per instance
    let mut primes_closed = true;
    for (p, c) in spec.primes.iter().zip(&spec.closures) {
        primes_closed &= p.set_eq(&ring, c)?;
    }
    let closed_ideals_under_primes = if ring.is_finite() {
        let mut ok = true;
        for i in &ideals {
            if is_whole(&ring, i) || !closure_set(cl, i)?.set_eq(&ring, i)? {
                continue;
            }
            let mut under = false;
            for p in &spec.primes {
                under |= i.is_subset(&ring, p)?;
            }
            ok &= under;
        }
        Some(ok)
    } else {
        None
    };

    Ok(TopologyReport {
        verdicts,
        t0,
        t1: t1_closed,
        // finite and T1
        discrete: t1_closed,
        primes_closed,
        closed_ideals_under_primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::ClosureSpec;
    use std::sync::Arc;

    fn modular(m: u64) -> ClosureRef {
        Arc::new(ClosureSpec::modular(m))
    }

    fn gens(s: &Spectrum) -> Vec<u64> {
        s.primes().iter().map(|p| int_gen(p).unwrap()).collect()
    }

    #[test]
    fn modular_spectra() {
        let s = spectrum(modular(12)).unwrap();
        assert_eq!(gens(&s), vec![2, 3]);
        assert!(s.cross_check.as_ref().unwrap().verdict);
        let s = spectrum(modular(30)).unwrap();
        assert_eq!(gens(&s), vec![2, 3, 5]);
        let v = s.v_set(&int_principal(12)).unwrap();
        assert_eq!(s.render_primes(&v), vec!["(2)", "(3)"]);
        assert_eq!(
            s.render_primes(&s.d_set(&Elem::int(12)).unwrap()),
            vec!["(5)"]
        );
        assert_eq!(s.closure_of_point(&int_principal(3)).unwrap().len(), 1);
        let t = topology_check(&s).unwrap();
        assert!(t.all_pass(), "{t:?}");
        assert!(t.t1 && t.discrete);
    }

    #[test]
    fn residue_ring_spectrum() {
        let r = Ring::residue(12).unwrap();
        let s = spectrum(Arc::new(ClosureSpec::generated(&r))).unwrap();
        assert_eq!(s.render_primes(&s.all()), vec!["(3)", "(2)"]);
        let t = topology_check(&s).unwrap();
        assert!(t.all_pass());
        assert_eq!(t.verdict("union-law").unwrap().checked, 21);
    }

    #[test]
    fn classical_integers_are_not_t1() {
        let z = Ring::integers();
        let s = spectrum_bounded(Arc::new(ClosureSpec::generated(&z)), 30).unwrap();
        assert_eq!(s.render_prime(0), "(0)");
        assert_eq!(s.len(), 11);
        let t = topology_check(&s).unwrap();
        assert!(!t.t1);
        assert!(t.verdict("T1-criterion").unwrap().verdict);
        assert_eq!(
            s.closure_of_point(&int_principal(0)).unwrap().len(),
            s.len()
        );
    }
}
