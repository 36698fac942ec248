//! Varieties, vanishing ideals and the approximate Nullstellensatz schema on
//! finite function rings `𝔽ₚ[x₁..xₙ]/(xᵢᵖ − xᵢ)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::closure::axioms::{Counterexample, Verdict};
use crate::closure::tolerance::{TolPoint, ToleranceClosure};
use crate::closure::{closure_set, Closure, ClosureSpec};
use crate::error::{Error, Result};
use crate::fun;
use crate::ideal::{enumerate_ideals, render_subset, span_ideal, IdealRep};
use crate::ideal_theory::is_approx_prime;
use crate::localization::radical;
use crate::ring::poly::IntPoly;
use crate::ring::{Elem, Ring, Subset};

/// `V(I)` as sorted point indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Variety {
    pub points: Vec<usize>,
}

/// `V(I)` from the generators, checked against the zeros of every element of `I`.
pub fn variety(ring: &Ring, gens: &[Elem]) -> Result<Variety> {
    let from_gens = fun::zeros(ring, gens)?;
    let ideal = span_ideal(ring, &Subset::from_elems(ring, gens))?;
    let from_ideal = fun::zeros(ring, &ideal.elements()?)?;
    if from_gens != from_ideal {
        return Err(Error::precondition(
            "zeros of the generators differ from zeros of the ideal",
        ));
    }
    Ok(Variety { points: from_gens })
}

/// `I(W)`: all functions vanishing on `W`.
pub fn vanishing_ideal(ring: &Ring, points: &[usize]) -> Result<Subset> {
    fun::vanishing(ring, points)
}

/// `rad_Φ(I)` with the largest exponent used.
pub fn rad_phi(cl: &dyn Closure, i: &Subset) -> Result<(Subset, u64)> {
    radical(cl, i)
}

/// The point ideal `𝔪ₐ = ⟨x₁ − a₁, …⟩`.
pub fn point_ideal(ring: &Ring, point: usize) -> Result<Subset> {
    let gens = fun::point_ideal_gens(ring, point)?;
    span_ideal(ring, &Subset::from_elems(ring, &gens))
}

/// Every ideal of the function ring, as canonical sets.
pub fn all_ideals(ring: &Ring) -> Result<Vec<Subset>> {
    fun::space(ring)?;
    Ok(enumerate_ideals(ring, ring.size()?)?
        .into_iter()
        .map(|i: IdealRep| i.canonical().clone())
        .collect())
}

/// ESEP: `f` vanishing on `V(I)` implies `f ∈ rad_Φ(I)`, for each ideal given.
pub fn check_esep(cl: &dyn Closure, family: &[Subset]) -> Result<Verdict> {
    const NAME: &str = "ESEP";
    let ring = cl.ring();
    let mut checked = 0;
    for i in family {
        let v = fun::zeros(ring, &i.elements()?)?;
        let iv = vanishing_ideal(ring, &v)?;
        let (rad, _) = rad_phi(cl, i)?;
        for f in iv.elements()? {
            checked += 1;
            if !rad.contains(ring, &f) {
                let ce = Counterexample::note(
                    NAME,
                    "f vanishes on V(I) but no power of f lies in cl(I)",
                )
                .with_set("I", render_subset(ring, i))
                .with_witness(ring.fmt_elem(&f));
                return Ok(Verdict::from_check(NAME, checked, "ideal family", Some(ce)));
            }
        }
    }
    Ok(Verdict::pass(
        NAME,
        checked,
        format!("{} ideals", family.len()),
    ))
}

/// PP: every `𝔪ₐ` is closed and approximately prime.
pub fn check_pp(cl: &dyn Closure) -> Result<Verdict> {
    const NAME: &str = "PP";
    let ring = cl.ring();
    let sp = fun::space(ring)?;
    for a in 0..sp.npoints {
        let m = point_ideal(ring, a)?;
        let c = closure_set(cl, &m)?;
        let fail = if !c.set_eq(ring, &m)? {
            Some("m_a is not closed".to_string())
        } else {
            let v = is_approx_prime(cl, &m)?;
            (!v.verdict).then(|| {
                format!(
                    "m_a is not approximately prime: {}",
                    v.counterexample.map(|c| c.detail).unwrap_or_default()
                )
            })
        };
        if let Some(detail) = fail {
            let ce = Counterexample::note(NAME, detail)
                .with_set("point", fun::render_point(ring, a))
                .with_set("cl(m_a)", render_subset(ring, &c));
            return Ok(Verdict::from_check(
                NAME,
                a as u64 + 1,
                "all points",
                Some(ce),
            ));
        }
    }
    Ok(Verdict::pass(NAME, sp.npoints as u64, "all points"))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnsRow {
    pub ideal: String,
    pub variety: String,
    pub radical: String,
    pub vanishing: String,
    pub exponent: u64,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnsReport {
    pub closure: String,
    pub esep: Verdict,
    pub pp: Verdict,
    pub rows: Vec<AnsRow>,
    pub verdict: Verdict,
}

fn ans_rows(cl: &dyn Closure, family: &[Subset]) -> Result<Vec<AnsRow>> {
    let ring = cl.ring();
    family
        .iter()
        .map(|i| {
            let v = fun::zeros(ring, &i.elements()?)?;
            let iv = vanishing_ideal(ring, &v)?;
            let (rad, exponent) = rad_phi(cl, i)?;
            Ok(AnsRow {
                ideal: render_subset(ring, i),
                variety: fun::render_points(ring, &v),
                radical: render_subset(ring, &rad),
                vanishing: render_subset(ring, &iv),
                exponent,
                equal: rad.set_eq(ring, &iv)?,
            })
        })
        .collect()
}

/// `rad_Φ(I) = I(V(I))` on the family, once ESEP and PP are verified.
pub fn check_ans(cl: &dyn Closure, family: &[Subset]) -> Result<AnsReport> {
    let esep = check_esep(cl, family)?;
    let pp = check_pp(cl)?;
    for (name, v) in [("ESEP", &esep), ("PP", &pp)] {
        if !v.verdict {
            let why = v
                .counterexample
                .as_ref()
                .map(|c| c.detail.clone())
                .unwrap_or_default();
            return Err(Error::HypothesisNotEstablished(format!(
                "{name} fails for {}: {why}",
                cl.describe()
            )));
        }
    }
    let rows = ans_rows(cl, family)?;
    let bad = rows.iter().find(|r| !r.equal);
    let verdict = Verdict::from_check(
        "rad-equals-vanishing",
        rows.len() as u64,
        format!("{} ideals", rows.len()),
        bad.map(|r| {
            Counterexample::note("rad-equals-vanishing", "rad_Φ(I) differs from I(V(I))")
                .with_set("I", r.ideal.clone())
                .with_set("rad", r.radical.clone())
                .with_set("I(V(I))", r.vanishing.clone())
        }),
    );
    Ok(AnsReport {
        closure: cl.describe(),
        esep,
        pp,
        rows,
        verdict,
    })
}

/// `W ⊆ V(I) ⇔ I ⊆ I(W)` for every ideal and point set, and `V(I(V(I))) = V(I)`.
pub fn check_galois(ring: &Ring) -> Result<Verdict> {
    const NAME: &str = "galois-connection";
    let sp = fun::space(ring)?;
    if sp.npoints > 12 {
        return Err(Error::resource(
            "points for the Galois check",
            12u128,
            sp.npoints as u128,
        ));
    }
    let ideals = all_ideals(ring)?;
    let mut checked = 0;
    for i in &ideals {
        let v = fun::zeros(ring, &i.elements()?)?;
        let back = fun::zeros(ring, &vanishing_ideal(ring, &v)?.elements()?)?;
        if back != v {
            let ce = Counterexample::note(NAME, "V(I(V(I))) differs from V(I)")
                .with_set("I", render_subset(ring, i));
            return Ok(Verdict::from_check(
                NAME,
                checked,
                "all ideals and point sets",
                Some(ce),
            ));
        }
        for mask in 0u64..1 << sp.npoints {
            checked += 1;
            let w: Vec<usize> = (0..sp.npoints).filter(|&j| mask >> j & 1 == 1).collect();
            let lhs = w.iter().all(|j| v.binary_search(j).is_ok());
            let rhs = i.is_subset(ring, &vanishing_ideal(ring, &w)?)?;
            if lhs != rhs {
                let ce = Counterexample::note(NAME, "W ⊆ V(I) and I ⊆ I(W) disagree")
                    .with_set("I", render_subset(ring, i))
                    .with_set("W", fun::render_points(ring, &w));
                return Ok(Verdict::from_check(
                    NAME,
                    checked,
                    "all ideals and point sets",
                    Some(ce),
                ));
            }
        }
    }
    Ok(Verdict::pass(NAME, checked, "all ideals and point sets"))
}

#[derive(Debug, Clone, Serialize)]
pub struct EsepFinding {
    pub closure: String,
    pub esep: bool,
    pub pp: bool,
    /// First ideal with `rad_Φ(I) ⊄ I(V(I))`.
    pub reverse_fails_at: Option<String>,
}

/// Closures on a function ring with ESEP but without PP, and whether
/// `rad_Φ(I) ⊆ I(V(I))` fails for some ideal.
pub fn search_esep_without_pp(ring: &Ring) -> Result<Vec<EsepFinding>> {
    let family = all_ideals(ring)?;
    let mut candidates: Vec<ClosureSpec> =
        vec![ClosureSpec::generated(ring), ClosureSpec::pointwise(ring)?];
    for j in &family {
        let rep = IdealRep::from_canonical(ring, j.clone())?;
        candidates.push(ClosureSpec::ideal_shift(rep.clone()));
        candidates.push(ClosureSpec::set_shift(rep));
    }
    let sp = fun::space(ring)?;
    for j in 0..sp.npoints {
        candidates.push(ClosureSpec::sampling(ring, vec![vec![j]])?);
    }
    let mut out = Vec::new();
    for cl in candidates {
        let esep = check_esep(&cl, &family)?.verdict;
        let pp = check_pp(&cl)?.verdict;
        if !esep || pp {
            continue;
        }
        let mut reverse = None;
        for i in &family {
            let v = fun::zeros(ring, &i.elements()?)?;
            let (rad, _) = rad_phi(&cl, i)?;
            if !rad.is_subset(ring, &vanishing_ideal(ring, &v)?)? {
                reverse = Some(render_subset(ring, i));
                break;
            }
        }
        out.push(EsepFinding {
            closure: cl.describe(),
            esep,
            pp,
            reverse_fails_at: reverse,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BalancedGrid {
    pub cases: usize,
    /// Cases where `f ∈ cl_τ(I)`, so the implication is not vacuous.
    pub active: usize,
    pub verdict: Verdict,
}

/// The balanced rule `f ∈ cl_τ(I) ⇒ r f ∈ cl_{|r|τ}(rI)` over a fixed grid of
/// polynomials, multipliers, ideals and tolerance configurations.
pub fn tolerance_grid() -> Result<BalancedGrid> {
    const NAME: &str = "balanced-rule";
    let p = |s: &str| crate::ring::poly::parse_poly(s, 0);
    let fs = [
        p("x1 - x2")?,
        p("2*x1 - 2*x2 + 1")?,
        p("x1^2 - x2^2")?,
        p("x1 + x2")?,
        p("3")?,
    ];
    let rs = [p("x1")?, p("2")?, p("x1 - 1")?, p("x1*x2 + 1")?, p("0")?];
    let ideals: [Vec<IntPoly>; 2] = [vec![p("x1 - x2")?], vec![p("x1")?, p("x2^2 - 1")?]];
    let grid: Vec<Vec<BigInt>> = (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| vec![BigInt::from(a), BigInt::from(b)]))
        .collect();
    type Tau<'a> = &'a dyn Fn(&[BigInt]) -> BigRational;
    let taus: [Tau; 2] = [&|_| BigRational::new(1.into(), 2.into()), &|a| {
        BigRational::from_integer(a.iter().map(|x| x * x).sum::<BigInt>() + 1)
    }];
    let configs: Vec<ToleranceClosure> = taus
        .iter()
        .map(|tau| {
            ToleranceClosure::new(
                grid.iter()
                    .map(|a| TolPoint {
                        point: a.clone(),
                        tau: tau(a),
                    })
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    let mut cases = 0;
    let mut active = 0;
    for cl in &configs {
        for gens in &ideals {
            for f in &fs {
                for r in &rs {
                    cases += 1;
                    if !cl.member(f, gens) {
                        continue;
                    }
                    active += 1;
                    let rgens: Vec<IntPoly> = gens.iter().map(|g| r.mul(g)).collect();
                    if !cl.scaled(r).member(&r.mul(f), &rgens) {
                        let ce = Counterexample::note(NAME, "r·f lies outside cl_{|r|τ}(rI)")
                            .with_set("f", f.to_string())
                            .with_set("r", r.to_string());
                        return Ok(BalancedGrid {
                            cases,
                            active,
                            verdict: Verdict::from_check(
                                NAME,
                                cases as u64,
                                "tolerance grid",
                                Some(ce),
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(BalancedGrid {
        cases,
        active,
        verdict: Verdict::pass(NAME, cases as u64, "tolerance grid"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::grammar::parse_ring;

    fn fun22() -> Ring {
        parse_ring("Fun:p=2,n=2").unwrap()
    }

    #[test]
    fn varieties() {
        let r = fun22();
        let f = r.parse_elem("x1*x2").unwrap();
        let v = variety(&r, &[f]).unwrap();
        assert_eq!(fun::render_points(&r, &v.points), "{(0,0), (0,1), (1,0)}");
        assert!(vanishing_ideal(&r, &[]).unwrap().is_full());
        assert_eq!(vanishing_ideal(&r, &[0, 1, 2, 3]).unwrap().count(), Some(1));
    }

    #[test]
    fn pointwise_schema() {
        let r = fun22();
        let cl = ClosureSpec::pointwise(&r).unwrap();
        let fam = all_ideals(&r).unwrap();
        assert_eq!(fam.len(), 16);
        let rep = check_ans(&cl, &fam).unwrap();
        assert!(rep.verdict.verdict, "{rep:?}");
        assert!(rep.rows.iter().all(|row| row.exponent <= 1));
        let r1 = parse_ring("Fun:p=2,n=1").unwrap();
        let c1 = ClosureSpec::pointwise(&r1).unwrap();
        assert!(
            check_ans(&c1, &all_ideals(&r1).unwrap())
                .unwrap()
                .verdict
                .verdict
        );
    }

    #[test]
    fn sampling_covering_everything() {
        let r = fun22();
        let cl = ClosureSpec::sampling(&r, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(check_esep(&cl, &all_ideals(&r).unwrap()).unwrap().verdict);
    }

    #[test]
    fn whole_shift_breaks_pp() {
        let r = fun22();
        let cl = ClosureSpec::parse(&r, "setshift:J=1").unwrap();
        assert!(!check_pp(&cl).unwrap().verdict);
        assert!(matches!(
            check_ans(&cl, &all_ideals(&r).unwrap()),
            Err(Error::HypothesisNotEstablished(_))
        ));
    }

    #[test]
    fn galois() {
        assert!(check_galois(&fun22()).unwrap().verdict);
    }

    #[test]
    fn remark_search_finds_reverse_failures() {
        let r = parse_ring("Fun:p=2,n=1").unwrap();
        let found = search_esep_without_pp(&r).unwrap();
        assert!(found.iter().any(|f| f.reverse_fails_at.is_some()));
    }

    #[test]
    fn balanced_grid() {
        let g = tolerance_grid().unwrap();
        assert_eq!(g.cases, 100);
        assert!(g.active > 0);
        assert!(g.verdict.verdict, "{g:?}");
    }
}
