//! Closure operators on subsets of a ring.

pub mod axioms;
pub mod functorial;
pub mod tolerance;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fun;
use crate::ideal::{span_ideal, IdealRep};
use crate::ring::grammar::{parse_elem_list, split_top_level};
use crate::ring::{Elem, ElemSet, Ring, Subset};

pub use axioms::{check_axioms, AxiomReport, Counterexample, Mode, Verdict};
pub use tolerance::ToleranceClosure;

/// An operator `cl` on subsets of a fixed ring.
pub trait Closure: fmt::Debug + Send + Sync {
    fn ring(&self) -> &Ring;

    /// `cl(A)` as a set. Membership-only closures return [`Error::NotSetValued`].
    fn eval(&self, a: &Subset) -> Result<Subset>;

    /// `x ∈ cl(A)`.
    fn member(&self, x: &Elem, a: &Subset) -> Result<bool> {
        Ok(self.eval(a)?.contains(self.ring(), x))
    }

    fn describe(&self) -> String;

    fn spec(&self) -> Option<&ClosureSpec> {
        None
    }
}

pub type ClosureRef = Arc<dyn Closure>;

/// `cl(A)`, enumerating members on finite rings when the closure is membership-only.
pub fn closure_set(cl: &dyn Closure, a: &Subset) -> Result<Subset> {
    match cl.eval(a) {
        Err(Error::NotSetValued(_)) if cl.ring().is_finite() => {
            let ring = cl.ring();
            let n = ring.size()?;
            let mut out = ElemSet::empty(n);
            for x in ring.elements()? {
                if cl.member(&x, a)? {
                    out.insert(x.idx() as usize);
                }
            }
            Ok(Subset::Finite(out))
        }
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureKind {
    /// `cl(A) = ⟨A⟩`.
    GeneratedIdeal,
    /// `cl(A) = ⟨A⟩ + J`.
    IdealShift(IdealRep),
    /// `cl(A) = A + J`.
    SetShift(IdealRep),
    /// `cl(A) = I(V(A))` on a function ring.
    PointwiseEval,
    /// `f ∈ cl(A)` iff `f` vanishes on `V(A) ∩ Σ` for every `Σ` in the family.
    Sampling(Vec<Vec<usize>>),
}

/// A declarative closure operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSpec {
    ring: Ring,
    kind: ClosureKind,
}

impl ClosureSpec {
    pub fn generated(ring: &Ring) -> ClosureSpec {
        ClosureSpec {
            ring: ring.clone(),
            kind: ClosureKind::GeneratedIdeal,
        }
    }

    pub fn ideal_shift(j: IdealRep) -> ClosureSpec {
        ClosureSpec {
            ring: j.ring().clone(),
            kind: ClosureKind::IdealShift(j),
        }
    }

    pub fn set_shift(j: IdealRep) -> ClosureSpec {
        ClosureSpec {
            ring: j.ring().clone(),
            kind: ClosureKind::SetShift(j),
        }
    }

    /// The modular closure `⟨A⟩ + mℤ` on ℤ.
    pub fn modular(m: u64) -> ClosureSpec {
        let z = Ring::integers();
        ClosureSpec::ideal_shift(
            IdealRep::generated(&z, &[Elem::int(m as i64)]).expect("integer ideal"),
        )
    }

    pub fn pointwise(ring: &Ring) -> Result<ClosureSpec> {
        fun::space(ring)?;
        Ok(ClosureSpec {
            ring: ring.clone(),
            kind: ClosureKind::PointwiseEval,
        })
    }

    pub fn sampling(ring: &Ring, family: Vec<Vec<usize>>) -> Result<ClosureSpec> {
        let sp = fun::space(ring)?;
        if family.iter().flatten().any(|&j| j >= sp.npoints) {
            return Err(Error::precondition(
                "sampling point outside the point space",
            ));
        }
        Ok(ClosureSpec {
            ring: ring.clone(),
            kind: ClosureKind::Sampling(family),
        })
    }

    pub fn kind(&self) -> &ClosureKind {
        &self.kind
    }

    /// The shift ideal `J` of a shift closure.
    pub fn shift_ideal(&self) -> Option<&IdealRep> {
        match &self.kind {
            ClosureKind::IdealShift(j) | ClosureKind::SetShift(j) => Some(j),
            _ => None,
        }
    }

    /// `m` when this is the modular closure `⟨A⟩ + mℤ` on ℤ.
    pub fn modulus(&self) -> Option<BigUint> {
        match &self.kind {
            ClosureKind::IdealShift(j) if self.ring.is_integers() => {
                crate::ideal::int_generator(j.canonical())
            }
            ClosureKind::GeneratedIdeal if self.ring.is_integers() => Some(BigUint::default()),
            _ => None,
        }
    }

    /// Parses `gen | shift:J=<gens> | setshift:J=<gens> | pointwise | sample:[{pts},...]`.
    pub fn parse(ring: &Ring, src: &str) -> Result<ClosureSpec> {
        let t = src.trim();
        let lead = src.len() - src.trim_start().len();
        if t == "gen" {
            return Ok(ClosureSpec::generated(ring));
        }
        if t == "pointwise" {
            return ClosureSpec::pointwise(ring);
        }
        for (prefix, set) in [("shift:J=", false), ("setshift:J=", true)] {
            if let Some(body) = t.strip_prefix(prefix) {
                let at = lead + prefix.len();
                let gens = parse_elem_list(ring, body).map_err(|e| shift_pos(e, at))?;
                let j = IdealRep::generated(ring, &gens)?;
                return Ok(if set {
                    ClosureSpec::set_shift(j)
                } else {
                    ClosureSpec::ideal_shift(j)
                });
            }
        }
        if let Some(body) = t.strip_prefix("sample:") {
            let at = lead + "sample:".len();
            let family = parse_family(ring, body, at)?;
            return ClosureSpec::sampling(ring, family);
        }
        if t.starts_with("tol:") {
            return Err(Error::Unsupported(
                "tolerance closures act on integer polynomials; use ToleranceClosure::parse".into(),
            ));
        }
        Err(Error::parse(
            lead,
            "expected a closure: gen, shift:J=.., setshift:J=.., pointwise or sample:[..]",
        ))
    }

    fn vanishes_on(&self, x: &Elem, points: &[usize]) -> bool {
        let t = self.ring.fun_table(x).expect("function ring element");
        points.iter().all(|&j| t[j] == 0)
    }
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// `[{(0,1),(1,1)},{(0,0)}]`; for one variable, bare values are accepted.
fn parse_family(ring: &Ring, src: &str, offset: usize) -> Result<Vec<Vec<usize>>> {
    let sp = fun::space(ring)?;
    let t = src.trim_end();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::parse(offset, "expected [{..},...]"))?;
    let mut family = Vec::new();
    for (at, piece) in split_top_level(inner, ',') {
        let lead = piece.len() - piece.trim_start().len();
        let pos = offset + 1 + at + lead;
        let body = piece
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(pos, "expected {points}"))?;
        let mut pts = Vec::new();
        for (pat, pt) in split_top_level(body, ',') {
            if pt.trim().is_empty() {
                continue;
            }
            let ppos = pos + 1 + pat;
            let coords_src = pt.trim();
            let coords_src = coords_src
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(coords_src);
            let coords: Vec<u64> = coords_src
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<i64>()
                        .map(|v| v.rem_euclid(sp.p as i64) as u64)
                        .map_err(|_| Error::parse(ppos, format!("bad coordinate '{}'", c.trim())))
                })
                .collect::<Result<_>>()?;
            if coords.len() != sp.nvars as usize {
                return Err(Error::parse(
                    ppos,
                    format!("expected {} coordinates", sp.nvars),
                ));
            }
            pts.push(sp.point_index(&coords));
        }
        pts.sort_unstable();
        pts.dedup();
        family.push(pts);
    }
    Ok(family)
}

impl Closure for ClosureSpec {
    fn ring(&self) -> &Ring {
        &self.ring
    }

    fn eval(&self, a: &Subset) -> Result<Subset> {
        let r = &self.ring;
        match &self.kind {
            ClosureKind::GeneratedIdeal => span_ideal(r, a),
            ClosureKind::IdealShift(j) => span_ideal(r, a)?.sum(r, j.canonical()),
            ClosureKind::SetShift(j) => a.sum(r, j.canonical()),
            ClosureKind::PointwiseEval => {
                let v = fun::zeros(r, &a.elements()?)?;
                fun::vanishing(r, &v)
            }
            ClosureKind::Sampling(_) => Err(Error::NotSetValued(self.to_string())),
        }
    }

    fn member(&self, x: &Elem, a: &Subset) -> Result<bool> {
        let r = &self.ring;
        match &self.kind {
            ClosureKind::SetShift(j) => match a.elements() {
                Ok(es) => Ok(es.iter().any(|e| j.contains(&r.sub(x, e)))),
                Err(_) => Ok(self.eval(a)?.contains(r, x)),
            },
            ClosureKind::PointwiseEval => Ok(self.vanishes_on(x, &fun::zeros(r, &a.elements()?)?)),
            ClosureKind::Sampling(family) => {
                let v = fun::zeros(r, &a.elements()?)?;
                Ok(family.iter().all(|sigma| {
                    let hit: Vec<usize> = sigma
                        .iter()
                        .copied()
                        .filter(|j| v.binary_search(j).is_ok())
                        .collect();
                    self.vanishes_on(x, &hit)
                }))
            }
            _ => Ok(self.eval(a)?.contains(r, x)),
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn spec(&self) -> Option<&ClosureSpec> {
        Some(self)
    }
}

impl fmt::Display for ClosureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = |j: &IdealRep| {
            let g: Vec<String> = j.gens().iter().map(|e| self.ring.fmt_elem(e)).collect();
            g.join(",")
        };
        match &self.kind {
            ClosureKind::GeneratedIdeal => write!(f, "gen"),
            ClosureKind::IdealShift(j) => write!(f, "shift:J={}", gens(j)),
            ClosureKind::SetShift(j) => write!(f, "setshift:J={}", gens(j)),
            ClosureKind::PointwiseEval => write!(f, "pointwise"),
            ClosureKind::Sampling(family) => {
                let parts: Vec<String> = family
                    .iter()
                    .map(|s| fun::render_points(&self.ring, s).replace(", ", ","))
                    .collect();
                write!(f, "sample:[{}]", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::grammar::parse_ring;

    fn cl(ring: &str, spec: &str) -> ClosureSpec {
        ClosureSpec::parse(&parse_ring(ring).unwrap(), spec).unwrap()
    }

    #[test]
    fn modular_closure_of_principal_ideal() {
        let c = cl("Z", "shift:J=6");
        let out = c.eval(&crate::ideal::int_principal(4)).unwrap();
        assert_eq!(crate::ideal::render_subset(c.ring(), &out), "(2)");
        let a = Subset::from_elems(c.ring(), &[Elem::int(4)]);
        assert!(!c.member(&Elem::int(5), &a).unwrap());
        assert!(c.member(&Elem::int(4), &a).unwrap());
    }

    #[test]
    fn noisy_codeword_is_in_closure() {
        let c = cl("GF:2/x^5", "setshift:J=x");
        let r = c.ring().clone();
        let word = r.parse_elem("x^4+x^3+1").unwrap();
        let noisy = r.parse_elem("x^4+x^3+x^2+1").unwrap();
        let a = Subset::from_elems(&r, &[word]);
        assert!(c.member(&noisy, &a).unwrap());
        assert_eq!(c.eval(&a).unwrap().count(), Some(16));
        assert!(!c.member(&r.parse_elem("x^4+x^3").unwrap(), &a).unwrap());
    }

    #[test]
    fn gray_pixel_in_shifted_closure() {
        let c = cl("prod:[Z,Z,Z]", "shift:J=(5,0,0),(0,5,0),(0,0,5)");
        let r = c.ring().clone();
        let g = Subset::from_elems(&r, &[r.parse_elem("(1,1,1)").unwrap()]);
        assert!(c
            .member(&r.parse_elem("(130,135,125)").unwrap(), &g)
            .unwrap());
        let s = cl("prod:[Z,Z,Z]", "setshift:J=(5,0,0),(0,5,0),(0,0,5)");
        let a = Subset::from_elems(&r, &[r.parse_elem("(130,130,130)").unwrap()]);
        assert!(s
            .member(&r.parse_elem("(130,135,125)").unwrap(), &a)
            .unwrap());
        assert!(!s
            .member(&r.parse_elem("(130,136,125)").unwrap(), &a)
            .unwrap());
    }

    #[test]
    fn grammar_round_trips() {
        for (ring, src) in [
            ("Zn:12", "gen"),
            ("Zn:12", "shift:J=4"),
            ("GF:2/x^5", "setshift:J=x"),
            ("Fun:p=2,n=2", "pointwise"),
            ("Fun:p=2,n=2", "sample:[{(0,0),(1,1)},{(0,1)}]"),
        ] {
            assert_eq!(cl(ring, src).to_string(), src);
        }
        let z = parse_ring("Z").unwrap();
        match ClosureSpec::parse(&z, "shift:J=4,x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ClosureSpec::parse(&z, "pointwise"),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sampling_is_membership_only() {
        let c = cl("Fun:p=2,n=1", "sample:[{0},{1}]");
        let r = c.ring().clone();
        let a = Subset::from_elems(&r, &[r.parse_elem("x").unwrap()]);
        assert!(matches!(c.eval(&a), Err(Error::NotSetValued(_))));
        let full = closure_set(&c, &a).unwrap();
        let pt = ClosureSpec::pointwise(&r).unwrap().eval(&a).unwrap();
        assert_eq!(full, pt);
    }
}
