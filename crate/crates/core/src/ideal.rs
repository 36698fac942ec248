//! Classical ideals and additive subgroups.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ring::{Elem, ElemSet, IntSet, Ring, RingDescriptor, Subset};

/// Default cap on ring size for subgroup enumeration.
pub const SUBGROUP_GUARD: usize = 64;

/// Incrementally grown subgroup of a finite ring's additive group.
struct Span<'r> {
    ring: &'r Ring,
    set: ElemSet,
    members: Vec<u32>,
}

impl<'r> Span<'r> {
    fn new(ring: &'r Ring) -> Self {
        let n = ring.cardinality().expect("finite ring") as usize;
        let z = ring.zero_i();
        Span {
            ring,
            set: ElemSet::from_indices(n, [z as usize]),
            members: vec![z],
        }
    }

    fn from_subgroup(ring: &'r Ring, s: &ElemSet) -> Self {
        Span {
            ring,
            set: s.clone(),
            members: s.iter().map(|i| i as u32).collect(),
        }
    }

    fn contains(&self, x: u32) -> bool {
        self.set.contains(x as usize)
    }

    /// H ← H + ⟨t⟩, as the union of cosets H + kt.
    fn add(&mut self, t: u32) {
        if self.contains(t) {
            return;
        }
        let base = self.members.clone();
        let mut kt = t;
        while !self.contains(kt) {
            for &b in &base {
                let y = self.ring.add_i(b, kt);
                self.set.insert(y as usize);
                self.members.push(y);
            }
            kt = self.ring.add_i(kt, t);
        }
    }
}

fn finite_additive_span(ring: &Ring, gens: impl IntoIterator<Item = u32>) -> ElemSet {
    let mut h = Span::new(ring);
    for g in gens {
        h.add(g);
    }
    h.set
}

fn finite_ideal(ring: &Ring, gens: impl IntoIterator<Item = u32>) -> ElemSet {
    let mut h = Span::new(ring);
    for g in gens {
        h.add(g);
    }
    let rgens: Vec<u32> = ring.ring_generators().iter().map(Elem::idx).collect();
    loop {
        let before = h.members.len();
        let snapshot = h.members.clone();
        for &s in &rgens {
            for &m in &snapshot {
                h.add(ring.mul_i(s, m));
            }
        }
        if h.members.len() == before {
            return h.set;
        }
    }
}

/// The ideal generated by an arbitrary subset.
pub fn span_ideal(ring: &Ring, a: &Subset) -> Result<Subset> {
    match a {
        Subset::Finite(s) => Ok(Subset::Finite(finite_ideal(
            ring,
            s.iter().map(|i| i as u32),
        ))),
        Subset::Int(s) => Ok(Subset::Int(IntSet::multiples(&s.ideal_generator()))),
        Subset::Boxed(parts) => {
            if a.is_empty() {
                return Ok(Subset::zero(ring));
            }
            Ok(Subset::Boxed(
                parts
                    .iter()
                    .zip(ring.factors())
                    .map(|(s, r)| span_ideal(r, s))
                    .collect::<Result<_>>()?,
            ))
        }
        Subset::Points(ps) => {
            let factors = ring.factors();
            let mut cols: Vec<Vec<Elem>> = vec![Vec::new(); factors.len()];
            for p in ps {
                for (col, c) in cols.iter_mut().zip(ring.components(p)) {
                    col.push(c);
                }
            }
            Ok(Subset::Boxed(
                factors
                    .iter()
                    .zip(&cols)
                    .map(|(r, col)| span_ideal(r, &Subset::from_elems(r, col)))
                    .collect::<Result<_>>()?,
            ))
        }
    }
}

/// The additive subgroup generated by a subset.
pub fn additive_span(ring: &Ring, a: &Subset) -> Result<Subset> {
    match a {
        Subset::Finite(s) => Ok(Subset::Finite(finite_additive_span(
            ring,
            s.iter().map(|i| i as u32),
        ))),
        Subset::Int(s) => Ok(Subset::Int(IntSet::multiples(&s.ideal_generator()))),
        _ if a.is_empty() => Ok(Subset::zero(ring)),
        _ => Err(Error::NotRepresentable(
            "additive span in a product with an infinite factor".into(),
        )),
    }
}

/// Classical ideal test: a subgroup closed under multiplication by every ring element.
pub fn is_classical_ideal(ring: &Ring, a: &Subset) -> Result<bool> {
    if !a.is_subgroup(ring) {
        return Ok(false);
    }
    span_ideal(ring, a)?.is_subset(ring, a)
}

/// A finitely generated ideal with its canonical member set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealRep {
    ring: Ring,
    gens: Vec<Elem>,
    canonical: Subset,
}

impl IdealRep {
    pub fn generated(ring: &Ring, gens: &[Elem]) -> Result<IdealRep> {
        for g in gens {
            ring.check(g)?;
        }
        let canonical = span_ideal(ring, &Subset::from_elems(ring, gens))?;
        Ok(IdealRep {
            ring: ring.clone(),
            gens: gens.to_vec(),
            canonical,
        })
    }

    /// Wraps a set already known to be a classical ideal.
    pub fn from_canonical(ring: &Ring, canonical: Subset) -> Result<IdealRep> {
        if !is_classical_ideal(ring, &canonical)? {
            return Err(Error::precondition(format!(
                "{} is not an ideal",
                render_subset(ring, &canonical)
            )));
        }
        let gens = match &canonical {
            Subset::Int(s) => vec![Elem::Int(s.ideal_generator().into())],
            Subset::Finite(_) | Subset::Points(_) => canonical.elements()?,
            Subset::Boxed(_) => Vec::new(),
        };
        Ok(IdealRep {
            ring: ring.clone(),
            gens,
            canonical,
        })
    }

    pub fn zero(ring: &Ring) -> IdealRep {
        IdealRep::generated(ring, &[]).expect("zero ideal")
    }

    pub fn whole(ring: &Ring) -> IdealRep {
        IdealRep::generated(ring, &[ring.one()]).expect("unit ideal")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn canonical(&self) -> &Subset {
        &self.canonical
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.canonical.contains(&self.ring, x)
    }

    pub fn is_whole(&self) -> bool {
        self.contains(&self.ring.one())
    }

    fn same_ring(&self, other: &IdealRep) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DomainMismatch(format!(
                "ideals over {} and {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    /// `I + J`.
    pub fn sum(&self, other: &IdealRep) -> Result<IdealRep> {
        self.same_ring(other)?;
        let gens: Vec<Elem> = self.gens.iter().chain(&other.gens).cloned().collect();
        let canonical = span_ideal(
            &self.ring,
            &self.canonical.sum(&self.ring, &other.canonical)?,
        )?;
        Ok(IdealRep {
            ring: self.ring.clone(),
            gens,
            canonical,
        })
    }

    /// The classical product `⟨ab⟩`.
    pub fn classical_product(&self, other: &IdealRep) -> Result<IdealRep> {
        self.same_ring(other)?;
        let r = &self.ring;
        let gens: Vec<Elem> = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| r.mul(a, b)))
            .collect();
        IdealRep::generated(r, &gens)
    }
}

impl fmt::Display for IdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_subset(&self.ring, &self.canonical))
    }
}

/// Renders a subset, writing subgroups of ℤ and ℤ/n as `(d)`.
pub fn render_subset(ring: &Ring, s: &Subset) -> String {
    if let (RingDescriptor::Residue(_), Subset::Finite(e)) = (ring.descriptor(), s) {
        if s.is_subgroup(ring) {
            let d = e.iter().find(|&i| i != 0).unwrap_or(0);
            return format!("({d})");
        }
    }
    s.render(ring)
}

/// Additive generator `d` of a subgroup of ℤ/n, with `d | n` (`d = n` for `{0}`).
pub fn residue_generator(ring: &Ring, s: &Subset) -> Option<u64> {
    match (ring.descriptor(), s) {
        (RingDescriptor::Residue(n), Subset::Finite(e)) if s.is_subgroup(ring) => {
            Some(e.iter().find(|&i| i != 0).map(|i| i as u64).unwrap_or(*n))
        }
        _ => None,
    }
}

/// Generator of a subgroup of ℤ.
pub fn int_generator(s: &Subset) -> Option<BigUint> {
    match s {
        Subset::Int(i) => i.principal_generator(),
        _ => None,
    }
}

/// All additive subgroups of a finite ring, sorted by size then members.
pub fn enumerate_subgroups(ring: &Ring, guard: usize) -> Result<Vec<Subset>> {
    let n = ring.size()?;
    if n > guard {
        return Err(Error::resource(
            "ring size for subgroup enumeration",
            guard as u128,
            n as u128,
        ));
    }
    let start = finite_additive_span(ring, []);
    let mut seen: HashSet<ElemSet> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some(h) = frontier.pop() {
        for g in 0..n as u32 {
            if h.contains(g as usize) {
                continue;
            }
            let mut span = Span::from_subgroup(ring, &h);
            span.add(g);
            if seen.insert(span.set.clone()) {
                frontier.push(span.set);
            }
        }
    }
    let mut all: Vec<ElemSet> = seen.into_iter().collect();
    all.sort_by(|a, b| {
        a.count()
            .cmp(&b.count())
            .then_with(|| a.iter().cmp(b.iter()))
    });
    debug_assert!(all
        .iter()
        .all(|s| Subset::Finite(s.clone()).is_subgroup(ring)));
    Ok(all.into_iter().map(Subset::Finite).collect())
}

/// All classical ideals of a finite ring.
pub fn enumerate_ideals(ring: &Ring, guard: usize) -> Result<Vec<IdealRep>> {
    let mut out = Vec::new();
    for s in enumerate_subgroups(ring, guard)? {
        if is_classical_ideal(ring, &s)? {
            out.push(IdealRep::from_canonical(ring, s)?);
        }
    }
    Ok(out)
}

/// Principal ideals `(d)` of ℤ for `d` in `0..=bound`.
pub fn int_principal(d: u64) -> Subset {
    Subset::Int(IntSet::multiples(&BigUint::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::grammar::parse_ring;

    fn ideal(ring: &str, gens: &str) -> IdealRep {
        let r = parse_ring(ring).unwrap();
        let g = crate::ring::grammar::parse_elem_list(&r, gens).unwrap();
        IdealRep::generated(&r, &g).unwrap()
    }

    #[test]
    fn integer_ideals_use_gcd() {
        assert_eq!(ideal("Z", "4,6").to_string(), "(2)");
        assert_eq!(ideal("Z", "").to_string(), "(0)");
        let a = ideal("Z", "4");
        let b = ideal("Z", "6");
        assert_eq!(a.sum(&b).unwrap().to_string(), "(2)");
        assert_eq!(a.classical_product(&b).unwrap().to_string(), "(24)");
    }

    #[test]
    fn residue_ideals() {
        let i = ideal("Zn:12", "8");
        assert_eq!(
            i.canonical().elements().unwrap(),
            vec![Elem::Fin(0), Elem::Fin(4), Elem::Fin(8)]
        );
        assert_eq!(i.to_string(), "(4)");
        let s = ideal("Zn:12", "4").sum(&ideal("Zn:12", "6")).unwrap();
        assert_eq!(s.canonical().count(), Some(6));
    }

    #[test]
    fn subgroup_counts() {
        let count = |r: &str| {
            enumerate_subgroups(&parse_ring(r).unwrap(), SUBGROUP_GUARD)
                .unwrap()
                .len()
        };
        assert_eq!(count("Zn:12"), 6);
        assert_eq!(count("prod:[Zn:2,Zn:2]"), 5);
        assert_eq!(count("Zn:5"), 2);
        assert!(matches!(
            enumerate_subgroups(&parse_ring("Zn:65").unwrap(), SUBGROUP_GUARD),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn product_ideals_are_componentwise() {
        let i = ideal("prod:[Z,Z,Z]", "(5,0,0),(0,5,0),(0,0,5)");
        let r = i.ring().clone();
        assert!(i.contains(&r.parse_elem("(0,5,-5)").unwrap()));
        assert!(!i.contains(&r.parse_elem("(0,5,-4)").unwrap()));
        assert!(ideal("prod:[Z,Z,Z]", "(1,1,1)").is_whole());
    }

    #[test]
    fn function_ring_ideals() {
        let i = ideal("Fun:p=2,n=2", "x1*x2");
        // functions vanishing wherever x1*x2 does: multiples of x1x2 are {0, x1x2}
        assert_eq!(i.canonical().count(), Some(2));
        let m = ideal("Fun:p=2,n=2", "x1, x2");
        assert_eq!(m.canonical().count(), Some(8));
    }
}
