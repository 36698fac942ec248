use std::collections::BTreeSet;

use super::{Elem, ElemSet, IntSet, Ring};
use crate::error::{Error, Result};

/// A subset of a ring in one of the representable shapes.
///
/// Finite rings use `Finite`; ℤ uses `Int`. Products with an integer factor
/// use `Boxed` (a cartesian product of per-factor subsets) or `Points` (a
/// finite list of tuples).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subset {
    Finite(ElemSet),
    Int(IntSet),
    Boxed(Vec<Subset>),
    Points(Vec<Elem>),
}

fn unrepresentable(what: &str) -> Error {
    Error::NotRepresentable(what.to_string())
}

impl Subset {
    pub fn empty(ring: &Ring) -> Subset {
        match ring.cardinality() {
            Some(n) => Subset::Finite(ElemSet::empty(n as usize)),
            None if ring.is_integers() => Subset::Int(IntSet::empty()),
            None => Subset::Points(Vec::new()),
        }
    }

    pub fn full(ring: &Ring) -> Subset {
        match ring.cardinality() {
            Some(n) => Subset::Finite(ElemSet::full(n as usize)),
            None if ring.is_integers() => Subset::Int(IntSet::all()),
            None => Subset::Boxed(ring.factors().iter().map(Subset::full).collect()),
        }
    }

    /// `{0}`.
    pub fn zero(ring: &Ring) -> Subset {
        Subset::from_elems(ring, &[ring.zero()])
    }

    pub fn from_elems(ring: &Ring, elems: &[Elem]) -> Subset {
        match ring.cardinality() {
            Some(n) => Subset::Finite(ElemSet::from_indices(
                n as usize,
                elems.iter().map(|e| e.idx() as usize),
            )),
            None if ring.is_integers() => Subset::Int(IntSet::finite(
                elems.iter().map(|e| e.as_int().expect("integer").clone()),
            )),
            None => {
                let set: BTreeSet<Elem> = elems.iter().cloned().collect();
                Subset::Points(set.into_iter().collect())
            }
        }
    }

    pub fn as_finite(&self) -> Result<&ElemSet> {
        match self {
            Subset::Finite(s) => Ok(s),
            _ => Err(Error::NotEnumerable("subset of an infinite ring".into())),
        }
    }

    pub fn as_int(&self) -> Result<&IntSet> {
        match self {
            Subset::Int(s) => Ok(s),
            _ => Err(Error::DomainMismatch("expected a subset of Z".into())),
        }
    }

    pub fn contains(&self, ring: &Ring, x: &Elem) -> bool {
        match (self, x) {
            (Subset::Finite(s), Elem::Fin(i)) => s.contains(*i as usize),
            (Subset::Int(s), Elem::Int(k)) => s.contains(k),
            (Subset::Boxed(parts), _) => {
                let comps = ring.components(x);
                parts.len() == comps.len()
                    && parts
                        .iter()
                        .zip(ring.factors())
                        .zip(&comps)
                        .all(|((s, r), c)| s.contains(r, c))
            }
            (Subset::Points(ps), _) => ps.contains(x),
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Subset::Finite(s) => s.is_empty(),
            Subset::Int(s) => s.is_empty(),
            Subset::Boxed(parts) => parts.iter().any(Subset::is_empty),
            Subset::Points(ps) => ps.is_empty(),
        }
    }

    pub fn is_full(&self) -> bool {
        match self {
            Subset::Finite(s) => s.is_full(),
            Subset::Int(s) => s.is_all(),
            Subset::Boxed(parts) => parts.iter().all(Subset::is_full),
            Subset::Points(_) => false,
        }
    }

    /// Number of elements, when finite.
    pub fn count(&self) -> Option<usize> {
        match self {
            Subset::Finite(s) => Some(s.count()),
            Subset::Int(IntSet::Finite(s)) => Some(s.len()),
            Subset::Points(ps) => Some(ps.len()),
            _ if self.is_empty() => Some(0),
            _ => None,
        }
    }

    pub fn elements(&self) -> Result<Vec<Elem>> {
        match self {
            Subset::Finite(s) => Ok(s.iter().map(|i| Elem::Fin(i as u32)).collect()),
            Subset::Int(IntSet::Finite(s)) => Ok(s.iter().cloned().map(Elem::Int).collect()),
            Subset::Points(ps) => Ok(ps.clone()),
            _ if self.is_empty() => Ok(Vec::new()),
            _ => Err(Error::NotEnumerable("infinite subset".into())),
        }
    }

    fn any_elem(&self, ring: &Ring) -> Option<Elem> {
        match self {
            Subset::Finite(s) => s.iter().next().map(|i| Elem::Fin(i as u32)),
            Subset::Int(s) => s
                .elements_within(0)
                .into_iter()
                .next()
                .or_else(|| match s {
                    IntSet::Finite(f) => f.iter().next().cloned(),
                    IntSet::Periodic { residues, .. } => {
                        residues.iter().next().map(|r| r.clone().into())
                    }
                })
                .map(Elem::Int),
            Subset::Boxed(parts) => {
                let comps: Option<Vec<Elem>> = parts
                    .iter()
                    .zip(ring.factors())
                    .map(|(s, r)| s.any_elem(r))
                    .collect();
                comps.map(|c| ring.assemble(c))
            }
            Subset::Points(ps) => ps.first().cloned(),
        }
    }

    /// An element of `self` outside `other`, if any.
    pub fn find_outside(&self, ring: &Ring, other: &Subset) -> Result<Option<Elem>> {
        match (self, other) {
            (Subset::Finite(a), Subset::Finite(b)) => {
                Ok(a.first_outside(b).map(|i| Elem::Fin(i as u32)))
            }
            (Subset::Int(a), Subset::Int(b)) => Ok(a.find_outside(b)?.map(Elem::Int)),
            (Subset::Points(ps), _) => Ok(ps.iter().find(|p| !other.contains(ring, p)).cloned()),
            (Subset::Boxed(a), Subset::Boxed(b)) => {
                if self.is_empty() {
                    return Ok(None);
                }
                for (i, ((sa, sb), r)) in a.iter().zip(b).zip(ring.factors()).enumerate() {
                    if let Some(w) = sa.find_outside(r, sb)? {
                        let mut comps: Vec<Elem> = a
                            .iter()
                            .zip(ring.factors())
                            .map(|(s, r)| s.any_elem(r).expect("nonempty"))
                            .collect();
                        comps[i] = w;
                        return Ok(Some(ring.assemble(comps)));
                    }
                }
                Ok(None)
            }
            (Subset::Boxed(_), Subset::Points(_)) if self.is_empty() => Ok(None),
            _ => Err(unrepresentable("subset comparison between these shapes")),
        }
    }

    pub fn is_subset(&self, ring: &Ring, other: &Subset) -> Result<bool> {
        Ok(self.find_outside(ring, other)?.is_none())
    }

    pub fn set_eq(&self, ring: &Ring, other: &Subset) -> Result<bool> {
        Ok(self.is_subset(ring, other)? && other.is_subset(ring, self)?)
    }

    /// Minkowski sum `A + B`.
    pub fn sum(&self, ring: &Ring, other: &Subset) -> Result<Subset> {
        match (self, other) {
            (Subset::Finite(a), Subset::Finite(b)) => {
                let mut out = ElemSet::empty(a.universe());
                for x in a.iter() {
                    for y in b.iter() {
                        out.insert(ring.add_i(x as u32, y as u32) as usize);
                    }
                }
                Ok(Subset::Finite(out))
            }
            (Subset::Int(a), Subset::Int(b)) => Ok(Subset::Int(a.sum(b)?)),
            (Subset::Boxed(a), Subset::Boxed(b)) => Ok(Subset::Boxed(
                a.iter()
                    .zip(b)
                    .zip(ring.factors())
                    .map(|((x, y), r)| x.sum(r, y))
                    .collect::<Result<_>>()?,
            )),
            (Subset::Points(ps), Subset::Points(qs)) => {
                let all: Vec<Elem> = ps
                    .iter()
                    .flat_map(|p| qs.iter().map(move |q| ring.add(p, q)))
                    .collect();
                Ok(Subset::from_elems(ring, &all))
            }
            (Subset::Points(ps), Subset::Boxed(_)) | (Subset::Boxed(_), Subset::Points(ps)) => {
                let boxed = if matches!(self, Subset::Boxed(_)) {
                    self
                } else {
                    other
                };
                match ps.as_slice() {
                    [] => Ok(Subset::Points(Vec::new())),
                    [p] => {
                        let single: Vec<Subset> = ring
                            .factors()
                            .iter()
                            .zip(ring.components(p))
                            .map(|(r, c)| Subset::from_elems(r, &[c]))
                            .collect();
                        Subset::Boxed(single).sum(ring, boxed)
                    }
                    _ => Err(unrepresentable("sum of several points and an infinite box")),
                }
            }
            _ => Err(Error::DomainMismatch(
                "sum of subsets of different shapes".into(),
            )),
        }
    }

    /// `rA`.
    pub fn scale(&self, ring: &Ring, r: &Elem) -> Result<Subset> {
        match self {
            Subset::Finite(a) => {
                let ri = r.idx();
                Ok(Subset::Finite(ElemSet::from_indices(
                    a.universe(),
                    a.iter().map(|x| ring.mul_i(ri, x as u32) as usize),
                )))
            }
            Subset::Int(a) => Ok(Subset::Int(a.scale(r.as_int().expect("integer scalar"))?)),
            Subset::Boxed(parts) => Ok(Subset::Boxed(
                parts
                    .iter()
                    .zip(ring.factors())
                    .zip(ring.components(r))
                    .map(|((s, f), c)| s.scale(f, &c))
                    .collect::<Result<_>>()?,
            )),
            Subset::Points(ps) => Ok(Subset::from_elems(
                ring,
                &ps.iter().map(|p| ring.mul(r, p)).collect::<Vec<_>>(),
            )),
        }
    }

    pub fn neg(&self, ring: &Ring) -> Result<Subset> {
        self.scale(ring, &ring.neg(&ring.one()))
    }

    pub fn intersection(&self, ring: &Ring, other: &Subset) -> Result<Subset> {
        match (self, other) {
            (Subset::Finite(a), Subset::Finite(b)) => Ok(Subset::Finite(a.intersection(b))),
            (Subset::Int(a), Subset::Int(b)) => Ok(Subset::Int(a.intersection(b)?)),
            (Subset::Boxed(a), Subset::Boxed(b)) => Ok(Subset::Boxed(
                a.iter()
                    .zip(b)
                    .zip(ring.factors())
                    .map(|((x, y), r)| x.intersection(r, y))
                    .collect::<Result<_>>()?,
            )),
            (Subset::Points(ps), o) | (o, Subset::Points(ps)) => {
                let kept: Vec<Elem> = ps.iter().filter(|p| o.contains(ring, p)).cloned().collect();
                Ok(Subset::Points(kept))
            }
            _ => Err(Error::DomainMismatch(
                "intersection of subsets of different shapes".into(),
            )),
        }
    }

    pub fn union(&self, ring: &Ring, other: &Subset) -> Result<Subset> {
        match (self, other) {
            (Subset::Finite(a), Subset::Finite(b)) => Ok(Subset::Finite(a.union(b))),
            (Subset::Int(a), Subset::Int(b)) => Ok(Subset::Int(a.union(b)?)),
            (Subset::Points(ps), Subset::Points(qs)) => Ok(Subset::from_elems(
                ring,
                &ps.iter().chain(qs).cloned().collect::<Vec<_>>(),
            )),
            _ => Err(unrepresentable("union of these subset shapes")),
        }
    }

    /// Closed under subtraction and nonempty.
    pub fn is_subgroup(&self, ring: &Ring) -> bool {
        match self {
            Subset::Finite(s) => {
                s.contains(ring.zero_i() as usize)
                    && s.iter().all(|a| {
                        s.iter()
                            .all(|b| s.contains(ring.sub_i(a as u32, b as u32) as usize))
                    })
            }
            Subset::Int(s) => s.is_subgroup(),
            Subset::Boxed(parts) => parts
                .iter()
                .zip(ring.factors())
                .all(|(s, r)| s.is_subgroup(r)),
            Subset::Points(ps) => {
                ps.contains(&ring.zero())
                    && ps
                        .iter()
                        .all(|a| ps.iter().all(|b| ps.contains(&ring.sub(a, b))))
            }
        }
    }

    /// Human-readable rendering using the ring's element syntax.
    pub fn render(&self, ring: &Ring) -> String {
        match self {
            Subset::Finite(s) => {
                let parts: Vec<String> = s
                    .iter()
                    .map(|i| ring.fmt_elem(&Elem::Fin(i as u32)))
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
            Subset::Int(s) => s.to_string(),
            Subset::Boxed(parts) => {
                let ps: Vec<String> = parts
                    .iter()
                    .zip(ring.factors())
                    .map(|(s, r)| s.render(r))
                    .collect();
                ps.join(" x ")
            }
            Subset::Points(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| ring.fmt_elem(p)).collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }
}
