//! Ring homomorphisms between supported rings.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::ring::{Elem, ElemSet, IntSet, Ring, Subset};

#[derive(Debug, Clone, PartialEq, Eq)]
enum HomKind {
    Identity,
    /// `k ↦ k·1`.
    FromIntegers,
    /// Image of every domain element, by index.
    Table(Vec<Elem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    dom: Ring,
    cod: Ring,
    kind: HomKind,
}

/// Additive order of 1, or 0 for characteristic zero.
pub fn characteristic(ring: &Ring) -> Result<u64> {
    if ring.is_integers() {
        return Ok(0);
    }
    if !ring.is_finite() {
        // products with a ℤ factor
        return Ok(0);
    }
    let one = ring.one_i();
    let z = ring.zero_i();
    let mut acc = one;
    let mut k = 1u64;
    while acc != z {
        acc = ring.add_i(acc, one);
        k += 1;
    }
    Ok(k)
}

impl Hom {
    pub fn identity(ring: &Ring) -> Hom {
        Hom {
            dom: ring.clone(),
            cod: ring.clone(),
            kind: HomKind::Identity,
        }
    }

    /// The unique unital map out of ℤ.
    pub fn from_integers(cod: &Ring) -> Result<Hom> {
        if !cod.is_finite() && !cod.is_integers() {
            return Err(Error::Unsupported(format!("maps from Z into {cod}")));
        }
        Ok(Hom {
            dom: Ring::integers(),
            cod: cod.clone(),
            kind: if cod.is_integers() {
                HomKind::Identity
            } else {
                HomKind::FromIntegers
            },
        })
    }

    /// The map sending 1 to 1, when the domain is generated by 1.
    pub fn canonical(dom: &Ring, cod: &Ring) -> Result<Hom> {
        if dom.is_integers() {
            return Hom::from_integers(cod);
        }
        Hom::from_images(dom, cod, &[(dom.one(), cod.one())])
    }

    /// Extends the given assignments to a unital ring map, checking consistency.
    pub fn from_images(dom: &Ring, cod: &Ring, assign: &[(Elem, Elem)]) -> Result<Hom> {
        if dom.is_integers() {
            let h = Hom::from_integers(cod)?;
            for (x, y) in assign {
                if h.apply(x) != *y {
                    return Err(Error::precondition(format!(
                        "{} must map to {}",
                        dom.fmt_elem(x),
                        cod.fmt_elem(&h.apply(x))
                    )));
                }
            }
            return Ok(h);
        }
        let n = dom.size()?;
        if !cod.is_finite() {
            return Err(Error::Unsupported(format!("maps from {dom} into {cod}")));
        }
        for (x, y) in assign {
            dom.check(x)?;
            cod.check(y)?;
        }
        let mut img: Vec<Option<u32>> = vec![None; n];
        let mut known: Vec<u32> = Vec::new();
        let set =
            |img: &mut Vec<Option<u32>>, known: &mut Vec<u32>, x: u32, y: u32| -> Result<()> {
                match img[x as usize] {
                    Some(prev) if prev != y => Err(Error::precondition(format!(
                        "assignment is not a ring map: {} would go to both {} and {}",
                        dom.fmt_elem(&Elem::Fin(x)),
                        cod.fmt_elem(&Elem::Fin(prev)),
                        cod.fmt_elem(&Elem::Fin(y))
                    ))),
                    Some(_) => Ok(()),
                    None => {
                        img[x as usize] = Some(y);
                        known.push(x);
                        Ok(())
                    }
                }
            };
        set(&mut img, &mut known, dom.zero_i(), cod.zero_i())?;
        set(&mut img, &mut known, dom.one_i(), cod.one_i())?;
        for (x, y) in assign {
            set(&mut img, &mut known, x.idx(), y.idx())?;
        }
        let mut i = 0;
        while i < known.len() {
            let a = known[i];
            let fa = img[a as usize].unwrap();
            let mut j = 0;
            while j <= i {
                let b = known[j];
                let fb = img[b as usize].unwrap();
                set(&mut img, &mut known, dom.add_i(a, b), cod.add_i(fa, fb))?;
                set(&mut img, &mut known, dom.mul_i(a, b), cod.mul_i(fa, fb))?;
                set(&mut img, &mut known, dom.neg_i(a), cod.neg_i(fa))?;
                j += 1;
            }
            i += 1;
        }
        if known.len() < n {
            return Err(Error::precondition(
                "assignments do not determine the map on every element",
            ));
        }
        // The closure under +, ·, − is consistent only if it respects every pair.
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let (fa, fb) = (img[a as usize].unwrap(), img[b as usize].unwrap());
                if img[dom.add_i(a, b) as usize] != Some(cod.add_i(fa, fb))
                    || img[dom.mul_i(a, b) as usize] != Some(cod.mul_i(fa, fb))
                {
                    return Err(Error::precondition("assignment is not a ring map"));
                }
            }
        }
        let table = img.into_iter().map(|y| Elem::Fin(y.unwrap())).collect();
        Ok(Hom {
            dom: dom.clone(),
            cod: cod.clone(),
            kind: HomKind::Table(table),
        })
    }

    /// A map given by the image of every domain element, verified to be a unital ring map.
    pub fn from_table(dom: &Ring, cod: &Ring, images: Vec<Elem>) -> Result<Hom> {
        let n = dom.size()?;
        if images.len() != n || !cod.is_finite() {
            return Err(Error::precondition(
                "table must list one image per domain element",
            ));
        }
        let img: Vec<u32> = images.iter().map(Elem::idx).collect();
        if img[dom.one_i() as usize] != cod.one_i() {
            return Err(Error::precondition("map does not send 1 to 1"));
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let (fa, fb) = (img[a as usize], img[b as usize]);
                if img[dom.add_i(a, b) as usize] != cod.add_i(fa, fb)
                    || img[dom.mul_i(a, b) as usize] != cod.mul_i(fa, fb)
                {
                    return Err(Error::precondition("table is not a ring map"));
                }
            }
        }
        Ok(Hom {
            dom: dom.clone(),
            cod: cod.clone(),
            kind: HomKind::Table(images),
        })
    }

    pub fn domain(&self) -> &Ring {
        &self.dom
    }

    pub fn codomain(&self) -> &Ring {
        &self.cod
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        match &self.kind {
            HomKind::Identity => x.clone(),
            HomKind::FromIntegers => self.cod.from_int(x.as_int().expect("integer")),
            HomKind::Table(t) => t[x.idx() as usize].clone(),
        }
    }

    pub fn image(&self, a: &Subset) -> Result<Subset> {
        match &self.kind {
            HomKind::Identity => Ok(a.clone()),
            HomKind::Table(_) => {
                let elems: Vec<Elem> = a.elements()?.iter().map(|x| self.apply(x)).collect();
                Ok(Subset::from_elems(&self.cod, &elems))
            }
            HomKind::FromIntegers => {
                let c = characteristic(&self.cod)?;
                let s = a.as_int()?;
                let elems: Vec<Elem> = s
                    .reduce_mod(&BigUint::from(c))?
                    .into_iter()
                    .map(|k| self.cod.from_int(&BigInt::from(k)))
                    .collect();
                Ok(Subset::from_elems(&self.cod, &elems))
            }
        }
    }

    pub fn preimage(&self, b: &Subset) -> Result<Subset> {
        match &self.kind {
            HomKind::Identity => Ok(b.clone()),
            HomKind::Table(t) => {
                let n = self.dom.size()?;
                Ok(Subset::Finite(ElemSet::from_indices(
                    n,
                    (0..n).filter(|&i| b.contains(&self.cod, &t[i])),
                )))
            }
            HomKind::FromIntegers => {
                let c = characteristic(&self.cod)?;
                let residues: BTreeSet<u64> = (0..c)
                    .filter(|&k| b.contains(&self.cod, &self.cod.from_int(&BigInt::from(k))))
                    .collect();
                Ok(Subset::Int(IntSet::periodic(
                    BigUint::from(c),
                    residues.into_iter().map(BigInt::from),
                )?))
            }
        }
    }

    pub fn kernel(&self) -> Result<Subset> {
        self.preimage(&Subset::zero(&self.cod))
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image(&Subset::full(&self.dom))?.is_full())
    }

    pub fn describe(&self) -> String {
        format!("{} -> {}", self.dom, self.cod)
    }

    pub fn is_table(&self) -> bool {
        matches!(self.kind, HomKind::Table(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::grammar::parse_ring;

    #[test]
    fn residue_reduction() {
        let z4 = Ring::residue(4).unwrap();
        let z2 = Ring::residue(2).unwrap();
        let f = Hom::canonical(&z4, &z2).unwrap();
        assert_eq!(f.kernel().unwrap().render(&z4), "{0, 2}");
        assert!(f.is_surjective().unwrap());
        assert!(Hom::canonical(&z2, &z4).is_err());
    }

    #[test]
    fn integers_into_residue() {
        let z6 = Ring::residue(6).unwrap();
        let f = Hom::from_integers(&z6).unwrap();
        let k = f.kernel().unwrap();
        assert!(k.contains(&Ring::integers(), &Elem::int(12)));
        assert!(!k.contains(&Ring::integers(), &Elem::int(3)));
        let img = f.image(&crate::ideal::int_principal(4)).unwrap();
        assert_eq!(img.render(&z6), "{0, 2, 4}");
    }

    #[test]
    fn product_projection() {
        let r = parse_ring("prod:[Zn:2,Zn:3]").unwrap();
        let z3 = Ring::residue(3).unwrap();
        let e = r.parse_elem("(1,0)").unwrap();
        let f = Hom::from_images(&r, &z3, &[(e, z3.zero())]).unwrap();
        assert_eq!(f.kernel().unwrap().count(), Some(2));
        assert_eq!(characteristic(&r).unwrap(), 6);
    }
}
