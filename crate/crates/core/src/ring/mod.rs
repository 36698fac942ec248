//! Effective commutative rings with unity and their elements.
//!
//! Finite rings address elements by a canonical index (`Elem::Fin`) whose
//! numeric order is the canonical element order. Integers use `Elem::Int`,
//! and products with an integer factor use `Elem::Tuple`.

mod elemset;
pub mod grammar;
mod intset;
pub mod poly;
mod subset;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use elemset::ElemSet;
pub use intset::{IntSet, EXPANSION_LIMIT};
pub use subset::Subset;

use crate::error::{Error, Result};
use poly::{mul_poly, reduce_mod_poly, FunSpace, IntPoly, VarStyle};

/// Largest finite ring the library will construct.
pub const MAX_FINITE_CARD: u64 = 1 << 24;
/// Rings up to this size get precomputed operation tables.
const TABLE_LIMIT: u64 = 256;

/// A ring given by explicit operation tables, used for derived rings such as
/// quotients and localizations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableRing {
    pub name: String,
    pub labels: Vec<String>,
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
    pub zero: u32,
    pub one: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Residue(u64),
    Product(Vec<RingDescriptor>),
    /// 𝔽ₚ[x]/(modulus); `modulus` is monic, coefficients low to high.
    PolyQuotient {
        p: u64,
        modulus: Vec<u64>,
    },
    /// Functions 𝔽ₚⁿ → 𝔽ₚ, i.e. 𝔽ₚ[x₁..xₙ]/(xᵢᵖ − xᵢ).
    Function {
        p: u64,
        nvars: u32,
    },
    Table(Arc<TableRing>),
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Residue(n) => write!(f, "Zn:{n}"),
            RingDescriptor::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|d| d.to_string()).collect();
                write!(f, "prod:[{}]", parts.join(","))
            }
            RingDescriptor::PolyQuotient { p, modulus } => {
                let poly = IntPoly::from_terms(
                    modulus
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| (vec![i as u32], BigInt::from(c))),
                );
                write!(f, "GF:{p}/{}", poly.fmt_with(VarStyle::Single))
            }
            RingDescriptor::Function { p, nvars } => write!(f, "Fun:p={p},n={nvars}"),
            RingDescriptor::Table(t) => write!(f, "{}", t.name),
        }
    }
}

/// A ring element value. Which variant is valid depends on the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Fin(u32),
    Tuple(Vec<Elem>),
}

impl Elem {
    pub fn int(k: i64) -> Elem {
        Elem::Int(BigInt::from(k))
    }

    /// Index of a finite-ring element. Panics on other variants.
    pub fn idx(&self) -> u32 {
        match self {
            Elem::Fin(i) => *i,
            other => panic!("expected a finite-ring element, got {other:?}"),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Elem::Int(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Debug)]
struct RingInner {
    desc: RingDescriptor,
    card: Option<u64>,
    factors: Vec<Ring>,
    radix: Vec<u64>,
    fun: Option<FunSpace>,
    tables: Option<Tables>,
}

/// A shared handle to a constructed, validated ring.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.desc.fmt(f)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn digits(mut x: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = x % base;
        x /= base;
    }
    out
}

fn undigits(ds: &[u64], base: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * base + d)
}

impl Ring {
    pub fn new(desc: RingDescriptor) -> Result<Ring> {
        let mut factors = Vec::new();
        let mut radix = Vec::new();
        let mut fun = None;
        let card = match &desc {
            RingDescriptor::Integers => None,
            RingDescriptor::Residue(n) => {
                if *n < 2 {
                    return Err(Error::InvalidRing(format!("Zn needs n >= 2, got {n}")));
                }
                Some(*n)
            }
            RingDescriptor::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidRing(
                        "product needs at least one factor".into(),
                    ));
                }
                let mut card: Option<u64> = Some(1);
                for d in fs {
                    let r = Ring::new(d.clone())?;
                    card = match (card, r.cardinality()) {
                        (Some(a), Some(b)) => Some(
                            a.checked_mul(b)
                                .filter(|&c| c <= MAX_FINITE_CARD)
                                .ok_or_else(|| {
                                    Error::resource(
                                        "product ring cardinality",
                                        MAX_FINITE_CARD,
                                        a as u128 * b as u128,
                                    )
                                })?,
                        ),
                        _ => None,
                    };
                    radix.push(r.cardinality().unwrap_or(0));
                    factors.push(r);
                }
                card
            }
            RingDescriptor::PolyQuotient { p, modulus } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidRing(format!(
                        "GF needs a prime characteristic, got {p}"
                    )));
                }
                if modulus.len() < 2
                    || modulus.last() != Some(&1)
                    || modulus.iter().any(|&c| c >= *p)
                {
                    return Err(Error::InvalidRing(
                        "modulus must be monic of degree >= 1 with reduced coefficients".into(),
                    ));
                }
                let deg = (modulus.len() - 1) as u32;
                Some(checked_pow(*p, deg)?)
            }
            RingDescriptor::Function { p, nvars } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidRing(format!("Fun needs a prime p, got {p}")));
                }
                if *nvars < 1 {
                    return Err(Error::InvalidRing("Fun needs n >= 1".into()));
                }
                let points = checked_pow(*p, *nvars)?;
                let card = checked_pow(*p, points as u32)?;
                fun = Some(FunSpace::new(*p, *nvars));
                Some(card)
            }
            RingDescriptor::Table(t) => {
                let n = t.labels.len();
                if n == 0 || t.add.len() != n * n || t.mul.len() != n * n {
                    return Err(Error::InvalidRing(
                        "table ring needs n×n tables over a nonempty carrier".into(),
                    ));
                }
                if t.add.iter().chain(&t.mul).any(|&x| x as usize >= n)
                    || t.zero as usize >= n
                    || t.one as usize >= n
                {
                    return Err(Error::InvalidRing("table entry out of range".into()));
                }
                Some(n as u64)
            }
        };
        let mut inner = RingInner {
            desc,
            card,
            factors,
            radix,
            fun,
            tables: None,
        };
        if let Some(n) = card.filter(|&n| n <= TABLE_LIMIT) {
            let ring = Ring(Arc::new(inner));
            let n = n as u32;
            let mut add = Vec::with_capacity((n * n) as usize);
            let mut mul = Vec::with_capacity((n * n) as usize);
            for a in 0..n {
                for b in 0..n {
                    add.push(ring.raw_add(a, b));
                    mul.push(ring.raw_mul(a, b));
                }
            }
            let neg = (0..n).map(|a| ring.raw_neg(a)).collect();
            inner = Arc::try_unwrap(ring.0).expect("sole owner");
            inner.tables = Some(Tables { add, mul, neg });
        }
        Ok(Ring(Arc::new(inner)))
    }

    pub fn integers() -> Ring {
        Ring::new(RingDescriptor::Integers).expect("valid")
    }

    pub fn residue(n: u64) -> Result<Ring> {
        Ring::new(RingDescriptor::Residue(n))
    }

    pub fn product(factors: &[Ring]) -> Result<Ring> {
        Ring::new(RingDescriptor::Product(
            factors.iter().map(|r| r.descriptor().clone()).collect(),
        ))
    }

    pub fn poly_quotient(p: u64, modulus: Vec<u64>) -> Result<Ring> {
        Ring::new(RingDescriptor::PolyQuotient { p, modulus })
    }

    pub fn function_ring(p: u64, nvars: u32) -> Result<Ring> {
        Ring::new(RingDescriptor::Function { p, nvars })
    }

    /// A ring from explicit tables. The ring axioms are verified when the
    /// ring has at most 64 elements.
    pub fn from_table(t: TableRing) -> Result<Ring> {
        let ring = Ring::new(RingDescriptor::Table(Arc::new(t)))?;
        if ring.size()? <= 64 {
            if let Some(v) = ring.axiom_violation() {
                return Err(Error::InvalidRing(v));
            }
        }
        Ok(ring)
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.0.card
    }

    pub fn is_finite(&self) -> bool {
        self.0.card.is_some()
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.0.desc, RingDescriptor::Integers)
    }

    /// Finite cardinality as `usize`, or a not-enumerable error.
    pub fn size(&self) -> Result<usize> {
        self.0
            .card
            .map(|n| n as usize)
            .ok_or_else(|| Error::NotEnumerable(self.to_string()))
    }

    pub fn factors(&self) -> &[Ring] {
        &self.0.factors
    }

    pub fn fun_space(&self) -> Option<&FunSpace> {
        self.0.fun.as_ref()
    }

    /// Characteristic `p` and the table of values of a function-ring element.
    pub fn fun_table(&self, e: &Elem) -> Option<Vec<u64>> {
        let fs = self.0.fun.as_ref()?;
        Some(self.fun_digits(e.idx(), fs))
    }

    pub fn fun_from_table(&self, table: &[u64]) -> Elem {
        let fs = self.0.fun.as_ref().expect("function ring");
        Elem::Fin(self.fun_index(table, fs))
    }

    fn fun_digits(&self, i: u32, fs: &FunSpace) -> Vec<u64> {
        let mut t = digits(i as u64, fs.p, fs.npoints);
        t.reverse();
        t
    }

    fn fun_index(&self, table: &[u64], fs: &FunSpace) -> u32 {
        table.iter().fold(0u64, |acc, &v| acc * fs.p + v) as u32
    }

    // -- index arithmetic on finite rings ---------------------------------

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        match &self.0.desc {
            RingDescriptor::Residue(n) => ((a as u64 + b as u64) % n) as u32,
            RingDescriptor::Product(_) => self.componentwise(a, b, |r, x, y| r.add_i(x, y)),
            RingDescriptor::PolyQuotient { p, modulus } => {
                let d = modulus.len() - 1;
                let (x, y) = (digits(a as u64, *p, d), digits(b as u64, *p, d));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                undigits(&s, *p) as u32
            }
            RingDescriptor::Function { p, .. } => {
                let fs = self.0.fun.as_ref().expect("function ring");
                let (x, y) = (self.fun_digits(a, fs), self.fun_digits(b, fs));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                self.fun_index(&s, fs)
            }
            RingDescriptor::Table(t) => t.add[a as usize * t.labels.len() + b as usize],
            RingDescriptor::Integers => unreachable!("integers have no index arithmetic"),
        }
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.desc {
            RingDescriptor::Residue(n) => ((a as u64 * b as u64) % n) as u32,
            RingDescriptor::Product(_) => self.componentwise(a, b, |r, x, y| r.mul_i(x, y)),
            RingDescriptor::PolyQuotient { p, modulus } => {
                let d = modulus.len() - 1;
                let (x, y) = (digits(a as u64, *p, d), digits(b as u64, *p, d));
                let prod = mul_poly(&x, &y, *p);
                undigits(&reduce_mod_poly(&prod, modulus, *p), *p) as u32
            }
            RingDescriptor::Function { p, .. } => {
                let fs = self.0.fun.as_ref().expect("function ring");
                let (x, y) = (self.fun_digits(a, fs), self.fun_digits(b, fs));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| u * v % p).collect();
                self.fun_index(&s, fs)
            }
            RingDescriptor::Table(t) => t.mul[a as usize * t.labels.len() + b as usize],
            RingDescriptor::Integers => unreachable!("integers have no index arithmetic"),
        }
    }

    fn raw_neg(&self, a: u32) -> u32 {
        match &self.0.desc {
            RingDescriptor::Residue(n) => ((n - a as u64) % n) as u32,
            RingDescriptor::Product(_) => {
                let parts: Vec<u32> = self
                    .split_index(a)
                    .into_iter()
                    .zip(&self.0.factors)
                    .map(|(x, r)| r.neg_i(x))
                    .collect();
                self.join_index(&parts)
            }
            RingDescriptor::PolyQuotient { p, modulus } => {
                let x = digits(a as u64, *p, modulus.len() - 1);
                let s: Vec<u64> = x.iter().map(|u| (p - u) % p).collect();
                undigits(&s, *p) as u32
            }
            RingDescriptor::Function { p, .. } => {
                let fs = self.0.fun.as_ref().expect("function ring");
                let s: Vec<u64> = self.fun_digits(a, fs).iter().map(|u| (p - u) % p).collect();
                self.fun_index(&s, fs)
            }
            RingDescriptor::Table(t) => {
                let n = t.labels.len() as u32;
                (0..n)
                    .find(|&b| self.raw_add(a, b) == t.zero)
                    .expect("table ring has additive inverses")
            }
            RingDescriptor::Integers => unreachable!("integers have no index arithmetic"),
        }
    }

    fn componentwise(&self, a: u32, b: u32, op: impl Fn(&Ring, u32, u32) -> u32) -> u32 {
        let xs = self.split_index(a);
        let ys = self.split_index(b);
        let parts: Vec<u32> = self
            .0
            .factors
            .iter()
            .zip(xs.iter().zip(&ys))
            .map(|(r, (&x, &y))| op(r, x, y))
            .collect();
        self.join_index(&parts)
    }

    /// Component indices of a finite product element (first factor most significant).
    pub fn split_index(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.0.radix.len()];
        for (slot, &r) in out.iter_mut().zip(&self.0.radix).rev() {
            *slot = (a as u64 % r) as u32;
            a = (a as u64 / r) as u32;
        }
        out
    }

    pub fn join_index(&self, parts: &[u32]) -> u32 {
        parts
            .iter()
            .zip(&self.0.radix)
            .fold(0u64, |acc, (&x, &r)| acc * r + x as u64) as u32
    }

    pub fn add_i(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.add[a as usize * self.0.card.unwrap() as usize + b as usize],
            None => self.raw_add(a, b),
        }
    }

    pub fn mul_i(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.mul[a as usize * self.0.card.unwrap() as usize + b as usize],
            None => self.raw_mul(a, b),
        }
    }

    pub fn neg_i(&self, a: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.neg[a as usize],
            None => self.raw_neg(a),
        }
    }

    pub fn sub_i(&self, a: u32, b: u32) -> u32 {
        self.add_i(a, self.neg_i(b))
    }

    pub fn zero_i(&self) -> u32 {
        match &self.0.desc {
            RingDescriptor::Table(t) => t.zero,
            _ => 0,
        }
    }

    pub fn one_i(&self) -> u32 {
        match &self.0.desc {
            RingDescriptor::Residue(_) | RingDescriptor::PolyQuotient { .. } => 1,
            RingDescriptor::Product(_) => {
                let parts: Vec<u32> = self.0.factors.iter().map(|r| r.one_i()).collect();
                self.join_index(&parts)
            }
            RingDescriptor::Function { p, .. } => {
                let fs = self.0.fun.as_ref().expect("function ring");
                self.fun_index(&vec![1 % p; fs.npoints], fs)
            }
            RingDescriptor::Table(t) => t.one,
            RingDescriptor::Integers => unreachable!("integers have no index arithmetic"),
        }
    }

    pub fn pow_i(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = self.one_i();
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_i(acc, base);
            }
            base = self.mul_i(base, base);
            k >>= 1;
        }
        acc
    }

    // -- generic element arithmetic -------------------------------------

    pub fn zero(&self) -> Elem {
        match &self.0.desc {
            RingDescriptor::Integers => Elem::Int(BigInt::zero()),
            _ if self.is_finite() => Elem::Fin(self.zero_i()),
            _ => Elem::Tuple(self.0.factors.iter().map(|r| r.zero()).collect()),
        }
    }

    pub fn one(&self) -> Elem {
        match &self.0.desc {
            RingDescriptor::Integers => Elem::Int(BigInt::one()),
            _ if self.is_finite() => Elem::Fin(self.one_i()),
            _ => Elem::Tuple(self.0.factors.iter().map(|r| r.one()).collect()),
        }
    }

    fn binop(
        &self,
        a: &Elem,
        b: &Elem,
        int: impl Fn(&BigInt, &BigInt) -> BigInt + Copy,
        fin: impl Fn(&Ring, u32, u32) -> u32 + Copy,
    ) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => Elem::Int(int(x, y)),
            (Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(fin(self, *x, *y)),
            (Elem::Tuple(xs), Elem::Tuple(ys)) => Elem::Tuple(
                self.0
                    .factors
                    .iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(r, (x, y))| r.binop(x, y, int, fin))
                    .collect(),
            ),
            _ => panic!("mismatched element variants {a:?} and {b:?} in {self}"),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.binop(a, b, |x, y| x + y, |r, x, y| r.add_i(x, y))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.binop(a, b, |x, y| x * y, |r, x, y| r.mul_i(x, y))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Int(x) => Elem::Int(-x),
            Elem::Fin(x) => Elem::Fin(self.neg_i(*x)),
            Elem::Tuple(xs) => Elem::Tuple(
                self.0
                    .factors
                    .iter()
                    .zip(xs)
                    .map(|(r, x)| r.neg(x))
                    .collect(),
            ),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn pow(&self, a: &Elem, k: u64) -> Elem {
        match a {
            Elem::Int(x) => Elem::Int(num_traits::pow(x.clone(), k as usize)),
            Elem::Fin(x) => Elem::Fin(self.pow_i(*x, k)),
            Elem::Tuple(xs) => Elem::Tuple(
                self.0
                    .factors
                    .iter()
                    .zip(xs)
                    .map(|(r, x)| r.pow(x, k))
                    .collect(),
            ),
        }
    }

    /// The image of an integer, `k·1`.
    pub fn from_int(&self, k: &BigInt) -> Elem {
        match &self.0.desc {
            RingDescriptor::Integers => Elem::Int(k.clone()),
            RingDescriptor::Residue(n) => {
                Elem::Fin(k.mod_floor(&BigInt::from(*n)).to_u32().expect("reduced"))
            }
            RingDescriptor::Product(_) => {
                let parts: Vec<Elem> = self.0.factors.iter().map(|r| r.from_int(k)).collect();
                if self.is_finite() {
                    Elem::Fin(self.join_index(&parts.iter().map(Elem::idx).collect::<Vec<_>>()))
                } else {
                    Elem::Tuple(parts)
                }
            }
            _ => {
                // double-and-add on k·1
                let mut acc = self.zero_i();
                let mut base = self.one_i();
                let mut m = k.magnitude().clone();
                while !m.is_zero() {
                    if m.is_odd() {
                        acc = self.add_i(acc, base);
                    }
                    base = self.add_i(base, base);
                    m >>= 1;
                }
                Elem::Fin(if k.is_negative() {
                    self.neg_i(acc)
                } else {
                    acc
                })
            }
        }
    }

    /// Checks that `e` is a valid canonical element of this ring.
    pub fn check(&self, e: &Elem) -> Result<()> {
        let ok = match (e, &self.0.desc) {
            (Elem::Int(_), RingDescriptor::Integers) => true,
            (Elem::Fin(i), _) if self.is_finite() => (*i as u64) < self.0.card.unwrap(),
            (Elem::Tuple(xs), RingDescriptor::Product(_)) if !self.is_finite() => {
                xs.len() == self.0.factors.len()
                    && self
                        .0
                        .factors
                        .iter()
                        .zip(xs)
                        .all(|(r, x)| r.check(x).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{e:?} is not an element of {self}"
            )))
        }
    }

    pub fn elem(&self, e: Elem) -> Result<RingElem> {
        self.check(&e)?;
        Ok(RingElem {
            ring: self.clone(),
            value: e,
        })
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Elem>> {
        let n = self.size()? as u32;
        Ok((0..n).map(Elem::Fin))
    }

    /// Canonical generators as a ring: images of these determine a homomorphism.
    pub fn ring_generators(&self) -> Vec<Elem> {
        match &self.0.desc {
            RingDescriptor::Integers | RingDescriptor::Residue(_) => vec![self.one()],
            RingDescriptor::Product(_) => {
                let mut gens = Vec::new();
                for (i, f) in self.0.factors.iter().enumerate() {
                    for g in f.ring_generators() {
                        let mut parts: Vec<Elem> =
                            self.0.factors.iter().map(|r| r.zero()).collect();
                        parts[i] = g;
                        gens.push(self.assemble(parts));
                    }
                }
                gens
            }
            RingDescriptor::PolyQuotient { .. } => {
                vec![
                    self.one(),
                    self.elem_from_poly(&IntPoly::var(0)).expect("x reduces"),
                ]
            }
            RingDescriptor::Function { nvars, .. } => std::iter::once(self.one())
                .chain((0..*nvars as usize).map(|i| {
                    let fs = self.0.fun.as_ref().unwrap();
                    let table: Vec<u64> = (0..fs.npoints).map(|j| fs.coords(j)[i]).collect();
                    self.fun_from_table(&table)
                }))
                .collect(),
            RingDescriptor::Table(_) => self.elements().map(|it| it.collect()).unwrap_or_default(),
        }
    }

    /// Builds a product element from its components.
    pub fn assemble(&self, parts: Vec<Elem>) -> Elem {
        if self.is_finite() {
            Elem::Fin(self.join_index(&parts.iter().map(Elem::idx).collect::<Vec<_>>()))
        } else {
            Elem::Tuple(parts)
        }
    }

    /// Components of a product element.
    pub fn components(&self, e: &Elem) -> Vec<Elem> {
        match e {
            Elem::Tuple(xs) => xs.clone(),
            Elem::Fin(i) => self.split_index(*i).into_iter().map(Elem::Fin).collect(),
            Elem::Int(_) => vec![e.clone()],
        }
    }

    pub fn fmt_elem(&self, e: &Elem) -> String {
        match (&self.0.desc, e) {
            (_, Elem::Int(k)) => k.to_string(),
            (RingDescriptor::Residue(_), Elem::Fin(i)) => i.to_string(),
            (RingDescriptor::Product(_), _) => {
                let parts: Vec<String> = self
                    .0
                    .factors
                    .iter()
                    .zip(self.components(e))
                    .map(|(r, x)| r.fmt_elem(&x))
                    .collect();
                format!("({})", parts.join(","))
            }
            (RingDescriptor::PolyQuotient { p, modulus }, Elem::Fin(i)) => {
                let cs = digits(*i as u64, *p, modulus.len() - 1);
                IntPoly::from_terms(
                    cs.iter()
                        .enumerate()
                        .map(|(k, &c)| (vec![k as u32], BigInt::from(c))),
                )
                .fmt_with(VarStyle::Single)
            }
            (RingDescriptor::Function { .. }, Elem::Fin(i)) => {
                let fs = self.0.fun.as_ref().unwrap();
                fs.poly_of(&self.fun_digits(*i, fs))
                    .fmt_with(VarStyle::Indexed)
            }
            (RingDescriptor::Table(t), Elem::Fin(i)) => t.labels[*i as usize].clone(),
            _ => format!("{e:?}"),
        }
    }

    /// Parses an element; error positions are offset by `offset`.
    pub fn parse_elem_at(&self, src: &str, offset: usize) -> Result<Elem> {
        grammar::parse_elem(self, src, offset)
    }

    pub fn parse_elem(&self, src: &str) -> Result<Elem> {
        self.parse_elem_at(src, 0)
    }

    /// Reduces an integer polynomial into a polynomial quotient or function ring.
    pub fn elem_from_poly(&self, poly: &IntPoly) -> Result<Elem> {
        match &self.0.desc {
            RingDescriptor::PolyQuotient { p, modulus } => {
                let cs = poly.univariate_coeffs_mod(*p)?;
                let r = reduce_mod_poly(&cs, modulus, *p);
                Ok(Elem::Fin(undigits(&r, *p) as u32))
            }
            RingDescriptor::Function { nvars, .. } => {
                if poly.nvars() > *nvars as usize {
                    return Err(Error::DomainMismatch(format!(
                        "{poly} uses more than {nvars} variables"
                    )));
                }
                let fs = self.0.fun.as_ref().unwrap();
                Ok(self.fun_from_table(&fs.table_of(poly)))
            }
            _ if poly.nvars() == 0 => Ok(self.from_int(&poly.eval(&[]))),
            _ => Err(Error::DomainMismatch(format!(
                "{self} has no polynomial elements"
            ))),
        }
    }

    /// Exhaustive check of the commutative ring axioms; returns a description
    /// of the first violation.
    pub fn axiom_violation(&self) -> Option<String> {
        let n = self.size().ok()? as u32;
        let z = self.zero_i();
        let o = self.one_i();
        for a in 0..n {
            if self.add_i(a, z) != a || self.mul_i(a, o) != a {
                return Some(format!(
                    "identity fails at {}",
                    self.fmt_elem(&Elem::Fin(a))
                ));
            }
            if self.add_i(a, self.neg_i(a)) != z {
                return Some(format!(
                    "no additive inverse for {}",
                    self.fmt_elem(&Elem::Fin(a))
                ));
            }
            for b in 0..n {
                if self.add_i(a, b) != self.add_i(b, a) || self.mul_i(a, b) != self.mul_i(b, a) {
                    return Some("operations are not commutative".into());
                }
                for c in 0..n {
                    if self.add_i(self.add_i(a, b), c) != self.add_i(a, self.add_i(b, c))
                        || self.mul_i(self.mul_i(a, b), c) != self.mul_i(a, self.mul_i(b, c))
                        || self.mul_i(a, self.add_i(b, c))
                            != self.add_i(self.mul_i(a, b), self.mul_i(a, c))
                    {
                        return Some("associativity or distributivity fails".into());
                    }
                }
            }
        }
        None
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .filter(|&c| c <= MAX_FINITE_CARD)
        .ok_or_else(|| {
            Error::resource(
                "ring cardinality",
                MAX_FINITE_CARD,
                (base as f64).powi(exp as i32) as u128,
            )
        })
}

/// An element together with its ring; arithmetic checks that both operands
/// come from the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    pub ring: Ring,
    pub value: Elem,
}

impl RingElem {
    fn same(&self, other: &RingElem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{} and {} live in different rings",
                self, other
            )))
        }
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.same(other)?;
        Ok(RingElem {
            ring: self.ring.clone(),
            value: self.ring.add(&self.value, &other.value),
        })
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.same(other)?;
        Ok(RingElem {
            ring: self.ring.clone(),
            value: self.ring.sub(&self.value, &other.value),
        })
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.same(other)?;
        Ok(RingElem {
            ring: self.ring.clone(),
            value: self.ring.mul(&self.value, &other.value),
        })
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            value: self.ring.neg(&self.value),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == self.ring.zero()
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_elem(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_arithmetic() {
        let r = Ring::residue(12).unwrap();
        let s = r.add(&r.parse_elem("7").unwrap(), &r.parse_elem("8").unwrap());
        assert_eq!(r.fmt_elem(&s), "3");
        assert_eq!(r.parse_elem("-1").unwrap(), Elem::Fin(11));
        assert!(Ring::residue(1).is_err());
    }

    #[test]
    fn codeword_sum_in_gf2_quotient() {
        let r = grammar::parse_ring("GF:2/x^5").unwrap();
        assert_eq!(r.cardinality(), Some(32));
        let a = r.parse_elem("x^4+x^2+1").unwrap();
        let b = r.parse_elem("x^3+x^2").unwrap();
        assert_eq!(r.fmt_elem(&r.add(&a, &b)), "x^4+x^3+1");
    }

    #[test]
    fn pixel_difference_in_z3() {
        let r = grammar::parse_ring("prod:[Z,Z,Z]").unwrap();
        let p = r.parse_elem("(130,135,125)").unwrap();
        let a = r.parse_elem("(130,130,130)").unwrap();
        assert_eq!(r.fmt_elem(&r.sub(&p, &a)), "(0,5,-5)");
    }

    #[test]
    fn cardinalities_and_enumeration() {
        assert_eq!(Ring::residue(3).unwrap().elements().unwrap().count(), 3);
        let v4 = grammar::parse_ring("prod:[Zn:2,Zn:2]").unwrap();
        assert_eq!(v4.elements().unwrap().count(), 4);
        let f = Ring::function_ring(2, 1).unwrap();
        assert_eq!(f.cardinality(), Some(4));
        assert_eq!(
            grammar::parse_ring("Fun:p=3,n=2").unwrap().cardinality(),
            Some(19683)
        );
        assert!(matches!(
            Ring::integers().elements(),
            Err(Error::NotEnumerable(_))
        ));
    }

    #[test]
    fn function_ring_elements_print_as_reduced_polynomials() {
        let f = Ring::function_ring(2, 2).unwrap();
        let e = f.parse_elem("x1^3*x2 + x1*x2^2").unwrap();
        assert_eq!(f.fmt_elem(&e), "0");
        let g = f.parse_elem("x1*x2+x1").unwrap();
        assert_eq!(f.fmt_elem(&g), "x1*x2+x1");
        assert_eq!(f.fmt_elem(&f.one()), "1");
    }

    #[test]
    fn mixed_ring_operations_are_rejected() {
        let a = Ring::residue(4).unwrap();
        let b = Ring::residue(6).unwrap();
        let x = a.elem(Elem::Fin(1)).unwrap();
        let y = b.elem(Elem::Fin(1)).unwrap();
        assert!(matches!(x.add(&y), Err(Error::DomainMismatch(_))));
        assert!(a.elem(Elem::Fin(9)).is_err());
    }

    #[test]
    fn finite_rings_satisfy_ring_axioms() {
        for src in [
            "Zn:12",
            "prod:[Zn:2,Zn:3]",
            "GF:2/x^2+x+1",
            "GF:3/x^2",
            "Fun:p=2,n=2",
            "Fun:p=3,n=1",
        ] {
            let r = grammar::parse_ring(src).unwrap();
            assert_eq!(r.axiom_violation(), None, "{src}");
        }
    }
}
