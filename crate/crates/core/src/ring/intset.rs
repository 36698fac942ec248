//! Subsets of ℤ that are either finite or a finite union of residue classes
//! modulo some period. Ideals `dℤ`, their images under scaling, and the sets
//! `A + mℤ` produced by shift closures all live in this family.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest number of residues an operation may materialize.
pub const EXPANSION_LIMIT: u128 = 1 << 22;

/// A finite or periodic set of integers in canonical form.
///
/// `Periodic` always carries the minimal period and a nonempty residue set,
/// so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntSet {
    Finite(BTreeSet<BigInt>),
    Periodic {
        period: BigUint,
        residues: BTreeSet<BigUint>,
    },
}

fn to_u128(n: &BigUint) -> u128 {
    n.to_u128().unwrap_or(u128::MAX)
}

fn guard(what: &str, n: &BigUint) -> Result<()> {
    let actual = to_u128(n);
    if actual > EXPANSION_LIMIT {
        return Err(Error::resource(what, EXPANSION_LIMIT, actual));
    }
    Ok(())
}

fn residue(x: &BigInt, period: &BigUint) -> BigUint {
    let p = BigInt::from(period.clone());
    x.mod_floor(&p)
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

impl IntSet {
    pub fn empty() -> Self {
        IntSet::Finite(BTreeSet::new())
    }

    /// All of ℤ.
    pub fn all() -> Self {
        IntSet::Periodic {
            period: BigUint::one(),
            residues: BTreeSet::from([BigUint::zero()]),
        }
    }

    /// The ideal `dℤ`; `d = 0` gives `{0}`.
    pub fn multiples(d: &BigUint) -> Self {
        if d.is_zero() {
            IntSet::Finite(BTreeSet::from([BigInt::zero()]))
        } else {
            IntSet::Periodic {
                period: d.clone(),
                residues: BTreeSet::from([BigUint::zero()]),
            }
        }
    }

    pub fn finite<I: IntoIterator<Item = BigInt>>(elems: I) -> Self {
        IntSet::Finite(elems.into_iter().collect())
    }

    /// `{x : x mod period ∈ residues}`, canonicalized. `period` must be positive.
    pub fn periodic<I: IntoIterator<Item = BigInt>>(period: BigUint, residues: I) -> Result<Self> {
        if period.is_zero() {
            return Err(Error::precondition("periodic set needs a positive period"));
        }
        let residues: BTreeSet<BigUint> =
            residues.into_iter().map(|r| residue(&r, &period)).collect();
        canonical_periodic(period, residues)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntSet::Finite(s) if s.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IntSet::Finite(_))
    }

    pub fn is_all(&self) -> bool {
        matches!(self, IntSet::Periodic { period, .. } if period.is_one())
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        match self {
            IntSet::Finite(s) => s.contains(x),
            IntSet::Periodic { period, residues } => residues.contains(&residue(x, period)),
        }
    }

    /// `Some(d)` iff the set is the subgroup `dℤ`.
    pub fn principal_generator(&self) -> Option<BigUint> {
        match self {
            IntSet::Finite(s) if s.len() == 1 && s.contains(&BigInt::zero()) => {
                Some(BigUint::zero())
            }
            IntSet::Periodic { period, residues }
                if residues.len() == 1 && residues.contains(&BigUint::zero()) =>
            {
                Some(period.clone())
            }
            _ => None,
        }
    }

    pub fn is_subgroup(&self) -> bool {
        self.principal_generator().is_some()
    }

    /// Nonnegative generator of the ideal generated by the set (the gcd of its elements).
    pub fn ideal_generator(&self) -> BigUint {
        match self {
            IntSet::Finite(s) => s
                .iter()
                .fold(BigUint::zero(), |g, x| g.gcd(&x.magnitude().clone())),
            IntSet::Periodic { period, residues } => {
                residues.iter().fold(period.clone(), |g, r| g.gcd(r))
            }
        }
    }

    pub fn period(&self) -> Option<&BigUint> {
        match self {
            IntSet::Periodic { period, .. } => Some(period),
            IntSet::Finite(_) => None,
        }
    }

    /// Residues modulo `n` of a periodic set whose period divides `n`.
    pub fn residues_mod(&self, n: &BigUint) -> Result<BTreeSet<BigUint>> {
        match self {
            IntSet::Periodic { period, residues } => {
                if !(n % period).is_zero() {
                    return Err(Error::precondition(format!(
                        "period {period} does not divide {n}"
                    )));
                }
                let reps = n / period;
                guard(
                    "residue expansion",
                    &(&reps * BigUint::from(residues.len())),
                )?;
                let mut out = BTreeSet::new();
                let mut k = BigUint::zero();
                while k < reps {
                    let shift = &k * period;
                    out.extend(residues.iter().map(|r| r + &shift));
                    k += 1u32;
                }
                Ok(out)
            }
            IntSet::Finite(s) => {
                if s.is_empty() {
                    Ok(BTreeSet::new())
                } else {
                    Err(Error::precondition(
                        "finite nonempty set has no residue description",
                    ))
                }
            }
        }
    }

    /// An element of `self` that is not in `other`, if any.
    pub fn find_outside(&self, other: &IntSet) -> Result<Option<BigInt>> {
        match (self, other) {
            (IntSet::Finite(a), _) => Ok(a.iter().find(|x| !other.contains(x)).cloned()),
            (IntSet::Periodic { residues, .. }, IntSet::Finite(_)) => {
                let r = residues
                    .iter()
                    .next()
                    .expect("canonical periodic set is nonempty");
                // A periodic set is infinite; pick a representative beyond every finite element.
                let far = match other {
                    IntSet::Finite(s) => s
                        .iter()
                        .map(|x| x.magnitude().clone())
                        .max()
                        .unwrap_or_default(),
                    _ => unreachable!(),
                };
                let period = self.period().expect("periodic");
                let k = &far / period + 1u32;
                Ok(Some(BigInt::from(r + k * period)))
            }
            (
                IntSet::Periodic {
                    period: pa,
                    residues: ra,
                },
                IntSet::Periodic {
                    period: pb,
                    residues: rb,
                },
            ) => {
                if (pa % pb).is_zero() {
                    return Ok(ra
                        .iter()
                        .find(|r| !rb.contains(&(*r % pb)))
                        .map(|r| BigInt::from(r.clone())));
                }
                let steps = pb / pa.gcd(pb);
                guard("subset check", &(&steps * BigUint::from(ra.len())))?;
                for r in ra {
                    let mut k = BigUint::zero();
                    while k < steps {
                        let x = r + &k * pa;
                        if !rb.contains(&(&x % pb)) {
                            return Ok(Some(BigInt::from(x)));
                        }
                        k += 1u32;
                    }
                }
                Ok(None)
            }
        }
    }

    pub fn is_subset(&self, other: &IntSet) -> Result<bool> {
        Ok(self.find_outside(other)?.is_none())
    }

    /// Minkowski sum `A + B`.
    pub fn sum(&self, other: &IntSet) -> Result<IntSet> {
        if self.is_empty() || other.is_empty() {
            return Ok(IntSet::empty());
        }
        if let (Some(a), Some(b)) = (self.principal_generator(), other.principal_generator()) {
            return Ok(IntSet::multiples(&a.gcd(&b)));
        }
        match (self, other) {
            (IntSet::Finite(a), IntSet::Finite(b)) => {
                guard(
                    "finite sum",
                    &BigUint::from(a.len() as u128 * b.len() as u128),
                )?;
                Ok(IntSet::Finite(
                    a.iter()
                        .flat_map(|x| b.iter().map(move |y| x + y))
                        .collect(),
                ))
            }
            (IntSet::Finite(f), IntSet::Periodic { period, residues })
            | (IntSet::Periodic { period, residues }, IntSet::Finite(f)) => {
                let out = f
                    .iter()
                    .flat_map(|x| residues.iter().map(move |r| x + BigInt::from(r.clone())))
                    .collect::<Vec<_>>();
                IntSet::periodic(period.clone(), out)
            }
            (
                IntSet::Periodic {
                    period: pa,
                    residues: ra,
                },
                IntSet::Periodic {
                    period: pb,
                    residues: rb,
                },
            ) => {
                let g = pa.gcd(pb);
                guard(
                    "periodic sum",
                    &BigUint::from(ra.len() as u128 * rb.len() as u128),
                )?;
                let gr = &g;
                let out: BTreeSet<BigUint> = ra
                    .iter()
                    .flat_map(|x| rb.iter().map(move |y| (x + y) % gr))
                    .collect();
                canonical_periodic(g, out)
            }
        }
    }

    /// `rA = {r·a : a ∈ A}`.
    pub fn scale(&self, r: &BigInt) -> Result<IntSet> {
        if self.is_empty() {
            return Ok(IntSet::empty());
        }
        if r.is_zero() {
            return Ok(IntSet::finite([BigInt::zero()]));
        }
        match self {
            IntSet::Finite(s) => Ok(IntSet::Finite(s.iter().map(|x| x * r).collect())),
            IntSet::Periodic { period, residues } => {
                let new_period = period * r.magnitude();
                let out = residues
                    .iter()
                    .map(|x| BigInt::from(x.clone()) * r)
                    .collect::<Vec<_>>();
                IntSet::periodic(new_period, out)
            }
        }
    }

    pub fn neg(&self) -> IntSet {
        self.scale(&BigInt::from(-1))
            .expect("negation never expands")
    }

    pub fn intersection(&self, other: &IntSet) -> Result<IntSet> {
        match (self, other) {
            (IntSet::Finite(a), _) => Ok(IntSet::Finite(
                a.iter().filter(|x| other.contains(x)).cloned().collect(),
            )),
            (_, IntSet::Finite(b)) => Ok(IntSet::Finite(
                b.iter().filter(|x| self.contains(x)).cloned().collect(),
            )),
            (IntSet::Periodic { period: pa, .. }, IntSet::Periodic { period: pb, .. }) => {
                let l = pa.lcm(pb);
                let ea = self.residues_mod(&l)?;
                let eb = other.residues_mod(&l)?;
                let both: BTreeSet<BigUint> = ea.intersection(&eb).cloned().collect();
                if both.is_empty() {
                    Ok(IntSet::empty())
                } else {
                    canonical_periodic(l, both)
                }
            }
        }
    }

    pub fn union(&self, other: &IntSet) -> Result<IntSet> {
        match (self, other) {
            (IntSet::Finite(a), IntSet::Finite(b)) => {
                Ok(IntSet::Finite(a.union(b).cloned().collect()))
            }
            (IntSet::Finite(f), p @ IntSet::Periodic { .. })
            | (p @ IntSet::Periodic { .. }, IntSet::Finite(f)) => {
                if f.iter().all(|x| p.contains(x)) {
                    Ok(p.clone())
                } else {
                    Err(Error::NotRepresentable(format!(
                        "union of {p} with a finite set"
                    )))
                }
            }
            (IntSet::Periodic { period: pa, .. }, IntSet::Periodic { period: pb, .. }) => {
                let l = pa.lcm(pb);
                let mut all = self.residues_mod(&l)?;
                all.extend(other.residues_mod(&l)?);
                canonical_periodic(l, all)
            }
        }
    }

    /// Image of the set under reduction modulo `m > 0`, as residues in `[0, m)`.
    pub fn reduce_mod(&self, m: &BigUint) -> Result<BTreeSet<BigUint>> {
        match self {
            IntSet::Finite(s) => Ok(s.iter().map(|x| residue(x, m)).collect()),
            IntSet::Periodic { period, residues } => {
                let g = period.gcd(m);
                let keep: BTreeSet<BigUint> = residues.iter().map(|r| r % &g).collect();
                guard("residue reduction", m)?;
                let mut out = BTreeSet::new();
                let mut y = BigUint::zero();
                while &y < m {
                    if keep.contains(&(&y % &g)) {
                        out.insert(y.clone());
                    }
                    y += 1u32;
                }
                Ok(out)
            }
        }
    }

    /// Elements in `[-bound, bound]`, for display and bounded scans.
    pub fn elements_within(&self, bound: u64) -> Vec<BigInt> {
        let b = bound as i64;
        match self {
            IntSet::Finite(s) => s
                .iter()
                .filter(|x| x.magnitude() <= &BigUint::from(bound))
                .cloned()
                .collect(),
            IntSet::Periodic { .. } => (-b..=b)
                .map(BigInt::from)
                .filter(|x| self.contains(x))
                .collect(),
        }
    }
}

fn canonical_periodic(period: BigUint, residues: BTreeSet<BigUint>) -> Result<IntSet> {
    if residues.is_empty() {
        return Ok(IntSet::empty());
    }
    debug_assert!(residues.iter().all(|r| r < &period));
    let first = residues.iter().next().expect("nonempty").clone();
    let mut step = period.clone();
    if residues.len() > 1 {
        guard(
            "period reduction",
            &BigUint::from((residues.len() as u128).pow(2)),
        )?;
        for r in &residues {
            let t = (r + &period - &first) % &period;
            if t.is_zero() {
                continue;
            }
            if residues
                .iter()
                .all(|x| residues.contains(&((x + &t) % &period)))
            {
                step = step.gcd(&t);
            }
        }
    }
    if step == period {
        return Ok(IntSet::Periodic { period, residues });
    }
    let reduced: BTreeSet<BigUint> = residues.iter().map(|r| r % &step).collect();
    Ok(IntSet::Periodic {
        period: step,
        residues: reduced,
    })
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.principal_generator() {
            return write!(f, "({d})");
        }
        match self {
            IntSet::Finite(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            IntSet::Periodic { period, residues } => {
                let parts: Vec<String> = residues.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}} + {period}Z", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: u64) -> IntSet {
        IntSet::multiples(&BigUint::from(d))
    }

    fn p(period: u64, rs: &[i64]) -> IntSet {
        IntSet::periodic(BigUint::from(period), rs.iter().map(|&r| BigInt::from(r))).unwrap()
    }

    #[test]
    fn periodic_sets_reduce_to_minimal_period() {
        assert_eq!(p(12, &[0, 6]), m(6));
        assert_eq!(p(12, &[1, 4, 7, 10]), p(3, &[1]));
        assert_eq!(p(5, &[0, 1, 2, 3, 4]), IntSet::all());
        assert_eq!(p(6, &[-1]), p(6, &[5]));
    }

    #[test]
    fn sums_of_principal_sets_use_gcd() {
        assert_eq!(m(4).sum(&m(6)).unwrap(), m(2));
        assert_eq!(m(0).sum(&m(6)).unwrap(), m(6));
        let coset = IntSet::finite([BigInt::from(7)]).sum(&m(5)).unwrap();
        assert_eq!(coset, p(5, &[2]));
    }

    #[test]
    fn subset_checks_across_periods() {
        assert!(m(12).is_subset(&m(4)).unwrap());
        assert!(!m(4).is_subset(&m(12)).unwrap());
        assert!(p(6, &[1]).is_subset(&p(3, &[1])).unwrap());
        assert!(!p(4, &[1]).is_subset(&p(6, &[1])).unwrap());
        assert!(!m(3).is_subset(&IntSet::finite([BigInt::zero()])).unwrap());
        let w = m(3)
            .find_outside(&IntSet::finite([BigInt::zero(), BigInt::from(3)]))
            .unwrap()
            .unwrap();
        assert!(m(3).contains(&w) && w != BigInt::zero() && w != BigInt::from(3));
    }

    #[test]
    fn scaling_and_intersection() {
        assert_eq!(m(3).scale(&BigInt::from(-4)).unwrap(), m(12));
        assert_eq!(p(5, &[2]).scale(&BigInt::from(2)).unwrap(), p(10, &[4]));
        assert_eq!(m(4).intersection(&m(6)).unwrap(), m(12));
        assert_eq!(p(2, &[1]).intersection(&m(2)).unwrap(), IntSet::empty());
        assert_eq!(
            m(5).scale(&BigInt::zero()).unwrap(),
            IntSet::finite([BigInt::zero()])
        );
    }

    #[test]
    fn unions_and_reduction() {
        assert_eq!(m(4).union(&p(4, &[2])).unwrap(), m(2));
        assert_eq!(
            m(2).union(&IntSet::finite([BigInt::from(4)])).unwrap(),
            m(2)
        );
        assert!(m(2).union(&IntSet::finite([BigInt::from(3)])).is_err());
        let r = p(4, &[1]).reduce_mod(&BigUint::from(6u32)).unwrap();
        assert_eq!(r, [1u32, 3, 5].into_iter().map(BigUint::from).collect());
        let r = IntSet::finite([BigInt::from(-1), BigInt::from(7)])
            .reduce_mod(&BigUint::from(4u32))
            .unwrap();
        assert_eq!(r, [3u32].into_iter().map(BigUint::from).collect());
    }

    #[test]
    fn ideal_generator_is_gcd() {
        assert_eq!(
            IntSet::finite([4, 6].map(BigInt::from)).ideal_generator(),
            BigUint::from(2u32)
        );
        assert_eq!(p(30, &[12]).ideal_generator(), BigUint::from(6u32));
        assert_eq!(IntSet::empty().ideal_generator(), BigUint::zero());
    }
}
