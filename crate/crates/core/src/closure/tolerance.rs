//! Metric tolerance closures on integer polynomials.
//!
//! `f ∈ cl_τ(I)` iff `|f(a)| ≤ τ(a)` at every configured point `a` where all
//! generators of `I` vanish. Membership only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::grammar::split_top_level;
use crate::ring::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TolPoint {
    pub point: Vec<BigInt>,
    pub tau: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToleranceClosure {
    points: Vec<TolPoint>,
}

impl ToleranceClosure {
    pub fn new(points: Vec<TolPoint>) -> Result<ToleranceClosure> {
        if points.iter().any(|p| p.tau.is_negative()) {
            return Err(Error::precondition("tolerances must be nonnegative"));
        }
        if let Some(first) = points.first() {
            if points.iter().any(|p| p.point.len() != first.point.len()) {
                return Err(Error::precondition("points of different dimensions"));
            }
        }
        Ok(ToleranceClosure { points })
    }

    pub fn points(&self) -> &[TolPoint] {
        &self.points
    }

    fn in_variety(point: &[BigInt], gens: &[IntPoly]) -> bool {
        gens.iter().all(|g| g.eval(point).is_zero())
    }

    /// `f ∈ cl_τ(⟨gens⟩)`.
    pub fn member(&self, f: &IntPoly, gens: &[IntPoly]) -> bool {
        self.points
            .iter()
            .filter(|p| Self::in_variety(&p.point, gens))
            .all(|p| BigRational::from_integer(f.eval(&p.point).abs()) <= p.tau)
    }

    /// The tolerance `|r|τ`, scaled pointwise by `|r(a)|`.
    pub fn scaled(&self, r: &IntPoly) -> ToleranceClosure {
        ToleranceClosure {
            points: self
                .points
                .iter()
                .map(|p| TolPoint {
                    point: p.point.clone(),
                    tau: &p.tau * BigRational::from_integer(r.eval(&p.point).abs()),
                })
                .collect(),
        }
    }

    /// Parses `tol:[{point:(1,2), tau:1/2}, ...]`.
    pub fn parse(src: &str) -> Result<ToleranceClosure> {
        let t = src.trim();
        let lead = src.len() - src.trim_start().len();
        let body = t
            .strip_prefix("tol:")
            .ok_or_else(|| Error::parse(lead, "expected tol:[..]"))?;
        let at = lead + 4;
        let inner = body
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse(at, "expected [..]"))?;
        let mut points = Vec::new();
        if inner.trim().is_empty() {
            return ToleranceClosure::new(points);
        }
        for (off, piece) in split_top_level(inner, ',') {
            let pos = at + 1 + off + (piece.len() - piece.trim_start().len());
            let rec = piece
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::parse(pos, "expected {point:(..), tau:q}"))?;
            let mut point = None;
            let mut tau = None;
            for (foff, field) in split_top_level(rec, ',') {
                let fpos = pos + 1 + foff;
                let (key, val) = field
                    .split_once(':')
                    .ok_or_else(|| Error::parse(fpos, "expected key:value"))?;
                match key.trim() {
                    "point" => {
                        let v = val.trim();
                        let coords = v
                            .strip_prefix('(')
                            .and_then(|s| s.strip_suffix(')'))
                            .unwrap_or(v);
                        point = Some(
                            coords
                                .split(',')
                                .map(|c| c.trim().parse::<BigInt>())
                                .collect::<Result<Vec<_>, _>>()
                                .map_err(|_| Error::parse(fpos, "bad point coordinate"))?,
                        );
                    }
                    "tau" => {
                        tau = Some(
                            val.trim()
                                .parse::<BigRational>()
                                .map_err(|_| Error::parse(fpos, "bad tolerance"))?,
                        );
                    }
                    other => return Err(Error::parse(fpos, format!("unknown field '{other}'"))),
                }
            }
            match (point, tau) {
                (Some(point), Some(tau)) => points.push(TolPoint { point, tau }),
                _ => return Err(Error::parse(pos, "point and tau are both required")),
            }
        }
        ToleranceClosure::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::parse_poly;

    fn poly(s: &str) -> IntPoly {
        parse_poly(s, 0).unwrap()
    }

    #[test]
    fn membership_respects_variety_and_tau() {
        let cl =
            ToleranceClosure::parse("tol:[{point:(0,0), tau:1/2}, {point:(1,0), tau:3}]").unwrap();
        // x2 vanishes at both points
        assert!(cl.member(&poly("x1"), &[poly("x2")]));
        assert!(!cl.member(&poly("x1+1"), &[poly("x2")]));
        // only (0,0) lies on V(x1)
        assert!(cl.member(&poly("x2+5*x1"), &[poly("x1")]));
    }

    #[test]
    fn scaled_tolerance() {
        let cl = ToleranceClosure::parse("tol:[{point:(2), tau:1}]").unwrap();
        let s = cl.scaled(&poly("x-5"));
        assert_eq!(s.points()[0].tau, BigRational::from_integer(3.into()));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            ToleranceClosure::parse("tol:[{point:(1)}]"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ToleranceClosure::parse("tol:[{point:(1), tau:-1}]"),
            Err(Error::Precondition(_))
        ));
    }
}
