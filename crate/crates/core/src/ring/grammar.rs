//! Text syntax for rings and elements.
//!
//! Rings: `Z | Zn:<n> | prod:[<ring>,...] | GF:<p>/<modulus> | Fun:p=<p>,n=<nvars>`.

use num_bigint::BigInt;

use super::poly::parse_poly;
use super::{Elem, Ring, RingDescriptor};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    offset: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.offset + self.pos, msg)
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{token}'")))
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn number(&mut self) -> Result<u64> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let text = &self.rest()[..digits];
        let n = text.parse().map_err(|_| self.err("number too large"))?;
        self.pos += digits;
        Ok(n)
    }

    fn descriptor(&mut self) -> Result<RingDescriptor> {
        self.skip_ws();
        if self.eat("Zn:") {
            return Ok(RingDescriptor::Residue(self.number()?));
        }
        if self.eat("prod:[") {
            let mut factors = vec![self.descriptor()?];
            loop {
                self.skip_ws();
                if self.eat(",") {
                    factors.push(self.descriptor()?);
                } else {
                    self.expect("]")?;
                    return Ok(RingDescriptor::Product(factors));
                }
            }
        }
        if self.eat("GF:") {
            let p = self.number()?;
            self.expect("/")?;
            let start = self.pos;
            let len = self.rest().find([',', ']']).unwrap_or(self.rest().len());
            self.pos += len;
            let poly = parse_poly(&self.src[start..self.pos], self.offset + start)?;
            if p < 2 {
                return Err(Error::parse(
                    self.offset + start,
                    "characteristic must be prime",
                ));
            }
            let coeffs = poly.univariate_coeffs_mod(p).map_err(|_| {
                Error::parse(self.offset + start, "modulus must be univariate in x")
            })?;
            return Ok(RingDescriptor::PolyQuotient { p, modulus: coeffs });
        }
        if self.eat("Fun:") {
            self.expect("p=")?;
            let p = self.number()?;
            self.expect(",")?;
            self.skip_ws();
            self.expect("n=")?;
            let n = self.number()?;
            let nvars = u32::try_from(n).map_err(|_| self.err("too many variables"))?;
            return Ok(RingDescriptor::Function { p, nvars });
        }
        if self.eat("Z") {
            return Ok(RingDescriptor::Integers);
        }
        Err(self.err("expected a ring: Z, Zn:<n>, prod:[..], GF:<p>/<poly> or Fun:p=<p>,n=<n>"))
    }
}

pub fn parse_descriptor(src: &str) -> Result<RingDescriptor> {
    let mut c = Cursor {
        src,
        pos: 0,
        offset: 0,
    };
    let d = c.descriptor()?;
    c.skip_ws();
    if !c.rest().is_empty() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(d)
}

pub fn parse_ring(src: &str) -> Result<Ring> {
    Ring::new(parse_descriptor(src)?)
}

/// Splits on commas (or another separator) that are not nested in brackets.
/// Returns each piece with its byte offset.
pub fn split_top_level(src: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &src[start..i]));
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &src[start..]));
    out
}

fn parse_integer(src: &str, offset: usize) -> Result<BigInt> {
    let t = src.trim();
    let lead = src.len() - src.trim_start().len();
    let body = t.strip_prefix('+').unwrap_or(t);
    body.parse::<BigInt>()
        .map_err(|_| Error::parse(offset + lead, format!("expected an integer, found '{t}'")))
}

pub(super) fn parse_elem(ring: &Ring, src: &str, offset: usize) -> Result<Elem> {
    let t = src.trim();
    let lead = src.len() - src.trim_start().len();
    if t.is_empty() {
        return Err(Error::parse(offset, "empty element"));
    }
    match ring.descriptor() {
        RingDescriptor::Integers | RingDescriptor::Residue(_) => {
            Ok(ring.from_int(&parse_integer(src, offset)?))
        }
        RingDescriptor::Product(_) => {
            if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                let parts = split_top_level(inner, ',');
                if parts.len() != ring.factors().len() {
                    return Err(Error::parse(
                        offset + lead,
                        format!(
                            "expected {} components, found {}",
                            ring.factors().len(),
                            parts.len()
                        ),
                    ));
                }
                let comps = parts
                    .iter()
                    .zip(ring.factors())
                    .map(|((at, piece), r)| parse_elem(r, piece, offset + lead + 1 + at))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ring.assemble(comps))
            } else {
                Ok(ring.from_int(&parse_integer(src, offset)?))
            }
        }
        RingDescriptor::PolyQuotient { .. } | RingDescriptor::Function { .. } => {
            let poly = parse_poly(t, offset + lead)?;
            ring.elem_from_poly(&poly).map_err(|e| match e {
                Error::DomainMismatch(m) => Error::parse(offset + lead, m),
                other => other,
            })
        }
        RingDescriptor::Table(tab) => {
            if let Some(i) = tab.labels.iter().position(|l| l == t) {
                return Ok(Elem::Fin(i as u32));
            }
            parse_integer(src, offset)
                .map(|k| ring.from_int(&k))
                .map_err(|_| {
                    Error::parse(
                        offset + lead,
                        format!("unknown element '{t}' of {}", tab.name),
                    )
                })
        }
    }
}

/// Parses a comma-separated list of elements; an empty string is the empty list.
pub fn parse_elem_list(ring: &Ring, src: &str) -> Result<Vec<Elem>> {
    if src.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(src, ',')
        .into_iter()
        .map(|(at, piece)| parse_elem(ring, piece, at))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_ring_forms() {
        assert_eq!(parse_descriptor("Z").unwrap(), RingDescriptor::Integers);
        assert_eq!(
            parse_descriptor("Zn:12").unwrap(),
            RingDescriptor::Residue(12)
        );
        assert_eq!(
            parse_descriptor("prod:[Zn:2, Zn:4]").unwrap(),
            RingDescriptor::Product(vec![RingDescriptor::Residue(2), RingDescriptor::Residue(4)])
        );
        assert_eq!(
            parse_descriptor("GF:2/x^5").unwrap(),
            RingDescriptor::PolyQuotient {
                p: 2,
                modulus: vec![0, 0, 0, 0, 0, 1]
            }
        );
        assert_eq!(
            parse_descriptor("Fun:p=2,n=2").unwrap(),
            RingDescriptor::Function { p: 2, nvars: 2 }
        );
        assert_eq!(
            parse_ring("prod:[Z,Z,Z]").unwrap().to_string(),
            "prod:[Z,Z,Z]"
        );
    }

    #[test]
    fn ring_errors_carry_positions() {
        match parse_descriptor("prod:[Zn:2,Q]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("{other:?}"),
        }
        match parse_descriptor("Zn:") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ring("Zn:1"), Err(Error::InvalidRing(_))));
        assert!(matches!(parse_ring("GF:4/x^2"), Err(Error::InvalidRing(_))));
    }

    #[test]
    fn element_lists_respect_tuples() {
        let r = parse_ring("prod:[Z,Z,Z]").unwrap();
        let xs = parse_elem_list(&r, "(1,1,1), (2,0,-3)").unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(r.fmt_elem(&xs[1]), "(2,0,-3)");
        match parse_elem_list(&r, "(1,1)") {
            Err(Error::Parse { .. }) => {}
            other => panic!("{other:?}"),
        }
        let f = parse_ring("Fun:p=2,n=2").unwrap();
        assert!(matches!(f.parse_elem("x3"), Err(Error::Parse { .. })));
    }
}
