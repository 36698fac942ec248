//! Polynomials: a sparse integer polynomial type used for parsing and for
//! the tolerance closure, univariate arithmetic over 𝔽ₚ for polynomial
//! quotients, and table/coefficient conversion for function rings.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A multivariate polynomial with integer coefficients.
///
/// Monomials are exponent vectors with trailing zeros trimmed; variable `i`
/// prints as `x{i+1}` (or `x` in univariate style).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStyle {
    /// `x`, for univariate quotients.
    Single,
    /// `x1, x2, …`
    Indexed,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    /// The variable with 0-based index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = IntPoly::zero();
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigInt)>>(terms: I) -> Self {
        let mut p = IntPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of variables actually used (highest index + 1).
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let n = ea.len().max(eb.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::constant(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_terms(self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    /// Evaluate at an integer point. Missing coordinates count as 0.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let x = point.get(i).cloned().unwrap_or_default();
                    t *= num_traits::pow(x, k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluate modulo `p` at a point with coordinates in `0..p`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let cm = c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
            let mut t = cm;
            for (i, &k) in e.iter().enumerate() {
                let x = point.get(i).copied().unwrap_or(0);
                t = t * pow_mod(x, k as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Coefficient vector `[c0, c1, …]` of a univariate polynomial, reduced mod `p`.
    pub fn univariate_coeffs_mod(&self, p: u64) -> Result<Vec<u64>> {
        if self.nvars() > 1 {
            return Err(Error::precondition("expected a univariate polynomial in x"));
        }
        let deg = self
            .terms
            .keys()
            .map(|e| e.first().copied().unwrap_or(0))
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![0u64; deg + 1];
        for (e, c) in &self.terms {
            let k = e.first().copied().unwrap_or(0) as usize;
            out[k] = (out[k] + c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")) % p;
        }
        Ok(trim_u64(out))
    }

    pub fn fmt_with(&self, style: VarStyle) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let width = self.nvars();
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        let padded = |e: &Vec<u32>| -> Vec<u32> {
            (0..width).map(|i| e.get(i).copied().unwrap_or(0)).collect()
        };
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| padded(b).cmp(&padded(a)))
        });
        let mut out = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono = monomial(e, style);
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn monomial(e: &[u32], style: VarStyle) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = match style {
            VarStyle::Single => "x".to_string(),
            VarStyle::Indexed => format!("x{}", i + 1),
        };
        parts.push(if k == 1 { name } else { format!("{name}^{k}") });
    }
    parts.join("*")
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(VarStyle::Indexed))
    }
}

pub(crate) fn trim_u64(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Remainder of `a` modulo the monic `modulus`, with `deg(modulus)` coefficients.
pub(crate) fn reduce_mod_poly(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    if r.len() < d {
        r.resize(d, 0);
    }
    for k in (d..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate().take(d) {
            let idx = k - d + j;
            r[idx] = (r[idx] + p - c * m % p) % p;
        }
        r[k] = 0;
    }
    r.truncate(d);
    r
}

pub(crate) fn mul_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Conversion between value tables and reduced coefficient arrays for
/// functions 𝔽ₚⁿ → 𝔽ₚ. Both arrays are indexed in base `p` with the first
/// coordinate (resp. first exponent) most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunSpace {
    pub p: u64,
    pub nvars: u32,
    pub npoints: usize,
    vander: Vec<Vec<u64>>,
    vander_inv: Vec<Vec<u64>>,
}

impl FunSpace {
    pub fn new(p: u64, nvars: u32) -> Self {
        let n = p as usize;
        let vander: Vec<Vec<u64>> = (0..p)
            .map(|a| (0..p).map(|e| pow_mod(a, e, p)).collect())
            .collect();
        let vander_inv = invert_mod_p(&vander, p);
        debug_assert_eq!(vander_inv.len(), n);
        FunSpace {
            p,
            nvars,
            npoints: (p as usize).pow(nvars),
            vander,
            vander_inv,
        }
    }

    pub fn coords(&self, mut j: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.nvars as usize];
        for slot in out.iter_mut().rev() {
            *slot = (j % self.p as usize) as u64;
            j /= self.p as usize;
        }
        out
    }

    pub fn point_index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    fn transform(&self, data: &[u64], m: &[Vec<u64>]) -> Vec<u64> {
        let p = self.p as usize;
        let mut cur = data.to_vec();
        for axis in 0..self.nvars as usize {
            let stride = p.pow(self.nvars - 1 - axis as u32);
            let mut next = cur.clone();
            for base in 0..self.npoints {
                if !(base / stride).is_multiple_of(p) {
                    continue;
                }
                for (row, mrow) in m.iter().enumerate() {
                    let mut acc = 0u64;
                    for (col, &coef) in mrow.iter().enumerate() {
                        acc = (acc + coef * cur[base + col * stride]) % self.p;
                    }
                    next[base + row * stride] = acc;
                }
            }
            cur = next;
        }
        cur
    }

    pub fn table_to_coeffs(&self, table: &[u64]) -> Vec<u64> {
        self.transform(table, &self.vander_inv)
    }

    pub fn coeffs_to_table(&self, coeffs: &[u64]) -> Vec<u64> {
        self.transform(coeffs, &self.vander)
    }

    pub fn table_of(&self, poly: &IntPoly) -> Vec<u64> {
        (0..self.npoints)
            .map(|j| poly.eval_mod(&self.coords(j), self.p))
            .collect()
    }

    pub fn poly_of(&self, table: &[u64]) -> IntPoly {
        let coeffs = self.table_to_coeffs(table);
        IntPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| {
                    (
                        self.coords(k).into_iter().map(|e| e as u32).collect(),
                        BigInt::from(c),
                    )
                }),
        )
    }
}

fn invert_mod_p(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a[r][col] != 0)
            .expect("Vandermonde over distinct points is invertible");
        a.swap(col, pivot);
        let inv = inv_mod_prime(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

/// Parse `x^4+x^3+1`, `x1*x2+x1`, `2*x1^2-(x2-1)^3`, … into an [`IntPoly`].
///
/// `offset` is added to reported error positions.
pub fn parse_poly(src: &str, offset: usize) -> Result<IntPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        offset,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.err("empty polynomial"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.offset + self.pos, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<IntPoly> {
        self.skip_ws();
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // implicit product such as `2x` or `x1x2`
                Some(b'x' | b'(') => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let n = self.number()?;
        n.to_u32()
            .ok_or_else(|| Error::parse(self.offset + at, "exponent too large"))
    }

    fn factor(&mut self) -> Result<IntPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.number()?;
                let k = self.exponent()?;
                Ok(IntPoly::constant(num_traits::pow(n, k as usize)))
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = if matches!(self.peek(), Some(b'0'..=b'9')) {
                    let at = self.pos;
                    let n = self.number()?;
                    let i = n.to_usize().filter(|&i| (1..=64).contains(&i));
                    i.ok_or_else(|| {
                        Error::parse(self.offset + at, "variable index must be in 1..=64")
                    })? - 1
                } else {
                    0
                };
                let k = self.exponent()?;
                Ok(IntPoly::var(idx).pow(k))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let k = self.exponent()?;
                Ok(inner.pow(k))
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(_) => Err(self.err("unexpected character in polynomial")),
            None => Err(self.err("unexpected end of polynomial")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_univariate() {
        let p = parse_poly("x^4+x^2+1", 0).unwrap();
        assert_eq!(p.fmt_with(VarStyle::Single), "x^4+x^2+1");
        assert_eq!(p.univariate_coeffs_mod(2).unwrap(), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn parses_multivariate_with_parens_and_implicit_products() {
        let p = parse_poly("(x1-1)*(x2+2) - 2x1x2", 0).unwrap();
        let q = parse_poly("-x1*x2+2*x1-x2-2", 0).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "-x1*x2+2*x1-x2-2");
    }

    #[test]
    fn parse_errors_report_positions() {
        match parse_poly("x^2+*3", 10) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("", 0).is_err());
        assert!(parse_poly("x1+(x2", 0).is_err());
    }

    #[test]
    fn polynomial_reduction_mod_monic() {
        // x^5 ≡ x + 1 mod (x^2 + x + 1) over F_2? x^3 ≡ 1 so x^5 ≡ x^2 ≡ x + 1.
        let r = reduce_mod_poly(&[0, 0, 0, 0, 0, 1], &[1, 1, 1], 2);
        assert_eq!(r, vec![1, 1]);
    }

    #[test]
    fn function_tables_round_trip_through_coefficients() {
        for (p, n) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (2, 3)] {
            let fs = FunSpace::new(p, n);
            for seed in 0..20u64 {
                let table: Vec<u64> = (0..fs.npoints)
                    .map(|j| (seed * 7 + j as u64 * 3 + j as u64 / 2) % p)
                    .collect();
                let poly = fs.poly_of(&table);
                assert_eq!(fs.table_of(&poly), table, "p={p} n={n}");
                assert!(poly.terms().all(|(e, _)| e.iter().all(|&k| (k as u64) < p)));
            }
        }
    }

    #[test]
    fn eval_over_integers() {
        let p = parse_poly("x1^2-3*x2", 0).unwrap();
        assert_eq!(
            p.eval(&[BigInt::from(4), BigInt::from(-2)]),
            BigInt::from(22)
        );
    }
}
