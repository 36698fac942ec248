//! Finite approximate modules: module closures, approximate submodules and
//! quotients, approximate homomorphisms and the isomorphism theorems.
//!
//! A module is `ℤ/n₁ × … × ℤ/n_k` with the canonical action of ℤ or of ℤ/n.
//! Subsets are bit masks, so modules have at most 64 elements.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closure::axioms::{
    check_mask_model, AxiomReport, Counterexample, MaskModel, Mode, SumRule, Verdict,
};
use crate::error::{Error, Result};
use crate::ring::grammar::split_top_level;

/// Largest module handled.
pub const MODULE_GUARD: usize = 64;
/// Image-morphic checks run over all subsets up to this size.
pub const ALL_SUBSETS_UP_TO: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scalars {
    Integers,
    Residue(u64),
}

impl fmt::Display for Scalars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalars::Integers => write!(f, "Z"),
            Scalars::Residue(n) => write!(f, "Zn:{n}"),
        }
    }
}

impl TryFrom<String> for Scalars {
    type Error = Error;
    fn try_from(s: String) -> Result<Scalars> {
        Scalars::parse(&s)
    }
}

impl From<Scalars> for String {
    fn from(s: Scalars) -> String {
        s.to_string()
    }
}

impl Scalars {
    pub fn parse(src: &str) -> Result<Scalars> {
        let t = src.trim();
        if t == "Z" {
            return Ok(Scalars::Integers);
        }
        let n = t
            .strip_prefix("Zn:")
            .or_else(|| t.strip_prefix("Z/"))
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(0, "expected scalar ring Z or Zn:n"))?;
        Ok(Scalars::Residue(n))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

fn has(mask: u64, i: usize) -> bool {
    mask >> i & 1 == 1
}

/// A finite module `ℤ/n₁ × … × ℤ/n_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    scalars: Scalars,
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    exponent: u64,
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{} over {}", parts.join("x"), self.scalars)
    }
}

impl Module {
    pub fn new(scalars: Scalars, orders: &[u64]) -> Result<Module> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::precondition(
                "module needs at least one factor Z/n with n >= 1",
            ));
        }
        let size = orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .unwrap_or(u64::MAX);
        if size > MODULE_GUARD as u64 {
            return Err(Error::resource(
                "module size",
                MODULE_GUARD as u128,
                size as u128,
            ));
        }
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let exponent = orders.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n);
        let m = Module {
            scalars,
            orders: orders.to_vec(),
            strides,
            size: size as usize,
            exponent,
        };
        if let Some(why) = m.action_violation() {
            return Err(Error::precondition(format!(
                "action of {scalars} on {m} is not a module: {why}"
            )));
        }
        Ok(m)
    }

    pub fn cyclic(n: u64) -> Result<Module> {
        Module::new(Scalars::Integers, &[n])
    }

    /// `Z/2xZ/4` style groups; factors separated by `x`.
    pub fn parse(group: &str, scalars: Scalars) -> Result<Module> {
        let mut orders = Vec::new();
        let mut pos = group.len() - group.trim_start().len();
        for part in group.trim().split(['x', '×']) {
            let t = part.trim();
            let n = t
                .strip_prefix("Z/")
                .or_else(|| t.strip_prefix("Zn:"))
                .and_then(|s| s.trim().parse::<u64>().ok())
                .ok_or_else(|| Error::parse(pos, "expected Z/n"))?;
            orders.push(n);
            pos += part.len() + 1;
        }
        Module::new(scalars, &orders)
    }

    fn action_violation(&self) -> Option<String> {
        let rs = self.scalar_count() as u64;
        let red = |r: u64| match self.scalars {
            Scalars::Integers => r,
            Scalars::Residue(n) => r % n,
        };
        for r in 0..rs {
            for s in 0..rs {
                for x in 0..self.size {
                    if self.smul(red(r + s), x) != self.add(self.smul(r, x), self.smul(s, x)) {
                        return Some(format!(
                            "({r}+{s})x differs from {r}x+{s}x at x = {}",
                            self.render_elem(x)
                        ));
                    }
                    if self.smul(red(r * s), x) != self.smul(r, self.smul(s, x)) {
                        return Some(format!(
                            "({r}{s})x differs from {r}({s}x) at x = {}",
                            self.render_elem(x)
                        ));
                    }
                }
            }
            for x in 0..self.size {
                for y in 0..self.size {
                    if self.smul(r, self.add(x, y)) != self.add(self.smul(r, x), self.smul(r, y)) {
                        return Some(format!("{r}(x+y) differs from {r}x+{r}y"));
                    }
                }
            }
        }
        None
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of distinct scalar actions: ℤ acts through ℤ/exponent.
    pub fn scalar_count(&self) -> usize {
        match self.scalars {
            Scalars::Integers => self.exponent as usize,
            Scalars::Residue(n) => n as usize,
        }
    }

    pub fn coords(&self, x: usize) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (x / s) as u64 % n)
            .collect()
    }

    pub fn from_coords(&self, c: &[u64]) -> usize {
        c.iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&v, &n), &s)| (v % n) as usize * s)
            .sum()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let c: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        self.from_coords(&c)
    }

    pub fn neg(&self, a: usize) -> usize {
        let c: Vec<u64> = self
            .coords(a)
            .iter()
            .zip(&self.orders)
            .map(|(x, n)| (n - x) % n)
            .collect();
        self.from_coords(&c)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn smul(&self, r: u64, x: usize) -> usize {
        let c: Vec<u64> = self
            .coords(x)
            .iter()
            .zip(&self.orders)
            .map(|(&v, &n)| ((r % n) * v) % n)
            .collect();
        self.from_coords(&c)
    }

    pub fn full(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    /// The subgroup generated by `mask`; it is also the submodule generated.
    pub fn span(&self, mask: u64) -> u64 {
        let mut out = 1u64;
        let mut frontier: Vec<usize> = vec![0];
        let gens: Vec<usize> = bits(mask).collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.add(x, g);
                if !has(out, y) {
                    out |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        out
    }

    pub fn minkowski(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        for x in bits(a) {
            for y in bits(b) {
                out |= 1 << self.add(x, y);
            }
        }
        out
    }

    pub fn is_subgroup(&self, mask: u64) -> bool {
        has(mask, 0) && bits(mask).all(|x| bits(mask).all(|y| has(mask, self.sub(x, y))))
    }

    /// All subgroups, ordered by size then mask.
    pub fn subgroups(&self) -> Vec<u64> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![1u64];
        seen.insert(1u64);
        while let Some(s) = stack.pop() {
            for x in 0..self.size {
                if !has(s, x) {
                    let t = self.span(s | 1 << x);
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
        }
        let mut v: Vec<u64> = seen.into_iter().collect();
        v.sort_by_key(|&m| (m.count_ones(), m));
        v
    }

    pub fn render_elem(&self, x: usize) -> String {
        let c = self.coords(x);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }

    pub fn render_set(&self, mask: u64) -> String {
        let parts: Vec<String> = bits(mask).map(|x| self.render_elem(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn parse_elem(&self, src: &str) -> Result<usize> {
        let t = src.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        let vals: Vec<i64> = inner
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(0, format!("bad module element {t:?}")))?;
        if vals.len() != self.orders.len() {
            return Err(Error::parse(
                0,
                format!("{t:?} needs {} coordinates", self.orders.len()),
            ));
        }
        let c: Vec<u64> = vals
            .iter()
            .zip(&self.orders)
            .map(|(&v, &n)| v.rem_euclid(n as i64) as u64)
            .collect();
        Ok(self.from_coords(&c))
    }

    /// A comma-separated list of elements, optionally in braces.
    pub fn parse_set(&self, src: &str) -> Result<u64> {
        let t = src.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(t);
        let mut mask = 0u64;
        for (at, piece) in split_top_level(inner, ',') {
            if piece.trim().is_empty() {
                continue;
            }
            let x = self.parse_elem(piece).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::parse(at, msg),
                e => e,
            })?;
            mask |= 1 << x;
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModClosureKind {
    /// `⟨X⟩`
    Generated,
    /// `⟨X⟩ + N₀`
    SubmoduleShift(u64),
    /// `X + N₀`
    SetShift(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModClosure {
    module: Module,
    kind: ModClosureKind,
}

impl ModClosure {
    pub fn generated(m: &Module) -> ModClosure {
        ModClosure {
            module: m.clone(),
            kind: ModClosureKind::Generated,
        }
    }

    pub fn submodule_shift(m: &Module, n0: u64) -> Result<ModClosure> {
        if !m.is_subgroup(n0) {
            return Err(Error::precondition(format!(
                "{} is not a submodule",
                m.render_set(n0)
            )));
        }
        Ok(ModClosure {
            module: m.clone(),
            kind: ModClosureKind::SubmoduleShift(n0),
        })
    }

    pub fn set_shift(m: &Module, n0: u64) -> Result<ModClosure> {
        if !m.is_subgroup(n0) {
            return Err(Error::precondition(format!(
                "{} is not a submodule",
                m.render_set(n0)
            )));
        }
        Ok(ModClosure {
            module: m.clone(),
            kind: ModClosureKind::SetShift(n0),
        })
    }

    /// `gen`, `shift:N=a,b` or `setshift:N=a,b`; N₀ is the submodule generated.
    pub fn parse(m: &Module, src: &str) -> Result<ModClosure> {
        let t = src.trim();
        if t == "gen" {
            return Ok(ModClosure::generated(m));
        }
        for (prefix, set) in [("shift:N=", false), ("setshift:N=", true)] {
            if let Some(body) = t.strip_prefix(prefix) {
                let n0 = m.span(m.parse_set(body)?);
                return if set {
                    ModClosure::set_shift(m, n0)
                } else {
                    ModClosure::submodule_shift(m, n0)
                };
            }
        }
        Err(Error::parse(
            0,
            "expected a module closure: gen, shift:N=.. or setshift:N=..",
        ))
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn kind(&self) -> &ModClosureKind {
        &self.kind
    }

    pub fn shift(&self) -> u64 {
        match self.kind {
            ModClosureKind::Generated => 1,
            ModClosureKind::SubmoduleShift(n0) | ModClosureKind::SetShift(n0) => n0,
        }
    }

    pub fn eval(&self, mask: u64) -> u64 {
        let m = &self.module;
        match self.kind {
            ModClosureKind::Generated => m.span(mask),
            ModClosureKind::SubmoduleShift(n0) => m.span(mask | n0),
            ModClosureKind::SetShift(n0) => m.minkowski(mask, n0),
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            ModClosureKind::Generated => "gen".into(),
            ModClosureKind::SubmoduleShift(n0) => format!("shift:N={}", self.module.render_set(n0)),
            ModClosureKind::SetShift(n0) => format!("setshift:N={}", self.module.render_set(n0)),
        }
    }
}

struct ModModel<'a>(&'a ModClosure);

impl MaskModel for ModModel<'_> {
    fn size(&self) -> usize {
        self.0.module.size
    }
    fn zero(&self) -> usize {
        0
    }
    fn add(&self, a: usize, b: usize) -> usize {
        self.0.module.add(a, b)
    }
    fn scalar_count(&self) -> usize {
        self.0.module.scalar_count()
    }
    fn smul(&self, r: usize, x: usize) -> usize {
        self.0.module.smul(r as u64, x)
    }
    fn closure(&self, mask: u64) -> Result<u64> {
        Ok(self.0.eval(mask))
    }
    fn is_ideal(&self, _mask: u64) -> bool {
        false
    }
    fn subgroups(&self) -> Result<Vec<u64>> {
        Ok(self.0.module.subgroups())
    }
    fn render_set(&self, mask: u64) -> String {
        self.0.module.render_set(mask)
    }
    fn render_elem(&self, x: usize) -> String {
        self.0.module.render_elem(x)
    }
    fn render_scalar(&self, r: usize) -> String {
        r.to_string()
    }
    fn axiom_name(&self, a: crate::closure::axioms::Axiom) -> &'static str {
        a.module_name()
    }
    fn has_absorption(&self) -> bool {
        false
    }
}

/// CM1–CM4 for a module closure.
pub fn check_cm_axioms(cl: &ModClosure, mode: Mode, sum: SumRule) -> Result<AxiomReport> {
    check_mask_model(
        &ModModel(cl),
        mode,
        sum,
        cl.module.to_string(),
        cl.describe(),
    )
}

/// `RN ⊆ cl_M(N)` for a subgroup `N`.
pub fn is_approx_submodule(cl: &ModClosure, n: u64) -> Result<Verdict> {
    const NAME: &str = "approx-submodule";
    let m = &cl.module;
    if !m.is_subgroup(n) {
        return Err(Error::precondition(format!(
            "{} is not a subgroup",
            m.render_set(n)
        )));
    }
    let c = cl.eval(n);
    let rs = m.scalar_count() as u64;
    let mut checked = 0;
    for r in 0..rs {
        for x in bits(n) {
            checked += 1;
            let y = m.smul(r, x);
            if !has(c, y) {
                let ce = Counterexample::note(
                    NAME,
                    format!(
                        "{r}·{} = {} lies outside cl(N)",
                        m.render_elem(x),
                        m.render_elem(y)
                    ),
                )
                .with_set("N", m.render_set(n))
                .with_set("cl(N)", m.render_set(c));
                return Ok(Verdict::from_check(
                    NAME,
                    checked,
                    "all r and n in N",
                    Some(ce),
                ));
            }
        }
    }
    Ok(Verdict::pass(NAME, checked, "all r and n in N"))
}

/// A subgroup `carrier` partitioned by `x ∼ y ⇔ x − y ∈ rel`.
#[derive(Debug, Clone)]
pub struct ModQuotient {
    pub label: String,
    pub carrier: u64,
    pub rel: u64,
    pub classes: Vec<u64>,
    class_of: Vec<usize>,
    /// Verdict for independence of `+` and the action from representatives.
    pub well_defined: Verdict,
}

impl ModQuotient {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> Option<usize> {
        (self.class_of[x] != usize::MAX).then_some(self.class_of[x])
    }

    pub fn rep(&self, c: usize) -> usize {
        self.classes[c].trailing_zeros() as usize
    }

    pub fn render_class(&self, m: &Module, c: usize) -> String {
        format!("[{}]", m.render_elem(self.rep(c)))
    }

    fn union(&self, cs: u64) -> u64 {
        bits(cs).fold(0, |acc, c| acc | self.classes[c])
    }

    /// Classes meeting `cl_M(∪C) ∩ carrier`.
    fn close(&self, cl: &ModClosure, cs: u64) -> u64 {
        let c = cl.eval(self.union(cs)) & self.carrier;
        (0..self.classes.len())
            .filter(|&k| self.classes[k] & c != 0)
            .fold(0, |acc, k| acc | 1 << k)
    }
}

/// Partitions the subgroup `carrier` by `rel`, checking the equivalence and
/// representative independence exhaustively.
pub fn quotient_by(
    m: &Module,
    label: impl Into<String>,
    carrier: u64,
    rel: u64,
) -> Result<ModQuotient> {
    let label = label.into();
    if !m.is_subgroup(carrier) {
        return Err(Error::precondition(format!(
            "{label}: carrier {} is not a subgroup",
            m.render_set(carrier)
        )));
    }
    let related = |x: usize, y: usize| has(rel, m.sub(x, y));
    for x in bits(carrier) {
        if !related(x, x) {
            return Err(Error::precondition(format!(
                "{label}: relation is not reflexive (0 is not in the closure)"
            )));
        }
        for y in bits(carrier) {
            if related(x, y) != related(y, x) {
                return Err(Error::precondition(format!(
                    "{label}: relation is not symmetric at {} and {}",
                    m.render_elem(x),
                    m.render_elem(y)
                )));
            }
        }
    }
    let mut class_of = vec![usize::MAX; m.size];
    let mut classes = Vec::new();
    for x in bits(carrier) {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut cls = 0u64;
        for y in bits(carrier).filter(|&y| related(x, y)) {
            if class_of[y] != usize::MAX {
                return Err(Error::precondition(format!(
                    "{label}: relation is not transitive through {}",
                    m.render_elem(y)
                )));
            }
            class_of[y] = classes.len();
            cls |= 1 << y;
        }
        classes.push(cls);
    }
    for &cls in &classes {
        for x in bits(cls) {
            for y in bits(cls) {
                if !related(x, y) {
                    return Err(Error::precondition(format!(
                        "{label}: relation is not transitive at {} and {}",
                        m.render_elem(x),
                        m.render_elem(y)
                    )));
                }
            }
        }
    }
    let mut checked = 0u64;
    let mut fail = None;
    'outer: for &cls in &classes {
        let x0 = cls.trailing_zeros() as usize;
        for x in bits(cls) {
            for y in bits(carrier) {
                checked += 1;
                if class_of[m.add(x, y)] != class_of[m.add(x0, y)] {
                    fail = Some(format!(
                        "{0}+{2} and {1}+{2} fall in different classes",
                        m.render_elem(x0),
                        m.render_elem(x),
                        m.render_elem(y)
                    ));
                    break 'outer;
                }
            }
            for r in 0..m.scalar_count() as u64 {
                checked += 1;
                if class_of[m.smul(r, x)] != class_of[m.smul(r, x0)] {
                    fail = Some(format!(
                        "{r}·{} and {r}·{} fall in different classes",
                        m.render_elem(x0),
                        m.render_elem(x)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let well_defined = Verdict::from_check(
        "representative-independence",
        checked,
        "all representatives, summands and scalars",
        fail.map(|d| {
            Counterexample::note("representative-independence", d)
                .with_set("relation", m.render_set(rel))
        }),
    );
    Ok(ModQuotient {
        label,
        carrier,
        rel,
        classes,
        class_of,
        well_defined,
    })
}

/// `M/N` with `m ∼ m′ ⇔ m − m′ ∈ cl_M(N)`.
pub fn module_quotient(cl: &ModClosure, n: u64) -> Result<ModQuotient> {
    let v = is_approx_submodule(cl, n)?;
    if !v.verdict {
        return Err(Error::precondition(format!(
            "{} is not an approximate submodule",
            cl.module.render_set(n)
        )));
    }
    quotient_by(&cl.module, "M/N", cl.module.full(), cl.eval(n))
}

/// A map table between finite modules with closures.
#[derive(Debug, Clone)]
pub struct ApproxHom {
    src: ModClosure,
    tgt: ModClosure,
    table: Vec<usize>,
}

impl ApproxHom {
    /// Checks `f(x+y) ∈ cl′(f(x)+f(y))` and `f(rx) ∈ cl′(r f(x))` for all inputs.
    pub fn new(src: &ModClosure, tgt: &ModClosure, table: Vec<usize>) -> Result<ApproxHom> {
        let (m, t) = (&src.module, &tgt.module);
        if table.len() != m.size || table.iter().any(|&y| y >= t.size) {
            return Err(Error::precondition(
                "map table must send every element of M into M'",
            ));
        }
        if m.scalars != t.scalars && m.scalars != Scalars::Integers {
            return Err(Error::precondition(
                "source and target have different scalar rings",
            ));
        }
        let single: Vec<u64> = (0..t.size).map(|y| tgt.eval(1 << y)).collect();
        for x in 0..m.size {
            for y in 0..m.size {
                let s = t.add(table[x], table[y]);
                if !has(single[s], table[m.add(x, y)]) {
                    return Err(Error::precondition(format!(
                        "not an approximate homomorphism: f({} + {}) = {} is outside cl'({})",
                        m.render_elem(x),
                        m.render_elem(y),
                        t.render_elem(table[m.add(x, y)]),
                        t.render_elem(s)
                    )));
                }
            }
            for r in 0..m.scalar_count() as u64 {
                let s = t.smul(r, table[x]);
                if !has(single[s], table[m.smul(r, x)]) {
                    return Err(Error::precondition(format!(
                        "not an approximate homomorphism: f({r}·{}) is outside cl'({})",
                        m.render_elem(x),
                        t.render_elem(s)
                    )));
                }
            }
        }
        Ok(ApproxHom {
            src: src.clone(),
            tgt: tgt.clone(),
            table,
        })
    }

    /// The additive extension of `e_i ↦ images[i]`.
    pub fn from_generators(
        src: &ModClosure,
        tgt: &ModClosure,
        images: &[usize],
    ) -> Result<ApproxHom> {
        let (m, t) = (&src.module, &tgt.module);
        if images.len() != m.orders.len() {
            return Err(Error::precondition(format!(
                "need {} generator images",
                m.orders.len()
            )));
        }
        let table = (0..m.size)
            .map(|x| {
                m.coords(x)
                    .iter()
                    .zip(images)
                    .fold(0, |acc, (&c, &y)| t.add(acc, t.smul(c, y)))
            })
            .collect();
        ApproxHom::new(src, tgt, table)
    }

    /// `mul:k`, `zero`, `gens:[y1,..]` or `table:[y0,y1,..]`.
    pub fn parse(src: &ModClosure, tgt: &ModClosure, spec: &str) -> Result<ApproxHom> {
        let t = spec.trim();
        let (m, tm) = (&src.module, &tgt.module);
        if t == "zero" {
            return ApproxHom::new(src, tgt, vec![0; m.size]);
        }
        if let Some(k) = t.strip_prefix("mul:") {
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::parse(4, "expected an integer"))?;
            let k = k.rem_euclid(tm.exponent.max(m.exponent) as i64) as u64;
            if m.orders != tm.orders {
                return Err(Error::precondition(
                    "mul:k needs source and target with the same group",
                ));
            }
            return ApproxHom::new(src, tgt, (0..m.size).map(|x| m.smul(k, x)).collect());
        }
        let list = |body: &str| -> Result<Vec<usize>> {
            let inner = body
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::parse(0, "expected [..]"))?;
            split_top_level(inner, ',')
                .into_iter()
                .map(|(_, p)| tm.parse_elem(p))
                .collect()
        };
        if let Some(body) = t.strip_prefix("gens:") {
            return ApproxHom::from_generators(src, tgt, &list(body)?);
        }
        if let Some(body) = t.strip_prefix("table:") {
            return ApproxHom::new(src, tgt, list(body)?);
        }
        Err(Error::parse(
            0,
            "expected a map: mul:k, zero, gens:[..] or table:[..]",
        ))
    }

    pub fn source(&self) -> &ModClosure {
        &self.src
    }

    pub fn target(&self) -> &ModClosure {
        &self.tgt
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image_of(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, x| acc | 1 << self.table[x])
    }

    /// `Ker f = {x : f(x) ∈ cl′(0)}`.
    pub fn kernel(&self) -> u64 {
        let z = self.tgt.eval(1);
        (0..self.src.module.size)
            .filter(|&x| has(z, self.table[x]))
            .fold(0, |acc, x| acc | 1 << x)
    }

    /// `Im_c f = cl′(f(M))`.
    pub fn image_closed(&self) -> u64 {
        self.tgt.eval(self.image_of(self.src.module.full()))
    }

    /// `M′/cl′(0)` together with the classes hit by `f`, which form `Im^q f`.
    pub fn image_q(&self) -> Result<(ModQuotient, u64)> {
        let t = &self.tgt.module;
        let q = quotient_by(t, "M'/cl'(0)", t.full(), self.tgt.eval(1))?;
        let hit = (0..self.src.module.size)
            .filter_map(|x| q.class_of(self.table[x]))
            .fold(0u64, |acc, c| acc | 1 << c);
        Ok((q, hit))
    }

    /// `f(x) − f(y) − f(x − y) ∈ cl′(0)` for all `x, y`.
    pub fn additive_mod_zero(&self) -> bool {
        let (m, t) = (&self.src.module, &self.tgt.module);
        let z = self.tgt.eval(1);
        (0..m.size).all(|x| {
            (0..m.size).all(|y| {
                has(
                    z,
                    t.sub(t.sub(self.table[x], self.table[y]), self.table[m.sub(x, y)]),
                )
            })
        })
    }

    /// `f(cl(X)) ⊆ cl′(f(X))`, over all subsets of small modules and otherwise
    /// over subgroups and subsets of size at most 2.
    pub fn is_image_morphic(&self) -> Verdict {
        const NAME: &str = "image-morphic";
        let m = &self.src.module;
        let (sets, domain): (Vec<u64>, &str) = if m.size <= ALL_SUBSETS_UP_TO {
            ((0..=m.full()).collect(), "all subsets")
        } else {
            let mut v = m.subgroups();
            v.push(0);
            for x in 0..m.size {
                for y in x..m.size {
                    v.push(1 << x | 1 << y);
                }
            }
            (v, "subgroups and subsets of size at most 2")
        };
        let mut checked = 0;
        for x in sets {
            checked += 1;
            let lhs = self.image_of(self.src.eval(x));
            let rhs = self.tgt.eval(self.image_of(x));
            if lhs & !rhs != 0 {
                let w = (lhs & !rhs).trailing_zeros() as usize;
                let ce = Counterexample::note(NAME, "f(cl(X)) is not inside cl'(f(X))")
                    .with_set("X", m.render_set(x))
                    .with_witness(self.tgt.module.render_elem(w));
                return Verdict::from_check(NAME, checked, domain, Some(ce));
            }
        }
        Verdict::pass(NAME, checked, domain)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub theorem: String,
    pub left: String,
    pub right: String,
    pub left_classes: usize,
    pub right_classes: usize,
    /// `[x] ↦ [y]` for every class on the left.
    pub map: Vec<(String, String)>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl IsoReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == name)
    }
}

fn require(v: &Verdict, what: &str) -> Result<()> {
    if v.verdict {
        Ok(())
    } else {
        let why = v
            .counterexample
            .as_ref()
            .map(|c| c.detail.clone())
            .unwrap_or_default();
        Err(Error::precondition(format!("{what} fails: {why}")))
    }
}

/// Checks that `x ↦ f(x)` induces a well-defined approximate homomorphism
/// `src → tgt` that is a bijection onto the classes in `onto`.
#[allow(clippy::too_many_arguments)]
fn class_bijection(
    theorem: &str,
    m: &Module,
    src: &ModQuotient,
    t: &Module,
    tgt: &ModQuotient,
    tgt_cl: &ModClosure,
    onto: u64,
    f: impl Fn(usize) -> usize,
) -> IsoReport {
    let mut verdicts = vec![src.well_defined.clone(), tgt.well_defined.clone()];
    verdicts[0].axiom = "left-quotient".into();
    verdicts[1].axiom = "right-quotient".into();
    let mut g = vec![usize::MAX; src.len()];
    let mut wd_fail = None;
    let mut checked = 0;
    for (c, &cls) in src.classes.iter().enumerate() {
        for x in bits(cls) {
            checked += 1;
            match tgt.class_of(f(x)) {
                None => {
                    wd_fail = wd_fail.or(Some(format!(
                        "{} maps outside the target carrier",
                        m.render_elem(x)
                    )));
                }
                Some(d) if g[c] == usize::MAX => g[c] = d,
                Some(d) if g[c] != d => {
                    wd_fail = wd_fail.or(Some(format!(
                        "{} and {} share a class but land in {} and {}",
                        m.render_elem(src.rep(c)),
                        m.render_elem(x),
                        tgt.render_class(t, g[c]),
                        tgt.render_class(t, d)
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let defined = wd_fail.is_none();
    verdicts.push(Verdict::from_check(
        "well-defined",
        checked,
        "every element of every class",
        wd_fail.map(|d| Counterexample::note("well-defined", d)),
    ));
    let map = (0..src.len())
        .map(|c| {
            let to = if g[c] == usize::MAX {
                "?".into()
            } else {
                tgt.render_class(t, g[c])
            };
            (src.render_class(m, c), to)
        })
        .collect();
    let mut report = IsoReport {
        theorem: theorem.into(),
        left: src.label.clone(),
        right: tgt.label.clone(),
        left_classes: src.len(),
        right_classes: onto.count_ones() as usize,
        map,
        verdicts,
        notes: Vec::new(),
    };
    if !defined {
        return report;
    }
    let mut inj = None;
    for a in 0..src.len() {
        for b in a + 1..src.len() {
            if g[a] == g[b] {
                inj = inj.or(Some(format!(
                    "{} and {} both map to {}",
                    src.render_class(m, a),
                    src.render_class(m, b),
                    tgt.render_class(t, g[a])
                )));
            }
        }
    }
    let n = src.len() as u64;
    report.verdicts.push(Verdict::from_check(
        "injective",
        n * n.saturating_sub(1) / 2,
        "all pairs of classes",
        inj.map(|d| Counterexample::note("injective", d)),
    ));
    let image = g.iter().fold(0u64, |acc, &d| acc | 1 << d);
    let surj = (image != onto).then(|| {
        let missing = (onto & !image).trailing_zeros() as usize;
        if onto & !image != 0 {
            format!("{} is not hit", tgt.render_class(t, missing))
        } else {
            format!(
                "{} lies outside the claimed image",
                tgt.render_class(t, (image & !onto).trailing_zeros() as usize)
            )
        }
    });
    report.verdicts.push(Verdict::from_check(
        "surjective",
        onto.count_ones() as u64,
        "all target classes",
        surj.map(|d| Counterexample::note("surjective", d)),
    ));
    let mut hom = None;
    let mut checked = 0;
    'outer: for a in 0..src.len() {
        for b in 0..src.len() {
            checked += 1;
            let Some(ab) = src.class_of(m.add(src.rep(a), src.rep(b))) else {
                continue;
            };
            let Some(sum) = tgt.class_of(t.add(tgt.rep(g[a]), tgt.rep(g[b]))) else {
                continue;
            };
            if tgt.close(tgt_cl, 1 << sum) >> g[ab] & 1 == 0 {
                hom = Some(format!(
                    "image of {}+{} is outside the closure",
                    src.render_class(m, a),
                    src.render_class(m, b)
                ));
                break 'outer;
            }
        }
        for r in 0..m.scalar_count() as u64 {
            checked += 1;
            let Some(ra) = src.class_of(m.smul(r, src.rep(a))) else {
                continue;
            };
            let Some(rg) = tgt.class_of(t.smul(r, tgt.rep(g[a]))) else {
                continue;
            };
            if tgt.close(tgt_cl, 1 << rg) >> g[ra] & 1 == 0 {
                hom = Some(format!(
                    "image of {r}·{} is outside the closure",
                    src.render_class(m, a)
                ));
                break 'outer;
            }
        }
    }
    report.verdicts.push(Verdict::from_check(
        "approx-hom",
        checked,
        "all class pairs and scalars",
        hom.map(|d| Counterexample::note("approx-hom", d)),
    ));
    let counts = src.len() == onto.count_ones() as usize;
    report.verdicts.push(Verdict::from_check(
        "class-count",
        1,
        format!("{} vs {}", src.len(), onto.count_ones()),
        (!counts)
            .then(|| Counterexample::note("class-count", "the two sides have different sizes")),
    ));
    report
}

/// `M/Ker f ≅ Im^q f`.
pub fn iso1(f: &ApproxHom) -> Result<IsoReport> {
    require(&f.is_image_morphic(), "hypothesis: f is image-morphic")?;
    let m = &f.src.module;
    let k = f.kernel();
    let kv = is_approx_submodule(&f.src, k)?;
    let left = quotient_by(m, "M/Ker f", m.full(), f.src.eval(k))?;
    let (right, onto) = f.image_q()?;
    let mut r = class_bijection("iso1", m, &left, &f.tgt.module, &right, &f.tgt, onto, |x| {
        f.apply(x)
    });
    r.right = "Im^q f".into();
    let mut kv = kv;
    kv.axiom = "kernel-approximate".into();
    r.verdicts.insert(0, kv);
    let imc = f.image_closed();
    let fm = f.image_of(m.full());
    r.notes.push(format!(
        "Ker f = {}, additive modulo cl'(0): {}, |Im^q f| = {}, |Im_c f| = {}, Im_c f closed and equal to f(M): {}",
        m.render_set(k),
        f.additive_mod_zero(),
        onto.count_ones(),
        imc.count_ones(),
        imc == fm && f.tgt.eval(imc) == imc
    ));
    Ok(r)
}

/// `(N+K)/K ≅ N/(N ∩ cl K)`.
pub fn iso2(cl: &ModClosure, n: u64, k: u64) -> Result<IsoReport> {
    let m = &cl.module;
    for (name, s) in [("N", n), ("K", k)] {
        let v = is_approx_submodule(cl, s)?;
        require(
            &v,
            &format!("hypothesis: {name} is an approximate submodule"),
        )?;
    }
    let ck = cl.eval(k);
    let nk = m.span(n | k);
    let nck = m.span(n | ck);
    let sum_k = quotient_by(m, "(N+K)/K", nk, ck)?;
    let sum_ck = quotient_by(m, "(N+cl K)/cl K", nck, ck)?;
    // the identification (N+K)/K ≅ (N + cl K)/cl K
    let ident = class_bijection(
        "iso2-identification",
        m,
        &sum_k,
        m,
        &sum_ck,
        cl,
        (1u64 << sum_ck.len()) - 1,
        |x| x,
    );
    let inter = n & ck;
    // the closure on N is cl_M(X) ∩ N
    let left = quotient_by(m, "N/(N ∩ cl K)", n, cl.eval(inter) & n)?;
    let all = if sum_k.len() == 64 {
        u64::MAX
    } else {
        (1u64 << sum_k.len()) - 1
    };
    let mut r = class_bijection("iso2", m, &left, m, &sum_k, cl, all, |x| x);
    for mut v in ident.verdicts {
        v.axiom = format!("identification-{}", v.axiom);
        r.verdicts.push(v);
    }
    r.notes.push(format!(
        "N+K = {}, cl K = {}, N ∩ cl K = {}",
        m.render_set(nk),
        m.render_set(ck),
        m.render_set(inter)
    ));
    Ok(r)
}

/// `(M/N)/(cl K/N) ≅ M/cl K`.
pub fn iso3(cl: &ModClosure, n: u64, k: u64) -> Result<IsoReport> {
    let m = &cl.module;
    require(
        &is_approx_submodule(cl, n)?,
        "hypothesis: N is an approximate submodule",
    )?;
    if !m.is_subgroup(k) {
        return Err(Error::precondition(format!(
            "hypothesis: K = {} is a subgroup",
            m.render_set(k)
        )));
    }
    if n & !k != 0 {
        return Err(Error::precondition("hypothesis: N ⊆ K"));
    }
    let q = quotient_by(m, "M/N", m.full(), cl.eval(n))?;
    let ck = cl.eval(k);
    let h = (0..q.len())
        .filter(|&c| q.classes[c] & ck != 0)
        .fold(0u64, |acc, c| acc | 1 << c);
    let h_closed = q.close(cl, h);
    let rel = q.union(h_closed);
    let double = quotient_by(m, "(M/N)/(cl K/N)", m.full(), rel)?;
    let target = quotient_by(m, "M/cl K", m.full(), ck)?;
    let theta = class_bijection(
        "theta",
        m,
        &q,
        m,
        &target,
        cl,
        (1u64 << target.len()) - 1,
        |x| x,
    );
    let all = (1u64 << target.len()) - 1;
    let mut r = class_bijection("iso3", m, &double, m, &target, cl, all, |x| x);
    let refines = q.classes.iter().all(|&c| {
        double
            .class_of(c.trailing_zeros() as usize)
            .is_some_and(|d| c & !double.classes[d] == 0)
    });
    r.verdicts.push(Verdict::from_check(
        "refines",
        q.len() as u64,
        "classes of M/N",
        (!refines).then(|| {
            Counterexample::note("refines", "a class of M/N is split by the double quotient")
        }),
    ));
    for v in theta.verdicts {
        if v.axiom == "well-defined" || v.axiom == "surjective" {
            let mut v = v;
            v.axiom = format!("theta-{}", v.axiom);
            r.verdicts.push(v);
        }
    }
    r.notes
        .push(format!("cl K = {}, |M/N| = {}", m.render_set(ck), q.len()));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "lowercase")]
pub enum IsoCase {
    Iso1 { map: String },
    Iso2 { n: String, k: String },
    Iso3 { n: String, k: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoInstance {
    pub module: String,
    #[serde(default = "integers")]
    pub scalars: Scalars,
    pub closure: String,
    pub case: IsoCase,
}

fn integers() -> Scalars {
    Scalars::Integers
}

impl IsoInstance {
    pub fn label(&self) -> String {
        let case = match &self.case {
            IsoCase::Iso1 { map } => format!("iso1 f={map}"),
            IsoCase::Iso2 { n, k } => format!("iso2 N={n} K={k}"),
            IsoCase::Iso3 { n, k } => format!("iso3 N={n} K={k}"),
        };
        format!("{} {} {case}", self.module, self.closure)
    }

    pub fn run(&self) -> Result<IsoReport> {
        let m = Module::parse(&self.module, self.scalars)?;
        let cl = ModClosure::parse(&m, &self.closure)?;
        match &self.case {
            IsoCase::Iso1 { map } => iso1(&ApproxHom::parse(&cl, &cl, map)?),
            IsoCase::Iso2 { n, k } => iso2(&cl, m.span(m.parse_set(n)?), m.span(m.parse_set(k)?)),
            IsoCase::Iso3 { n, k } => iso3(&cl, m.span(m.parse_set(n)?), m.span(m.parse_set(k)?)),
        }
    }
}

/// The configured family: every module and closure below with all maps
/// `x ↦ kx` and all pairs of subgroups (`N ⊆ K` for the third theorem).
pub fn iso_family() -> Vec<IsoInstance> {
    const CONFIGS: &[(&str, &[&str])] = &[
        ("Z/8", &["gen", "shift:N=4", "setshift:N=4"]),
        ("Z/12", &["gen", "shift:N=6", "setshift:N=6", "shift:N=4"]),
        ("Z/24", &["gen", "shift:N=12", "setshift:N=8"]),
        ("Z/2xZ/4", &["gen", "shift:N=(1,0)", "setshift:N=(0,2)"]),
    ];
    let mut out = Vec::new();
    for &(group, closures) in CONFIGS {
        let m = Module::parse(group, Scalars::Integers).expect("configured module");
        let subs = m.subgroups();
        let gen_of = |s: u64| m.render_set(s);
        for &c in closures {
            let inst = |case| IsoInstance {
                module: group.into(),
                scalars: Scalars::Integers,
                closure: c.into(),
                case,
            };
            for k in 0..m.exponent {
                out.push(inst(IsoCase::Iso1 {
                    map: format!("mul:{k}"),
                }));
            }
            for &n in &subs {
                for &k in &subs {
                    out.push(inst(IsoCase::Iso2 {
                        n: gen_of(n),
                        k: gen_of(k),
                    }));
                    if n & !k == 0 {
                        out.push(inst(IsoCase::Iso3 {
                            n: gen_of(n),
                            k: gen_of(k),
                        }));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Module {
        Module::cyclic(n).unwrap()
    }

    #[test]
    fn cm_axioms() {
        let m = z(12);
        let cl = ModClosure::parse(&m, "shift:N=6").unwrap();
        let r = check_cm_axioms(&cl, Mode::Exhaustive, SumRule::Span).unwrap();
        assert!(r.all_pass(), "{r:?}");
        let names: Vec<&str> = r.verdicts.iter().map(|v| v.axiom.as_str()).collect();
        assert_eq!(names, ["CM1", "CM2", "CM3", "CM4-sum", "CM4-scalar"]);
        let v = Module::parse("Z/2xZ/4", Scalars::Integers).unwrap();
        for c in ["gen", "setshift:N=(0,2)"] {
            let cl = ModClosure::parse(&v, c).unwrap();
            assert!(check_cm_axioms(&cl, Mode::Exhaustive, SumRule::Span)
                .unwrap()
                .all_pass());
        }
    }

    #[test]
    fn scalar_ring_must_act() {
        assert!(Module::new(Scalars::Residue(4), &[8]).is_err());
        assert!(Module::new(Scalars::Residue(8), &[4, 2]).is_ok());
    }

    #[test]
    fn submodules_and_quotients() {
        let m = z(8);
        let cl = ModClosure::generated(&m);
        assert!(
            is_approx_submodule(&cl, m.parse_set("0,4").unwrap())
                .unwrap()
                .verdict
        );
        assert!(is_approx_submodule(&cl, m.parse_set("0,3").unwrap()).is_err());
        let m = z(12);
        let cl = ModClosure::parse(&m, "shift:N=6").unwrap();
        let q = module_quotient(&cl, m.span(m.parse_set("4").unwrap())).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.well_defined.verdict);
        assert_eq!(module_quotient(&cl, m.full()).unwrap().len(), 1);
        assert_eq!(
            module_quotient(&ModClosure::generated(&m), 1)
                .unwrap()
                .len(),
            12
        );
    }

    #[test]
    fn kernels() {
        let m = z(12);
        let g = ModClosure::generated(&m);
        let f = ApproxHom::parse(&g, &g, "mul:3").unwrap();
        assert_eq!(m.render_set(f.kernel()), "{0, 4, 8}");
        let s = ModClosure::parse(&m, "setshift:N=6").unwrap();
        let f = ApproxHom::parse(&g, &s, "mul:3").unwrap();
        assert_eq!(f.kernel(), m.span(1 << 2));
        let z0 = ApproxHom::parse(&g, &g, "zero").unwrap();
        assert_eq!(z0.kernel(), m.full());
    }

    #[test]
    fn non_additive_map_under_set_shift() {
        let m = z(12);
        let s = ModClosure::parse(&m, "setshift:N=6").unwrap();
        let table: Vec<usize> = (0..12).map(|x| (3 * x + 6 * (x % 2)) % 12).collect();
        let f = ApproxHom::new(&s, &s, table).unwrap();
        let r = iso1(&f).unwrap();
        assert!(r.all_pass(), "{r:?}");
        let g = ModClosure::generated(&m);
        let bent: Vec<usize> = (0..12).map(|x| if x == 1 { 2 } else { x }).collect();
        assert!(ApproxHom::new(&g, &g, bent).is_err());
    }

    #[test]
    fn first_theorem_needs_additivity_mod_zero() {
        let m = z(8);
        let g = ModClosure::generated(&m);
        let f = ApproxHom::new(&g, &g, vec![0, 7, 0, 3, 0, 5, 0, 3]).unwrap();
        assert!(f.is_image_morphic().verdict);
        assert!(!f.additive_mod_zero());
        let r = iso1(&f).unwrap();
        assert!(!r.verdict("well-defined").unwrap().verdict);
        let g = ModClosure::parse(&m, "setshift:N=4").unwrap();
        let h =
            ApproxHom::new(&g, &g, (0..8).map(|x| (3 * x + 4 * (x % 2)) % 8).collect()).unwrap();
        assert!(h.additive_mod_zero());
        assert!(iso1(&h).unwrap().all_pass());
    }

    #[test]
    fn isomorphism_examples() {
        let m = z(12);
        let g = ModClosure::generated(&m);
        let r = iso1(&ApproxHom::parse(&g, &g, "mul:3").unwrap()).unwrap();
        assert!(r.all_pass());
        assert_eq!((r.left_classes, r.right_classes), (4, 4));
        let m = z(24);
        let g = ModClosure::generated(&m);
        let sp = |s: &str| m.span(m.parse_set(s).unwrap());
        let r = iso2(&g, sp("4"), sp("6")).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!((r.left_classes, r.right_classes), (3, 3));
        let r = iso3(&g, sp("12"), sp("6")).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.left_classes, 6);
        assert!(iso3(&g, sp("6"), sp("12")).is_err());
    }

    #[test]
    fn family_passes() {
        let fam = iso_family();
        assert!(fam.len() >= 20);
        let mut run = 0;
        for inst in &fam {
            match inst.run() {
                Ok(r) => {
                    run += 1;
                    assert!(r.all_pass(), "{}: {:?}", inst.label(), r);
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => panic!("{}: {e}", inst.label()),
            }
        }
        assert!(run >= 20);
    }
}
