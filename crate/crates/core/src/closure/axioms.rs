//! Verification of the closure axioms C1–C4b and ideal absorption.
//!
//! Finite carriers of at most 64 elements are handled with bitmask subsets.
//! On ℤ the axioms are probed over principal ideals `(d)`, `0 ≤ d ≤ bound`,
//! and scalars `|r| ≤ scalar_bound`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{closure_set, Closure};
use crate::error::{Error, Result};
use crate::ideal::{enumerate_subgroups, int_principal, render_subset, SUBGROUP_GUARD};
use crate::ring::{Elem, ElemSet, IntSet, Ring, Subset};

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 0xA1_6EB4;
pub const DEFAULT_SAMPLES: usize = 4000;
/// Exhaustive mode enumerates at most 2^16 subsets.
pub const SUBSET_CAP_BITS: usize = 16;
/// Exhaustive C4a enumerates at most this many subset pairs.
pub const PAIR_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exhaustive where feasible, otherwise subgroups plus samples.
    Auto,
    Exhaustive,
    /// All additive subgroups (and pairs of them).
    Subgroups,
    Sampled {
        seed: u64,
        count: usize,
    },
}

impl Mode {
    pub fn sampled_default() -> Mode {
        Mode::Sampled {
            seed: DEFAULT_SEED,
            count: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomOptions {
    pub mode: Mode,
    pub sum: SumRule,
    pub int_bound: u64,
    pub scalar_bound: i64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            mode: Mode::Auto,
            sum: SumRule::Span,
            int_bound: 1000,
            scalar_bound: 100,
        }
    }
}

/// How `A + B` is read in C4a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumRule {
    /// The additive subgroup generated by `A ∪ B`.
    #[default]
    Span,
    /// `{a + b : a ∈ A, b ∈ B}`.
    Minkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    C1,
    C2,
    C3,
    C4a,
    C4b,
    Absorption,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::C1,
        Axiom::C2,
        Axiom::C3,
        Axiom::C4a,
        Axiom::C4b,
        Axiom::Absorption,
    ];

    pub fn ring_name(self) -> &'static str {
        match self {
            Axiom::C1 => "C1",
            Axiom::C2 => "C2",
            Axiom::C3 => "C3",
            Axiom::C4a => "C4a",
            Axiom::C4b => "C4b",
            Axiom::Absorption => "absorption",
        }
    }

    pub fn module_name(self) -> &'static str {
        match self {
            Axiom::C1 => "CM1",
            Axiom::C2 => "CM2",
            Axiom::C3 => "CM3",
            Axiom::C4a => "CM4-sum",
            Axiom::C4b => "CM4-scalar",
            Axiom::Absorption => "absorption",
        }
    }
}

/// Raw data from which a counterexample can be re-evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replay {
    Masks {
        masks: Vec<u64>,
        scalar: Option<usize>,
    },
    Principal {
        ds: Vec<u64>,
        scalar: Option<i64>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedSet {
    pub role: String,
    pub set: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub axiom: String,
    pub sets: Vec<NamedSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub detail: String,
    #[serde(skip)]
    pub replay: Option<Replay>,
    #[serde(skip)]
    pub kind: Option<Axiom>,
    #[serde(skip)]
    pub sum_rule: SumRule,
}

impl Counterexample {
    pub fn note(axiom: impl Into<String>, detail: impl Into<String>) -> Counterexample {
        Counterexample {
            axiom: axiom.into(),
            sets: Vec::new(),
            scalar: None,
            witness: None,
            detail: detail.into(),
            replay: None,
            kind: None,
            sum_rule: SumRule::Span,
        }
    }

    pub fn with_set(mut self, role: &str, set: impl Into<String>) -> Self {
        self.sets.push(NamedSet {
            role: role.into(),
            set: set.into(),
        });
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_scalar(mut self, r: impl Into<String>) -> Self {
        self.scalar = Some(r.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub axiom: String,
    pub verdict: bool,
    pub checked: u64,
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn pass(axiom: impl Into<String>, checked: u64, domain: impl Into<String>) -> Verdict {
        Verdict {
            axiom: axiom.into(),
            verdict: true,
            checked,
            domain: domain.into(),
            counterexample: None,
        }
    }

    pub fn from_check(
        axiom: impl Into<String>,
        checked: u64,
        domain: impl Into<String>,
        ce: Option<Counterexample>,
    ) -> Verdict {
        Verdict {
            axiom: axiom.into(),
            verdict: ce.is_none(),
            checked,
            domain: domain.into(),
            counterexample: ce,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub ring: String,
    pub closure: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }

    pub fn verdict(&self, axiom: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.verdict)
    }
}

// ---------------------------------------------------------------------------
// Mask engine

/// A finite additive group with scalar actions and a closure on its subsets.
pub trait MaskModel {
    fn size(&self) -> usize;
    fn zero(&self) -> usize;
    fn add(&self, a: usize, b: usize) -> usize;
    fn scalar_count(&self) -> usize;
    fn smul(&self, r: usize, x: usize) -> usize;
    fn closure(&self, mask: u64) -> Result<u64>;
    /// Inputs for the absorption check.
    fn is_ideal(&self, mask: u64) -> bool;
    fn subgroups(&self) -> Result<Vec<u64>>;
    fn render_set(&self, mask: u64) -> String;
    fn render_elem(&self, x: usize) -> String;
    fn render_scalar(&self, r: usize) -> String;
    fn axiom_name(&self, a: Axiom) -> &'static str {
        a.ring_name()
    }
    fn has_absorption(&self) -> bool {
        true
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn first_bit(mask: u64) -> Option<usize> {
    (mask != 0).then(|| mask.trailing_zeros() as usize)
}

pub(crate) struct Engine<'m> {
    m: &'m dyn MaskModel,
    n: usize,
    shift: Option<Vec<u64>>,
    table: Option<Vec<u64>>,
    spans: Option<Vec<u64>>,
    sum_rule: SumRule,
    cache: RefCell<HashMap<u64, u64>>,
}

impl<'m> Engine<'m> {
    pub(crate) fn new(m: &'m dyn MaskModel, sum_rule: SumRule) -> Result<Engine<'m>> {
        let n = m.size();
        if n > 64 {
            return Err(Error::resource(
                "carrier size for subset checks",
                64u128,
                n as u128,
            ));
        }
        Ok(Engine {
            m,
            n,
            shift: None,
            table: None,
            spans: None,
            sum_rule,
            cache: RefCell::new(HashMap::new()),
        })
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Precomputes translation tables and every closure value.
    pub(crate) fn precompute(&mut self) -> Result<()> {
        let n = self.n;
        let count = 1usize << n;
        let mut shift = vec![0u64; n * count];
        for x in 0..n {
            let row = &mut shift[x * count..(x + 1) * count];
            for mask in 1..count {
                let low = mask.trailing_zeros() as usize;
                row[mask] = row[mask & (mask - 1)] | 1u64 << self.m.add(x, low);
            }
        }
        self.shift = Some(shift);
        let mut table = vec![0u64; count];
        for (mask, slot) in table.iter_mut().enumerate() {
            *slot = self.m.closure(mask as u64)?;
        }
        self.table = Some(table);
        if self.sum_rule == SumRule::Span {
            self.spans = Some((0..count as u64).map(|m| self.span(m)).collect());
        }
        Ok(())
    }

    pub(crate) fn cl(&self, mask: u64) -> Result<u64> {
        if let Some(t) = &self.table {
            return Ok(t[mask as usize]);
        }
        if let Some(&v) = self.cache.borrow().get(&mask) {
            return Ok(v);
        }
        let v = self.m.closure(mask)?;
        self.cache.borrow_mut().insert(mask, v);
        Ok(v)
    }

    fn translate(&self, x: usize, mask: u64) -> u64 {
        match &self.shift {
            Some(s) => s[x * (1usize << self.n) + mask as usize],
            None => bits(mask).fold(0, |acc, b| acc | 1u64 << self.m.add(x, b)),
        }
    }

    pub(crate) fn sum(&self, a: u64, b: u64) -> u64 {
        bits(a).fold(0, |acc, x| acc | self.translate(x, b))
    }

    /// Additive subgroup generated by a mask.
    pub(crate) fn span(&self, mask: u64) -> u64 {
        if let Some(t) = &self.spans {
            return t[mask as usize];
        }
        let mut s = mask | 1u64 << self.m.zero();
        loop {
            let t = s | self.sum(s, s);
            if t == s {
                return s;
            }
            s = t;
        }
    }

    /// `A + B` under the configured rule.
    pub(crate) fn combine(&self, a: u64, b: u64) -> u64 {
        match self.sum_rule {
            SumRule::Span => self.span(a | b),
            SumRule::Minkowski => self.sum(a, b),
        }
    }

    pub(crate) fn scale(&self, r: usize, a: u64) -> u64 {
        bits(a).fold(0, |acc, x| acc | 1u64 << self.m.smul(r, x))
    }

    /// A witness element when the axiom fails on the given inputs.
    pub(crate) fn violation(
        &self,
        ax: Axiom,
        masks: &[u64],
        r: Option<usize>,
    ) -> Result<Option<usize>> {
        let a = masks[0];
        Ok(match ax {
            Axiom::C1 => first_bit(a & !self.cl(a)?),
            Axiom::C2 => {
                let b = masks[1];
                if a & !b != 0 {
                    None
                } else {
                    first_bit(self.cl(a)? & !self.cl(b)?)
                }
            }
            Axiom::C3 => {
                let c = self.cl(a)?;
                first_bit(self.cl(c)? ^ c)
            }
            Axiom::C4a => {
                let b = masks[1];
                let lhs = self.sum(self.cl(a)?, self.cl(b)?);
                first_bit(lhs & !self.cl(self.combine(a, b))?)
            }
            Axiom::C4b => {
                let r = r.expect("scalar");
                first_bit(self.scale(r, self.cl(a)?) & !self.cl(self.scale(r, a))?)
            }
            Axiom::Absorption => {
                let r = r.expect("scalar");
                if !self.m.is_ideal(a) {
                    None
                } else {
                    first_bit(self.scale(r, a) & !self.cl(a)?)
                }
            }
        })
    }

    pub(crate) fn counterexample(
        &self,
        ax: Axiom,
        masks: &[u64],
        r: Option<usize>,
        w: usize,
    ) -> Result<Counterexample> {
        let name = self.m.axiom_name(ax);
        let roles: &[&str] = match ax {
            Axiom::C2 | Axiom::C4a => &["A", "B"],
            _ => &["A"],
        };
        let mut ce = Counterexample::note(name, self.describe(ax, masks, r)?);
        for (role, &mask) in roles.iter().zip(masks) {
            ce = ce.with_set(role, self.m.render_set(mask));
        }
        if let Some(r) = r {
            ce = ce.with_scalar(self.m.render_scalar(r));
        }
        ce = ce.with_witness(self.m.render_elem(w));
        ce.replay = Some(Replay::Masks {
            masks: masks.to_vec(),
            scalar: r,
        });
        ce.kind = Some(ax);
        ce.sum_rule = self.sum_rule;
        Ok(ce)
    }

    fn describe(&self, ax: Axiom, masks: &[u64], r: Option<usize>) -> Result<String> {
        let s = |m: u64| self.m.render_set(m);
        let a = masks[0];
        Ok(match ax {
            Axiom::C1 => format!("cl(A) = {} does not contain A", s(self.cl(a)?)),
            Axiom::C2 => format!(
                "cl(A) = {} is not inside cl(B) = {}",
                s(self.cl(a)?),
                s(self.cl(masks[1])?)
            ),
            Axiom::C3 => {
                let c = self.cl(a)?;
                format!("cl(A) = {} but cl(cl(A)) = {}", s(c), s(self.cl(c)?))
            }
            Axiom::C4a => {
                let b = masks[1];
                format!(
                    "cl(A) + cl(B) = {} is not inside cl(A+B) = {}",
                    s(self.sum(self.cl(a)?, self.cl(b)?)),
                    s(self.cl(self.combine(a, b))?)
                )
            }
            Axiom::C4b => {
                let r = r.unwrap();
                format!(
                    "r·cl(A) = {} is not inside cl(rA) = {}",
                    s(self.scale(r, self.cl(a)?)),
                    s(self.cl(self.scale(r, a))?)
                )
            }
            Axiom::Absorption => {
                let r = r.unwrap();
                format!(
                    "rA = {} is not inside cl(A) = {}",
                    s(self.scale(r, a)),
                    s(self.cl(a)?)
                )
            }
        })
    }
}

/// Subset pools for one axiom run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pool {
    All,
    Subgroups,
    Sampled { seed: u64, count: usize },
}

impl Pool {
    fn label(self) -> String {
        match self {
            Pool::All => "all subsets".into(),
            Pool::Subgroups => "subgroups".into(),
            Pool::Sampled { seed, count } => format!("sampled(seed={seed:#x}, count={count})"),
        }
    }
}

fn random_mask(rng: &mut ChaCha8Rng, n: usize, full: u64) -> u64 {
    if rng.gen_bool(0.5) {
        rng.gen::<u64>() & full
    } else {
        let k = rng.gen_range(1..=3usize);
        (0..k).fold(0u64, |m, _| m | 1u64 << rng.gen_range(0..n))
    }
}

struct Runner<'e, 'm> {
    e: &'e Engine<'m>,
    subgroups: Option<Vec<u64>>,
}

impl<'e, 'm> Runner<'e, 'm> {
    fn subgroups(&mut self) -> Result<Vec<u64>> {
        if self.subgroups.is_none() {
            self.subgroups = Some(self.e.m.subgroups()?);
        }
        Ok(self.subgroups.clone().unwrap())
    }

    fn scalars(&self) -> usize {
        self.e.m.scalar_count()
    }

    /// Runs one axiom over one pool; returns (checked, first failure).
    fn run(&mut self, ax: Axiom, pool: Pool) -> Result<(u64, Option<Counterexample>)> {
        let e = self.e;
        let n = e.n;
        let full = e.full();
        let mut checked = 0u64;
        let fail = |masks: &[u64],
                    r: Option<usize>,
                    checked: &mut u64|
         -> Result<Option<Counterexample>> {
            *checked += 1;
            match e.violation(ax, masks, r)? {
                Some(w) => Ok(Some(e.counterexample(ax, masks, r, w)?)),
                None => Ok(None),
            }
        };
        let singles: Vec<u64> = match pool {
            Pool::All => Vec::new(),
            Pool::Subgroups => self.subgroups()?,
            Pool::Sampled { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ax as u64);
                (0..count).map(|_| random_mask(&mut rng, n, full)).collect()
            }
        };
        let single_iter = |f: &mut dyn FnMut(u64) -> Result<Option<Counterexample>>| -> Result<Option<Counterexample>> {
            if pool == Pool::All {
                for a in 0..=full {
                    if let Some(c) = f(a)? {
                        return Ok(Some(c));
                    }
                }
            } else {
                for &a in &singles {
                    if let Some(c) = f(a)? {
                        return Ok(Some(c));
                    }
                }
            }
            Ok(None)
        };
        let scalars = self.scalars();
        let found = match ax {
            Axiom::C1 | Axiom::C3 => single_iter(&mut |a| fail(&[a], None, &mut checked))?,
            Axiom::C4b | Axiom::Absorption => single_iter(&mut |a| {
                if ax == Axiom::Absorption && !e.m.is_ideal(a) {
                    return Ok(None);
                }
                for r in 0..scalars {
                    if let Some(c) = fail(&[a], Some(r), &mut checked)? {
                        return Ok(Some(c));
                    }
                }
                Ok(None)
            })?,
            Axiom::C2 => match pool {
                Pool::All => {
                    let mut out = None;
                    'outer: for b in 0..=full {
                        // submasks of b, ascending
                        let mut a = 0u64;
                        loop {
                            if let Some(c) = fail(&[a, b], None, &mut checked)? {
                                out = Some(c);
                                break 'outer;
                            }
                            if a == b {
                                break;
                            }
                            a = (a.wrapping_sub(b)) & b;
                        }
                    }
                    out
                }
                Pool::Subgroups => {
                    let mut out = None;
                    'outer2: for &b in &singles {
                        for &a in &singles {
                            if a & !b == 0 {
                                if let Some(c) = fail(&[a, b], None, &mut checked)? {
                                    out = Some(c);
                                    break 'outer2;
                                }
                            }
                        }
                    }
                    out
                }
                Pool::Sampled { seed, count } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC2);
                    let mut out = None;
                    for _ in 0..count {
                        let b = random_mask(&mut rng, n, full);
                        let a = b & rng.gen::<u64>();
                        if let Some(c) = fail(&[a, b], None, &mut checked)? {
                            out = Some(c);
                            break;
                        }
                    }
                    out
                }
            },
            Axiom::C4a => {
                let lo = 0u64;
                match pool {
                    Pool::All => {
                        let mut out = None;
                        'outer3: for a in lo..=full {
                            for b in a.max(lo)..=full {
                                if let Some(c) = fail(&[a, b], None, &mut checked)? {
                                    out = Some(c);
                                    break 'outer3;
                                }
                            }
                        }
                        out
                    }
                    Pool::Subgroups => {
                        let mut out = None;
                        'outer4: for (i, &a) in singles.iter().enumerate() {
                            for &b in &singles[i..] {
                                if let Some(c) = fail(&[a, b], None, &mut checked)? {
                                    out = Some(c);
                                    break 'outer4;
                                }
                            }
                        }
                        out
                    }
                    Pool::Sampled { seed, count } => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC4A);
                        let mut out = None;
                        for _ in 0..count {
                            let a = random_mask(&mut rng, n, full);
                            let b = random_mask(&mut rng, n, full);
                            if let Some(c) = fail(&[a, b], None, &mut checked)? {
                                out = Some(c);
                                break;
                            }
                        }
                        out
                    }
                }
            }
        };
        Ok((checked, found))
    }
}

/// Runs all axioms of a mask model under the given mode.
pub fn check_mask_model(
    m: &dyn MaskModel,
    mode: Mode,
    sum_rule: SumRule,
    ring: String,
    closure: String,
) -> Result<AxiomReport> {
    let n = m.size();
    let mut engine = Engine::new(m, sum_rule)?;
    let exhaustive_ok = n <= SUBSET_CAP_BITS;
    let c4a_pairs = if n >= 63 {
        u64::MAX
    } else {
        (1u64 << n) * ((1u64 << n) + 1) / 2
    };
    let sampled = match mode {
        Mode::Sampled { seed, count } => Pool::Sampled { seed, count },
        _ => Pool::Sampled {
            seed: DEFAULT_SEED,
            count: DEFAULT_SAMPLES,
        },
    };
    let plan = |ax: Axiom| -> Result<Vec<Pool>> {
        Ok(match mode {
            Mode::Exhaustive => {
                if !exhaustive_ok {
                    return Err(Error::resource(
                        "subsets for exhaustive check",
                        1u128 << SUBSET_CAP_BITS,
                        1u128 << n.min(127),
                    ));
                }
                if ax == Axiom::C4a && c4a_pairs > PAIR_CAP {
                    return Err(Error::resource(
                        "subset pairs for exhaustive C4a",
                        PAIR_CAP,
                        c4a_pairs,
                    ));
                }
                vec![Pool::All]
            }
            Mode::Subgroups => vec![Pool::Subgroups],
            Mode::Sampled { .. } => vec![sampled],
            Mode::Auto => {
                if exhaustive_ok && (ax != Axiom::C4a || c4a_pairs <= PAIR_CAP) {
                    vec![Pool::All]
                } else if n <= SUBGROUP_GUARD {
                    vec![Pool::Subgroups, sampled]
                } else {
                    vec![sampled]
                }
            }
        })
    };
    let plans: Vec<(Axiom, Vec<Pool>)> = Axiom::ALL
        .iter()
        .filter(|&&a| a != Axiom::Absorption || m.has_absorption())
        .map(|&a| plan(a).map(|p| (a, p)))
        .collect::<Result<_>>()?;
    if exhaustive_ok && plans.iter().any(|(_, p)| p.contains(&Pool::All)) {
        engine.precompute()?;
    }
    let mut runner = Runner {
        e: &engine,
        subgroups: None,
    };
    let mut verdicts = Vec::new();
    for (ax, pools) in plans {
        let mut checked = 0;
        let mut found = None;
        for &pool in &pools {
            let (c, f) = runner.run(ax, pool)?;
            checked += c;
            if f.is_some() {
                found = f;
                break;
            }
        }
        let mut domain = pools
            .iter()
            .map(|p| p.label())
            .collect::<Vec<_>>()
            .join(" + ");
        if ax == Axiom::C4a && sum_rule == SumRule::Minkowski {
            domain.push_str(", Minkowski sums");
        }
        if ax == Axiom::Absorption {
            domain.push_str(", ideal inputs");
        }
        verdicts.push(Verdict::from_check(
            m.axiom_name(ax),
            checked,
            domain,
            found,
        ));
    }
    let seed = match mode {
        Mode::Sampled { seed, .. } => Some(seed),
        Mode::Auto if verdicts.iter().any(|v| v.domain.contains("sampled")) => Some(DEFAULT_SEED),
        _ => None,
    };
    Ok(AxiomReport {
        ring,
        closure,
        mode: mode_label(mode),
        seed,
        verdicts,
    })
}

pub fn mode_label(mode: Mode) -> String {
    match mode {
        Mode::Auto => "auto".into(),
        Mode::Exhaustive => "exhaustive".into(),
        Mode::Subgroups => "subgroups".into(),
        Mode::Sampled { count, .. } => format!("sampled({count})"),
    }
}

// ---------------------------------------------------------------------------
// Finite rings

/// A finite ring (at most 64 elements) with a closure, as a mask model.
pub struct RingModel<'a> {
    ring: &'a Ring,
    cl: &'a dyn Closure,
    n: usize,
    gens: Vec<u32>,
}

impl<'a> RingModel<'a> {
    pub fn new(cl: &'a dyn Closure) -> Result<RingModel<'a>> {
        let ring = cl.ring();
        let n = ring.size()?;
        if n > 64 {
            return Err(Error::resource(
                "ring size for subset checks",
                64u128,
                n as u128,
            ));
        }
        Ok(RingModel {
            ring,
            cl,
            n,
            gens: ring.ring_generators().iter().map(Elem::idx).collect(),
        })
    }

    pub fn to_subset(&self, mask: u64) -> Subset {
        Subset::Finite(ElemSet::from_mask(self.n, mask))
    }
}

impl MaskModel for RingModel<'_> {
    fn size(&self) -> usize {
        self.n
    }

    fn zero(&self) -> usize {
        self.ring.zero_i() as usize
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.ring.add_i(a as u32, b as u32) as usize
    }

    fn scalar_count(&self) -> usize {
        self.n
    }

    fn smul(&self, r: usize, x: usize) -> usize {
        self.ring.mul_i(r as u32, x as u32) as usize
    }

    fn closure(&self, mask: u64) -> Result<u64> {
        Ok(closure_set(self.cl, &self.to_subset(mask))?
            .as_finite()?
            .to_mask())
    }

    fn is_ideal(&self, mask: u64) -> bool {
        let z = self.ring.zero_i() as usize;
        if mask >> z & 1 == 0 {
            return false;
        }
        bits(mask).all(|a| {
            bits(mask).all(|b| mask >> self.ring.sub_i(a as u32, b as u32) & 1 == 1)
                && self
                    .gens
                    .iter()
                    .all(|&g| mask >> self.ring.mul_i(g, a as u32) & 1 == 1)
        })
    }

    fn subgroups(&self) -> Result<Vec<u64>> {
        enumerate_subgroups(self.ring, SUBGROUP_GUARD)?
            .iter()
            .map(|s| s.as_finite().map(ElemSet::to_mask))
            .collect::<Result<_>>()
    }

    fn render_set(&self, mask: u64) -> String {
        self.to_subset(mask).render(self.ring)
    }

    fn render_elem(&self, x: usize) -> String {
        self.ring.fmt_elem(&Elem::Fin(x as u32))
    }

    fn render_scalar(&self, r: usize) -> String {
        self.render_elem(r)
    }
}

// ---------------------------------------------------------------------------
// ℤ over principal ideals

struct IntChecker<'a> {
    cl: &'a dyn Closure,
    cache: RefCell<HashMap<u64, IntSet>>,
}

impl IntChecker<'_> {
    fn cl(&self, d: u64) -> Result<IntSet> {
        if let Some(s) = self.cache.borrow().get(&d) {
            return Ok(s.clone());
        }
        let s = self.cl.eval(&int_principal(d))?;
        let s = match s {
            Subset::Int(s) => s,
            _ => {
                return Err(Error::DomainMismatch(
                    "closure on Z returned a non-integer set".into(),
                ))
            }
        };
        self.cache.borrow_mut().insert(d, s.clone());
        Ok(s)
    }

    fn cl_set(&self, s: &IntSet) -> Result<IntSet> {
        if let Some(d) = s.principal_generator().and_then(|d| d.to_u64()) {
            return self.cl(d);
        }
        match self.cl.eval(&Subset::Int(s.clone()))? {
            Subset::Int(s) => Ok(s),
            _ => Err(Error::DomainMismatch(
                "closure on Z returned a non-integer set".into(),
            )),
        }
    }

    fn gen(&self, d: u64) -> Result<Option<u64>> {
        Ok(self.cl(d)?.principal_generator().and_then(|g| g.to_u64()))
    }

    fn violation(&self, ax: Axiom, ds: &[u64], r: Option<i64>) -> Result<Option<BigInt>> {
        let d = ds[0];
        let a = IntSet::multiples(&BigUint::from(d));
        Ok(match ax {
            Axiom::C1 => a.find_outside(&self.cl(d)?)?,
            Axiom::C2 => {
                let e = ds[1];
                if !a.is_subset(&IntSet::multiples(&BigUint::from(e)))? {
                    None
                } else {
                    self.cl(d)?.find_outside(&self.cl(e)?)?
                }
            }
            Axiom::C3 => {
                let c = self.cl(d)?;
                let cc = self.cl_set(&c)?;
                match cc.find_outside(&c)? {
                    Some(w) => Some(w),
                    None => c.find_outside(&cc)?,
                }
            }
            Axiom::C4a => {
                let e = ds[1];
                if let (Some(gd), Some(ge), Some(g)) =
                    (self.gen(d)?, self.gen(e)?, self.gen(d.gcd(&e))?)
                {
                    let lhs = gd.gcd(&ge);
                    if g == 0 && lhs != 0 || g != 0 && lhs % g != 0 {
                        Some(BigInt::from(lhs))
                    } else {
                        None
                    }
                } else {
                    let lhs = self.cl(d)?.sum(&self.cl(e)?)?;
                    lhs.find_outside(&self.cl(d.gcd(&e))?)?
                }
            }
            Axiom::C4b => {
                let r = r.unwrap();
                let rd = r.unsigned_abs() * d;
                self.cl(d)?
                    .scale(&BigInt::from(r))?
                    .find_outside(&self.cl(rd)?)?
            }
            Axiom::Absorption => {
                let r = r.unwrap();
                a.scale(&BigInt::from(r))?.find_outside(&self.cl(d)?)?
            }
        })
    }

    fn counterexample(&self, ax: Axiom, ds: &[u64], r: Option<i64>, w: BigInt) -> Counterexample {
        let roles = ["A", "B"];
        let mut ce =
            Counterexample::note(ax.ring_name(), format!("{w} violates {}", ax.ring_name()));
        for (role, d) in roles.iter().zip(ds) {
            ce = ce.with_set(role, format!("({d})"));
        }
        if let Some(r) = r {
            ce = ce.with_scalar(r.to_string());
        }
        ce = ce.with_witness(w.to_string());
        ce.replay = Some(Replay::Principal {
            ds: ds.to_vec(),
            scalar: r,
        });
        ce.kind = Some(ax);
        ce
    }
}

fn check_integers(cl: &dyn Closure, opts: &AxiomOptions) -> Result<AxiomReport> {
    let ic = IntChecker {
        cl,
        cache: RefCell::new(HashMap::new()),
    };
    let dmax = opts.int_bound;
    let rmax = opts.scalar_bound;
    let domain = format!("principal (d), 0 <= d <= {dmax}");
    let sdomain = format!("{domain}, |r| <= {rmax}");
    let mut verdicts = Vec::new();
    for ax in Axiom::ALL {
        let mut checked = 0u64;
        let mut found = None;
        let mut probe = |ds: &[u64], r: Option<i64>, checked: &mut u64| -> Result<bool> {
            *checked += 1;
            if let Some(w) = ic.violation(ax, ds, r)? {
                found = Some(ic.counterexample(ax, ds, r, w));
                return Ok(true);
            }
            Ok(false)
        };
        match ax {
            Axiom::C1 | Axiom::C3 => {
                for d in 0..=dmax {
                    if probe(&[d], None, &mut checked)? {
                        break;
                    }
                }
            }
            Axiom::C2 => {
                'c2: for d in 0..=dmax {
                    for e in 0..=dmax {
                        let sub = if e == 0 { d == 0 } else { d % e == 0 };
                        if sub && probe(&[d, e], None, &mut checked)? {
                            break 'c2;
                        }
                    }
                }
            }
            Axiom::C4a => {
                'c4a: for d in 0..=dmax {
                    for e in d..=dmax {
                        if probe(&[d, e], None, &mut checked)? {
                            break 'c4a;
                        }
                    }
                }
            }
            Axiom::C4b | Axiom::Absorption => {
                'c4b: for d in 0..=dmax {
                    for r in -rmax..=rmax {
                        if probe(&[d], Some(r), &mut checked)? {
                            break 'c4b;
                        }
                    }
                }
            }
        }
        let dom = match ax {
            Axiom::C4b | Axiom::Absorption => sdomain.clone(),
            Axiom::C2 => format!("{domain}, pairs (d) inside (e)"),
            Axiom::C4a => format!("{domain}, pairs"),
            _ => domain.clone(),
        };
        verdicts.push(Verdict::from_check(ax.ring_name(), checked, dom, found));
    }
    Ok(AxiomReport {
        ring: "Z".into(),
        closure: cl.describe(),
        mode: "bounded".into(),
        seed: None,
        verdicts,
    })
}

/// Checks C1–C4b and absorption for a closure. See [`AxiomOptions`].
pub fn check_axioms(cl: &dyn Closure, mode: Mode) -> Result<AxiomReport> {
    check_axioms_with(
        cl,
        &AxiomOptions {
            mode,
            ..AxiomOptions::default()
        },
    )
}

pub fn check_axioms_with(cl: &dyn Closure, opts: &AxiomOptions) -> Result<AxiomReport> {
    let ring = cl.ring();
    if ring.is_integers() {
        return check_integers(cl, opts);
    }
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!("axiom checks on {ring}")));
    }
    let model = RingModel::new(cl)?;
    check_mask_model(&model, opts.mode, opts.sum, ring.to_string(), cl.describe())
}

/// Re-evaluates a counterexample; `true` when the violation reproduces.
pub fn replay(cl: &dyn Closure, ce: &Counterexample) -> Result<bool> {
    let ax = ce
        .kind
        .ok_or_else(|| Error::precondition("counterexample carries no replay data"))?;
    match ce.replay.as_ref() {
        Some(Replay::Masks { masks, scalar }) => {
            let model = RingModel::new(cl)?;
            let engine = Engine::new(&model, ce.sum_rule)?;
            Ok(engine.violation(ax, masks, *scalar)?.is_some())
        }
        Some(Replay::Principal { ds, scalar }) => {
            let ic = IntChecker {
                cl,
                cache: RefCell::new(HashMap::new()),
            };
            Ok(ic.violation(ax, ds, *scalar)?.is_some())
        }
        None => Err(Error::precondition("counterexample carries no replay data")),
    }
}

/// Renders a subset of the closure's ring (helper for reports).
pub fn render(cl: &dyn Closure, s: &Subset) -> String {
    render_subset(cl.ring(), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::ClosureSpec;
    use crate::ideal::IdealRep;

    /// `cl(A) = A ∪ {1}`.
    #[derive(Debug)]
    struct AddOne(Ring);

    impl Closure for AddOne {
        fn ring(&self) -> &Ring {
            &self.0
        }
        fn eval(&self, a: &Subset) -> Result<Subset> {
            a.union(&self.0, &Subset::from_elems(&self.0, &[self.0.one()]))
        }
        fn describe(&self) -> String {
            "A+{1}".into()
        }
    }

    fn z12_shift4() -> ClosureSpec {
        let r = Ring::residue(12).unwrap();
        ClosureSpec::ideal_shift(IdealRep::generated(&r, &[Elem::Fin(4)]).unwrap())
    }

    #[test]
    fn shift_closure_passes_exhaustively() {
        let rep = check_axioms(&z12_shift4(), Mode::Exhaustive).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.verdict("C1").unwrap().checked, 4096);
        assert_eq!(rep.verdict("C4a").unwrap().checked, 4096 * 4097 / 2);
    }

    #[test]
    fn minkowski_reading_breaks_ideal_shift_only() {
        let opts = AxiomOptions {
            mode: Mode::Exhaustive,
            sum: SumRule::Minkowski,
            ..AxiomOptions::default()
        };
        let rep = check_axioms_with(&z12_shift4(), &opts).unwrap();
        let v = rep.verdict("C4a").unwrap();
        assert!(!v.verdict);
        let ce = v.counterexample.as_ref().unwrap();
        // the empty operand comes first in canonical order
        assert_eq!(ce.sets[0].set, "{}");
        assert!(replay(&z12_shift4(), ce).unwrap());
        let r = Ring::residue(12).unwrap();
        let set = ClosureSpec::set_shift(IdealRep::generated(&r, &[Elem::Fin(4)]).unwrap());
        assert!(check_axioms_with(&set, &opts).unwrap().all_pass());
    }

    #[test]
    fn broken_operator_is_caught_and_replays() {
        let cl = AddOne(Ring::residue(12).unwrap());
        let rep = check_axioms(&cl, Mode::Exhaustive).unwrap();
        let bad: Vec<&str> = rep.failures().map(|v| v.axiom.as_str()).collect();
        assert!(bad.contains(&"C4a"), "{bad:?}");
        for v in rep.failures() {
            assert!(replay(&cl, v.counterexample.as_ref().unwrap()).unwrap());
        }
        // replaying against a lawful closure does not reproduce
        let ce = rep.verdict("C4a").unwrap().counterexample.clone().unwrap();
        assert!(!replay(&z12_shift4(), &ce).unwrap());
    }

    #[test]
    fn modular_closure_on_integers() {
        let cl = ClosureSpec::modular(6);
        let opts = AxiomOptions {
            int_bound: 60,
            scalar_bound: 12,
            ..AxiomOptions::default()
        };
        let rep = check_axioms_with(&cl, &opts).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn generated_closure_passes_in_all_modes() {
        let r = Ring::residue(8).unwrap();
        let cl = ClosureSpec::generated(&r);
        for mode in [Mode::Auto, Mode::Subgroups, Mode::sampled_default()] {
            assert!(check_axioms(&cl, mode).unwrap().all_pass());
        }
    }

    #[test]
    fn oversized_exhaustive_is_a_resource_error() {
        let r = Ring::residue(20).unwrap();
        let cl = ClosureSpec::generated(&r);
        assert!(matches!(
            check_axioms(&cl, Mode::Exhaustive),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(check_axioms(&cl, Mode::Auto).unwrap().all_pass());
    }
}
