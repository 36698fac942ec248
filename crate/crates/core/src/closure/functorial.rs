//! Compatibility of ring maps with closures.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::axioms::{
    Counterexample, Mode, Verdict, DEFAULT_SAMPLES, DEFAULT_SEED, SUBSET_CAP_BITS,
};
use super::{closure_set, Closure};
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::ideal::{enumerate_subgroups, int_principal, SUBGROUP_GUARD};
use crate::ring::{ElemSet, IntSet, Ring, Subset};

/// Options for functoriality checks.
#[derive(Debug, Clone)]
pub struct FunctorOptions {
    pub mode: Mode,
    /// Quantify over the empty subset as well.
    pub include_empty: bool,
    pub int_bound: u64,
}

impl Default for FunctorOptions {
    fn default() -> Self {
        FunctorOptions {
            mode: Mode::Auto,
            include_empty: false,
            int_bound: 200,
        }
    }
}

/// Subsets of `ring` to quantify over, with a label for the domain.
pub fn test_subsets(ring: &Ring, opts: &FunctorOptions) -> Result<(Vec<Subset>, String)> {
    if ring.is_integers() {
        let mut out: Vec<Subset> = (0..=opts.int_bound).map(int_principal).collect();
        for a in -12i64..=12 {
            out.push(Subset::Int(IntSet::finite([BigInt::from(a)])));
            for b in a + 1..=12 {
                out.push(Subset::Int(IntSet::finite([
                    BigInt::from(a),
                    BigInt::from(b),
                ])));
            }
        }
        if opts.include_empty {
            out.push(Subset::Int(IntSet::empty()));
        }
        let label = format!(
            "principal (d) with d <= {}, and sets of one or two integers in [-12, 12]",
            opts.int_bound
        );
        return Ok((out, label));
    }
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!(
            "functoriality checks on {ring}"
        )));
    }
    let n = ring.size()?;
    let all = |n: usize| -> Vec<Subset> {
        (0..1u64 << n)
            .map(|m| Subset::Finite(ElemSet::from_mask(n, m)))
            .collect()
    };
    let sampled = |n: usize, seed: u64, count: usize| -> Vec<Subset> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let k = rng.gen_range(1..=n.min(4));
                Subset::Finite(ElemSet::from_indices(
                    n,
                    (0..k).map(|_| rng.gen_range(0..n)),
                ))
            })
            .collect()
    };
    let (mut sets, label) = match opts.mode {
        Mode::Exhaustive => {
            if n > SUBSET_CAP_BITS {
                return Err(Error::resource(
                    "subsets for exhaustive check",
                    1u128 << SUBSET_CAP_BITS,
                    1u128 << n.min(127),
                ));
            }
            (all(n), "all subsets".to_string())
        }
        Mode::Auto if n <= SUBSET_CAP_BITS => (all(n), "all subsets".to_string()),
        Mode::Subgroups => (
            enumerate_subgroups(ring, SUBGROUP_GUARD)?,
            "subgroups".to_string(),
        ),
        Mode::Sampled { seed, count } => (
            sampled(n, seed, count),
            format!("sampled(seed={seed:#x}, count={count})"),
        ),
        Mode::Auto => {
            let mut v = if n <= SUBGROUP_GUARD {
                enumerate_subgroups(ring, SUBGROUP_GUARD)?
            } else {
                Vec::new()
            };
            v.extend(sampled(n, DEFAULT_SEED, DEFAULT_SAMPLES));
            (
                v,
                format!("subgroups + sampled(seed={DEFAULT_SEED:#x}, count={DEFAULT_SAMPLES})"),
            )
        }
    };
    if !opts.include_empty {
        sets.retain(|s| !s.is_empty());
    }
    Ok((sets, label))
}

fn check_rings(f: &Hom, cl_r: &dyn Closure, cl_s: &dyn Closure) -> Result<()> {
    if cl_r.ring() != f.domain() || cl_s.ring() != f.codomain() {
        return Err(Error::DomainMismatch(format!(
            "map {} does not match closures on {} and {}",
            f.describe(),
            cl_r.ring(),
            cl_s.ring()
        )));
    }
    Ok(())
}

/// `f(cl_R(A)) ⊆ cl_S(f(A))` over the test subsets of the domain.
pub fn is_phi_image_morphic(
    f: &Hom,
    cl_r: &dyn Closure,
    cl_s: &dyn Closure,
    opts: &FunctorOptions,
) -> Result<Verdict> {
    check_rings(f, cl_r, cl_s)?;
    let (r, s) = (f.domain(), f.codomain());
    let (sets, label) = test_subsets(r, opts)?;
    let mut checked = 0;
    for a in &sets {
        checked += 1;
        let lhs = f.image(&closure_set(cl_r, a)?)?;
        let rhs = closure_set(cl_s, &f.image(a)?)?;
        if let Some(w) = lhs.find_outside(s, &rhs)? {
            let ce = Counterexample::note(
                "image-morphic",
                format!(
                    "f(cl(A)) = {} is not inside cl(f(A)) = {}",
                    lhs.render(s),
                    rhs.render(s)
                ),
            )
            .with_set("A", a.render(r))
            .with_witness(s.fmt_elem(&w));
            return Ok(Verdict::from_check(
                "image-morphic",
                checked,
                label,
                Some(ce),
            ));
        }
    }
    Ok(Verdict::pass("image-morphic", checked, label))
}

/// `f⁻¹(cl_S(B)) ⊆ cl_R(f⁻¹(B))` over the test subsets of the codomain.
pub fn is_phi_preimage_continuous(
    f: &Hom,
    cl_r: &dyn Closure,
    cl_s: &dyn Closure,
    opts: &FunctorOptions,
) -> Result<Verdict> {
    check_rings(f, cl_r, cl_s)?;
    let (r, s) = (f.domain(), f.codomain());
    let (sets, label) = test_subsets(s, opts)?;
    let mut checked = 0;
    for b in &sets {
        checked += 1;
        let lhs = f.preimage(&closure_set(cl_s, b)?)?;
        let rhs = closure_set(cl_r, &f.preimage(b)?)?;
        if let Some(w) = lhs.find_outside(r, &rhs)? {
            let ce = Counterexample::note(
                "preimage-continuous",
                format!(
                    "f^-1(cl(B)) = {} is not inside cl(f^-1(B)) = {}",
                    lhs.render(r),
                    rhs.render(r)
                ),
            )
            .with_set("B", b.render(s))
            .with_witness(r.fmt_elem(&w));
            return Ok(Verdict::from_check(
                "preimage-continuous",
                checked,
                label,
                Some(ce),
            ));
        }
    }
    Ok(Verdict::pass("preimage-continuous", checked, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::ClosureSpec;
    use crate::ideal::IdealRep;

    #[test]
    fn reduction_mod_12() {
        let z = Ring::integers();
        let z12 = Ring::residue(12).unwrap();
        let f = Hom::from_integers(&z12).unwrap();
        let cl_r = ClosureSpec::modular(12);
        let cl_s = ClosureSpec::generated(&z12);
        let o = FunctorOptions::default();
        assert!(is_phi_image_morphic(&f, &cl_r, &cl_s, &o).unwrap().verdict);
        assert!(
            is_phi_preimage_continuous(&f, &cl_r, &cl_s, &o)
                .unwrap()
                .verdict
        );
        assert_eq!(f.domain(), &z);
    }

    #[test]
    fn maximal_codomain_closure() {
        let z4 = Ring::residue(4).unwrap();
        let z2 = Ring::residue(2).unwrap();
        let f = Hom::canonical(&z4, &z2).unwrap();
        let cl_r = ClosureSpec::generated(&z4);
        let cl_s = ClosureSpec::set_shift(IdealRep::whole(&z2));
        let v = is_phi_image_morphic(&f, &cl_r, &cl_s, &FunctorOptions::default()).unwrap();
        assert!(v.verdict);
        assert_eq!(v.checked, 15);
        // f(cl ∅) = {0} but cl(f(∅)) = ∅ + Z/2 = ∅
        let with_empty = FunctorOptions {
            include_empty: true,
            ..FunctorOptions::default()
        };
        assert!(
            !is_phi_image_morphic(&f, &cl_r, &cl_s, &with_empty)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn identity_is_functorial() {
        let z6 = Ring::residue(6).unwrap();
        let f = Hom::identity(&z6);
        let cl = ClosureSpec::ideal_shift(
            IdealRep::generated(&z6, &[z6.parse_elem("2").unwrap()]).unwrap(),
        );
        let o = FunctorOptions::default();
        assert!(is_phi_image_morphic(&f, &cl, &cl, &o).unwrap().verdict);
        assert!(
            is_phi_preimage_continuous(&f, &cl, &cl, &o)
                .unwrap()
                .verdict
        );
    }
}
