//! Point sets and vanishing sets in function rings 𝔽ₚ[x₁..xₙ]/(xᵢᵖ − xᵢ).

use crate::error::{Error, Result};
use crate::ring::poly::FunSpace;
use crate::ring::{Elem, ElemSet, Ring, Subset};

/// Largest point space handled by brute force.
pub const POINT_GUARD: usize = 4096;

pub(crate) fn space(ring: &Ring) -> Result<&FunSpace> {
    let fs = ring
        .fun_space()
        .ok_or_else(|| Error::Unsupported(format!("{ring} is not a function ring")))?;
    if fs.npoints > POINT_GUARD {
        return Err(Error::resource(
            "points in the function ring",
            POINT_GUARD as u128,
            fs.npoints as u128,
        ));
    }
    Ok(fs)
}

/// Common zeros of a set of functions, as point indices (all points for the empty set).
pub fn zeros(ring: &Ring, fs: &[Elem]) -> Result<Vec<usize>> {
    let sp = space(ring)?;
    let tables: Vec<Vec<u64>> = fs
        .iter()
        .map(|f| ring.fun_table(f).expect("function ring element"))
        .collect();
    Ok((0..sp.npoints)
        .filter(|&j| tables.iter().all(|t| t[j] == 0))
        .collect())
}

/// Functions vanishing at every listed point.
pub fn vanishing(ring: &Ring, points: &[usize]) -> Result<Subset> {
    let sp = space(ring)?;
    let n = ring.size()?;
    let p = sp.p;
    let mut fixed = vec![false; sp.npoints];
    for &j in points {
        fixed[j] = true;
    }
    let free: Vec<usize> = (0..sp.npoints).filter(|&j| !fixed[j]).collect();
    let count = (p as u128).pow(free.len() as u32);
    let mut out = ElemSet::empty(n);
    let mut table = vec![0u64; sp.npoints];
    for mut k in 0..count {
        for &j in &free {
            table[j] = (k % p as u128) as u64;
            k /= p as u128;
        }
        out.insert(ring.fun_from_table(&table).idx() as usize);
    }
    Ok(Subset::Finite(out))
}

/// Generators `xᵢ − aᵢ` of the point ideal 𝔪ₐ.
pub fn point_ideal_gens(ring: &Ring, point: usize) -> Result<Vec<Elem>> {
    let sp = space(ring)?;
    let a = sp.coords(point);
    Ok((0..sp.nvars as usize)
        .map(|i| {
            let table: Vec<u64> = (0..sp.npoints)
                .map(|j| (sp.coords(j)[i] + sp.p - a[i]) % sp.p)
                .collect();
            ring.fun_from_table(&table)
        })
        .collect())
}

pub fn render_point(ring: &Ring, point: usize) -> String {
    match ring.fun_space() {
        Some(sp) => {
            let c: Vec<String> = sp.coords(point).iter().map(u64::to_string).collect();
            format!("({})", c.join(","))
        }
        None => point.to_string(),
    }
}

pub fn render_points(ring: &Ring, points: &[usize]) -> String {
    let parts: Vec<String> = points.iter().map(|&j| render_point(ring, j)).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::grammar::parse_ring;

    #[test]
    fn zeros_of_x1x2() {
        let r = parse_ring("Fun:p=2,n=2").unwrap();
        let f = r.parse_elem("x1*x2").unwrap();
        let z = zeros(&r, &[f]).unwrap();
        assert_eq!(render_points(&r, &z), "{(0,0), (0,1), (1,0)}");
    }

    #[test]
    fn vanishing_extremes() {
        let r = parse_ring("Fun:p=2,n=2").unwrap();
        assert!(vanishing(&r, &[]).unwrap().is_full());
        assert_eq!(
            vanishing(&r, &[0, 1, 2, 3]).unwrap().elements().unwrap(),
            vec![r.zero()]
        );
        let v = vanishing(&r, &[3]).unwrap();
        assert_eq!(v.count(), Some(8));
        for g in point_ideal_gens(&r, 3).unwrap() {
            assert!(v.contains(&r, &g));
        }
    }
}
