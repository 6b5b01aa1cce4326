//! Exact vertex enumeration of bounded polytopes `{x >= 0 : A x <= b}` with
//! integer data, by the double-description method.
//!
//! The polytope is homogenized to the pointed cone `{(x, t) >= 0 : A x <= b t}`.
//! Extreme rays start from the unit vectors of the nonnegative orthant and the
//! inequalities are added one at a time, each time the one tight on the most
//! current rays; two rays on opposite sides of a new
//! hyperplane are combined only when they are adjacent, which is decided by
//! the rank of their common tight constraints. Rays are kept as
//! primitive integer vectors, so the result is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone)]
struct Ray {
    coords: Vec<BigInt>,
    /// Bitset of tight constraints among those processed so far.
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Whether the constraints flagged in `set` have rank at least `target`,
/// by fraction-free elimination; `None` on overflow.
fn tight_rank_reaches(gens: &[Vec<i128>], set: &[u64], target: usize) -> Option<bool> {
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for (w, &bits) in set.iter().enumerate() {
        let mut b = bits;
        while b != 0 {
            let k = w * 64 + b.trailing_zeros() as usize;
            b &= b - 1;
            rows.push(gens[k].clone());
        }
    }
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..width {
        if rank >= target {
            return Some(true);
        }
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let piv = rows[rank][col];
        for r in rank + 1..rows.len() {
            let f = rows[r][col];
            for c in col..width {
                let v = piv.checked_mul(rows[r][c])?.checked_sub(f.checked_mul(rows[rank][c])?)?;
                rows[r][c] = v / prev;
            }
        }
        prev = piv;
        rank += 1;
    }
    Some(rank >= target)
}

/// Vertices of `{x in R^dim : x >= 0, rows[k].0 . x <= rows[k].1}`.
///
/// Fails with [`Error::CapExceeded`] once more than `cap` intermediate rays are
/// alive, and with [`Error::InvalidParameter`] if the set is unbounded.
pub fn enumerate_vertices(dim: usize, rows: &[(Vec<i64>, i64)], cap: usize) -> Result<Vec<Vec<BigRational>>> {
    let d = dim + 1;
    let total = d + rows.len();
    let words = total.div_ceil(64);
    // Constraint k reads g_k . y >= 0 with y = (x, t).
    let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(total);
    for k in 0..d {
        let mut g = vec![BigInt::zero(); d];
        g[k] = BigInt::from(1);
        gens.push(g);
    }
    for (a, b) in rows {
        if a.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
        }
        let mut g: Vec<BigInt> = a.iter().map(|&v| BigInt::from(-v)).collect();
        g.push(BigInt::from(*b));
        gens.push(g);
    }
    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let mut coords = vec![BigInt::zero(); d];
            coords[k] = BigInt::from(1);
            let mut zeros = vec![0u64; words];
            for c in 0..d {
                if c != k {
                    bit_set(&mut zeros, c);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    let small: Vec<Vec<i128>> = rows
        .iter()
        .map(|(a, b)| a.iter().map(|&v| -(v as i128)).chain(std::iter::once(*b as i128)).collect())
        .collect();
    let small: Vec<Vec<i128>> = (0..d)
        .map(|k| (0..d).map(|c| (c == k) as i128).collect())
        .chain(small)
        .collect();
    let eval = |rays: &[Ray], g: &[BigInt]| -> Vec<BigInt> {
        rays.iter().map(|r| r.coords.iter().zip(g).filter(|(c, _)| !c.is_zero()).map(|(c, gi)| c * gi).sum()).collect()
    };
    let mut pending: Vec<usize> = (d..total).collect();
    while !pending.is_empty() {
        // Next inequality: the one tight on the most current rays.
        let mut pick: Option<(usize, usize, Vec<BigInt>)> = None;
        for (slot, &k) in pending.iter().enumerate() {
            let vals = eval(&rays, &gens[k]);
            let tight = vals.iter().filter(|v| v.is_zero()).count();
            if pick.as_ref().is_none_or(|(_, best, _)| tight > *best) {
                pick = Some((slot, tight, vals));
            }
        }
        let (slot, _, vals) = pick.expect("pending is nonempty");
        let k = pending.remove(slot);
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    bit_set(&mut r.zeros, k);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(a, b)| a & b).collect();
                let size: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (size as usize) + 2 < d {
                    continue;
                }
                let adjacent = match tight_rank_reaches(&small, &common, d - 2) {
                    Some(a) => a,
                    None => rays.iter().enumerate().all(|(r, ray)| {
                        r == p || r == q || common.iter().zip(&ray.zeros).any(|(c, z)| c & !z != 0)
                    }),
                };
                if !adjacent {
                    continue;
                }
                let vp = &vals[p];
                let vq = -&vals[q];
                let coords: Vec<BigInt> =
                    rays[q].coords.iter().zip(&rays[p].coords).map(|(cq, cp)| vp * cq + &vq * cp).collect();
                let mut zeros = common;
                bit_set(&mut zeros, k);
                next.push(Ray { coords: primitive(coords), zeros });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                bit_set(&mut r.zeros, k);
            }
            next.push(r);
        }
        if next.len() > cap {
            return Err(Error::CapExceeded { needed: next.len() as u128, cap: cap as u128 });
        }
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let t = &r.coords[dim];
        if t.is_zero() {
            if r.coords.iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidParameter("polyhedron is unbounded".into()));
            }
            continue;
        }
        out.push(r.coords[..dim].iter().map(|c| BigRational::new(c.clone(), t.clone())).collect());
    }
    out.sort();
    out.dedup();
    Ok(out)
}
