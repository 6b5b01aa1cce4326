//! Exact rational elimination for small dense matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lp::Field;

pub type QMatrix = Vec<Vec<BigRational>>;

/// Exact conversion of float rows (every finite `f64` is a dyadic rational).
pub fn to_rational(a: &[Vec<f64>]) -> QMatrix {
    a.iter().map(|row| row.iter().map(|&v| BigRational::from_f64(v)).collect()).collect()
}

/// Reduced row echelon form in place, pivoting only in the first `limit`
/// columns. Returns the pivot columns; row `r` holds pivot `pivots[r]`.
pub fn rref_limited(a: &mut QMatrix, limit: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (top, bottom) = if i < r { a.split_at_mut(r) } else { a.split_at_mut(i) };
                let (src, dst) = if i < r { (&bottom[0], &mut top[i]) } else { (&top[r], &mut bottom[0]) };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref(a: &mut QMatrix) -> Vec<usize> {
    let cols = a.first().map_or(0, Vec::len);
    rref_limited(a, cols)
}

pub fn rank(a: &QMatrix) -> usize {
    let mut b = a.clone();
    rref(&mut b).len()
}

/// Basis of the right nullspace, one vector per free column.
pub fn nullspace(a: &QMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut b = a.clone();
    let pivots = rref(&mut b);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -b[r][f].clone();
            }
            v
        })
        .collect()
}

/// Matrix-vector product.
pub fn mul_vec(a: &QMatrix, x: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(x).fold(BigRational::zero(), |acc, (r, v)| acc + r * v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::rational_from_int;

    fn q(rows: &[&[i64]]) -> QMatrix {
        rows.iter().map(|r| r.iter().map(|&v| rational_from_int(v)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = q(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]]);
        assert_eq!(rank(&a), 3);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 1);
        assert!(mul_vec(&a, &ns[0]).iter().all(Zero::is_zero));
        assert_eq!(ns[0], vec![rational_from_int(-1), rational_from_int(1), rational_from_int(-1), rational_from_int(1)]);
    }

    #[test]
    fn dependent_rows() {
        let a = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&a), 1);
        assert_eq!(nullspace(&a, 2).len(), 1);
    }
}
