//! The fundamental polytope and fundamental cone of a parity-check matrix.
//!
//! The polytope is the intersection over checks `j` of the convex hull of the
//! local codewords of check `j`, described by the odd-subset inequalities
//! `sum_{i in T} x_i - sum_{i in I_j \ T} x_i <= |T| - 1` for every odd
//! `T ⊆ I_j`, together with the unit box. The cone is its conic hull:
//! `omega >= 0` and `omega_i <= sum_{i' in I_j \ i} omega_i'` for every check
//! `j` and every `i in I_j`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::lp::TOL_FEAS;
use crate::polyhedra;

/// Row degrees above this are rejected (2^(d-1) cuts per row).
pub const MAX_CUT_DEGREE: usize = 12;

/// One odd-subset cut: `coeffs . x <= rhs`, with `coeffs` in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub check: usize,
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

/// All odd-subset cuts of `h`, grouped by check.
pub fn odd_subset_cuts(h: &Gf2Matrix) -> Result<Vec<Cut>> {
    let n = h.cols();
    let mut cuts = Vec::new();
    for j in 0..h.rows() {
        let support = h.row_support(j);
        let d = support.len();
        if d > MAX_CUT_DEGREE {
            return Err(Error::RowTooDense { row: j, degree: d, limit: MAX_CUT_DEGREE });
        }
        for mask in 0u32..(1u32 << d) {
            if mask.count_ones() % 2 == 0 {
                continue;
            }
            let mut coeffs = vec![0i64; n];
            for (k, &i) in support.iter().enumerate() {
                coeffs[i] = if (mask >> k) & 1 == 1 { 1 } else { -1 };
            }
            cuts.push(Cut { check: j, coeffs, rhs: mask.count_ones() as i64 - 1 });
        }
    }
    Ok(cuts)
}

/// Smallest slack of `x` over the box and all cuts (negative = violated).
pub fn polytope_margin(h: &Gf2Matrix, x: &[f64]) -> Result<f64> {
    if x.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: x.len() });
    }
    let mut margin = x.iter().fold(f64::INFINITY, |m, &v| m.min(v).min(1.0 - v));
    for cut in odd_subset_cuts(h)? {
        let lhs: f64 = cut.coeffs.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum();
        margin = margin.min(cut.rhs as f64 - lhs);
    }
    Ok(margin)
}

pub fn in_polytope(h: &Gf2Matrix, x: &[f64]) -> bool {
    polytope_margin(h, x).map(|m| m >= -TOL_FEAS).unwrap_or(false)
}

/// Smallest slack of `omega` over the cone inequalities; the first violated
/// `(check, variable)` pair (or `None` for a negative entry) comes with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeMargin {
    pub margin: f64,
    pub worst: Option<(usize, usize)>,
}

/// Cone slack for a matrix given by its row supports (the index sets `I_j`).
pub fn cone_margin_supports(supports: &[Vec<usize>], omega: &[f64]) -> ConeMargin {
    let mut best = ConeMargin { margin: f64::INFINITY, worst: None };
    for &w in omega {
        if w < best.margin {
            best = ConeMargin { margin: w, worst: None };
        }
    }
    for (j, support) in supports.iter().enumerate() {
        let total: f64 = support.iter().map(|&i| omega[i]).sum();
        for &i in support {
            // omega_i <= total - omega_i
            let slack = total - 2.0 * omega[i];
            if slack < best.margin {
                best = ConeMargin { margin: slack, worst: Some((j, i)) };
            }
        }
    }
    best
}

pub fn cone_margin(h: &Gf2Matrix, omega: &[f64]) -> Result<ConeMargin> {
    if omega.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: omega.len() });
    }
    let supports: Vec<Vec<usize>> = (0..h.rows()).map(|j| h.row_support(j)).collect();
    Ok(cone_margin_supports(&supports, omega))
}

/// Membership in the fundamental cone, within the float feasibility tolerance.
pub fn cone_membership(h: &Gf2Matrix, omega: &[f64]) -> bool {
    cone_margin(h, omega).map(|m| m.margin >= -TOL_FEAS).unwrap_or(false)
}

/// Exact vertices of the fundamental polytope (including the origin).
pub fn polytope_vertices(h: &Gf2Matrix, cap: usize) -> Result<Vec<Vec<BigRational>>> {
    let n = h.cols();
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for i in 0..n {
        let mut a = vec![0i64; n];
        a[i] = 1;
        rows.push((a, 1));
    }
    rows.extend(odd_subset_cuts(h)?.into_iter().map(|c| (c.coeffs, c.rhs)));
    polyhedra::enumerate_vertices(n, &rows, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use num_traits::{One, Zero};

    #[test]
    fn cut_counts() {
        let h = corpus::hamming_7_4();
        assert_eq!(odd_subset_cuts(&h).unwrap().len(), 3 * 8);
        let dense = Gf2Matrix::from_rows(&[vec![1u8; 13]]).unwrap();
        assert!(matches!(odd_subset_cuts(&dense), Err(Error::RowTooDense { .. })));
    }

    #[test]
    fn cone_examples() {
        let h = corpus::chain_3x4();
        assert!(cone_membership(&h, &[0.0; 4]));
        assert!(cone_membership(&h, &[1.0, 1.0, 1.0, 1.0]));
        let m = cone_margin(&h, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(m.margin < 0.0);
        assert_eq!(m.worst, Some((0, 0)));
        assert!(!cone_membership(&h, &[1.0, -1.0, 1.0, 1.0]));
    }

    #[test]
    fn codewords_lie_in_polytope() {
        let h = corpus::hamming_7_4();
        for w in h.enumerate_codewords(16).unwrap() {
            assert!(in_polytope(&h, &w.to_real()));
        }
        assert!(!in_polytope(&h, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn chain_vertices() {
        let v = polytope_vertices(&corpus::chain_3x4(), 1000).unwrap();
        assert_eq!(v, vec![vec![BigRational::zero(); 4], vec![BigRational::one(); 4]]);
    }

    #[test]
    fn single_check_vertices_are_even_words() {
        let v = polytope_vertices(&corpus::single_check(3), 1000).unwrap();
        assert_eq!(v.len(), 4);
        for x in v {
            let ones = x.iter().filter(|c| c.is_one()).count();
            assert!(x.iter().all(|c| c.is_zero() || c.is_one()));
            assert_eq!(ones % 2, 0);
        }
    }

    #[test]
    fn cycle_polytope_is_integral_on_two_checks() {
        // Each variable in two degree-2 checks: only the two codewords remain.
        assert_eq!(polytope_vertices(&corpus::cycle(5), 1000).unwrap().len(), 2);
    }
}
