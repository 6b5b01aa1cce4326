//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use lpbridge::linalg;
use lpbridge::lp::ratio_to_f64;
use lpbridge::tanner::TannerGraph;
use lpbridge::Gf2Matrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Girth from traces of the non-backtracking (Hashimoto) edge operator:
/// the smallest `l` with `tr(B^l) > 0`. Shares no code with the BFS.
pub fn trace_girth(h: &Gf2Matrix, max_len: usize) -> Option<usize> {
    let g = TannerGraph::from_matrix(h);
    // Directed edges: 2e is variable -> check, 2e + 1 is check -> variable.
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let nv = g.n_var();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); nv + g.n_chk()];
    for (e, &(c, v)) in edges.iter().enumerate() {
        out_of[v].push(2 * e);
        out_of[nv + c].push(2 * e + 1);
    }
    let head = |d: usize| {
        let (c, v) = edges[d / 2];
        if d % 2 == 0 {
            nv + c
        } else {
            v
        }
    };
    let succ = |d: usize| -> Vec<usize> { out_of[head(d)].iter().copied().filter(|&x| x / 2 != d / 2).collect() };
    let succs: Vec<Vec<usize>> = (0..2 * edges.len()).map(succ).collect();
    let nd = succs.len();
    // state[start][d]: walks from `start` ending on `d`, advanced one step
    // per length so the search stops at the first closed walk.
    let mut state: Vec<Vec<u64>> = (0..nd).map(|s| (0..nd).map(|d| (d == s) as u64).collect()).collect();
    for len in 1..=max_len {
        let mut trace = 0u64;
        for (start, cur) in state.iter_mut().enumerate() {
            let mut next = vec![0u64; nd];
            for (d, &w) in cur.iter().enumerate() {
                if w != 0 {
                    for &s in &succs[d] {
                        next[s] = next[s].saturating_add(w);
                    }
                }
            }
            trace = trace.saturating_add(next[start]);
            *cur = next;
        }
        if trace > 0 {
            return Some(len);
        }
    }
    None
}

/// Uniformly random zero-one matrix with no zero column.
pub fn random_zero_one<R: Rng>(m: usize, n: usize, rng: &mut R) -> Gf2Matrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..m).map(|_| (0..n).map(|_| rng.gen_bool(0.4) as u8).collect()).collect();
        let h = Gf2Matrix::from_rows(&rows).unwrap();
        if (0..n).all(|c| h.col_weight(c) > 0) {
            return h;
        }
    }
}

/// Exact real nullspace basis of a zero-one matrix.
pub fn real_nullspace(h: &Gf2Matrix) -> Vec<Vec<BigRational>> {
    linalg::nullspace(&linalg::to_rational(&h.to_real_rows()), h.cols())
}

/// Random real combination of the nullspace basis (zero if trivial).
pub fn nullspace_sample<R: Rng>(basis: &[Vec<BigRational>], n: usize, rng: &mut R) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for b in basis {
        let t: f64 = rng.gen_range(-1.0..1.0);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += t * ratio_to_f64(bi);
        }
    }
    v
}

/// Circuits of the real matrix: nullspace vectors of minimal support, one
/// per support, normalized to unit l1 norm.
pub fn circuits(h: &[Vec<f64>]) -> Vec<Vec<BigRational>> {
    let n = h[0].len();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let cols: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<f64>> = h.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        let ns = linalg::nullspace(&linalg::to_rational(&sub), cols.len());
        if ns.len() != 1 || ns[0].iter().any(|v| v.is_zero()) {
            continue;
        }
        let norm = ns[0].iter().fold(BigRational::zero(), |a, v| a + v.abs());
        let mut full = vec![BigRational::zero(); n];
        for (&c, v) in cols.iter().zip(&ns[0]) {
            full[c] = v / &norm;
        }
        out.push(full);
    }
    out
}

/// `max C ||nu_S||_1 - ||nu_Sbar||_1` over unit-l1 nullspace vectors, taken
/// over circuits (the vertices of `{H nu = 0, ||nu||_1 <= 1}`).
pub fn circuit_set_margin(circuits: &[Vec<BigRational>], s: &[usize], c: &BigRational) -> Option<BigRational> {
    circuits
        .iter()
        .map(|nu| {
            let on: BigRational = s.iter().fold(BigRational::zero(), |a, &i| a + nu[i].abs());
            let total: BigRational = nu.iter().fold(BigRational::zero(), |a, v| a + v.abs());
            c * &on - (total - on)
        })
        .max()
}
