//! From real or complex nullspace vectors to points of the fundamental cone.
//!
//! The map only goes one way: a nullspace vector yields a cone point, never
//! the reverse.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::nsp;
use crate::pseudoweight::{self, PseudoCodeword, WeightKind};
use crate::rng;

/// Tolerance on `H nu = 0` for complex data.
pub const COMPLEX_TOL: f64 = 1e-9;

fn real_residual(h: &Gf2Matrix, nu: &[f64]) -> f64 {
    (0..h.rows()).map(|j| h.row_support(j).iter().map(|&i| nu[i]).sum::<f64>().abs()).fold(0.0, f64::max)
}

/// `|nu|` for a real nullspace vector of a zero-one matrix, certified to lie
/// in the fundamental cone.
pub fn bridge_map(h: &Gf2Matrix, nu: &[f64]) -> Result<PseudoCodeword> {
    if nu.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: nu.len() });
    }
    let scale = 1.0 + nu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let res = real_residual(h, nu);
    if res > crate::lp::TOL_FEAS * scale {
        return Err(Error::NotInNullspace(res));
    }
    PseudoCodeword::new(h, nu.iter().map(|v| v.abs()).collect())
}

/// A complex matrix whose entries have integer absolute values.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeMatrix {
    entries: Vec<Vec<Complex64>>,
    magnitudes: Vec<Vec<u32>>,
}

impl MagnitudeMatrix {
    /// Fails with [`Error::MagnitudeCondition`] if some `|h|` is not within
    /// `1e-9` of a nonnegative integer.
    pub fn new(entries: Vec<Vec<Complex64>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.is_empty() || cols == 0 {
            return Err(Error::InvalidParameter("matrix must be nonempty".into()));
        }
        let mut magnitudes = Vec::with_capacity(entries.len());
        for (r, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            let mut mags = Vec::with_capacity(cols);
            for (c, z) in row.iter().enumerate() {
                let a = z.norm();
                let rounded = a.round();
                if (a - rounded).abs() > COMPLEX_TOL || !a.is_finite() {
                    return Err(Error::MagnitudeCondition { row: r, col: c });
                }
                mags.push(rounded as u32);
            }
            magnitudes.push(mags);
        }
        Ok(Self { entries, magnitudes })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect())
    }

    pub fn from_gf2(h: &Gf2Matrix) -> Self {
        Self::from_real(&h.to_real_rows()).expect("zero-one entries")
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    /// The magnitude view `|H|`.
    pub fn magnitudes(&self) -> &[Vec<u32>] {
        &self.magnitudes
    }

    pub fn max_magnitude(&self) -> u32 {
        self.magnitudes.iter().flatten().copied().max().unwrap_or(0)
    }

    /// `|H|` as a zero-one matrix, if every magnitude is 0 or 1.
    pub fn support_matrix(&self) -> Option<Gf2Matrix> {
        if self.max_magnitude() > 1 {
            return None;
        }
        let bits: Vec<Vec<u8>> = self.magnitudes.iter().map(|r| r.iter().map(|&v| v as u8).collect()).collect();
        Gf2Matrix::from_rows(&bits).ok()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.entries.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Largest `|(H x)_j|` relative to `1 + max |x_i|`.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        self.mul_vec(x).iter().fold(0.0f64, |m, v| m.max(v.norm())) / scale
    }
}

/// Norm applied entrywise to complex vectors. Only the absolute value is
/// provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexNorm {
    #[default]
    Abs,
}

impl ComplexNorm {
    pub fn apply(self, z: Complex64) -> f64 {
        match self {
            ComplexNorm::Abs => z.norm(),
        }
    }
}

fn zero_one_support(h: &MagnitudeMatrix) -> Result<Gf2Matrix> {
    h.support_matrix().ok_or_else(|| {
        let (row, col) = h
            .magnitudes
            .iter()
            .enumerate()
            .find_map(|(r, row)| row.iter().position(|&v| v > 1).map(|c| (r, c)))
            .unwrap_or((0, 0));
        Error::MagnitudeCondition { row, col }
    })
}

fn check_nullspace(h: &MagnitudeMatrix, nu: &[Complex64]) -> Result<()> {
    if nu.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: nu.len() });
    }
    let res = h.relative_residual(nu);
    if res > COMPLEX_TOL {
        return Err(Error::NotInNullspace(res));
    }
    Ok(())
}

/// Entrywise norm of a complex nullspace vector of a matrix with
/// `|h| in {0, 1}`, certified to lie in the cone of `|H|`.
pub fn bridge_map_complex(h: &MagnitudeMatrix, nu: &[Complex64], norm: ComplexNorm) -> Result<PseudoCodeword> {
    let support = zero_one_support(h)?;
    check_nullspace(h, nu)?;
    PseudoCodeword::new(&support, nu.iter().map(|&z| norm.apply(z)).collect())
}

/// Attempts per block before falling back to shifted permutations.
const REJECTION_ATTEMPTS: usize = 1000;

/// `count` permutations of `0..m` with pairwise disjoint supports (no two
/// agree anywhere), drawn by Fisher-Yates with rejection.
fn disjoint_permutations(count: usize, m: usize, r: &mut rng::Rng) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(count);
    'outer: while perms.len() < count {
        for _ in 0..REJECTION_ATTEMPTS {
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(r);
            if perms.iter().all(|q| q.iter().zip(&p).all(|(a, b)| a != b)) {
                perms.push(p);
                continue 'outer;
            }
        }
        // Rare for desk-scale M: cyclic shifts of one random permutation.
        let mut base: Vec<usize> = (0..m).collect();
        base.shuffle(r);
        let mut shifts: Vec<usize> = (0..m).collect();
        shifts.shuffle(r);
        return shifts[..count].iter().map(|&s| (0..m).map(|x| base[(x + s) % m]).collect()).collect();
    }
    perms
}

/// An `M`-fold cover: each nonzero `h` becomes `h/|h|` times the sum of
/// `|h|` disjoint `M x M` permutation matrices; row `(j, a)` sits at
/// `j*M + a` and column `(i, b)` at `i*M + b`.
pub fn matrix_cover(h: &MagnitudeMatrix, m: usize, seed: u64) -> Result<MagnitudeMatrix> {
    let needed = h.max_magnitude() as usize;
    if m == 0 || m < needed {
        return Err(Error::CoverTooSmall { m, needed: needed.max(1) });
    }
    let mut r = rng::rng(seed);
    let (rows, cols) = (h.rows(), h.cols());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); cols * m]; rows * m];
    for j in 0..rows {
        for i in 0..cols {
            let a = h.magnitudes[j][i] as usize;
            if a == 0 {
                continue;
            }
            let unit = h.entries[j][i] / h.entries[j][i].norm();
            for p in disjoint_permutations(a, m, &mut r) {
                for (row, &col) in p.iter().enumerate() {
                    out[j * m + row][i * m + col] = unit;
                }
            }
        }
    }
    MagnitudeMatrix::new(out)
}

/// Whether `cover` is an `M`-fold cover of `h` in the above sense: every
/// block is `h/|h|` times a zero-one matrix with all line sums `|h|`.
pub fn is_matrix_cover(h: &MagnitudeMatrix, cover: &MagnitudeMatrix, m: usize) -> bool {
    if cover.rows() != h.rows() * m || cover.cols() != h.cols() * m {
        return false;
    }
    for j in 0..h.rows() {
        for i in 0..h.cols() {
            let a = h.magnitudes[j][i];
            let unit = if a == 0 { Complex64::new(0.0, 0.0) } else { h.entries[j][i] / a as f64 };
            let mut row_sums = vec![0u32; m];
            let mut col_sums = vec![0u32; m];
            for r in 0..m {
                for c in 0..m {
                    let z = cover.entries[j * m + r][i * m + c];
                    if z.norm() <= COMPLEX_TOL {
                        continue;
                    }
                    if a == 0 || (z - unit).norm() > 1e-6 {
                        return false;
                    }
                    row_sums[r] += 1;
                    col_sums[c] += 1;
                }
            }
            if row_sums.iter().chain(&col_sums).any(|&s| s != a) {
                return false;
            }
        }
    }
    true
}

/// `a^{↑M}`: each entry repeated `M` times.
pub fn lift<T: Clone>(a: &[T], m: usize) -> Vec<T> {
    a.iter().flat_map(|v| std::iter::repeat_n(v.clone(), m)).collect()
}

/// `phi_M` for complex vectors: block means.
pub fn project_complex(a: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if m == 0 || a.len() % m != 0 {
        return Err(Error::InvalidParameter(format!("length {} is not a multiple of M = {m}", a.len())));
    }
    Ok(a.chunks(m).map(|c| c.iter().sum::<Complex64>() / m as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftedBridge {
    pub cover: MagnitudeMatrix,
    pub nu_lifted: Vec<Complex64>,
    pub certificate: PseudoCodeword,
}

/// Lifts `nu` into the nullspace of a seeded `M`-cover and certifies its
/// entrywise norm in the cone of `|cover|`.
pub fn lifted_bridge(h: &MagnitudeMatrix, m: usize, nu: &[Complex64], seed: u64) -> Result<LiftedBridge> {
    check_nullspace(h, nu)?;
    let cover = matrix_cover(h, m, seed)?;
    lifted_bridge_with(h, cover, m, nu)
}

/// As [`lifted_bridge`] for a given cover.
pub fn lifted_bridge_with(h: &MagnitudeMatrix, cover: MagnitudeMatrix, m: usize, nu: &[Complex64]) -> Result<LiftedBridge> {
    check_nullspace(h, nu)?;
    if !is_matrix_cover(h, &cover, m) {
        return Err(Error::InvalidParameter("not an M-fold cover of the base matrix".into()));
    }
    let nu_lifted = lift(nu, m);
    check_nullspace(&cover, &nu_lifted)?;
    let certificate = bridge_map_complex(&cover, &nu_lifted, ComplexNorm::Abs)?;
    Ok(LiftedBridge { cover, nu_lifted, certificate })
}

/// The converse direction: `phi_M(nu_tilde)` lies in the nullspace of `h`
/// whenever `nu_tilde` lies in the nullspace of the cover.
pub fn projection_in_nullspace(h: &MagnitudeMatrix, cover: &MagnitudeMatrix, m: usize, nu_tilde: &[Complex64]) -> Result<bool> {
    check_nullspace(cover, nu_tilde)?;
    let p = project_complex(nu_tilde, m)?;
    Ok(h.relative_residual(&p) <= COMPLEX_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VecNorm {
    L1,
    L2,
}

/// `omega_i = || (alpha_l |nu^(l)_i|)_l ||`, certified in the cone of `|H|`.
/// `alphas = None` means all ones.
pub fn multi_vector_bridge(
    h: &MagnitudeMatrix,
    nus: &[Vec<Complex64>],
    vecnorm: VecNorm,
    alphas: Option<&[f64]>,
) -> Result<PseudoCodeword> {
    let support = zero_one_support(h)?;
    if let Some(a) = alphas {
        if a.len() != nus.len() {
            return Err(Error::DimensionMismatch { expected: nus.len(), got: a.len() });
        }
        if let Some(bad) = a.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("scalar {bad} must be nonnegative")));
        }
    }
    for nu in nus {
        check_nullspace(h, nu)?;
    }
    let omega: Vec<f64> = (0..h.cols())
        .map(|i| {
            let parts = nus.iter().enumerate().map(|(l, nu)| alphas.map_or(1.0, |a| a[l]) * nu[i].norm());
            match vecnorm {
                VecNorm::L1 => parts.sum(),
                VecNorm::L2 => parts.map(|v| v * v).sum::<f64>().sqrt(),
            }
        })
        .collect();
    PseudoCodeword::new(&support, omega)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub k: usize,
    /// Minimum BSC pseudo-weight over nonzero polytope vertices.
    pub min_bsc: f64,
    pub gate: bool,
    /// The direct strict nullspace verdict at `(k, C = 1)`.
    pub direct: bool,
}

impl GateReport {
    /// The gate may only claim what the direct check confirms.
    pub fn consistent(&self) -> bool {
        !self.gate || self.direct
    }
}

/// Minimum BSC pseudo-weight above `2k`, alongside the direct nullspace
/// verdict it is supposed to imply.
pub fn lemma5_gate(h: &Gf2Matrix, k: usize, cap: usize) -> Result<GateReport> {
    Ok(lemma5_gate_sweep(h, &[k], cap)?.remove(0))
}

/// [`lemma5_gate`] for several orders, enumerating the vertices once.
pub fn lemma5_gate_sweep(h: &Gf2Matrix, ks: &[usize], cap: usize) -> Result<Vec<GateReport>> {
    let min_bsc = pseudoweight::min_pseudoweight_enumerated(h, WeightKind::Bsc, cap)?;
    let rows = h.to_real_rows();
    ks.iter()
        .map(|&k| {
            let gate = k == 0 || min_bsc > 2.0 * k as f64;
            let direct = nsp::check_nsp_k(&rows, k, 1.0, true)?.holds;
            Ok(GateReport { k, min_bsc, gate, direct })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chain_alternating_vector() {
        let h = corpus::chain_3x4();
        let pc = bridge_map(&h, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(pc.omega, vec![1.0; 4]);
        assert!(bridge_map(&h, &[0.0; 4]).unwrap().omega.iter().all(|&v| v == 0.0));
        assert!(matches!(bridge_map(&h, &[1.0, 1.0, 1.0, 1.0]), Err(Error::NotInNullspace(_))));
    }

    #[test]
    fn complex_example() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = MagnitudeMatrix::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0), c(s, s)], vec![c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]])
            .unwrap();
        let nu = [c(s, s), c(s, -(1.0 + s)), c(-1.0, 0.0)];
        let pc = bridge_map_complex(&h, &nu, ComplexNorm::Abs).unwrap();
        assert!((pc.omega[0] - 1.0).abs() < 1e-12);
        assert!((pc.omega[1] - (2.0 + 2f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!((pc.omega[2] - 1.0).abs() < 1e-12);
    }

    fn lifted_example() -> (MagnitudeMatrix, Vec<Complex64>) {
        let r2 = 2f64.sqrt();
        let h = MagnitudeMatrix::new(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(r2, r2)],
            vec![c(-2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let nu = vec![c(r2, r2), c(2.0 * r2, -(3.0 + 2.0 * r2)), c(-1.0, 0.0)];
        (h, nu)
    }

    #[test]
    fn lifted_example_reproduces_alpha() {
        let (h, nu) = lifted_example();
        assert_eq!(h.magnitudes(), &[vec![1, 0, 2], vec![2, 1, 3]]);
        let lb = lifted_bridge(&h, 3, &nu, 1).unwrap();
        let alpha = (25.0 + 12.0 * 2f64.sqrt()).sqrt();
        let expected = [2.0, 2.0, 2.0, alpha, alpha, alpha, 1.0, 1.0, 1.0];
        for (a, b) in lb.certificate.omega.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(matches!(matrix_cover(&h, 2, 0), Err(Error::CoverTooSmall { m: 2, needed: 3 })));
    }

    #[test]
    fn explicit_cover_is_recognized() {
        let (h, _) = lifted_example();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = c(s, s);
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let n = c(-1.0, 0.0);
        let i = c(0.0, 1.0);
        let cover = MagnitudeMatrix::new(vec![
            vec![z, o, z, z, z, z, u, u, z],
            vec![o, z, z, z, z, z, u, z, u],
            vec![z, z, o, z, z, z, z, u, u],
            vec![z, n, n, i, z, z, o, o, o],
            vec![n, n, z, z, i, z, o, o, o],
            vec![n, z, n, z, z, i, o, o, o],
        ])
        .unwrap();
        assert!(is_matrix_cover(&h, &cover, 3));
        assert!(is_matrix_cover(&h, &matrix_cover(&h, 3, 9).unwrap(), 3));
    }

    #[test]
    fn identity_cover() {
        let h = MagnitudeMatrix::from_gf2(&corpus::hamming_7_4());
        assert_eq!(matrix_cover(&h, 1, 3).unwrap(), h);
    }

    #[test]
    fn multi_vector_combinations() {
        let h = MagnitudeMatrix::from_gf2(&corpus::chain_3x4());
        let a = vec![c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let b = vec![c(0.0, 2.0), c(0.0, -2.0), c(0.0, 2.0), c(0.0, -2.0)];
        let single = multi_vector_bridge(&h, std::slice::from_ref(&a), VecNorm::L1, None).unwrap();
        assert_eq!(single.omega, vec![1.0; 4]);
        let l2 = multi_vector_bridge(&h, &[a.clone(), b.clone()], VecNorm::L2, Some(&[1.0, 0.5])).unwrap();
        assert!(l2.omega.iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-12));
        let zero = multi_vector_bridge(&h, &[a, b], VecNorm::L1, Some(&[0.0, 0.0])).unwrap();
        assert!(zero.omega.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gate_examples() {
        let chain = lemma5_gate(&corpus::chain_3x4(), 1, 100).unwrap();
        assert_eq!(chain.min_bsc, 4.0);
        assert!(chain.gate && chain.direct);
        let pair = lemma5_gate(&corpus::single_check(2), 1, 100).unwrap();
        assert!(!pair.gate && !pair.direct);
        assert!(lemma5_gate(&corpus::hamming_7_4(), 0, 10_000).unwrap().gate);
    }
}
