//! Sparse recovery: the brute-force sparsest solution, basis pursuit, and
//! the approximation guarantees with their certified hypotheses.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::linalg;
use crate::lp::{self, ratio_to_f64, TOL_FEAS};
use crate::nsp;
use crate::pseudoweight::{self, WeightKind};

/// Infinity-norm distance below which a recovery counts as exact.
pub const EXACT_TOL: f64 = 1e-6;
/// Slack allowed on the right-hand side of a verified guarantee.
pub const BOUND_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementInstance {
    pub h: Vec<Vec<f64>>,
    pub e_true: Vec<f64>,
    pub s: Vec<f64>,
}

impl MeasurementInstance {
    /// Measures `e_true` with `h`.
    pub fn new(h: Vec<Vec<f64>>, e_true: Vec<f64>) -> Result<Self> {
        let n = h.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidParameter("matrix needs at least one column".into()));
        }
        if e_true.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: e_true.len() });
        }
        if let Some(r) = h.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
        let s = mul(&h, &e_true);
        Ok(Self { h, e_true, s })
    }

    pub fn from_gf2(h: &Gf2Matrix, e_true: Vec<f64>) -> Result<Self> {
        Self::new(h.to_real_rows(), e_true)
    }

    pub fn n(&self) -> usize {
        self.e_true.len()
    }
}

pub(crate) fn mul(h: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    h.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    pub e_hat: Vec<f64>,
    pub l1_value: f64,
    pub exact: bool,
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Residual tolerance for a candidate solution of `H e = s`.
fn residual_ok(h: &[Vec<f64>], e: &[f64], s: &[f64]) -> bool {
    let scale = 1.0 + norm_inf(s) + norm_inf(e);
    norm_inf(&diff(&mul(h, e), s)) <= 1e-9 * scale
}

/// Sparsest solution of `H e = s` with at most `kmax` nonzeros.
///
/// Supports are tried by size, then lexicographically. Each restricted
/// system is solved exactly: columns of `H_T` must be independent (a
/// dependent `T` can never be first), the solution is read off the reduced
/// echelon form, and consistency of the remaining rows is checked against
/// the float `s` within a relative `1e-9`.
pub fn cs_opt_bruteforce(inst: &MeasurementInstance, kmax: usize) -> Result<(Vec<f64>, usize)> {
    let n = inst.n();
    let m = inst.h.len();
    let hq = linalg::to_rational(&inst.h);
    let sq: Vec<BigRational> = inst.s.iter().map(|&v| lp::Field::from_f64(v)).collect();
    for k in 0..=kmax.min(n) {
        for t in nsp::subsets(n, k) {
            let mut aug: linalg::QMatrix =
                (0..m).map(|r| t.iter().map(|&c| hq[r][c].clone()).chain([sq[r].clone()]).collect()).collect();
            let pivots = linalg::rref_limited(&mut aug, k);
            if pivots.len() < k {
                continue;
            }
            let mut e = vec![0.0; n];
            for (r, &c) in t.iter().enumerate() {
                e[c] = ratio_to_f64(&aug[r][k]);
            }
            if residual_ok(&inst.h, &e, &inst.s) {
                return Ok((e, k));
            }
        }
    }
    Err(Error::NoSparseSolution(kmax))
}

/// Basis pursuit.
pub fn cs_lpd(inst: &MeasurementInstance) -> Result<RecoveryResult> {
    let (e_hat, l1_value) = lp::minimize_l1(&inst.h, &inst.s)?;
    let exact = norm_inf(&diff(&e_hat, &inst.e_true)) <= EXACT_TOL;
    Ok(RecoveryResult { e_hat, l1_value, exact })
}

fn tail_l1(e: &[f64], s: &[usize]) -> f64 {
    e.iter().enumerate().filter(|(i, _)| !s.contains(i)).map(|(_, v)| v.abs()).sum()
}

/// `2 (C+1)/(C-1) ||e_S̄||_1`.
pub fn thm3_bound(c: f64, e_true: &[f64], s: &[usize]) -> Result<f64> {
    if c.is_nan() || c <= 1.0 {
        return Err(Error::InvalidParameter(format!("C = {c} must exceed 1")));
    }
    let factor = if c.is_infinite() { 2.0 } else { 2.0 * (c + 1.0) / (c - 1.0) };
    Ok(factor * tail_l1(e_true, s))
}

/// `C''/sqrt(k) ||e_S̄||_1` with `C'' = 1/(sqrt(C'/4k) - 1)`.
pub fn thm6_bound(c_prime: f64, k: usize, e_true: &[f64], s: &[usize]) -> Result<f64> {
    let kf = k as f64;
    if k == 0 || c_prime.is_nan() || c_prime <= 4.0 * kf {
        return Err(Error::InvalidParameter(format!("need C' = {c_prime} > 4k = {}", 4 * k)));
    }
    let c2 = 1.0 / ((c_prime / (4.0 * kf)).sqrt() - 1.0);
    Ok(c2 / kf.sqrt() * tail_l1(e_true, s))
}

/// `C''/k ||e_S̄||_1` with `C'' = 1/(C'/2k - 1)`.
pub fn thm7_bound(c_prime: f64, k: usize, e_true: &[f64], s: &[usize]) -> Result<f64> {
    let kf = k as f64;
    if k == 0 || c_prime.is_nan() || c_prime <= 2.0 * kf {
        return Err(Error::InvalidParameter(format!("need C' = {c_prime} > 2k = {}", 2 * k)));
    }
    let c2 = 1.0 / (c_prime / (2.0 * kf) - 1.0);
    Ok(c2 / kf * tail_l1(e_true, s))
}

/// Which guarantee a hypothesis supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// l1 error against the l1 tail, from the non-strict nullspace property.
    L1L1,
    /// l2 error, from the minimum AWGNC pseudo-weight.
    L2L1,
    /// l-infinity error, from the minimum max-fractional weight.
    LinfL1,
}

/// A checked hypothesis for one matrix, produced only by the `certify_*`
/// functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub kind: BoundKind,
    pub k: usize,
    /// `C` for [`BoundKind::L1L1`], `C'` otherwise.
    pub constant: f64,
    matrix_ref: u64,
}

/// FNV-1a over the bit patterns of the entries and the shape.
pub fn real_fingerprint(h: &[Vec<f64>]) -> u64 {
    let mut x: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            x ^= b as u64;
            x = x.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(h.len() as u64);
    for row in h {
        eat(row.len() as u64);
        for v in row {
            eat(v.to_bits());
        }
    }
    x
}

/// Non-strict nullspace property of order `k` with `C > 1`.
pub fn certify_l1(h: &[Vec<f64>], k: usize, c: f64) -> Result<Hypothesis> {
    if c.is_nan() || c <= 1.0 {
        return Err(Error::InvalidParameter(format!("C = {c} must exceed 1")));
    }
    let cert = nsp::check_nsp_k(h, k, c, false)?;
    if !cert.holds {
        return Err(Error::NotCertified(format!("nullspace property fails at k = {k}, C = {c}")));
    }
    Ok(Hypothesis { kind: BoundKind::L1L1, k, constant: c, matrix_ref: real_fingerprint(h) })
}

/// Minimum AWGNC pseudo-weight (over polytope vertices, `cap` of them) at
/// least `C' > 4k`.
pub fn certify_l2(h: &Gf2Matrix, k: usize, c_prime: f64, cap: usize) -> Result<Hypothesis> {
    if k == 0 || c_prime <= 4.0 * k as f64 {
        return Err(Error::InvalidParameter(format!("need C' = {c_prime} > 4k = {}", 4 * k)));
    }
    let w = pseudoweight::min_pseudoweight_enumerated(h, WeightKind::Awgnc, cap)?;
    if w < c_prime {
        return Err(Error::NotCertified(format!("minimum AWGNC pseudo-weight {w} is below C' = {c_prime}")));
    }
    Ok(Hypothesis { kind: BoundKind::L2L1, k, constant: c_prime, matrix_ref: real_fingerprint(&h.to_real_rows()) })
}

/// Minimum max-fractional weight (exact LP) at least `C' > 2k`.
pub fn certify_linf(h: &Gf2Matrix, k: usize, c_prime: f64) -> Result<Hypothesis> {
    if k == 0 || c_prime <= 2.0 * k as f64 {
        return Err(Error::InvalidParameter(format!("need C' = {c_prime} > 2k = {}", 2 * k)));
    }
    let w = pseudoweight::min_maxfrac_weight(h)?;
    if w < c_prime {
        return Err(Error::NotCertified(format!("minimum max-fractional weight {w} is below C' = {c_prime}")));
    }
    Ok(Hypothesis { kind: BoundKind::LinfL1, k, constant: c_prime, matrix_ref: real_fingerprint(&h.to_real_rows()) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuaranteeCheck {
    pub bound: f64,
    pub error: f64,
    pub holds: bool,
}

/// Runs basis pursuit on `inst` and compares the error, in the norm of the
/// hypothesis, with the matching bound for the set `s`.
pub fn verify_guarantee(inst: &MeasurementInstance, s: &[usize], hyp: &Hypothesis) -> Result<GuaranteeCheck> {
    if hyp.matrix_ref != real_fingerprint(&inst.h) {
        return Err(Error::NotCertified("hypothesis was certified for a different matrix".into()));
    }
    let size_ok = match hyp.kind {
        BoundKind::L1L1 => s.len() <= hyp.k,
        _ => s.len() == hyp.k,
    };
    if !size_ok {
        return Err(Error::NotCertified(format!("|S| = {} does not match k = {}", s.len(), hyp.k)));
    }
    let bound = match hyp.kind {
        BoundKind::L1L1 => thm3_bound(hyp.constant, &inst.e_true, s)?,
        BoundKind::L2L1 => thm6_bound(hyp.constant, hyp.k, &inst.e_true, s)?,
        BoundKind::LinfL1 => thm7_bound(hyp.constant, hyp.k, &inst.e_true, s)?,
    };
    let r = cs_lpd(inst)?;
    let d = diff(&inst.e_true, &r.e_hat);
    let error = match hyp.kind {
        BoundKind::L1L1 => norm1(&d),
        BoundKind::L2L1 => norm2(&d),
        BoundKind::LinfL1 => norm_inf(&d),
    };
    Ok(GuaranteeCheck { bound, error, holds: error <= bound + BOUND_TOL })
}

/// Whether `H e_hat = s` within the float feasibility tolerance.
pub fn is_feasible(inst: &MeasurementInstance, e_hat: &[f64]) -> bool {
    norm_inf(&diff(&mul(&inst.h, e_hat), &inst.s)) <= TOL_FEAS * (1.0 + norm_inf(&inst.s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn bruteforce_examples() {
        let h = corpus::chain_3x4();
        let zero = MeasurementInstance::from_gf2(&h, vec![0.0; 4]).unwrap();
        assert_eq!(cs_opt_bruteforce(&zero, 2).unwrap(), (vec![0.0; 4], 0));
        let one = MeasurementInstance::from_gf2(&h, vec![0.0, 0.0, 3.0, 0.0]).unwrap();
        assert_eq!(cs_opt_bruteforce(&one, 2).unwrap(), (vec![0.0, 0.0, 3.0, 0.0], 1));
        let id = Gf2Matrix::identity(3).unwrap();
        let inst = MeasurementInstance::from_gf2(&id, vec![1.5, 0.0, -2.0]).unwrap();
        assert_eq!(cs_opt_bruteforce(&inst, 3).unwrap().1, 2);
        assert!(matches!(cs_opt_bruteforce(&inst, 1), Err(Error::NoSparseSolution(1))));
    }

    #[test]
    fn basis_pursuit_examples() {
        let h = corpus::chain_3x4();
        let r = cs_lpd(&MeasurementInstance::from_gf2(&h, vec![0.0, 0.0, 3.0, 0.0]).unwrap()).unwrap();
        assert!(r.exact);
        assert!((r.l1_value - 3.0).abs() < 1e-9);
        let pair = MeasurementInstance::new(vec![vec![1.0, 1.0]], vec![1.0, 0.0]).unwrap();
        assert!((cs_lpd(&pair).unwrap().l1_value - 1.0).abs() < 1e-12);
        let zero = cs_lpd(&MeasurementInstance::from_gf2(&h, vec![0.0; 4]).unwrap()).unwrap();
        assert!(zero.exact && zero.e_hat.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bound_formulas() {
        let e = [0.0, 1.0, 0.0];
        assert_eq!(thm3_bound(3.0, &e, &[0]).unwrap(), 4.0);
        assert_eq!(thm3_bound(3.0, &e, &[1]).unwrap(), 0.0);
        assert_eq!(thm3_bound(f64::INFINITY, &e, &[0]).unwrap(), 2.0);
        assert!(thm3_bound(1.0, &e, &[0]).is_err());
        assert!((thm6_bound(16.0, 1, &e, &[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((thm6_bound(32.0, 2, &e, &[0, 2]).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(thm6_bound(4.0, 1, &e, &[0]).is_err());
        assert!((thm7_bound(8.0, 2, &e, &[0, 2]).unwrap() - 0.5).abs() < 1e-12);
        assert!(thm7_bound(2.0, 1, &e, &[0]).is_err());
    }

    #[test]
    fn guarantees_need_certificates() {
        let pair = vec![vec![1.0, 1.0]];
        assert!(matches!(certify_l1(&pair, 1, 2.0), Err(Error::NotCertified(_))));
        let h = corpus::chain_3x4();
        let hyp = certify_l1(&h.to_real_rows(), 1, 3.0).unwrap();
        let inst = MeasurementInstance::from_gf2(&h, vec![0.1, 2.0, 0.0, -0.05]).unwrap();
        let g = verify_guarantee(&inst, &[1], &hyp).unwrap();
        assert!(g.holds, "{g:?}");
        let other = MeasurementInstance::new(pair, vec![1.0, 0.0]).unwrap();
        assert!(matches!(verify_guarantee(&other, &[0], &hyp), Err(Error::NotCertified(_))));
    }

    #[test]
    fn cycle_code_weights_certify() {
        let h = corpus::cycle(5);
        assert!(certify_l2(&h, 1, 5.0, 100).is_ok());
        assert!(certify_linf(&h, 2, 5.0).is_ok());
        assert!(certify_linf(&corpus::hamming_7_4(), 1, 2.5).is_err());
    }
}
