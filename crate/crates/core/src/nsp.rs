//! Exact verification of the nullspace property for small matrices.
//!
//! For a fixed set `S` the quantity `max { C ||nu_S||_1 - ||nu_S̄||_1 :
//! H nu = 0, ||nu||_1 = 1 }` is computed by one rational LP per sign pattern
//! on `S` (the first sign pinned), with the off-`S` coordinates split into
//! nonnegative parts. The property holds for `S` iff the maximum is negative
//! (strict form) or nonpositive (non-strict form).

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cslpd;
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{self, ratio_to_f64, Field, LpProblem, Status};

/// Upper limit on the number of LPs a single call may solve.
pub const NSP_LP_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub s: Vec<usize>,
    /// Normalized to `||nu||_1 = 1`, exact.
    #[serde(serialize_with = "ser_rationals")]
    pub nu: Vec<BigRational>,
    /// `C ||nu_S||_1 - ||nu_S̄||_1`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub margin: BigRational,
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio_to_f64(v))
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ratio_to_f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NspCertificate {
    pub k: usize,
    pub c: f64,
    pub strict: bool,
    pub holds: bool,
    /// The maximizing `(S, nu)`; `None` when the nullspace is trivial or `S`
    /// is empty.
    pub worst_case: Option<WorstCase>,
}

impl NspCertificate {
    pub fn margin(&self) -> Option<f64> {
        self.worst_case.as_ref().map(|w| ratio_to_f64(&w.margin))
    }
}

fn check_shape(h: &[Vec<f64>]) -> Result<usize> {
    let n = h.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidParameter("matrix needs at least one column".into()));
    }
    if let Some(r) = h.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: r.len() });
    }
    Ok(n)
}

fn nullspace_trivial(h: &[Vec<f64>], n: usize) -> bool {
    linalg::rank(&linalg::to_rational(h)) == n
}

/// Exact maximum of `C ||nu_S||_1 - ||nu_S̄||_1` over `H nu = 0`,
/// `||nu||_1 = 1`, with a maximizer normalized to unit l1 norm.
fn max_margin(h: &[Vec<f64>], n: usize, s: &[usize], c: &BigRational) -> Result<(BigRational, Vec<BigRational>)> {
    let k = s.len();
    let mut in_s = vec![None; n];
    for (pos, &i) in s.iter().enumerate() {
        in_s[i] = Some(pos);
    }
    let rest: Vec<usize> = (0..n).filter(|i| in_s[*i].is_none()).collect();
    // Variables: t_0..t_{k-1} (|nu| on S), then (p, q) pairs for S̄.
    let nv = k + 2 * rest.len();
    let patterns = 1u64 << k.saturating_sub(1);
    let cf = c.to_f64();
    let results: Vec<Result<Option<(BigRational, Vec<BigRational>)>>> = (0..patterns)
        .into_par_iter()
        .map(|mask| {
            let sign = |pos: usize| if pos == 0 || (mask >> (pos - 1)) & 1 == 0 { 1.0 } else { -1.0 };
            let mut obj = vec![0.0; nv];
            obj[..k].fill(-cf);
            obj[k..].fill(1.0);
            let mut p = LpProblem::new(obj);
            for row in h {
                let mut coeffs = vec![0.0; nv];
                for (pos, &i) in s.iter().enumerate() {
                    coeffs[pos] = sign(pos) * row[i];
                }
                for (r, &i) in rest.iter().enumerate() {
                    coeffs[k + 2 * r] = row[i];
                    coeffs[k + 2 * r + 1] = -row[i];
                }
                p.add_eq(coeffs, 0.0);
            }
            p.add_eq(vec![1.0; nv], 1.0);
            let sol = lp::solve_exact(&p)?;
            if sol.status != Status::Optimal {
                return Ok(None);
            }
            let mut nu = vec![BigRational::zero(); n];
            for (pos, &i) in s.iter().enumerate() {
                nu[i] = if sign(pos) > 0.0 { sol.x[pos].clone() } else { -sol.x[pos].clone() };
            }
            for (r, &i) in rest.iter().enumerate() {
                nu[i] = &sol.x[k + 2 * r] - &sol.x[k + 2 * r + 1];
            }
            Ok(Some((-sol.objective_value, nu)))
        })
        .collect();
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    for r in results {
        if let Some((v, nu)) = r? {
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, nu));
            }
        }
    }
    let (_, nu) = best.ok_or(Error::Infeasible)?;
    // Report the margin of the normalized maximizer itself; it is at least
    // the LP value, so a violation found by the LP is always reproduced.
    let l1 = nu.iter().fold(BigRational::zero(), |a, v| a + v.abs());
    let nu: Vec<BigRational> = nu.into_iter().map(|v| v / &l1).collect();
    Ok((set_margin(&nu, s, c), nu))
}

/// `C ||nu_S||_1 - ||nu_S̄||_1`, exact.
pub fn set_margin(nu: &[BigRational], s: &[usize], c: &BigRational) -> BigRational {
    let mut inside = BigRational::zero();
    let mut total = BigRational::zero();
    for (i, v) in nu.iter().enumerate() {
        total += v.abs();
        if s.contains(&i) {
            inside += v.abs();
        }
    }
    c * &inside - (total - inside)
}

fn verdict(margin: &BigRational, strict: bool) -> bool {
    if strict {
        margin.is_negative()
    } else {
        !margin.is_positive()
    }
}

/// The nullspace property for one set `S`.
pub fn check_nsp_set(h: &[Vec<f64>], s: &[usize], c: f64, strict: bool) -> Result<NspCertificate> {
    let n = check_shape(h)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("C = {c} must be finite and nonnegative")));
    }
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&i) = s.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch { expected: n, got: i + 1 });
    }
    let needed = 1u128 << s.len().saturating_sub(1).min(100);
    if needed > NSP_LP_BUDGET {
        return Err(Error::CapExceeded { needed, cap: NSP_LP_BUDGET });
    }
    let base = NspCertificate { k: s.len(), c, strict, holds: true, worst_case: None };
    if s.is_empty() || nullspace_trivial(h, n) {
        return Ok(base);
    }
    let cq = BigRational::from_f64(c);
    let (margin, nu) = max_margin(h, n, &s, &cq)?;
    Ok(NspCertificate { holds: verdict(&margin, strict), worst_case: Some(WorstCase { s, nu, margin }), ..base })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else { return out };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The nullspace property for every `S` with `|S| <= k`. Only `|S| = k`
/// is examined since the margin is monotone in `S`. On failure the first
/// violating set in lexicographic order is reported; otherwise the set with
/// the largest margin.
pub fn check_nsp_k(h: &[Vec<f64>], k: usize, c: f64, strict: bool) -> Result<NspCertificate> {
    let n = check_shape(h)?;
    let k_eff = k.min(n);
    let needed = binomial(n, k_eff).saturating_mul(1u128 << k_eff.saturating_sub(1).min(100));
    if needed > NSP_LP_BUDGET {
        return Err(Error::CapExceeded { needed, cap: NSP_LP_BUDGET });
    }
    let certs: Vec<NspCertificate> =
        subsets(n, k_eff).par_iter().map(|s| check_nsp_set(h, s, c, strict)).collect::<Result<_>>()?;
    let mut out = NspCertificate { k, c, strict, holds: true, worst_case: None };
    for cert in certs {
        let Some(w) = cert.worst_case else { continue };
        if !cert.holds {
            out.holds = false;
            out.worst_case = Some(w);
            return Ok(out);
        }
        if out.worst_case.as_ref().is_none_or(|b| w.margin > b.margin) {
            out.worst_case = Some(w);
        }
    }
    Ok(out)
}

/// Outcome of [`thm2_equivalence`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryAudit {
    pub trials: usize,
    pub exact: usize,
    pub matches_sparsest: usize,
}

impl RecoveryAudit {
    pub fn all_pass(&self) -> bool {
        self.exact == self.trials && self.matches_sparsest == self.trials
    }
}

/// Draws `trials` random `k`-sparse vectors (uniform support, values uniform
/// in `[-1, 1]` away from zero) and checks that basis pursuit recovers each
/// one and agrees with the brute-force sparsest solution. Refuses to run
/// unless the strict property of order `k` with `C = 1` is certified first.
pub fn thm2_equivalence(h: &[Vec<f64>], k: usize, trials: usize, seed: u64) -> Result<RecoveryAudit> {
    let n = check_shape(h)?;
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    if !check_nsp_k(h, k, 1.0, true)?.holds {
        return Err(Error::NotCertified(format!("strict nullspace property fails at k = {k}")));
    }
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = crate::rng::trial_rng(seed, t as u64);
            let e = random_sparse(n, k, &mut rng);
            let inst = cslpd::MeasurementInstance::new(h.to_vec(), e)?;
            let lpd = cslpd::cs_lpd(&inst)?;
            let (opt, _) = cslpd::cs_opt_bruteforce(&inst, k)?;
            let agree = cslpd::norm_inf(&lpd.e_hat.iter().zip(&opt).map(|(a, b)| a - b).collect::<Vec<_>>())
                <= cslpd::EXACT_TOL;
            Ok((lpd.exact, agree))
        })
        .collect::<Result<_>>()?;
    Ok(RecoveryAudit {
        trials,
        exact: outcomes.iter().filter(|o| o.0).count(),
        matches_sparsest: outcomes.iter().filter(|o| o.1).count(),
    })
}

/// A vector with exactly `k` nonzeros at uniformly random positions, each
/// uniform in `[-1, 1]` with magnitude at least `0.05`.
pub fn random_sparse<R: rand::Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let mut e = vec![0.0; n];
    for i in rand::seq::index::sample(rng, n, k) {
        let mag = rng.gen_range(0.05..=1.0);
        e[i] = if rng.gen_bool(0.5) { mag } else { -mag };
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pair_fails_at_boundary() {
        let h = vec![vec![1.0, 1.0]];
        let c = check_nsp_set(&h, &[0], 1.0, true).unwrap();
        assert!(!c.holds);
        let w = c.worst_case.unwrap();
        assert_eq!(w.margin, BigRational::zero());
        assert_eq!(w.nu.iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![q(1, 2), q(1, 2)]);
        assert!(check_nsp_set(&h, &[0], 1.0, false).unwrap().holds);
    }

    #[test]
    fn chain_margins() {
        let h = corpus::chain_3x4().to_real_rows();
        let c = check_nsp_set(&h, &[0], 1.0, true).unwrap();
        assert!(c.holds);
        assert_eq!(c.worst_case.unwrap().margin, q(-1, 2));
        assert!(check_nsp_k(&h, 1, 1.0, true).unwrap().holds);
        let two = check_nsp_k(&h, 2, 1.0, true).unwrap();
        assert!(!two.holds);
        // Every pair holds half the mass of (1,-1,1,-1); {0,1} comes first.
        assert_eq!(two.worst_case.unwrap().s, vec![0, 1]);
        assert!(check_nsp_k(&h, 0, 1.0, true).unwrap().holds);
    }

    #[test]
    fn recovery_audit() {
        let h = corpus::chain_3x4().to_real_rows();
        assert!(thm2_equivalence(&h, 1, 100, 7).unwrap().all_pass());
        assert!(thm2_equivalence(&h, 0, 5, 7).unwrap().all_pass());
        assert!(matches!(thm2_equivalence(&[vec![1.0, 1.0]], 1, 5, 7), Err(Error::NotCertified(_))));
    }

    #[test]
    fn identity_is_vacuous() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let c = check_nsp_k(&h, 2, 5.0, true).unwrap();
        assert!(c.holds && c.worst_case.is_none());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(20, 3), 1140);
    }
}
