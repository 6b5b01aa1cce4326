//! Graph covers: lifting and projecting vectors, seeded `M`-covers of a
//! Tanner graph, and the sampled checks that compare lifted problems with
//! their base versions.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::cclpd::{self, LlrVector};
use crate::cslpd;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::linalg;
use crate::lp::{self, ratio_to_f64};
use crate::rng;
use crate::tanner::TannerGraph;

/// Slack used by every sampled inequality in this module.
pub const COVER_TOL: f64 = 1e-7;

/// `a^{↑M}`: coordinate `(i, m)` sits at `i*M + m` and equals `a_i`.
pub fn lift_vector(a: &[f64], m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    Ok(a.iter().flat_map(|&v| std::iter::repeat_n(v, m)).collect())
}

/// `phi_M`: the mean of each block of `M` consecutive entries.
pub fn project(a: &[f64], m: usize) -> Result<Vec<f64>> {
    if m == 0 || a.len() % m != 0 {
        return Err(Error::InvalidParameter(format!("length {} is not a multiple of M = {m}", a.len())));
    }
    Ok(a.chunks(m).map(|c| c.iter().sum::<f64>() / m as f64).collect())
}

/// Per-edge permutations of an `M`-cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub m: usize,
    pub seed: u64,
    /// `(check, variable, permutation)` for every base edge, row-major.
    pub perms: Vec<(usize, usize, Vec<usize>)>,
}

/// The realized `Mm x Mn` zero-one matrix of a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedMatrix {
    pub base_rows: usize,
    pub base_cols: usize,
    pub m: usize,
    pub matrix: Gf2Matrix,
}

/// Uniform seeded permutations on every edge; block `(j, i)` maps lifted
/// row `j*M + a` to lifted column `i*M + pi(a)`.
pub fn make_cover(g: &TannerGraph, m: usize, seed: u64) -> Result<(CoverSpec, LiftedMatrix)> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let mut r = rng::rng(seed);
    let perms: Vec<(usize, usize, Vec<usize>)> = g
        .edges()
        .map(|(j, i)| {
            let mut p: Vec<usize> = (0..m).collect();
            if m > 1 {
                p.shuffle(&mut r);
            }
            (j, i, p)
        })
        .collect();
    let spec = CoverSpec { m, seed, perms };
    let lifted = realize(g.n_chk(), g.n_var(), &spec)?;
    Ok((spec, lifted))
}

fn realize(rows: usize, cols: usize, spec: &CoverSpec) -> Result<LiftedMatrix> {
    let m = spec.m;
    let mut matrix = Gf2Matrix::zeros(rows * m, cols * m)?;
    for (j, i, p) in &spec.perms {
        for (a, &b) in p.iter().enumerate() {
            matrix.set(j * m + a, i * m + b, true);
        }
    }
    Ok(LiftedMatrix { base_rows: rows, base_cols: cols, m, matrix })
}

/// The signed lift of a real matrix with entries in `{0, ±1}` along the
/// cover `spec` of its support.
pub fn lift_signed(h: &[Vec<f64>], spec: &CoverSpec) -> Vec<Vec<f64>> {
    let m = spec.m;
    let cols = h.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; cols * m]; h.len() * m];
    for (j, i, p) in &spec.perms {
        for (a, &b) in p.iter().enumerate() {
            out[j * m + a][i * m + b] = h[*j][*i];
        }
    }
    out
}

fn sign_support(h: &[Vec<f64>]) -> Result<Gf2Matrix> {
    let mut bits = Vec::with_capacity(h.len());
    for (r, row) in h.iter().enumerate() {
        let mut b = Vec::with_capacity(row.len());
        for (c, &v) in row.iter().enumerate() {
            if v != 0.0 && v != 1.0 && v != -1.0 {
                return Err(Error::MagnitudeCondition { row: r, col: c });
            }
            b.push((v != 0.0) as u8);
        }
        bits.push(b);
    }
    Gf2Matrix::from_rows(&bits)
}

fn cover_params(covers: usize, m_set: &[usize], seed: u64) -> Result<Vec<(usize, u64)>> {
    if m_set.is_empty() || m_set.contains(&0) {
        return Err(Error::InvalidParameter("M set must be nonempty and positive".into()));
    }
    Ok((0..covers).map(|c| (m_set[c % m_set.len()], rng::trial_seed(seed, c as u64))).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverCheck {
    pub covers: usize,
    pub base_value: f64,
    /// Smallest `(1/M)` lifted value seen.
    pub min_lifted: f64,
    pub violations: usize,
}

impl CoverCheck {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// For sampled covers: the lifted basis pursuit value `(1/M) ||e~||_1`
/// with `H~ e~ = s^{↑M}` equals the base value (never smaller, and the lift
/// of the base optimum attains it), and `phi_M` of the lifted optimum is
/// base-feasible with l1 cost between the base value and the lifted value.
pub fn thm15_check(h: &Gf2Matrix, s: &[f64], covers: usize, m_set: &[usize], seed: u64) -> Result<CoverCheck> {
    let hr = h.to_real_rows();
    let (base_opt, base_value) = lp::minimize_l1(&hr, s)?;
    let g = TannerGraph::from_matrix(h);
    let mut out = CoverCheck { covers, base_value, min_lifted: f64::INFINITY, violations: 0 };
    for (m, cseed) in cover_params(covers, m_set, seed)? {
        let (_, lifted) = make_cover(&g, m, cseed)?;
        let ht = lifted.matrix.to_real_rows();
        let st = lift_vector(s, m)?;
        let (et, v) = lp::minimize_l1(&ht, &st)?;
        let value = v / m as f64;
        out.min_lifted = out.min_lifted.min(value);
        let base_lift = lift_vector(&base_opt, m)?;
        let lift_feasible = cslpd::norm_inf(&sub(&cslpd::mul(&ht, &base_lift), &st)) <= 1e-8 * (1.0 + cslpd::norm_inf(s));
        let p = project(&et, m)?;
        let p_feasible = cslpd::norm_inf(&sub(&cslpd::mul(&hr, &p), s)) <= 1e-8 * (1.0 + cslpd::norm_inf(s));
        let p_cost = cslpd::norm1(&p);
        let ok = value >= base_value - COVER_TOL
            && value <= base_value + COVER_TOL
            && lift_feasible
            && p_feasible
            && p_cost >= base_value - COVER_TOL
            && p_cost <= value + COVER_TOL;
        if !ok {
            out.violations += 1;
        }
    }
    Ok(out)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphCoverBounds {
    pub ml_cost: f64,
    pub lp_cost: f64,
    /// Per cover: `M` and `min (1/M) <lambda^{↑M}, x~>` over lifted codewords.
    pub cover_costs: Vec<(usize, f64)>,
}

impl GraphCoverBounds {
    pub fn best(&self) -> f64 {
        self.cover_costs.iter().map(|c| c.1).fold(f64::INFINITY, f64::min)
    }

    /// Every cover value is at least the LP cost, and the best one is at
    /// most the ML cost.
    pub fn holds(&self) -> bool {
        self.cover_costs.iter().all(|&(_, c)| c >= self.lp_cost - COVER_TOL) && self.best() <= self.ml_cost + COVER_TOL
    }
}

/// Sampled graph-cover decoding compared with ML and LP decoding. Sampling
/// can only bound the minimum over all covers, never certify it.
pub fn cclpd_graphcover_check(
    h: &Gf2Matrix,
    lambda: &LlrVector,
    covers: usize,
    m_set: &[usize],
    seed: u64,
    cap: u128,
) -> Result<GraphCoverBounds> {
    let ml = cclpd::mld_bruteforce(h, lambda, cap)?;
    let ml_cost = lambda.cost(&ml);
    let lp_cost = cclpd::cclpd_decode_mode(h, lambda, lp::Mode::Rational)?.cost;
    let g = TannerGraph::from_matrix(h);
    let mut cover_costs = Vec::with_capacity(covers);
    for (m, cseed) in cover_params(covers, m_set, seed)? {
        let (_, lifted) = make_cover(&g, m, cseed)?;
        let lam = LlrVector::new(lift_vector(&lambda.lambda, m)?);
        let best = lifted
            .matrix
            .enumerate_codewords(cap)?
            .iter()
            .map(|w| lam.cost(w) / m as f64)
            .fold(f64::INFINITY, f64::min);
        cover_costs.push((m, best));
    }
    Ok(GraphCoverBounds { ml_cost, lp_cost, cover_costs })
}

/// `||a||_0 * ||a||_inf`.
pub fn zero_infinity(a: &[f64]) -> f64 {
    let support = a.iter().filter(|v| **v != 0.0).count();
    support as f64 * cslpd::norm_inf(a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsrelCheck {
    pub samples: usize,
    pub base_value: f64,
    /// Smallest `(1/M) |e~|_{0,inf} - base_value` seen.
    pub min_slack: f64,
    pub violations: usize,
}

impl CsrelCheck {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples lifted pairs `(e~, s~)` with `phi_M(s~) = s` and checks
/// `(1/M) |e~|_{0,inf} >= ` base basis-pursuit value.
///
/// Each `e~` is the lift of a base-feasible point (the base optimum plus a
/// random base-nullspace vector) plus zero-mean noise inside each block and
/// a random vector of the cover's nullspace; `s~ = H~ e~`. Noise is applied
/// to a random subset of blocks so that sparse and equal-magnitude cases are
/// hit as well.
pub fn csrel_lower_bound_check(
    h: &[Vec<f64>],
    s: &[f64],
    samples: usize,
    m_set: &[usize],
    seed: u64,
) -> Result<CsrelCheck> {
    let support = sign_support(h)?;
    let (base_opt, base_value) = lp::minimize_l1(h, s)?;
    let n = base_opt.len();
    let base_null: Vec<Vec<f64>> =
        linalg::nullspace(&linalg::to_rational(h), n).iter().map(|v| v.iter().map(ratio_to_f64).collect()).collect();
    let g = TannerGraph::from_matrix(&support);
    let mut out = CsrelCheck { samples, base_value, min_slack: f64::INFINITY, violations: 0 };
    for (t, (m, cseed)) in cover_params(samples, m_set, seed)?.into_iter().enumerate() {
        let mut r = rng::trial_rng(seed ^ 0x5eed, t as u64);
        let (spec, _) = make_cover(&g, m, cseed)?;
        let ht = lift_signed(h, &spec);
        let mut x0 = base_opt.clone();
        if t % 4 != 0 {
            for v in &base_null {
                let c: f64 = r.gen_range(-1.0..1.0);
                for (x, b) in x0.iter_mut().zip(v) {
                    *x += c * b;
                }
            }
        }
        let mut et = lift_vector(&x0, m)?;
        if t % 2 == 1 {
            for block in et.chunks_mut(m) {
                if m > 1 && r.gen_bool(0.5) {
                    let d: Vec<f64> = (0..m).map(|_| r.gen_range(-1.0..1.0)).collect();
                    let mean = d.iter().sum::<f64>() / m as f64;
                    for (x, v) in block.iter_mut().zip(&d) {
                        *x += v - mean;
                    }
                }
            }
        }
        if t % 3 == 2 {
            let cover_null = linalg::nullspace(&linalg::to_rational(&ht), n * m);
            if let Some(v) = cover_null.get(r.gen_range(0..cover_null.len().max(1))) {
                let c: f64 = r.gen_range(-1.0..1.0);
                for (x, b) in et.iter_mut().zip(v) {
                    *x += c * ratio_to_f64(b);
                }
            }
        }
        let st = cslpd::mul(&ht, &et);
        let ps = project(&st, m)?;
        if cslpd::norm_inf(&sub(&ps, s)) > 1e-8 * (1.0 + cslpd::norm_inf(s) + cslpd::norm_inf(&et)) {
            return Err(Error::InvalidParameter("sampled lifted syndrome does not project to s".into()));
        }
        let slack = zero_infinity(&et) / m as f64 - base_value;
        out.min_slack = out.min_slack.min(slack);
        if slack < -COVER_TOL {
            out.violations += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tanner::girth;

    #[test]
    fn lift_and_project() {
        let a = [1.0, -2.0, 0.5];
        assert_eq!(project(&lift_vector(&a, 3).unwrap(), 3).unwrap(), a.to_vec());
        assert_eq!(project(&[1.0, 3.0, 0.0, 0.0], 2).unwrap(), vec![2.0, 0.0]);
        assert!(project(&[1.0, 2.0, 3.0], 2).is_err());
        assert_eq!(lift_vector(&[0.0, 0.0], 4).unwrap(), vec![0.0; 8]);
    }

    #[test]
    fn cover_shapes() {
        let h = corpus::hamming_7_4();
        let g = TannerGraph::from_matrix(&h);
        assert_eq!(make_cover(&g, 1, 5).unwrap().1.matrix, h);
        let (_, l) = make_cover(&g, 3, 5).unwrap();
        assert_eq!((l.matrix.rows(), l.matrix.cols()), (9, 21));
        for c in 0..21 {
            assert_eq!(l.matrix.col_weight(c), h.col_weight(c / 3));
        }
        for r in 0..9 {
            assert_eq!(l.matrix.row_weight(r), h.row_weight(r / 3));
        }
        assert!(girth(&TannerGraph::from_matrix(&l.matrix)) >= girth(&g));
    }

    #[test]
    fn thm15_on_chain() {
        let h = corpus::chain_3x4();
        let s = cslpd::mul(&h.to_real_rows(), &[0.0, 1.0, 0.0, 0.0]);
        let r = thm15_check(&h, &s, 10, &[1, 2, 3], 3).unwrap();
        assert!(r.holds(), "{r:?}");
        let z = thm15_check(&h, &[0.0; 3], 3, &[2], 3).unwrap();
        assert!(z.holds() && z.base_value == 0.0);
    }

    #[test]
    fn graph_cover_sandwich() {
        let h = corpus::single_check(3);
        let lam = LlrVector::new(vec![-1.0, 2.0, 2.0]);
        let b = cclpd_graphcover_check(&h, &lam, 6, &[1, 2], 1, 1 << 16).unwrap();
        assert!(b.holds(), "{b:?}");
        let pos = cclpd_graphcover_check(&h, &LlrVector::new(vec![1.0; 3]), 3, &[2], 1, 1 << 16).unwrap();
        assert_eq!((pos.ml_cost, pos.best()), (0.0, 0.0));
    }

    #[test]
    fn zero_infinity_examples() {
        assert_eq!(zero_infinity(&[2.0, 1.0, 1.0]), 6.0);
        assert_eq!(zero_infinity(&[1.0, 1.0, 0.0]), 2.0);
        assert_eq!(zero_infinity(&[0.0; 3]), 0.0);
        assert_eq!(zero_infinity(&[-4.0, 2.0]), 2.0 * zero_infinity(&[-2.0, 1.0]));
    }

    #[test]
    fn csrel_samples() {
        let h = corpus::chain_3x4().to_real_rows();
        let s = cslpd::mul(&h, &[0.0, 1.0, 0.0, -1.0]);
        let r = csrel_lower_bound_check(&h, &s, 30, &[2, 3], 8).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(csrel_lower_bound_check(&[vec![2.0, 1.0]], &[1.0], 2, &[2], 0).is_err());
    }
}
