//! Channel coding over a parity-check matrix: channels and LLRs, brute-force
//! ML decoding, LP decoding over the fundamental polytope, and the checks
//! that tie them together.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::lp::{self, Bound, LpProblem, Mode, Status};
use crate::polytope;

/// Magnitude standing in for an infinite LLR on unerased BEC symbols.
pub const BEC_LLR: f64 = 1e6;
/// Distance from `{0, 1}` below which a coordinate counts as integral.
pub const INTEGRAL_TOL: f64 = 1e-6;

/// Binary-input memoryless channel. AWGN uses BPSK `0 -> +1`, `1 -> -1` and a
/// linear `snr = Es/N0`, so the noise variance is `1 / (2 snr)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChannelModel {
    Bsc { epsilon: f64 },
    Awgn { snr: f64 },
    Bec { p: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ChannelModel::Bsc { epsilon } => epsilon > 0.0 && epsilon < 0.5,
            ChannelModel::Awgn { snr } => snr > 0.0 && snr.is_finite(),
            ChannelModel::Bec { p } => (0.0..1.0).contains(&p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("channel parameter out of range: {self:?}")))
        }
    }

    /// Sends `x` through the channel.
    pub fn transmit<R: rand::Rng + ?Sized>(&self, x: &Gf2Vector, rng: &mut R) -> Result<Received> {
        self.validate()?;
        let n = x.len();
        Ok(match *self {
            ChannelModel::Bsc { epsilon } => {
                Received::Bits((0..n).map(|i| (x.get(i) ^ rng.gen_bool(epsilon)) as u8).collect())
            }
            ChannelModel::Awgn { snr } => {
                let noise = Normal::new(0.0, (0.5 / snr).sqrt()).expect("positive variance");
                Received::Real((0..n).map(|i| if x.get(i) { -1.0 } else { 1.0 } + noise.sample(rng)).collect())
            }
            ChannelModel::Bec { p } => {
                Received::Erasures((0..n).map(|i| (!rng.gen_bool(p)).then_some(x.get(i) as u8)).collect())
            }
        })
    }
}

/// Channel output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Received {
    Bits(Vec<u8>),
    Real(Vec<f64>),
    /// `None` marks an erasure.
    Erasures(Vec<Option<u8>>),
}

impl Received {
    pub fn len(&self) -> usize {
        match self {
            Received::Bits(v) => v.len(),
            Received::Real(v) => v.len(),
            Received::Erasures(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Log-likelihood ratios `ln P(y|0) / P(y|1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlrVector {
    pub lambda: Vec<f64>,
}

impl LlrVector {
    pub fn new(lambda: Vec<f64>) -> Self {
        Self { lambda }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `<lambda, x>` for a binary `x`.
    pub fn cost(&self, x: &Gf2Vector) -> f64 {
        x.ones().map(|i| self.lambda[i]).sum()
    }

    /// `<lambda, x>` for a real `x`.
    pub fn cost_real(&self, x: &[f64]) -> f64 {
        self.lambda.iter().zip(x).map(|(l, v)| l * v).sum()
    }
}

pub fn llr(ch: &ChannelModel, y: &Received) -> Result<LlrVector> {
    llr_with_bec_magnitude(ch, y, BEC_LLR)
}

/// [`llr`] with a custom stand-in for the infinite BEC magnitude.
pub fn llr_with_bec_magnitude(ch: &ChannelModel, y: &Received, bec: f64) -> Result<LlrVector> {
    ch.validate()?;
    let bit = |i: usize, b: u8| match b {
        0 => Ok(1.0),
        1 => Ok(-1.0),
        _ => Err(Error::AlphabetMismatch(i)),
    };
    let lambda = match (ch, y) {
        (ChannelModel::Bsc { epsilon }, Received::Bits(bits)) => {
            let l = ((1.0 - epsilon) / epsilon).ln();
            bits.iter().enumerate().map(|(i, &b)| bit(i, b).map(|s| s * l)).collect::<Result<_>>()?
        }
        (ChannelModel::Awgn { snr }, Received::Real(v)) => {
            if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::AlphabetMismatch(i));
            }
            v.iter().map(|&x| 4.0 * snr * x).collect()
        }
        (ChannelModel::Bec { .. }, Received::Erasures(v)) => v
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                None => Ok(0.0),
                Some(b) => bit(i, *b).map(|s| s * bec),
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::AlphabetMismatch(0)),
    };
    Ok(LlrVector { lambda })
}

fn check_len(h: &Gf2Matrix, lambda: &LlrVector) -> Result<()> {
    if lambda.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: lambda.len() });
    }
    Ok(())
}

/// Costs closer than this are treated as tied.
const TIE_TOL: f64 = 1e-9;

fn cost_cmp(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TIE_TOL * (1.0 + a.abs().max(b.abs())) {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

/// Codeword minimizing `<lambda, x>`; ties go to the lexicographically
/// smallest codeword.
pub fn mld_bruteforce(h: &Gf2Matrix, lambda: &LlrVector, cap: u128) -> Result<Gf2Vector> {
    check_len(h, lambda)?;
    let words = h.enumerate_codewords(cap)?;
    let mut best: Option<(f64, Gf2Vector)> = None;
    for w in words {
        let c = lambda.cost(&w);
        let better = match &best {
            None => true,
            Some((bc, bw)) => match cost_cmp(c, *bc) {
                Ordering::Less => true,
                Ordering::Equal => w.cmp_lex(bw) == Ordering::Less,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((c, w));
        }
    }
    Ok(best.expect("the zero word is always a codeword").1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub point: Vec<f64>,
    pub is_integral: bool,
    pub cost: f64,
}

impl DecodeResult {
    /// The point rounded to a binary word, if it is integral.
    pub fn codeword(&self) -> Option<Gf2Vector> {
        self.is_integral.then(|| Gf2Vector::from_bits(&self.point.iter().map(|&v| (v > 0.5) as u8).collect::<Vec<_>>()))
    }
}

/// LP over the unit box intersected with all odd-subset cuts. The first
/// `h.cols()` variables are `x`; the rest are cut slacks.
fn polytope_lp(h: &Gf2Matrix, objective: &[f64]) -> Result<LpProblem> {
    let n = h.cols();
    let mut p = LpProblem::new(objective.to_vec());
    for i in 0..n {
        p.set_bounds(i, Bound::UNIT);
    }
    for cut in polytope::odd_subset_cuts(h)? {
        p.add_le(cut.coeffs.iter().map(|&c| c as f64).collect(), cut.rhs as f64);
    }
    Ok(p)
}

pub fn cclpd_decode(h: &Gf2Matrix, lambda: &LlrVector) -> Result<DecodeResult> {
    cclpd_decode_mode(h, lambda, Mode::Float)
}

/// LP decoding in the chosen arithmetic; returns the simplex vertex found.
pub fn cclpd_decode_mode(h: &Gf2Matrix, lambda: &LlrVector, mode: Mode) -> Result<DecodeResult> {
    check_len(h, lambda)?;
    let n = h.cols();
    let sol = lp::solve(&polytope_lp(h, &lambda.lambda)?, mode)?;
    if sol.status != Status::Optimal {
        return Err(Error::Infeasible);
    }
    let point: Vec<f64> = sol.x[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let is_integral = point.iter().all(|&v| v.min(1.0 - v) <= INTEGRAL_TOL);
    let cost = lambda.cost_real(&point);
    Ok(DecodeResult { point, is_integral, cost })
}

/// Whether the binary word `x` is the unique LP optimum for `lambda`.
///
/// Decided by a second LP that maximizes the l1 distance to `x` over the
/// optimal face; this ignores which vertex the simplex happens to return.
pub fn lp_unique_optimum(h: &Gf2Matrix, lambda: &LlrVector, x: &Gf2Vector) -> Result<bool> {
    let first = cclpd_decode(h, lambda)?;
    let cx = lambda.cost(x);
    let scale = 1.0 + lambda.lambda.iter().map(|l| l.abs()).sum::<f64>();
    if first.cost < cx - 1e-9 * scale {
        return Ok(false);
    }
    let n = h.cols();
    // maximize sum_{x_i=0} x'_i - sum_{x_i=1} x'_i  (constant dropped)
    let obj: Vec<f64> = (0..n).map(|i| if x.get(i) { 1.0 } else { -1.0 }).collect();
    let mut p = polytope_lp(h, &obj)?;
    p.add_le(lambda.lambda.clone(), cx + 1e-9 * scale);
    let sol = lp::solve(&p, Mode::Float)?;
    if sol.status != Status::Optimal {
        return Err(Error::Infeasible);
    }
    let dist: f64 = (0..n).map(|i| if x.get(i) { 1.0 - sol.x[i] } else { sol.x[i] }).sum();
    Ok(dist <= 1e-6)
}

pub use polytope::cone_membership;

/// True iff `||omega_S||_1 < ||omega_S̄||_1` at every nonzero vertex of the
/// fundamental polytope, decided exactly.
pub fn lemma2_certificate(h: &Gf2Matrix, s: &[usize], cap: usize) -> Result<bool> {
    let n = h.cols();
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad + 1 });
    }
    let mut in_s = vec![false; n];
    for &i in s {
        in_s[i] = true;
    }
    for v in polytope::polytope_vertices(h, cap)? {
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let (mut inside, mut outside) = (BigRational::zero(), BigRational::zero());
        for (i, c) in v.iter().enumerate() {
            if in_s[i] {
                inside += c.abs();
            } else {
                outside += c.abs();
            }
        }
        if inside >= outside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ybar_i = 1` iff `lambda_i < 0` (zero goes to 0); `s = H ybar mod 2`.
pub fn hard_decision_and_syndrome(lambda: &LlrVector, h: &Gf2Matrix) -> Result<(Gf2Vector, Gf2Vector)> {
    check_len(h, lambda)?;
    let bits: Vec<u8> = lambda.lambda.iter().map(|&l| (l < 0.0) as u8).collect();
    let ybar = Gf2Vector::from_bits(&bits);
    let s = h.syndrome(&ybar)?;
    Ok((ybar, s))
}

fn argmin_set<I: Iterator<Item = (f64, Gf2Vector)>>(items: I) -> Vec<Gf2Vector> {
    let mut best = f64::INFINITY;
    let mut set: Vec<Gf2Vector> = Vec::new();
    for (c, w) in items {
        match cost_cmp(c, best) {
            Ordering::Less => {
                best = c;
                set = vec![w];
            }
            Ordering::Equal => set.push(w),
            Ordering::Greater => {}
        }
    }
    set.sort_by(|a, b| a.cmp_lex(b));
    set
}

/// Compares the ML codeword set with the minimum-weight error set of the
/// syndrome formulation (`e' = ybar + x'`, weight `sum |lambda_i|` over the
/// support of `e'`). The error side scans all `2^n` words when that fits in
/// `cap`, otherwise the coset `ybar + C`.
pub fn mld3_equivalence_check(h: &Gf2Matrix, lambda: &LlrVector, cap: u128) -> Result<bool> {
    let (ybar, s) = hard_decision_and_syndrome(lambda, h)?;
    let codewords = h.enumerate_codewords(cap)?;
    let ml = argmin_set(codewords.iter().map(|w| (lambda.cost(w), w.clone())));
    let weight = |e: &Gf2Vector| e.ones().map(|i| lambda.lambda[i].abs()).sum::<f64>();
    let n = h.cols();
    let errors = if n < 127 && (1u128 << n) <= cap {
        let mut all = Vec::new();
        for m in 0u128..(1u128 << n) {
            let e = Gf2Vector::from_bits(&(0..n).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>());
            if h.syndrome(&e)? == s {
                all.push((weight(&e), e));
            }
        }
        argmin_set(all.into_iter())
    } else {
        argmin_set(codewords.iter().map(|w| {
            let e = ybar.xor(w);
            (weight(&e), e)
        }))
    };
    let mut mapped: Vec<Gf2Vector> = ml.iter().map(|x| ybar.xor(x)).collect();
    mapped.sort_by(|a, b| a.cmp_lex(b));
    Ok(mapped == errors)
}

/// Back-substitution on the erasure channel: repeatedly resolves a check
/// with exactly one erased variable. Unresolved positions stay `None`.
pub fn peeling_decode(h: &Gf2Matrix, y: &[Option<u8>]) -> Result<Vec<Option<u8>>> {
    if y.len() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.cols(), got: y.len() });
    }
    let mut x = y.to_vec();
    let supports: Vec<Vec<usize>> = (0..h.rows()).map(|j| h.row_support(j)).collect();
    loop {
        let mut progress = false;
        for sup in &supports {
            let unknown: Vec<usize> = sup.iter().copied().filter(|&i| x[i].is_none()).collect();
            if unknown.len() == 1 {
                let parity = sup.iter().filter_map(|&i| x[i]).fold(0u8, |a, b| a ^ b);
                x[unknown[0]] = Some(parity & 1);
                progress = true;
            }
        }
        if !progress {
            return Ok(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use crate::{corpus, rng};

    #[test]
    fn bsc_llr_values() {
        let ch = ChannelModel::Bsc { epsilon: 0.1 };
        let l = llr(&ch, &Received::Bits(vec![0, 1])).unwrap();
        assert!((l.lambda[0] - 9f64.ln()).abs() < 1e-12);
        assert!((l.lambda[1] + 9f64.ln()).abs() < 1e-12);
        let near_half = llr(&ChannelModel::Bsc { epsilon: 0.4999999 }, &Received::Bits(vec![0])).unwrap();
        assert!(near_half.lambda[0].abs() < 1e-5);
        assert!(matches!(llr(&ch, &Received::Bits(vec![2])), Err(Error::AlphabetMismatch(0))));
        assert!(llr(&ch, &Received::Real(vec![0.3])).is_err());
    }

    #[test]
    fn bec_llr_values() {
        let l = llr(&ChannelModel::Bec { p: 0.3 }, &Received::Erasures(vec![None, Some(0), Some(1)])).unwrap();
        assert_eq!(l.lambda, vec![0.0, BEC_LLR, -BEC_LLR]);
    }

    #[test]
    fn mld_examples() {
        let h = corpus::hamming_7_4();
        let positive = LlrVector::new(vec![1.0; 7]);
        assert!(mld_bruteforce(&h, &positive, 16).unwrap().is_zero());
        let zero = LlrVector::new(vec![0.0; 7]);
        assert!(mld_bruteforce(&h, &zero, 16).unwrap().is_zero());
        let words = h.enumerate_codewords(16).unwrap();
        let x = words.iter().find(|w| w.weight() == 4).unwrap().clone();
        let mut y = x.to_bits();
        y[2] ^= 1;
        let l = llr(&ChannelModel::Bsc { epsilon: 0.1 }, &Received::Bits(y)).unwrap();
        assert_eq!(mld_bruteforce(&h, &l, 16).unwrap(), x);
        assert!(mld_bruteforce(&h, &positive, 8).is_err());
    }

    #[test]
    fn lp_decode_all_positive() {
        let h = corpus::hamming_7_4();
        let r = cclpd_decode(&h, &LlrVector::new(vec![0.5; 7])).unwrap();
        assert!(r.is_integral);
        assert!(r.cost.abs() < 1e-12);
        assert!(r.codeword().unwrap().is_zero());
    }

    #[test]
    fn single_check_lp_matches_ml() {
        // One check: the polytope is the hull of the even words, so LP = ML.
        let h = corpus::single_check(3);
        let l = LlrVector::new(vec![-1.0, 2.0, 2.0]);
        let lp = cclpd_decode_mode(&h, &l, Mode::Rational).unwrap();
        let ml = mld_bruteforce(&h, &l, 8).unwrap();
        assert!(lp.cost <= l.cost(&ml) + 1e-9);
        assert!((lp.cost - l.cost(&ml)).abs() < 1e-9);
    }

    #[test]
    fn lemma2_examples() {
        let chain = corpus::chain_3x4();
        assert!(lemma2_certificate(&chain, &[], 100).unwrap());
        assert!(lemma2_certificate(&chain, &[0], 100).unwrap());
        let pair = corpus::single_check(2);
        assert!(!lemma2_certificate(&pair, &[0], 100).unwrap());
    }

    #[test]
    fn hard_decision_rules() {
        let h = corpus::hamming_7_4();
        let (y, s) = hard_decision_and_syndrome(&LlrVector::new(vec![-1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0]), &h).unwrap();
        assert_eq!(y.to_bits(), vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(s, h.column(0));
    }

    #[test]
    fn mld3_on_small_codes() {
        let pair = corpus::single_check(2);
        for y in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
            let l = llr(&ChannelModel::Bsc { epsilon: 0.2 }, &Received::Bits(y.to_vec())).unwrap();
            assert!(mld3_equivalence_check(&pair, &l, 1 << 20).unwrap());
        }
        let h = corpus::hamming_7_4();
        let mut r = rng::rng(4);
        for _ in 0..20 {
            let l = LlrVector::new((0..7).map(|_| r.gen_range(-2.0..2.0)).collect());
            assert!(mld3_equivalence_check(&h, &l, 1 << 20).unwrap());
        }
    }

    #[test]
    fn peeling_resolves_single_erasures() {
        let h = corpus::hamming_7_4();
        let mut y: Vec<Option<u8>> = vec![Some(0); 7];
        y[6] = None;
        assert_eq!(peeling_decode(&h, &y).unwrap(), vec![Some(0); 7]);
        let all: Vec<Option<u8>> = vec![None; 7];
        assert_eq!(peeling_decode(&h, &all).unwrap(), all);
    }

    #[test]
    fn unique_optimum_detection() {
        let h = corpus::single_check(2);
        let zero = Gf2Vector::zeros(2);
        assert!(lp_unique_optimum(&h, &LlrVector::new(vec![1.0, 1.0]), &zero).unwrap());
        assert!(!lp_unique_optimum(&h, &LlrVector::new(vec![1.0, -1.0]), &zero).unwrap());
    }
}
