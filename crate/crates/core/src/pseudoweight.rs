//! Pseudo-weights of nonnegative vectors and minimum pseudo-weights of a
//! parity-check matrix.
//!
//! All functionals are evaluated over any [`Field`], so the same code gives
//! float reports and exact rational reports.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::lp::{self, ratio_to_f64, Bound, Field, LpProblem, Status};
use crate::polytope;

/// Pseudo-weights of one vector over the field `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<T> {
    pub awgnc: T,
    pub bsc: T,
    pub bsc_prime: usize,
    pub bec: usize,
    pub maxfrac: T,
}

/// Float pseudo-weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub awgnc: f64,
    pub bsc: f64,
    pub bsc_prime: f64,
    pub bec: f64,
    pub maxfrac: f64,
}

impl WeightReport {
    pub fn get(&self, kind: WeightKind) -> f64 {
        match kind {
            WeightKind::Awgnc => self.awgnc,
            WeightKind::Bsc => self.bsc,
            WeightKind::BscPrime => self.bsc_prime,
            WeightKind::Bec => self.bec,
            WeightKind::Maxfrac => self.maxfrac,
        }
    }
}

impl<T: Field> Weights<T> {
    pub fn to_report(&self) -> WeightReport {
        WeightReport {
            awgnc: self.awgnc.to_f64(),
            bsc: self.bsc.to_f64(),
            bsc_prime: self.bsc_prime as f64,
            bec: self.bec as f64,
            maxfrac: self.maxfrac.to_f64(),
        }
    }

    pub fn get(&self, kind: WeightKind) -> T {
        match kind {
            WeightKind::Awgnc => self.awgnc.clone(),
            WeightKind::Bsc => self.bsc.clone(),
            WeightKind::BscPrime => T::from_f64(self.bsc_prime as f64),
            WeightKind::Bec => T::from_f64(self.bec as f64),
            WeightKind::Maxfrac => self.maxfrac.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Awgnc,
    Bsc,
    BscPrime,
    Bec,
    Maxfrac,
}

impl WeightKind {
    pub const ALL: [WeightKind; 5] =
        [WeightKind::Awgnc, WeightKind::Bsc, WeightKind::BscPrime, WeightKind::Bec, WeightKind::Maxfrac];
}

/// `a == b` relative to `scale`: exact for rationals, within the pivot
/// tolerance for floats.
fn approx_eq<T: Field>(a: &T, b: &T, scale: &T) -> bool {
    ((a.clone() - b.clone()) / scale.clone()).is_negligible()
}

/// All pseudo-weights of `omega >= 0`.
pub fn weights_in<T: Field>(omega: &[T]) -> Result<Weights<T>> {
    if let Some(i) = omega.iter().position(|w| w.is_neg() || *w < T::zero()) {
        return Err(Error::NegativeEntry(i));
    }
    let mut sorted: Vec<T> = omega.iter().filter(|w| !w.is_zero()).cloned().collect();
    if sorted.is_empty() {
        let z = T::zero();
        return Ok(Weights { awgnc: z.clone(), bsc: z.clone(), bsc_prime: 0, bec: 0, maxfrac: z });
    }
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let two = T::from_f64(2.0);
    let l1 = sorted.iter().fold(T::zero(), |acc, w| acc + w.clone());
    let l2sq = sorted.iter().fold(T::zero(), |acc, w| acc + w.clone() * w.clone());
    let awgnc = l1.clone() * l1.clone() / l2sq;
    let maxfrac = l1.clone() / sorted[0].clone();

    // Piecewise-linear cumulative F with F(i) = sum of the i largest entries.
    let half = l1.clone() / two.clone();
    let mut prev = T::zero();
    let mut bsc = T::zero();
    for (i, w) in sorted.iter().enumerate() {
        let next = prev.clone() + w.clone();
        if next >= half || approx_eq(&next, &half, &l1) {
            bsc = two.clone() * (T::from_f64(i as f64) + (half.clone() - prev) / w.clone());
            break;
        }
        prev = next;
    }

    // Smallest e with head mass >= tail mass.
    let mut head = T::zero();
    let mut bsc_prime = 0;
    for (e, w) in sorted.iter().enumerate() {
        head = head + w.clone();
        let tail = l1.clone() - head.clone();
        if approx_eq(&head, &tail, &l1) {
            bsc_prime = 2 * (e + 1);
            break;
        }
        if head > tail {
            bsc_prime = 2 * (e + 1) - 1;
            break;
        }
    }

    Ok(Weights { awgnc, bsc, bsc_prime, bec: sorted.len(), maxfrac })
}

pub fn weights(omega: &[f64]) -> Result<WeightReport> {
    weights_in(omega).map(|w| w.to_report())
}

/// The two-sided relation between the BSC and BSC' pseudo-weights.
pub fn bsc_prime_relation_check(omega: &[f64]) -> Result<bool> {
    let w = weights_in(omega)?;
    if w.bec == 0 {
        return Ok(true);
    }
    let p = w.bsc_prime as f64;
    Ok(if w.bsc_prime % 2 == 0 {
        (w.bsc - p).abs() <= 1e-9 * p
    } else {
        p - 1.0 < w.bsc && w.bsc < p + 1.0
    })
}

/// If `|S|` is below half the BSC or BSC' weight, reports whether
/// `||omega_S||_1 < ||omega_S̄||_1`; otherwise vacuously true.
pub fn lemma4_check(h: &Gf2Matrix, omega: &[f64], s: &[usize]) -> Result<bool> {
    let margin = polytope::cone_margin(h, omega)?;
    if margin.margin < -lp::TOL_FEAS {
        let (check, var) = margin.worst.unwrap_or((usize::MAX, usize::MAX));
        return Err(Error::ConeViolation { check, var });
    }
    let w = weights(omega)?;
    if w.bec == 0.0 {
        return Err(Error::InvalidParameter("pseudo-codeword must be nonzero".into()));
    }
    let k = s.len() as f64;
    if !(k < w.bsc / 2.0 || k < w.bsc_prime / 2.0) {
        return Ok(true);
    }
    let inside: f64 = s.iter().map(|&i| omega[i]).sum();
    let total: f64 = omega.iter().sum();
    Ok(inside < total - inside)
}

/// A nonnegative vector certified to lie in the fundamental cone of the
/// matrix with fingerprint `matrix_ref`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoCodeword {
    pub omega: Vec<f64>,
    pub matrix_ref: u64,
    /// Smallest slack over the cone inequalities.
    pub margin: f64,
}

impl PseudoCodeword {
    pub fn new(h: &Gf2Matrix, omega: Vec<f64>) -> Result<Self> {
        let m = polytope::cone_margin(h, &omega)?;
        if m.margin < -lp::TOL_FEAS {
            return Err(match m.worst {
                Some((check, var)) => Error::ConeViolation { check, var },
                None => Error::NegativeEntry(omega.iter().position(|&w| w < 0.0).unwrap_or(0)),
            });
        }
        Ok(Self { omega, matrix_ref: h.fingerprint(), margin: m.margin })
    }

    pub fn weights(&self) -> WeightReport {
        weights(&self.omega).expect("cone points are nonnegative")
    }
}

/// Exact minimum max-fractional weight over the fundamental cone, by one LP
/// per coordinate: minimize `sum omega` over the cone with `omega_i = 1` and
/// `omega <= 1`. `None` when the cone is `{0}`.
pub fn min_maxfrac_weight_exact(h: &Gf2Matrix) -> Result<Option<BigRational>> {
    let n = h.cols();
    let supports: Vec<Vec<usize>> = (0..h.rows()).map(|j| h.row_support(j)).collect();
    let mut best: Option<BigRational> = None;
    for i in 0..n {
        let mut p = LpProblem::new(vec![1.0; n]);
        for v in 0..n {
            p.set_bounds(v, Bound::UNIT);
        }
        p.set_bounds(i, Bound { lower: Some(1.0), upper: Some(1.0) });
        for sup in &supports {
            for &a in sup {
                // omega_a - sum_{b in I_j \ a} omega_b <= 0
                let mut row = vec![0.0; n];
                for &b in sup {
                    row[b] = if b == a { 1.0 } else { -1.0 };
                }
                p.add_le(row, 0.0);
            }
        }
        let sol = lp::solve_exact(&p)?;
        if sol.status == Status::Optimal && best.as_ref().is_none_or(|b| sol.objective_value < *b) {
            best = Some(sol.objective_value);
        }
    }
    Ok(best)
}

/// Float view of [`min_maxfrac_weight_exact`]; `f64::INFINITY` for a trivial cone.
pub fn min_maxfrac_weight(h: &Gf2Matrix) -> Result<f64> {
    Ok(min_maxfrac_weight_exact(h)?.map_or(f64::INFINITY, |v| ratio_to_f64(&v)))
}

/// Exact minimum of the chosen weight over the nonzero vertices of the
/// fundamental polytope. `None` when the only vertex is the origin.
pub fn min_pseudoweight_enumerated_exact(h: &Gf2Matrix, kind: WeightKind, cap: usize) -> Result<Option<BigRational>> {
    let mut best: Option<BigRational> = None;
    for v in polytope::polytope_vertices(h, cap)? {
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let w = weights_in(&v)?.get(kind);
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    Ok(best)
}

/// Float view of [`min_pseudoweight_enumerated_exact`]; infinite when the
/// polytope has no nonzero vertex.
pub fn min_pseudoweight_enumerated(h: &Gf2Matrix, kind: WeightKind, cap: usize) -> Result<f64> {
    Ok(min_pseudoweight_enumerated_exact(h, kind, cap)?.map_or(f64::INFINITY, |v| ratio_to_f64(&v)))
}
