//! Dense two-phase simplex with Bland's rule as the anti-cycling safeguard.
//!
//! The float mode runs a tableau over `f64` with pivot and feasibility
//! tolerances; the exact mode runs a fraction-free integer tableau. Problems are stated with equality
//! rows and per-variable bounds; [`LpProblem::add_le`] appends a slack column
//! for inequality rows.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod exact;

/// Pivot tolerance of the float mode.
pub const TOL_PIV: f64 = 1e-9;
/// Feasibility tolerance of the float mode.
pub const TOL_FEAS: f64 = 1e-8;

/// Consecutive degenerate pivots after which pricing switches to Bland's rule.
const BLAND_AFTER: usize = 500;
/// Float entries below this after elimination are set to zero.
const ZERO_FLUSH: f64 = 1e-11;

/// Scalar field the simplex runs over.
pub trait Field:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Strictly positive beyond the pivot tolerance.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond the pivot tolerance.
    fn is_neg(&self) -> bool;
    /// Ratio comparison slack used to detect ties in the leaving-row test.
    fn ratio_eps() -> Self;
    /// Tolerance used to declare phase one infeasible.
    fn feas_eps() -> Self;
    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    /// Flushes rounding residue to zero after elimination.
    fn clean(&mut self) {}
    /// Magnitude used to prefer stable pivots among ratio ties.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Field for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_pos(&self) -> bool {
        *self > TOL_PIV
    }
    fn is_neg(&self) -> bool {
        *self < -TOL_PIV
    }
    fn ratio_eps() -> Self {
        1e-12
    }
    fn feas_eps() -> Self {
        TOL_FEAS
    }
    fn clean(&mut self) {
        if self.abs() < ZERO_FLUSH {
            *self = 0.0;
        }
    }
}

impl Field for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite input")
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn ratio_eps() -> Self {
        BigRational::zero()
    }
    fn feas_eps() -> Self {
        BigRational::zero()
    }
}

/// Converts a rational to the nearest-ish `f64` without overflowing on large
/// numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rational_from_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Arithmetic mode of [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Bounds of one variable; `None` means unbounded on that side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bound {
    pub const NONNEG: Bound = Bound { lower: Some(0.0), upper: None };
    pub const FREE: Bound = Bound { lower: None, upper: None };
    pub const UNIT: Bound = Bound { lower: Some(0.0), upper: Some(1.0) };
}

/// `minimize c.x  subject to  A x = b,  lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub bounds: Vec<Bound>,
}

impl LpProblem {
    /// A problem over `objective.len()` nonnegative variables with no rows.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { objective, a: Vec::new(), b: Vec::new(), bounds: vec![Bound::NONNEG; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_bounds(&mut self, var: usize, bound: Bound) {
        self.bounds[var] = bound;
    }

    /// Adds `coeffs . x = rhs`; `coeffs` may be shorter than the variable count.
    pub fn add_eq(&mut self, mut coeffs: Vec<f64>, rhs: f64) {
        coeffs.resize(self.num_vars(), 0.0);
        self.a.push(coeffs);
        self.b.push(rhs);
    }

    /// Adds `coeffs . x <= rhs` through a fresh nonnegative slack variable and
    /// returns the slack's index.
    pub fn add_le(&mut self, mut coeffs: Vec<f64>, rhs: f64) -> usize {
        let slack = self.num_vars();
        self.objective.push(0.0);
        self.bounds.push(Bound::NONNEG);
        for row in &mut self.a {
            row.push(0.0);
        }
        coeffs.resize(slack, 0.0);
        coeffs.push(1.0);
        self.a.push(coeffs);
        self.b.push(rhs);
        slack
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.bounds.len() });
        }
        if self.a.len() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.a.len(), got: self.b.len() });
        }
        for row in &self.a {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
        }
        for (j, bd) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (bd.lower, bd.upper) {
                if l > u {
                    return Err(Error::InvalidParameter(format!("variable {j}: lower bound {l} exceeds upper {u}")));
                }
            }
        }
        Ok(())
    }
}

/// Result of a float or rational solve, reported in `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub objective_value: f64,
}

/// Result of an exact solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub status: Status,
    pub x: Vec<BigRational>,
    pub objective_value: BigRational,
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + col
    Shifted { col: usize, offset: f64 },
    /// x = offset - col
    Mirrored { col: usize, offset: f64 },
    /// x = pos - neg
    Split { pos: usize, neg: usize },
}

struct StandardForm<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    c: Vec<T>,
    maps: Vec<VarMap>,
    constant: T,
}

fn to_standard<T: Field>(p: &LpProblem) -> StandardForm<T> {
    let mut maps = Vec::with_capacity(p.num_vars());
    let mut ncols = 0;
    let mut upper_rows: Vec<(usize, T)> = Vec::new();
    for bd in &p.bounds {
        match (bd.lower, bd.upper) {
            (Some(l), u) => {
                maps.push(VarMap::Shifted { col: ncols, offset: l });
                if let Some(u) = u {
                    upper_rows.push((ncols, T::from_f64(u) - T::from_f64(l)));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirrored { col: ncols, offset: u });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let n_slack = upper_rows.len();
    let total = ncols + n_slack;
    let mut a = Vec::with_capacity(p.a.len() + n_slack);
    let mut b = Vec::with_capacity(p.a.len() + n_slack);
    for (row, &rhs) in p.a.iter().zip(&p.b) {
        let mut out = vec![T::zero(); total];
        let mut r = T::from_f64(rhs);
        for (j, &coef) in row.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shifted { col, offset } => {
                    out[col] = T::from_f64(coef);
                    r = r - T::from_f64(coef) * T::from_f64(offset);
                }
                VarMap::Mirrored { col, offset } => {
                    out[col] = T::from_f64(-coef);
                    r = r - T::from_f64(coef) * T::from_f64(offset);
                }
                VarMap::Split { pos, neg } => {
                    out[pos] = T::from_f64(coef);
                    out[neg] = T::from_f64(-coef);
                }
            }
        }
        a.push(out);
        b.push(r);
    }
    for (k, (col, width)) in upper_rows.into_iter().enumerate() {
        let mut out = vec![T::zero(); total];
        out[col] = T::one();
        out[ncols + k] = T::one();
        a.push(out);
        b.push(width);
    }
    let mut c = vec![T::zero(); total];
    let mut constant = T::zero();
    for (j, &coef) in p.objective.iter().enumerate() {
        if coef == 0.0 {
            continue;
        }
        match maps[j] {
            VarMap::Shifted { col, offset } => {
                c[col] = T::from_f64(coef);
                constant = constant + T::from_f64(coef) * T::from_f64(offset);
            }
            VarMap::Mirrored { col, offset } => {
                c[col] = T::from_f64(-coef);
                constant = constant + T::from_f64(coef) * T::from_f64(offset);
            }
            VarMap::Split { pos, neg } => {
                c[pos] = T::from_f64(coef);
                c[neg] = T::from_f64(-coef);
            }
        }
    }
    StandardForm { a, b, c, maps, constant }
}

enum Outcome<T> {
    Optimal(Vec<T>),
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    /// Constraint rows, each `ncols + 1` wide with the right-hand side last.
    rows: Vec<Vec<T>>,
    /// Reduced costs with the negated objective value last.
    cost: Vec<T>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        if piv != T::one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / piv.clone();
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate(row, &prow, c);
        }
        eliminate(&mut self.cost, &prow, c);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Minimizes over the columns `allowed`; returns false if unbounded.
    ///
    /// Entering columns follow the most negative reduced cost until
    /// [`BLAND_AFTER`] consecutive degenerate pivots occur; from then until
    /// the next nondegenerate pivot Bland's lowest-index rule is used, which
    /// rules out cycling.
    fn optimize(&mut self, allowed: usize) -> bool {
        let mut streak = 0usize;
        loop {
            let enter = if streak >= BLAND_AFTER {
                (0..allowed).find(|&j| self.cost[j].is_neg())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..allowed {
                    if self.cost[j].is_neg() && best.is_none_or(|b| self.cost[j] < self.cost[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(enter) = enter else {
                return true;
            };
            let bland = streak >= BLAND_AFTER;
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_pos() {
                    continue;
                }
                let rhs = &row[self.ncols];
                // Slightly negative right-hand sides are rounding residue.
                let ratio = if *rhs < T::zero() { T::zero() } else { rhs.clone() / a.clone() };
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, best)) => {
                        let eps = T::ratio_eps();
                        let tie_wins = if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a.magnitude() > self.rows[bi][enter].magnitude()
                        };
                        if ratio < best.clone() - eps.clone() || ratio <= best.clone() + eps && tie_wins {
                            Some((i, ratio))
                        } else {
                            Some((bi, best))
                        }
                    }
                };
            }
            match leave {
                None => return false,
                Some((r, ratio)) => {
                    if ratio.is_pos() {
                        streak = 0;
                    } else {
                        streak += 1;
                    }
                    self.pivot(r, enter)
                }
            }
        }
    }
}

fn eliminate<T: Field>(row: &mut [T], prow: &[T], c: usize) {
    let f = row[c].clone();
    if f.is_zero() {
        return;
    }
    for (v, p) in row.iter_mut().zip(prow) {
        if !p.is_zero() {
            *v = v.clone() - f.clone() * p.clone();
            v.clean();
        }
    }
    row[c] = T::zero();
}

fn simplex<T: Field>(a: &[Vec<T>], b: &[T], c: &[T]) -> Outcome<T> {
    let m = a.len();
    let n = c.len();
    if m == 0 {
        if c.iter().any(|v| v.is_neg()) {
            return Outcome::Unbounded;
        }
        return Outcome::Optimal(vec![T::zero(); n]);
    }
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.clone() < T::zero();
        let mut out = Vec::with_capacity(ncols + 1);
        for v in row {
            out.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            out.push(if k == i { T::one() } else { T::zero() });
        }
        out.push(if flip { -rhs.clone() } else { rhs.clone() });
        rows.push(out);
    }
    // Phase one: minimize the sum of artificials.
    let mut cost = vec![T::zero(); ncols + 1];
    for row in &rows {
        for j in 0..n {
            if !row[j].is_zero() {
                cost[j] = cost[j].clone() - row[j].clone();
            }
        }
        cost[ncols] = cost[ncols].clone() - row[ncols].clone();
    }
    let mut t = Tableau { rows, cost, basis: (n..n + m).collect(), ncols };
    t.optimize(n);
    let infeas = -t.cost[ncols].clone();
    if infeas > T::feas_eps() {
        return Outcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| t.rows[i][j].is_pos() || t.rows[i][j].is_neg()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // Phase two without the artificial columns.
    for row in t.rows.iter_mut() {
        let r = row.pop().expect("rhs");
        row.truncate(n);
        row.push(r);
    }
    t.ncols = n;
    let ncols = n;
    let mut cost = vec![T::zero(); ncols + 1];
    cost[..n].clone_from_slice(c);
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = c[bv].clone();
        if cb.is_zero() {
            continue;
        }
        for (k, v) in row.iter().enumerate() {
            if !v.is_zero() {
                cost[k] = cost[k].clone() - cb.clone() * v.clone();
            }
        }
    }
    t.cost = cost;
    if !t.optimize(n) {
        return Outcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[ncols].clone();
        }
    }
    Outcome::Optimal(x)
}

type Simplex<T> = fn(&[Vec<T>], &[T], &[T]) -> Outcome<T>;

fn solve_generic<T: Field>(p: &LpProblem, run: Simplex<T>) -> Result<(Status, Vec<T>, T)> {
    p.validate()?;
    let sf = to_standard::<T>(p);
    let outcome = run(&sf.a, &sf.b, &sf.c);
    let n = p.num_vars();
    Ok(match outcome {
        Outcome::Infeasible => (Status::Infeasible, vec![T::zero(); n], T::zero()),
        Outcome::Unbounded => (Status::Unbounded, vec![T::zero(); n], T::zero()),
        Outcome::Optimal(y) => {
            let x: Vec<T> = sf
                .maps
                .iter()
                .map(|m| match *m {
                    VarMap::Shifted { col, offset } => T::from_f64(offset) + y[col].clone(),
                    VarMap::Mirrored { col, offset } => T::from_f64(offset) - y[col].clone(),
                    VarMap::Split { pos, neg } => y[pos].clone() - y[neg].clone(),
                })
                .collect();
            let mut value = sf.constant.clone();
            for (cj, yj) in sf.c.iter().zip(&y) {
                if !cj.is_zero() && !yj.is_zero() {
                    value = value + cj.clone() * yj.clone();
                }
            }
            (Status::Optimal, x, value)
        }
    })
}

/// Solves `p` in the requested arithmetic mode.
pub fn solve(p: &LpProblem, mode: Mode) -> Result<LpSolution> {
    match mode {
        Mode::Float => {
            let (status, x, v) = solve_generic::<f64>(p, simplex)?;
            Ok(LpSolution { status, x, objective_value: v })
        }
        Mode::Rational => {
            let s = solve_exact(p)?;
            Ok(LpSolution {
                status: s.status,
                x: s.x.iter().map(ratio_to_f64).collect(),
                objective_value: ratio_to_f64(&s.objective_value),
            })
        }
    }
}

/// Solves `p` in exact rational arithmetic. Every `f64` input is converted
/// exactly, so integer and dyadic data yield exact vertices.
pub fn solve_exact(p: &LpProblem) -> Result<ExactSolution> {
    let (status, x, v) = solve_generic::<BigRational>(p, exact::simplex)?;
    Ok(ExactSolution { status, x, objective_value: v })
}

/// Builds the basis-pursuit LP `min sum(x+ + x-)  s.t.  A (x+ - x-) = b`.
fn l1_problem(a: &[Vec<f64>], b: &[f64]) -> Result<(LpProblem, usize)> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidParameter("matrix must have at least one column".into()));
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let mut p = LpProblem::new(vec![1.0; 2 * n]);
    for (row, &rhs) in a.iter().zip(b) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        let mut coeffs = row.clone();
        coeffs.extend(row.iter().map(|v| -v));
        p.add_eq(coeffs, rhs);
    }
    Ok((p, n))
}

/// The l1-minimal solution of `A x = b` and its l1 norm.
pub fn minimize_l1(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (p, n) = l1_problem(a, b)?;
    let sol = solve(&p, Mode::Float)?;
    match sol.status {
        Status::Optimal => {
            let x: Vec<f64> = (0..n).map(|i| sol.x[i] - sol.x[n + i]).collect();
            let value = x.iter().map(|v| v.abs()).sum();
            Ok((x, value))
        }
        _ => Err(Error::Infeasible),
    }
}

/// Exact-arithmetic variant of [`minimize_l1`].
pub fn minimize_l1_exact(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<BigRational>, BigRational)> {
    let (p, n) = l1_problem(a, b)?;
    let sol = solve_exact(&p)?;
    match sol.status {
        Status::Optimal => {
            let x: Vec<BigRational> = (0..n).map(|i| &sol.x[i] - &sol.x[n + i]).collect();
            let value = x.iter().fold(BigRational::zero(), |acc, v| acc + v.abs());
            Ok((x, value))
        }
        _ => Err(Error::Infeasible),
    }
}
