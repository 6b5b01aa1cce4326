//! Fraction-free (integer-preserving) tableau simplex for exact LPs.
//!
//! Rows are scaled to integers once; afterwards the tableau holds
//! `d * B^-1 [A | b]` with `d` the previous pivot, and every update
//! `(p * t_ij - t_ic * t_rj) / d` divides exactly. No gcd is ever taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Outcome, BLAND_AFTER};

struct Tableau {
    rows: Vec<Vec<BigInt>>,
    cost: Vec<BigInt>,
    basis: Vec<usize>,
    /// Common denominator of every entry; kept positive.
    d: BigInt,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        let prow = std::mem::take(&mut self.rows[r]);
        let d = &self.d;
        let update = |row: &mut Vec<BigInt>| {
            let f = row[c].clone();
            for (v, pr) in row.iter_mut().zip(&prow) {
                let mut t = if v.is_zero() { BigInt::zero() } else { &p * &*v };
                if !f.is_zero() && !pr.is_zero() {
                    t -= &f * pr;
                }
                *v = if t.is_zero() { t } else { t / d };
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        update(&mut self.cost);
        self.rows[r] = prow;
        self.basis[r] = c;
        if p.is_negative() {
            for row in self.rows.iter_mut().chain(std::iter::once(&mut self.cost)) {
                for v in row.iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            self.d = -p;
        } else {
            self.d = p;
        }
    }

    /// Minimizes over columns `0..allowed`; false if unbounded. Dantzig
    /// pricing with Bland's rule during long degenerate stretches.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        let mut streak = 0usize;
        loop {
            let enter = if streak >= BLAND_AFTER {
                (0..allowed).find(|&j| self.cost[j].is_negative())
            } else {
                (0..allowed).filter(|&j| self.cost[j].is_negative()).min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]))
            };
            let Some(enter) = enter else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                leave = Some(match leave {
                    None => i,
                    Some(b) => {
                        let best = &self.rows[b];
                        let lhs = &row[rhs] * &best[enter];
                        let rhs_b = &best[rhs] * &row[enter];
                        if lhs < rhs_b || lhs == rhs_b && self.basis[i] < self.basis[b] {
                            i
                        } else {
                            b
                        }
                    }
                });
            }
            let Some(r) = leave else {
                return false;
            };
            if self.rows[r][rhs].is_zero() {
                streak += 1;
            } else {
                streak = 0;
            }
            self.pivot(r, enter);
        }
    }
}

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &BigRational, scale: &BigInt) -> BigInt {
    v.numer() * (scale / v.denom())
}

pub(super) fn simplex(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Outcome<BigRational> {
    let m = a.len();
    let n = c.len();
    if m == 0 {
        if c.iter().any(|v| v.is_negative()) {
            return Outcome::Unbounded;
        }
        return Outcome::Optimal(vec![BigRational::zero(); n]);
    }
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let mut scale = lcm_of_denominators(row.iter().chain(std::iter::once(rhs)));
        if rhs.is_negative() {
            scale = -scale;
        }
        let mut out: Vec<BigInt> = row.iter().map(|v| scaled(v, &scale)).collect();
        // Artificial coefficient 1: each artificial is a rescaled copy of
        // the textbook one, which leaves the phase-one verdict unchanged.
        out.extend((0..m).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
        out.push(scaled(rhs, &scale));
        rows.push(out);
    }
    let mut cost = vec![BigInt::zero(); width + 1];
    for row in &rows {
        for j in (0..n).chain(std::iter::once(width)) {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
    }
    let mut t = Tableau { rows, cost, basis: (n..width).collect(), d: BigInt::one() };
    t.optimize(n);
    if t.cost[width].is_negative() {
        return Outcome::Infeasible;
    }
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
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
    let cscale = lcm_of_denominators(c.iter());
    let cint: Vec<BigInt> = c.iter().map(|v| scaled(v, &cscale)).collect();
    let mut cost: Vec<BigInt> = cint.iter().map(|v| v * &t.d).collect();
    cost.push(BigInt::zero());
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if cint[bv].is_zero() {
            continue;
        }
        for (k, v) in row.iter().enumerate() {
            if !v.is_zero() {
                cost[k] -= &cint[bv] * v;
            }
        }
    }
    t.cost = cost;
    if !t.optimize(n) {
        return Outcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = BigRational::new(row[n].clone(), t.d.clone());
    }
    Outcome::Optimal(x)
}
