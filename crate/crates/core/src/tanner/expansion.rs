use serde::Serialize;

use super::TannerGraph;
use crate::error::{Error, Result};

/// Outcome of an exhaustive `(dv, gamma, delta)` expansion test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub dv: usize,
    pub gamma: f64,
    pub delta: f64,
    /// Smallest failing variable set in (size, lexicographic) order.
    pub witness: Option<Vec<usize>>,
    pub subsets_checked: u128,
}

impl ExpansionReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Number of distinct checks adjacent to the variables in `set`.
pub fn neighborhood_size(g: &TannerGraph, set: &[usize]) -> usize {
    let mut seen = vec![false; g.n_chk()];
    let mut count = 0;
    for &i in set {
        for &j in g.var_neighbors(i) {
            if !seen[j] {
                seen[j] = true;
                count += 1;
            }
        }
    }
    count
}

/// Tests `|N(S)| >= delta * dv * |S|` for every nonempty variable set with
/// `|S| <= gamma * n`.
pub fn check_expansion(g: &TannerGraph, gamma: f64, delta: f64, cap: u128) -> Result<ExpansionReport> {
    let dv = g.left_degree().ok_or(Error::NotRegular)?;
    if !(0.0..=1.0).contains(&gamma) || delta < 0.0 {
        return Err(Error::InvalidParameter(format!("gamma = {gamma}, delta = {delta}")));
    }
    let n = g.n_var();
    let max_size = ((gamma * n as f64) + 1e-9).floor() as usize;
    let total: u128 = (1..=max_size).map(|s| binomial(n, s)).fold(0u128, |a, b| a.saturating_add(b));
    if total > cap {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    let mut checked = 0u128;
    for size in 1..=max_size {
        let need = delta * dv as f64 * size as f64;
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            checked += 1;
            if (neighborhood_size(g, &idx) as f64) < need - 1e-12 {
                return Ok(ExpansionReport { dv, gamma, delta, witness: Some(idx), subsets_checked: checked });
            }
            // Next combination in lexicographic order.
            let mut k = size;
            while k > 0 && idx[k - 1] == n - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for t in k..size {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    Ok(ExpansionReport { dv, gamma, delta, witness: None, subsets_checked: checked })
}

/// Largest recoverable support size guaranteed by a `(dv, gamma, delta)`
/// expander: every `k` strictly below the returned value is recoverable.
pub fn corollary1_k_bound(dv: usize, gamma: f64, delta: f64, n: usize) -> Result<f64> {
    if dv == 0 {
        return Err(Error::InvalidParameter("dv must be positive".into()));
    }
    let threshold = 2.0 / 3.0 + 1.0 / (3.0 * dv as f64);
    if delta <= threshold {
        return Err(Error::ExpansionTooWeak { delta, threshold });
    }
    let scaled = delta * dv as f64;
    if (scaled - scaled.round()).abs() > 1e-9 || scaled.round() < 1.0 {
        return Err(Error::InvalidParameter(format!("delta * dv = {scaled} must be a positive integer")));
    }
    Ok((3.0 * delta - 2.0) / (2.0 * delta - 1.0) * (gamma * n as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Matrix;

    #[test]
    fn complete_bipartite_passes() {
        let h = Gf2Matrix::from_rows(&[[1u8, 1, 1], [1, 1, 1], [1, 1, 1]]).unwrap();
        let r = check_expansion(&TannerGraph::from_matrix(&h), 1.0, 1.0 / 3.0, 100).unwrap();
        assert!(r.holds());
        assert_eq!(r.subsets_checked, 7);
    }

    #[test]
    fn duplicated_column_fails() {
        let h = Gf2Matrix::from_rows(&[[1u8, 1, 0], [1, 1, 1], [0, 0, 1]]).unwrap();
        let g = TannerGraph::from_matrix(&h);
        let r = check_expansion(&g, 1.0, 1.0, 100).unwrap();
        assert_eq!(r.witness, Some(vec![0, 1]));
        let w = r.witness.unwrap();
        assert!((neighborhood_size(&g, &w) as f64) < r.delta * r.dv as f64 * w.len() as f64);
    }

    #[test]
    fn errors() {
        let irregular = TannerGraph::from_matrix(&crate::corpus::hamming_7_4());
        assert_eq!(check_expansion(&irregular, 0.5, 0.5, 1000), Err(Error::NotRegular));
        let g = TannerGraph::from_matrix(&crate::corpus::k33_incidence());
        assert!(matches!(check_expansion(&g, 1.0, 0.5, 10), Err(Error::CapExceeded { .. })));
        // gamma * n < 1: only the empty set qualifies, which is skipped.
        let r = check_expansion(&g, 0.05, 1.0, 10).unwrap();
        assert!(r.holds() && r.subsets_checked == 0);
    }

    #[test]
    fn corollary1_examples() {
        // delta = 3/4 needs dv > 4 and delta * dv integral.
        let v = corollary1_k_bound(8, 0.5, 0.75, 202).unwrap();
        assert!((v - 0.5 * 100.0).abs() < 1e-12);
        let v = corollary1_k_bound(3, 1.0, 1.0, 101).unwrap();
        assert!((v - 100.0).abs() < 1e-12);
        assert!(matches!(corollary1_k_bound(3, 0.5, 0.7, 100), Err(Error::ExpansionTooWeak { .. })));
        assert!(corollary1_k_bound(10, 0.5, 0.75, 100).is_err());
    }
}
