use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::rng;

/// Sparsity below which random (dv=32, m/n=1/2) expander matrices recover
/// every sparse vector, as quoted for the expansion-based strong bound.
pub const COR1_ALPHA_DV32: f64 = 0.000175;
/// Weak-bound sparsity threshold quoted for random column-weight-8 matrices
/// at m/n = 1/2.
pub const COR2_ALPHA_DV8: f64 = 0.002;
/// Weak-bound sparsity threshold quoted for (3,6)-regular matrices with
/// logarithmic girth.
pub const COR3_ALPHA_REGULAR_3_6: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    /// Stacked row blocks, the first with consecutive ones, the others
    /// column-permuted copies of it.
    GallagerRegular,
    /// Progressive edge growth.
    GirthPeg,
    /// `dv` ones per column at uniformly random distinct rows.
    RandomColumnWeight,
    /// iid entries: +1 w.p. 1/6, 0 w.p. 2/3, -1 w.p. 1/6.
    DensePm1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub dv: usize,
    pub dc: usize,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    /// Row count override; defaults to `n * dv / dc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl ConstructionSpec {
    pub fn new(kind: ConstructionKind, dv: usize, dc: usize, n: usize, seed: u64) -> Self {
        Self { kind, dv, dc, n, seed, m: None }
    }

    /// Number of rows implied by the spec.
    pub fn rows(&self) -> Result<usize> {
        if let Some(m) = self.m {
            if m == 0 {
                return Err(Error::InfeasibleConstruction("m must be positive".into()));
            }
            return Ok(m);
        }
        if self.dc == 0 || (self.n * self.dv) % self.dc != 0 {
            return Err(Error::InfeasibleConstruction(format!(
                "n*dv = {} is not divisible by dc = {}",
                self.n * self.dv,
                self.dc
            )));
        }
        Ok(self.n * self.dv / self.dc)
    }

    fn validate(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::InfeasibleConstruction("n must be positive".into()));
        }
        if self.kind != ConstructionKind::DensePm1 && self.dv < 2 {
            return Err(Error::InfeasibleConstruction(format!("dv = {} must be at least 2", self.dv)));
        }
        let m = self.rows()?;
        match self.kind {
            ConstructionKind::GallagerRegular | ConstructionKind::GirthPeg => {
                if self.m.is_some_and(|m| m * self.dc != self.n * self.dv) {
                    return Err(Error::InfeasibleConstruction("regular kinds need m*dc = n*dv".into()));
                }
                if self.dc > self.n {
                    return Err(Error::InfeasibleConstruction("dc exceeds n".into()));
                }
                if self.kind == ConstructionKind::GallagerRegular && self.n % self.dc != 0 {
                    return Err(Error::InfeasibleConstruction(format!(
                        "Gallager blocks need dc = {} to divide n = {}",
                        self.dc, self.n
                    )));
                }
                if self.dv > m {
                    return Err(Error::InfeasibleConstruction("dv exceeds m".into()));
                }
            }
            ConstructionKind::RandomColumnWeight => {
                if self.dv > m {
                    return Err(Error::InfeasibleConstruction("dv exceeds m".into()));
                }
            }
            ConstructionKind::DensePm1 => {}
        }
        Ok(m)
    }
}

/// Output of [`construct`].
#[derive(Debug, Clone, PartialEq)]
pub enum Constructed {
    Binary(Gf2Matrix),
    Signed(Vec<Vec<i8>>),
}

impl Constructed {
    pub fn binary(&self) -> Option<&Gf2Matrix> {
        match self {
            Constructed::Binary(h) => Some(h),
            Constructed::Signed(_) => None,
        }
    }

    pub fn into_binary(self) -> Option<Gf2Matrix> {
        match self {
            Constructed::Binary(h) => Some(h),
            Constructed::Signed(_) => None,
        }
    }

    /// Real-valued rows of either variant.
    pub fn to_real_rows(&self) -> Vec<Vec<f64>> {
        match self {
            Constructed::Binary(h) => h.to_real_rows(),
            Constructed::Signed(rows) => rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect(),
        }
    }
}

pub fn construct(spec: &ConstructionSpec) -> Result<Constructed> {
    let m = spec.validate()?;
    let mut rng = rng::rng(spec.seed);
    Ok(match spec.kind {
        ConstructionKind::GallagerRegular => Constructed::Binary(gallager(spec, m, &mut rng)?),
        ConstructionKind::GirthPeg => Constructed::Binary(peg(spec, m, &mut rng)?),
        ConstructionKind::RandomColumnWeight => {
            let mut h = Gf2Matrix::zeros(m, spec.n)?;
            let rows: Vec<usize> = (0..m).collect();
            for c in 0..spec.n {
                for &r in rows.choose_multiple(&mut rng, spec.dv) {
                    h.set(r, c, true);
                }
            }
            Constructed::Binary(h)
        }
        ConstructionKind::DensePm1 => {
            let rows = (0..m)
                .map(|_| {
                    (0..spec.n)
                        .map(|_| match rng.gen_range(0..6u8) {
                            0 => 1i8,
                            1 => -1,
                            _ => 0,
                        })
                        .collect()
                })
                .collect();
            Constructed::Signed(rows)
        }
    })
}

/// Swap attempts per block when removing 4-cycles from a Gallager block.
const GALLAGER_REPAIR_STEPS: usize = 200_000;

/// Block-permutation construction. Each permuted block is repaired by
/// seeded column swaps between its rows so that no two columns share a
/// check in two different blocks (no 4-cycles) whenever the search finds
/// such a placement within [`GALLAGER_REPAIR_STEPS`].
fn gallager(spec: &ConstructionSpec, m: usize, rng: &mut rng::Rng) -> Result<Gf2Matrix> {
    let (n, dc) = (spec.n, spec.dc);
    let block_rows = n / dc;
    debug_assert_eq!(block_rows * spec.dv, m);
    let mut h = Gf2Matrix::zeros(m, n)?;
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    for block in 0..spec.dv {
        if block > 0 {
            perm.shuffle(rng);
            repair_block(&mut perm, dc, &used, rng);
        }
        for (r, cols) in perm.chunks(dc).enumerate() {
            for (a, &x) in cols.iter().enumerate() {
                h.set(block * block_rows + r, x, true);
                for &y in &cols[a + 1..] {
                    used.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    Ok(h)
}

fn row_conflicts(cols: &[usize], used: &HashSet<(usize, usize)>) -> usize {
    let mut c = 0;
    for (a, &x) in cols.iter().enumerate() {
        for &y in &cols[a + 1..] {
            c += used.contains(&(x.min(y), x.max(y))) as usize;
        }
    }
    c
}

fn repair_block(perm: &mut [usize], dc: usize, used: &HashSet<(usize, usize)>, rng: &mut rng::Rng) {
    let rows = perm.len() / dc;
    if rows < 2 {
        return;
    }
    let mut conf: Vec<usize> = perm.chunks(dc).map(|c| row_conflicts(c, used)).collect();
    let mut total: usize = conf.iter().sum();
    for _ in 0..GALLAGER_REPAIR_STEPS {
        if total == 0 {
            return;
        }
        let bad: Vec<usize> = (0..rows).filter(|&r| conf[r] > 0).collect();
        let r1 = bad[rng.gen_range(0..bad.len())];
        let mut r2 = rng.gen_range(0..rows - 1);
        if r2 >= r1 {
            r2 += 1;
        }
        let (i, j) = (r1 * dc + rng.gen_range(0..dc), r2 * dc + rng.gen_range(0..dc));
        perm.swap(i, j);
        let c1 = row_conflicts(&perm[r1 * dc..(r1 + 1) * dc], used);
        let c2 = row_conflicts(&perm[r2 * dc..(r2 + 1) * dc], used);
        if c1 + c2 <= conf[r1] + conf[r2] {
            total = total + c1 + c2 - conf[r1] - conf[r2];
            conf[r1] = c1;
            conf[r2] = c2;
        } else {
            perm.swap(i, j);
        }
    }
}

/// Progressive edge growth: each new edge of a variable goes to a check at
/// maximal distance from it in the current graph (unreachable counts as
/// farthest), preferring the lowest current check degree, with seeded
/// tie-breaking among the rest. The row-degree cap can force the last
/// variables into 4-cycles; [`repair_peg`] then removes them by edge swaps.
fn peg(spec: &ConstructionSpec, m: usize, rng: &mut rng::Rng) -> Result<Gf2Matrix> {
    let n = spec.n;
    let mut var_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut chk_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..n {
        for _ in 0..spec.dv {
            let depth = check_depths(v, &var_adj, &chk_adj);
            let free = |c: &usize| chk_adj[*c].len() < spec.dc && !var_adj[v].contains(c);
            let Some(far) = (0..m).filter(free).map(|c| depth[c]).max() else {
                return Err(Error::InfeasibleConstruction(format!("no free check for variable {v}")));
            };
            let min_deg = (0..m).filter(free).filter(|&c| depth[c] == far).map(|c| chk_adj[c].len()).min();
            let best: Vec<usize> =
                (0..m).filter(free).filter(|&c| depth[c] == far && Some(chk_adj[c].len()) == min_deg).collect();
            let c = best[rng.gen_range(0..best.len())];
            var_adj[v].push(c);
            chk_adj[c].push(v);
        }
    }
    repair_peg(&mut var_adj, &mut chk_adj, rng);
    let mut h = Gf2Matrix::zeros(m, n)?;
    for (v, checks) in var_adj.iter().enumerate() {
        for &c in checks {
            h.set(c, v, true);
        }
    }
    Ok(h)
}

/// 4-cycles through variable `v`: pairs of its checks shared with another variable.
fn four_cycles_at(v: usize, var_adj: &[Vec<usize>], chk_adj: &[Vec<usize>]) -> usize {
    let mut shared: HashMap<usize, usize> = HashMap::new();
    for &c in &var_adj[v] {
        for &u in chk_adj[c].iter().filter(|&&u| u != v) {
            *shared.entry(u).or_default() += 1;
        }
    }
    shared.values().map(|&k| k * (k - 1) / 2).sum()
}

/// Swaps the variable ends of two edges `(c1, v1)`, `(c2, v2)` while some
/// variable lies on a 4-cycle, keeping swaps that do not add any. Degrees
/// are preserved. Stops after [`GALLAGER_REPAIR_STEPS`] attempts.
fn repair_peg(var_adj: &mut [Vec<usize>], chk_adj: &mut [Vec<usize>], rng: &mut rng::Rng) {
    let n = var_adj.len();
    let mut bad: Vec<usize> = (0..n).filter(|&v| four_cycles_at(v, var_adj, chk_adj) > 0).collect();
    for _ in 0..GALLAGER_REPAIR_STEPS {
        bad.retain(|&v| four_cycles_at(v, var_adj, chk_adj) > 0);
        let Some(&v1) = bad.get(rng.gen_range(0..bad.len().max(1))) else {
            return;
        };
        let v2 = rng.gen_range(0..n);
        let c1 = var_adj[v1][rng.gen_range(0..var_adj[v1].len())];
        let c2 = var_adj[v2][rng.gen_range(0..var_adj[v2].len())];
        if v1 == v2 || c1 == c2 || var_adj[v1].contains(&c2) || var_adj[v2].contains(&c1) {
            continue;
        }
        let before = four_cycles_at(v1, var_adj, chk_adj) + four_cycles_at(v2, var_adj, chk_adj);
        let swap = |var_adj: &mut [Vec<usize>], chk_adj: &mut [Vec<usize>], (a, ca): (usize, usize), (b, cb): (usize, usize)| {
            *var_adj[a].iter_mut().find(|c| **c == ca).unwrap() = cb;
            *var_adj[b].iter_mut().find(|c| **c == cb).unwrap() = ca;
            *chk_adj[ca].iter_mut().find(|u| **u == a).unwrap() = b;
            *chk_adj[cb].iter_mut().find(|u| **u == b).unwrap() = a;
        };
        swap(var_adj, chk_adj, (v1, c1), (v2, c2));
        let after = four_cycles_at(v1, var_adj, chk_adj) + four_cycles_at(v2, var_adj, chk_adj);
        if after > before {
            swap(var_adj, chk_adj, (v1, c2), (v2, c1));
        } else if after > 0 && !bad.contains(&v2) {
            bad.push(v2);
        }
    }
}

/// BFS distance (in edges) from variable `v` to every check; `usize::MAX`
/// marks checks in other components.
fn check_depths(v: usize, var_adj: &[Vec<usize>], chk_adj: &[Vec<usize>]) -> Vec<usize> {
    let mut depth = vec![usize::MAX; chk_adj.len()];
    let mut var_seen = vec![false; var_adj.len()];
    var_seen[v] = true;
    let mut queue = VecDeque::new();
    for &c in &var_adj[v] {
        depth[c] = 1;
        queue.push_back(c);
    }
    while let Some(c) = queue.pop_front() {
        for &u in &chk_adj[c] {
            if var_seen[u] {
                continue;
            }
            var_seen[u] = true;
            for &c2 in &var_adj[u] {
                if depth[c2] == usize::MAX {
                    depth[c2] = depth[c] + 2;
                    queue.push_back(c2);
                }
            }
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{girth, TannerGraph};

    fn weights(h: &Gf2Matrix) -> (Vec<usize>, Vec<usize>) {
        ((0..h.cols()).map(|c| h.col_weight(c)).collect(), (0..h.rows()).map(|r| h.row_weight(r)).collect())
    }

    #[test]
    fn gallager_is_regular() {
        let spec = ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 6, 24, 1);
        let h = construct(&spec).unwrap().into_binary().unwrap();
        assert_eq!((h.rows(), h.cols()), (12, 24));
        let (cw, rw) = weights(&h);
        assert!(cw.iter().all(|&w| w == 3));
        assert!(rw.iter().all(|&w| w == 6));
    }

    #[test]
    fn peg_is_regular_with_girth_six() {
        for (n, seed) in [(48, 0), (48, 3), (96, 1), (96, 5), (192, 3)] {
            let spec = ConstructionSpec::new(ConstructionKind::GirthPeg, 3, 6, n, seed);
            let h = construct(&spec).unwrap().into_binary().unwrap();
            let (cw, rw) = weights(&h);
            assert!(cw.iter().all(|&w| w == 3));
            assert!(rw.iter().all(|&w| w == 6), "{rw:?}");
            assert!(girth(&TannerGraph::from_matrix(&h)).is_at_least(6), "n={n} seed={seed}");
        }
    }

    #[test]
    fn random_column_weight() {
        let spec = ConstructionSpec::new(ConstructionKind::RandomColumnWeight, 8, 16, 200, 3);
        let h = construct(&spec).unwrap().into_binary().unwrap();
        assert_eq!(h.rows(), 100);
        assert!((0..200).all(|c| h.col_weight(c) == 8));
    }

    #[test]
    fn dense_pm1_zero_fraction() {
        let mut spec = ConstructionSpec::new(ConstructionKind::DensePm1, 1, 1, 10_000, 11);
        spec.m = Some(1);
        let Constructed::Signed(rows) = construct(&spec).unwrap() else { panic!("expected signed") };
        let zeros = rows[0].iter().filter(|&&v| v == 0).count() as f64 / 10_000.0;
        assert!((0.66..=0.674).contains(&zeros), "{zeros}");
        let plus = rows[0].iter().filter(|&&v| v == 1).count() as f64 / 10_000.0;
        assert!((plus - 1.0 / 6.0).abs() < 0.02);
    }

    #[test]
    fn infeasible_parameters() {
        let bad = ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 7, 24, 0);
        assert!(matches!(construct(&bad), Err(Error::InfeasibleConstruction(_))));
        let low = ConstructionSpec::new(ConstructionKind::GirthPeg, 1, 2, 24, 0);
        assert!(construct(&low).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let spec = ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 6, 48, 9);
        assert_eq!(construct(&spec).unwrap(), construct(&spec).unwrap());
    }
}
