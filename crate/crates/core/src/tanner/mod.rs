//! Tanner graphs of zero-one matrices: construction, girth, expansion and
//! alist interchange.

mod alist;
mod construct;
mod expansion;

pub use alist::{read_alist, read_alist_file, write_alist, write_alist_file};
pub use construct::{
    construct, ConstructionKind, ConstructionSpec, Constructed, COR1_ALPHA_DV32, COR2_ALPHA_DV8,
    COR3_ALPHA_REGULAR_3_6,
};
pub use expansion::{check_expansion, corollary1_k_bound, neighborhood_size, ExpansionReport};

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::gf2::Gf2Matrix;

/// Bipartite graph with variable nodes (columns) and check nodes (rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_var: usize,
    n_chk: usize,
    /// `checks[j]` = sorted variables in check `j`.
    checks: Vec<Vec<usize>>,
    /// `vars[i]` = sorted checks touching variable `i`.
    vars: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn from_matrix(h: &Gf2Matrix) -> Self {
        let checks: Vec<Vec<usize>> = (0..h.rows()).map(|j| h.row_support(j)).collect();
        let mut vars = vec![Vec::new(); h.cols()];
        for (j, row) in checks.iter().enumerate() {
            for &i in row {
                vars[i].push(j);
            }
        }
        Self { n_var: h.cols(), n_chk: h.rows(), checks, vars }
    }

    pub fn to_matrix(&self) -> Gf2Matrix {
        let mut h = Gf2Matrix::zeros(self.n_chk, self.n_var).expect("positive dimensions");
        for (j, row) in self.checks.iter().enumerate() {
            for &i in row {
                h.set(j, i, true);
            }
        }
        h
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    pub fn n_chk(&self) -> usize {
        self.n_chk
    }

    pub fn check_neighbors(&self, j: usize) -> &[usize] {
        &self.checks[j]
    }

    pub fn var_neighbors(&self, i: usize) -> &[usize] {
        &self.vars[i]
    }

    pub fn num_edges(&self) -> usize {
        self.checks.iter().map(Vec::len).sum()
    }

    /// Common variable degree, if every variable has the same degree.
    pub fn left_degree(&self) -> Option<usize> {
        let d = self.vars.first()?.len();
        self.vars.iter().all(|v| v.len() == d).then_some(d)
    }

    /// Edges as `(check, variable)` pairs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.checks.iter().enumerate().flat_map(|(j, row)| row.iter().map(move |&i| (j, i)))
    }
}

/// Girth of a graph; forests have no cycle at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn is_at_least(self, len: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= len,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Shortest cycle length, by a breadth-first search rooted at every node.
///
/// Nodes `0..n_var` are variables and `n_var..n_var + n_chk` are checks. A
/// non-tree edge `(u, w)` met during the search from `s` closes a walk of
/// length `d(u) + d(w) + 1` that contains a cycle; the minimum over all roots
/// is exactly the girth.
pub fn girth(g: &TannerGraph) -> Girth {
    let nodes = g.n_var + g.n_chk;
    let neighbors = |v: usize| -> Vec<usize> {
        if v < g.n_var {
            g.vars[v].iter().map(|&j| g.n_var + j).collect()
        } else {
            g.checks[v - g.n_var].clone()
        }
    };
    let adj: Vec<Vec<usize>> = (0..nodes).map(neighbors).collect();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut queue = VecDeque::new();
    for root in 0..nodes {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn round_trip_matrix() {
        let h = corpus::hamming_7_4();
        let g = TannerGraph::from_matrix(&h);
        assert_eq!(g.to_matrix(), h);
        assert_eq!(g.num_edges(), 12);
        assert_eq!(g.var_neighbors(6), &[0, 1, 2]);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&TannerGraph::from_matrix(&corpus::chain_3x4())), Girth::Infinite);
        assert_eq!(girth(&TannerGraph::from_matrix(&corpus::hamming_7_4())), Girth::Finite(4));
        assert_eq!(girth(&TannerGraph::from_matrix(&corpus::cycle(5))), Girth::Finite(10));
        assert_eq!(girth(&TannerGraph::from_matrix(&corpus::k33_incidence())), Girth::Finite(8));
    }

    #[test]
    fn left_degree() {
        assert_eq!(TannerGraph::from_matrix(&corpus::k33_incidence()).left_degree(), Some(2));
        assert_eq!(TannerGraph::from_matrix(&corpus::hamming_7_4()).left_degree(), None);
    }
}
