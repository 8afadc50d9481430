//! Exact exhaustive solvers for small instances, used as ground truth.

use crate::graph::{BipartiteGraph, Graph, VertexSet};
use crate::matrix::DenseMatrix;
use crate::{Error, Result};
use serde::Serialize;

pub const MAX_CLIQUE_VERTICES: usize = 40;
pub const MAX_BICLIQUE_SMALL_SIDE: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Clique members, or the left side of a biclique.
    pub left: VertexSet,
    /// Right side of a biclique; `None` for cliques.
    pub right: Option<VertexSet>,
    /// Clique size, or edge count `|left|·|right|` of a biclique.
    pub objective: usize,
    pub nodes_explored: u64,
}

/// Maximum clique by branch and bound with greedy-coloring bounds. Among
/// maximum cliques the lexicographically smallest sorted member list wins.
pub fn max_clique_exact(g: &Graph) -> Result<OracleResult> {
    let n = g.num_vertices();
    if n > MAX_CLIQUE_VERTICES {
        return Err(Error::SizeGuard {
            what: "max_clique_exact vertex count",
            actual: n,
            limit: MAX_CLIQUE_VERTICES,
        });
    }
    let mut adj = vec![0u64; n];
    for &(i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let mut search = CliqueSearch {
        adj,
        best: 0,
        best_size: 0,
        nodes: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.expand(0, 0, all);
    let members = (0..n).filter(|&v| search.best >> v & 1 == 1);
    Ok(OracleResult {
        left: VertexSet::new(n, members)?,
        right: None,
        objective: search.best_size,
        nodes_explored: search.nodes,
    })
}

struct CliqueSearch {
    adj: Vec<u64>,
    best: u64,
    best_size: usize,
    nodes: u64,
}

impl CliqueSearch {
    // Include-first branching on the smallest candidate visits equal-size
    // cliques in lexicographic order, and only strict improvements are
    // recorded, so the first maximum found is the lexicographically smallest.
    fn expand(&mut self, current: u64, size: usize, mut cand: u64) {
        self.nodes += 1;
        if size > self.best_size {
            self.best = current;
            self.best_size = size;
        }
        while cand != 0 {
            if size + self.coloring_bound(cand) <= self.best_size {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            let bit = 1u64 << v;
            self.expand(current | bit, size + 1, cand & self.adj[v]);
            cand &= !bit;
        }
    }

    /// Colors used by a greedy coloring of `cand`; bounds its clique number.
    fn coloring_bound(&self, cand: u64) -> usize {
        let mut uncolored = cand;
        let mut colors = 0;
        while uncolored != 0 {
            colors += 1;
            let mut avail = uncolored;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= !(1u64 << v) & !self.adj[v];
                uncolored &= !(1u64 << v);
            }
        }
        colors
    }
}

/// Maximum-edge biclique by enumerating subsets `S` of the smaller side,
/// pairing each with its full common neighborhood. Ties keep the first
/// subset met by include-first search over ascending indices. An edgeless
/// graph yields objective 0 with both sides empty.
pub fn max_edge_biclique_exact(g: &BipartiteGraph) -> Result<OracleResult> {
    let (m, n) = (g.left_count(), g.right_count());
    let small = m.min(n);
    if small > MAX_BICLIQUE_SMALL_SIDE {
        return Err(Error::SizeGuard {
            what: "max_edge_biclique_exact smaller side",
            actual: small,
            limit: MAX_BICLIQUE_SMALL_SIDE,
        });
    }
    let left_small = m <= n;
    let large = if left_small { n } else { m };
    let words = large.div_ceil(64).max(1);
    let mut nbr = vec![vec![0u64; words]; small];
    for &(u, v) in g.edges() {
        let (s, l) = if left_small { (u, v) } else { (v, u) };
        nbr[s][l / 64] |= 1 << (l % 64);
    }
    let mut full = vec![u64::MAX; words];
    if large % 64 != 0 {
        full[words - 1] = (1u64 << (large % 64)) - 1;
    }
    if large == 0 {
        full[0] = 0;
    }

    let mut search = BicliqueSearch {
        nbr,
        best_subset: 0,
        best_common: vec![0; words],
        best_value: 0,
        nodes: 0,
    };
    search.expand(0, 0, 0, &full, popcount(&full));

    let mut best_small: Vec<usize> = Vec::new();
    let mut best_large: Vec<usize> = Vec::new();
    if search.best_value > 0 {
        best_small = (0..small).filter(|&s| search.best_subset >> s & 1 == 1).collect();
        best_large = (0..large)
            .filter(|&l| search.best_common[l / 64] >> (l % 64) & 1 == 1)
            .collect();
    }
    let (left, right) = if left_small {
        (best_small, best_large)
    } else {
        (best_large, best_small)
    };
    Ok(OracleResult {
        left: VertexSet::new(m, left)?,
        right: Some(VertexSet::new(n, right)?),
        objective: search.best_value,
        nodes_explored: search.nodes,
    })
}

struct BicliqueSearch {
    nbr: Vec<Vec<u64>>,
    best_subset: u64,
    best_common: Vec<u64>,
    best_value: usize,
    nodes: u64,
}

impl BicliqueSearch {
    /// `subset` has `size` members, all below `next`; `common` is their
    /// common neighborhood with `common_count` members.
    fn expand(&mut self, subset: u64, size: usize, next: usize, common: &[u64], common_count: usize) {
        self.nodes += 1;
        let value = size * common_count;
        if value > self.best_value {
            self.best_value = value;
            self.best_subset = subset;
            self.best_common.copy_from_slice(common);
        }
        let remaining = self.nbr.len() - next;
        // The neighborhood only shrinks as the subset grows.
        if common_count == 0 || (size + remaining) * common_count <= self.best_value {
            return;
        }
        for s in next..self.nbr.len() {
            if (size + self.nbr.len() - s) * common_count <= self.best_value {
                return;
            }
            let inter: Vec<u64> = common.iter().zip(&self.nbr[s]).map(|(a, b)| a & b).collect();
            let count = popcount(&inter);
            self.expand(subset | 1 << s, size + 1, s + 1, &inter, count);
        }
    }
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// Number of singular values above `tol·σ₁`; zero for the zero matrix.
pub fn matrix_rank(a: &DenseMatrix, tol: f64) -> Result<usize> {
    a.check_finite()?;
    let s = a.singular_values()?;
    let top = s.iter().copied().fold(0.0f64, f64::max);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol * top).count())
}
