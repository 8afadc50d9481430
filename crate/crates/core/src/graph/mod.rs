//! Undirected and bipartite graphs, planted vertex sets, and the degree
//! statistics the certificate and generator modules consume.
//!
//! Vertices are 0-based. Self-loops are never stored: the clique relaxation
//! treats the diagonal as always allowed, and that convention lives in the
//! solver and certificate code.

mod format;

pub use format::{read_instance, write_instance, FORMAT_HEADER};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use serde::Serialize;

/// Row-major bit matrix used for O(1) adjacency queries.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRows {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self {
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words_per_row + c / 64] |= 1u64 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }
}

/// Undirected simple graph on `0..num_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adj: BitRows,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs are normalized to `(i, j)`
    /// with `i < j`; repeated pairs collapse to one edge.
    pub fn new(num_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= num_vertices {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        bound: num_vertices,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidParameter(format!(
                    "self-loop on vertex {a} is not representable"
                )));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = BitRows::new(num_vertices, num_vertices);
        for &(i, j) in &list {
            adj.set(i, j);
            adj.set(j, i);
        }
        Ok(Self {
            num_vertices,
            edges: list,
            adj,
        })
    }

    pub fn empty(num_vertices: usize) -> Self {
        Self::new(num_vertices, std::iter::empty()).expect("empty edge list is valid")
    }

    pub fn complete(num_vertices: usize) -> Self {
        let edges = (0..num_vertices).flat_map(|i| (i + 1..num_vertices).map(move |j| (i, j)));
        Self::new(num_vertices, edges).expect("complete graph edges are in range")
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Adjacency query; `has_edge(i, i)` is always false.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.num_vertices && j < self.num_vertices && self.adj.get(i, j)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices).filter(move |&j| self.adj.get(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Dense 0/1 adjacency matrix with a zero diagonal.
    pub fn adjacency_matrix(&self) -> DenseMatrix {
        let n = self.num_vertices;
        let mut a = DenseMatrix::zeros(n, n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// Reads a symmetric 0/1 matrix back into a graph. The diagonal is ignored.
    pub fn from_adjacency(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "adjacency matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (a[(i, j)], a[(j, i)]);
                if x != y {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency matrix not symmetric at ({i}, {j})"
                    )));
                }
                match x {
                    v if v == 1.0 => edges.push((i, j)),
                    v if v == 0.0 => {}
                    v => {
                        return Err(Error::InvalidParameter(format!(
                            "adjacency entry ({i}, {j}) = {v} is not 0/1"
                        )))
                    }
                }
            }
        }
        Self::new(n, edges)
    }
}

/// Bipartite graph with left side `0..left_count` and right side `0..right_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    edges: Vec<(usize, usize)>,
    adj: BitRows,
}

impl BipartiteGraph {
    pub fn new(
        left_count: usize,
        right_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= left_count {
                return Err(Error::IndexOutOfRange {
                    index: u,
                    bound: left_count,
                });
            }
            if v >= right_count {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    bound: right_count,
                });
            }
            list.push((u, v));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = BitRows::new(left_count, right_count);
        for &(u, v) in &list {
            adj.set(u, v);
        }
        Ok(Self {
            left_count,
            right_count,
            edges: list,
            adj,
        })
    }

    pub fn complete(left_count: usize, right_count: usize) -> Self {
        let edges = (0..left_count).flat_map(|u| (0..right_count).map(move |v| (u, v)));
        Self::new(left_count, right_count, edges).expect("complete bipartite edges are in range")
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.left_count && v < self.right_count && self.adj.get(u, v)
    }

    /// Dense `left_count x right_count` biadjacency matrix.
    pub fn biadjacency_matrix(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.left_count, self.right_count);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
        }
        a
    }

    pub fn from_biadjacency(a: &DenseMatrix) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..a.rows() {
            for v in 0..a.cols() {
                match a[(u, v)] {
                    x if x == 1.0 => edges.push((u, v)),
                    x if x == 0.0 => {}
                    x => {
                        return Err(Error::InvalidParameter(format!(
                            "biadjacency entry ({u}, {v}) = {x} is not 0/1"
                        )))
                    }
                }
            }
        }
        Self::new(a.rows(), a.cols(), edges)
    }
}

/// A sorted set of vertex indices inside a universe of known size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
    #[serde(skip)]
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= universe) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                bound: universe,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members, universe })
    }

    /// `{0, 1, ..., k-1}` inside `0..universe`.
    pub fn prefix(universe: usize, k: usize) -> Result<Self> {
        if k > universe {
            return Err(Error::InvalidParameter(format!(
                "planted size {k} exceeds vertex count {universe}"
            )));
        }
        Ok(Self {
            members: (0..k).collect(),
            universe,
        })
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            members: Vec::new(),
            universe,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// 0/1 indicator vector of length `universe`.
    pub fn characteristic_vector(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.universe];
        for &v in &self.members {
            x[v] = 1.0;
        }
        x
    }

    /// Boolean membership mask of length `universe`.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.universe];
        for &v in &self.members {
            m[v] = true;
        }
        m
    }
}

/// Generation parameters carried along with an instance. Fields not used by
/// a given model stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GenerationParams {
    pub p: Option<f64>,
    pub r: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceGraph {
    Clique(Graph),
    Biclique(BipartiteGraph),
}

/// A graph together with its planted clique (left set only) or planted
/// biclique (left and right sets).
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: InstanceGraph,
    pub planted_left: VertexSet,
    pub planted_right: Option<VertexSet>,
    pub params: GenerationParams,
}

impl PlantedInstance {
    pub fn clique(graph: Graph, planted: VertexSet, params: GenerationParams) -> Result<Self> {
        if planted.universe() != graph.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "planted set universe {} vs graph order {}",
                planted.universe(),
                graph.num_vertices()
            )));
        }
        if !is_clique(&graph, &planted) {
            return Err(Error::InvalidParameter(
                "planted vertex set does not induce a clique".into(),
            ));
        }
        Ok(Self {
            graph: InstanceGraph::Clique(graph),
            planted_left: planted,
            planted_right: None,
            params,
        })
    }

    pub fn biclique(
        graph: BipartiteGraph,
        left: VertexSet,
        right: VertexSet,
        params: GenerationParams,
    ) -> Result<Self> {
        if left.universe() != graph.left_count() || right.universe() != graph.right_count() {
            return Err(Error::DimensionMismatch(
                "planted set universes do not match the bipartite sides".into(),
            ));
        }
        if !is_biclique(&graph, &left, &right) {
            return Err(Error::InvalidParameter(
                "planted vertex sets do not induce a biclique".into(),
            ));
        }
        Ok(Self {
            graph: InstanceGraph::Biclique(graph),
            planted_left: left,
            planted_right: Some(right),
            params,
        })
    }

    pub fn as_clique(&self) -> Option<(&Graph, &VertexSet)> {
        match &self.graph {
            InstanceGraph::Clique(g) => Some((g, &self.planted_left)),
            InstanceGraph::Biclique(_) => None,
        }
    }

    pub fn as_biclique(&self) -> Option<(&BipartiteGraph, &VertexSet, &VertexSet)> {
        match (&self.graph, &self.planted_right) {
            (InstanceGraph::Biclique(g), Some(right)) => Some((g, &self.planted_left, right)),
            _ => None,
        }
    }
}

/// Number of planted vertices adjacent to `j` (the `p_j` statistic).
pub fn clique_degree_to_planted(g: &Graph, vstar: &VertexSet, j: usize) -> Result<usize> {
    if j >= g.num_vertices() {
        return Err(Error::IndexOutOfRange {
            index: j,
            bound: g.num_vertices(),
        });
    }
    Ok(vstar.members().iter().filter(|&&i| g.has_edge(i, j)).count())
}

/// Cross-degree statistics of a bipartite graph relative to a planted pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicliqueDegrees {
    /// `p[i]`: edges from left vertex `i` into `V*` (all left vertices).
    pub p: Vec<usize>,
    /// `q[j]`: edges from right vertex `j` into `U*` (all right vertices).
    pub q: Vec<usize>,
}

/// Computes `p_i` and `q_j` for every vertex. Only entries for vertices
/// outside the planted sets are used by the certificate; planted entries
/// are filled in for completeness.
pub fn biclique_degrees(
    g: &BipartiteGraph,
    ustar: &VertexSet,
    vstar: &VertexSet,
) -> Result<BicliqueDegrees> {
    if ustar.universe() != g.left_count() || vstar.universe() != g.right_count() {
        return Err(Error::DimensionMismatch(
            "planted set universes do not match the bipartite sides".into(),
        ));
    }
    let p = (0..g.left_count())
        .map(|i| vstar.members().iter().filter(|&&j| g.has_edge(i, j)).count())
        .collect();
    let q = (0..g.right_count())
        .map(|j| ustar.members().iter().filter(|&&i| g.has_edge(i, j)).count())
        .collect();
    Ok(BicliqueDegrees { p, q })
}

/// True iff every pair of distinct members is adjacent.
pub fn is_clique(g: &Graph, s: &VertexSet) -> bool {
    let m = s.members();
    m.iter().all(|&v| v < g.num_vertices())
        && m.iter()
            .enumerate()
            .all(|(k, &i)| m[k + 1..].iter().all(|&j| g.has_edge(i, j)))
}

/// True iff every left member is adjacent to every right member.
pub fn is_biclique(g: &BipartiteGraph, su: &VertexSet, sv: &VertexSet) -> bool {
    su.members()
        .iter()
        .all(|&i| sv.members().iter().all(|&j| g.has_edge(i, j)))
}
