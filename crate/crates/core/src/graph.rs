//! Simple undirected graphs on vertices `0..n`, with the triangle-oriented
//! queries everything else is built on.
//!
//! Edges are stored canonically (each pair `(u, v)` with `u < v`, pairs
//! lexicographically sorted) so two equal graphs serialize identically.
//! Adjacency uses one `u64` mask per vertex while `n <= 64` and sorted
//! neighbor lists beyond; the two paths answer every query identically.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

/// Canonical edge: `.0 < .1`.
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("({0}, {1}) is not an edge of the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("triangle vertices must be pairwise distinct, got {0}, {1}, {2}")]
    DegenerateTriangle(Vertex, Vertex, Vertex),
}

/// Orders an endpoint pair canonically. Panics on a self-loop only via the
/// callers that validate; this helper itself just swaps.
#[inline]
pub fn ordered(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Adjacency {
    /// One bitmask per vertex; valid only for n <= 64.
    Dense(Vec<u64>),
    /// Sorted neighbor list per vertex.
    Sparse(Vec<Vec<Vertex>>),
}

/// An immutable simple graph. All operations are pure queries, so sharing a
/// `Graph` across threads is safe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Adjacency,
}

impl Graph {
    /// Builds a graph from an unordered edge list. Pairs may come in either
    /// orientation; loops, duplicates, and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut canon: Vec<Edge> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for x in [a, b] {
                if (x as usize) >= n {
                    return Err(GraphError::VertexOutOfRange(x, n));
                }
            }
            canon.push(ordered(a, b));
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let adj = if n <= 64 {
            let mut masks = vec![0u64; n];
            for &(u, v) in &canon {
                masks[u as usize] |= 1 << v;
                masks[v as usize] |= 1 << u;
            }
            Adjacency::Dense(masks)
        } else {
            let mut lists = vec![Vec::new(); n];
            for &(u, v) in &canon {
                lists[u as usize].push(v);
                lists[v as usize].push(u);
            }
            for l in &mut lists {
                l.sort_unstable();
            }
            Adjacency::Sparse(lists)
        };
        Ok(Graph { n, edges: canon, adj })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n as Vertex {
            for v in (u + 1)..n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::new(n, edges).expect("complete graph is always well-formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonically sorted edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || (u as usize) >= self.n || (v as usize) >= self.n {
            return false;
        }
        match &self.adj {
            Adjacency::Dense(masks) => masks[u as usize] >> v & 1 == 1,
            Adjacency::Sparse(lists) => lists[u as usize].binary_search(&v).is_ok(),
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        assert!((v as usize) < self.n, "vertex {v} out of range");
        match &self.adj {
            Adjacency::Dense(masks) => masks[v as usize].count_ones() as usize,
            Adjacency::Sparse(lists) => lists[v as usize].len(),
        }
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        assert!((v as usize) < self.n, "vertex {v} out of range");
        match &self.adj {
            Adjacency::Dense(masks) => bits(masks[v as usize]),
            Adjacency::Sparse(lists) => lists[v as usize].clone(),
        }
    }

    /// Common neighbors of `u` and `v` in ascending order.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        match &self.adj {
            Adjacency::Dense(masks) => bits(masks[u as usize] & masks[v as usize]),
            Adjacency::Sparse(lists) => {
                let (a, b) = (&lists[u as usize], &lists[v as usize]);
                let mut out = Vec::new();
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            out.push(a[i]);
                            i += 1;
                            j += 1;
                        }
                    }
                }
                out
            }
        }
    }

    /// Position of a canonical edge in `edges()`, if present.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&ordered(u, v)).ok()
    }

    /// The same graph minus the given edges. Edges absent from the graph are
    /// ignored. Vertex set unchanged.
    pub fn without_edges<'a>(&self, remove: impl IntoIterator<Item = &'a Edge>) -> Graph {
        let mut gone: Vec<Edge> = remove.into_iter().map(|&(u, v)| ordered(u, v)).collect();
        gone.sort_unstable();
        let kept = self
            .edges
            .iter()
            .copied()
            .filter(|e| gone.binary_search(e).is_err())
            .collect::<Vec<_>>();
        Graph::new(self.n, kept).expect("edge removal preserves well-formedness")
    }

    /// Induced subgraph on the `keep`-marked vertices, relabeled to
    /// `0..keep_count` preserving order. Returns the subgraph together with
    /// the old id of each new vertex.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, Vec<Vertex>) {
        assert_eq!(keep.len(), self.n, "keep mask must cover every vertex");
        let old_ids: Vec<Vertex> = (0..self.n as Vertex).filter(|&v| keep[v as usize]).collect();
        let mut new_id = vec![u32::MAX; self.n];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v as usize] = i as Vertex;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u as usize] && keep[v as usize])
            .map(|&(u, v)| (new_id[u as usize], new_id[v as usize]))
            .collect::<Vec<_>>();
        let g = Graph::new(old_ids.len(), edges).expect("induced subgraph is well-formed");
        (g, old_ids)
    }

    /// Induced subgraph keeping everything except `drop`.
    pub fn without_vertices(&self, drop: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut keep = vec![true; self.n];
        for &v in drop {
            assert!((v as usize) < self.n, "vertex {v} out of range");
            keep[v as usize] = false;
        }
        self.induced_subgraph(&keep)
    }
}

fn bits(mut mask: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let v = mask.trailing_zeros();
        out.push(v);
        mask &= mask - 1;
    }
    out
}

/// A triangle as a strictly increasing vertex triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Vertex; 3]", into = "[Vertex; 3]")]
pub struct Triangle([Vertex; 3]);

impl Triangle {
    /// Sorts the triple; rejects repeated vertices. Does not check edge
    /// membership, see [`Triangle::of`] for the graph-checked constructor.
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Result<Triangle, GraphError> {
        let mut t = [a, b, c];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(GraphError::DegenerateTriangle(a, b, c));
        }
        Ok(Triangle(t))
    }

    /// Checked constructor: all three pairwise edges must be present in `g`.
    pub fn of(g: &Graph, a: Vertex, b: Vertex, c: Vertex) -> Result<Triangle, GraphError> {
        let t = Triangle::new(a, b, c)?;
        for (u, v) in t.edges() {
            if !g.has_edge(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
        }
        Ok(t)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges().contains(&ordered(u, v))
    }

    pub fn shares_edge(&self, other: &Triangle) -> bool {
        self.edges().iter().any(|&(u, v)| other.contains_edge(u, v))
    }
}

impl TryFrom<[Vertex; 3]> for Triangle {
    type Error = GraphError;
    fn try_from(t: [Vertex; 3]) -> Result<Self, Self::Error> {
        Triangle::new(t[0], t[1], t[2])
    }
}

impl From<Triangle> for [Vertex; 3] {
    fn from(t: Triangle) -> Self {
        t.0
    }
}

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}, {}, {}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Every vertex triple inducing a K3, sorted lexicographically.
///
/// Each triangle u < v < w is reported once, at its edge (u, v).
pub fn enumerate_triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        for w in g.common_neighbors(u, v) {
            if w > v {
                out.push(Triangle([u, v, w]));
            }
        }
    }
    out
}

/// Connected components of the subgraph induced on N(v), each sorted, listed
/// by smallest member.
pub fn neighborhood_components(g: &Graph, v: Vertex) -> Vec<Vec<Vertex>> {
    let nbrs = g.neighbors(v);
    let mut seen: Vec<bool> = vec![false; nbrs.len()];
    let mut comps = Vec::new();
    for start in 0..nbrs.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![nbrs[start]];
        let mut queue = vec![nbrs[start]];
        seen[start] = true;
        while let Some(x) = queue.pop() {
            for (j, &y) in nbrs.iter().enumerate() {
                if !seen[j] && g.has_edge(x, y) {
                    seen[j] = true;
                    comp.push(y);
                    queue.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// True iff every component of every vertex's neighborhood subgraph has at
/// least 5 vertices. An isolated vertex has no neighborhood components and
/// passes vacuously.
pub fn is_robust(g: &Graph) -> bool {
    (0..g.n() as Vertex).all(|v| neighborhood_components(g, v).iter().all(|c| c.len() >= 5))
}

/// 2|E|/n as an exact rational.
pub fn average_degree(g: &Graph) -> Result<Ratio<i64>, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::NoVertices);
    }
    Ok(Ratio::new(2 * g.edge_count() as i64, g.n() as i64))
}
