//! Exact minimum triangle transversal and maximum triangle packing.
//!
//! Both solvers run a budgeted branch-and-bound over the graph's triangle
//! list and return certificates that revalidate independently of the search
//! that produced them. All tie-breaks are by index, so results are
//! deterministic for a given input.

use crate::graph::{enumerate_triangles, Edge, Graph, Triangle, Vertex};
use num::rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Nodes a search may expand before giving up with `BudgetExceeded`.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search exhausted its node budget of {budget}")]
    BudgetExceeded { budget: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("declared size {declared} but {actual} items are listed")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("certificate items are not sorted and distinct")]
    NotCanonical,
    #[error("edge ({0}, {1}) is not an edge of the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("{0} is not a triangle of the graph")]
    NotATriangle(Triangle),
    #[error("{0} has no edge in the transversal")]
    UncoveredTriangle(Triangle),
    #[error("{0} and {1} share an edge")]
    SharedEdge(Triangle, Triangle),
}

/// An edge set meeting every triangle of the graph it was computed for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalCertificate {
    pub size: usize,
    pub edges: Vec<Edge>,
}

impl TransversalCertificate {
    pub fn validate(&self, g: &Graph) -> Result<(), CertificateError> {
        if self.size != self.edges.len() {
            return Err(CertificateError::SizeMismatch {
                declared: self.size,
                actual: self.edges.len(),
            });
        }
        if !self.edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(CertificateError::NotCanonical);
        }
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(CertificateError::MissingEdge(u, v));
            }
        }
        for t in enumerate_triangles(g) {
            let hit = t
                .edges()
                .iter()
                .any(|e| self.edges.binary_search(e).is_ok());
            if !hit {
                return Err(CertificateError::UncoveredTriangle(t));
            }
        }
        Ok(())
    }
}

/// A set of pairwise edge-disjoint triangles of the graph it was computed for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub size: usize,
    pub triangles: Vec<Triangle>,
}

impl PackingCertificate {
    pub fn validate(&self, g: &Graph) -> Result<(), CertificateError> {
        if self.size != self.triangles.len() {
            return Err(CertificateError::SizeMismatch {
                declared: self.size,
                actual: self.triangles.len(),
            });
        }
        if !self.triangles.windows(2).all(|w| w[0] < w[1]) {
            return Err(CertificateError::NotCanonical);
        }
        for t in &self.triangles {
            if !t.edges().iter().all(|&(u, v)| g.has_edge(u, v)) {
                return Err(CertificateError::NotATriangle(*t));
            }
        }
        for (i, a) in self.triangles.iter().enumerate() {
            for b in &self.triangles[i + 1..] {
                if a.shares_edge(b) {
                    return Err(CertificateError::SharedEdge(*a, *b));
                }
            }
        }
        Ok(())
    }
}

/// Exact transversal and packing numbers plus whether `tau <= slope * nu + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub tau: usize,
    pub nu: usize,
    pub holds: bool,
}

pub fn tau_exact(g: &Graph) -> Result<TransversalCertificate, SolveError> {
    tau_exact_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn tau_exact_with_budget(g: &Graph, budget: u64) -> Result<TransversalCertificate, SolveError> {
    let sys = TriangleSystem::build(g);
    let mut search = TauSearch {
        sys: &sys,
        budget,
        nodes: 0,
        best: sys.greedy_transversal(),
    };
    let covered = Bitset::empty(sys.tris.len());
    let forbidden = Bitset::empty(sys.edge_count);
    search.run(Vec::new(), covered, forbidden)?;
    let mut picked = search.best;
    picked.sort_unstable();
    Ok(TransversalCertificate {
        size: picked.len(),
        edges: picked.iter().map(|&e| g.edges()[e]).collect(),
    })
}

pub fn nu_exact(g: &Graph) -> Result<PackingCertificate, SolveError> {
    nu_exact_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn nu_exact_with_budget(g: &Graph, budget: u64) -> Result<PackingCertificate, SolveError> {
    let sys = TriangleSystem::build(g);
    let mut search = NuSearch {
        sys: &sys,
        budget,
        nodes: 0,
        best: sys.greedy_packing(),
    };
    search.run(Vec::new(), Bitset::full(sys.tris.len()))?;
    let mut picked = search.best;
    picked.sort_unstable();
    Ok(PackingCertificate {
        size: picked.len(),
        triangles: picked.iter().map(|&t| sys.tris[t]).collect(),
    })
}

/// Indices of a maximum edge-disjoint subfamily of `tris`, by the same
/// search the packing solver uses. The triangles need not come from a graph.
pub fn max_edge_disjoint(tris: &[Triangle], budget: u64) -> Result<Vec<usize>, SolveError> {
    let sys = TriangleSystem::from_triangles(tris);
    let mut search = NuSearch {
        sys: &sys,
        budget,
        nodes: 0,
        best: sys.greedy_packing(),
    };
    search.run(Vec::new(), Bitset::full(sys.tris.len()))?;
    let mut picked = search.best;
    picked.sort_unstable();
    Ok(picked)
}

/// Indices of an edge-disjoint subfamily found by the cheap route: grow
/// greedily, then apply the one-out-two-in exchange. Maximal, not maximum.
pub fn greedy_edge_disjoint(tris: &[Triangle]) -> Vec<usize> {
    let sys = TriangleSystem::from_triangles(tris);
    let mut picked = sys.greedy_packing();
    picked.sort_unstable();
    picked
}

pub fn check_ratio(
    g: &Graph,
    slope: Ratio<i64>,
    offset: Ratio<i64>,
) -> Result<RatioReport, SolveError> {
    let tau = tau_exact(g)?.size;
    let nu = nu_exact(g)?.size;
    let lhs = Ratio::from_integer(tau as i64);
    let rhs = slope * Ratio::from_integer(nu as i64) + offset;
    Ok(RatioReport {
        tau,
        nu,
        holds: lhs <= rhs,
    })
}

/// Fixed-capacity bitset; all sets in one search share a length.
#[derive(Clone, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    fn empty(len: usize) -> Bitset {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn full(len: usize) -> Bitset {
        let mut bs = Bitset::empty(len);
        for i in 0..len {
            bs.insert(i);
        }
        bs
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersects(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

/// The triangle hypergraph of one input, indexed both ways.
struct TriangleSystem {
    tris: Vec<Triangle>,
    edges: Vec<Edge>,
    edge_count: usize,
    n: usize,
    /// edge indices of each triangle, ascending
    tri_edges: Vec<[usize; 3]>,
    /// triangle indices through each edge, ascending
    edge_tris: Vec<Vec<usize>>,
    /// triangles sharing an edge with each triangle
    conflicts: Vec<Bitset>,
}

impl TriangleSystem {
    fn build(g: &Graph) -> TriangleSystem {
        let tris = enumerate_triangles(g);
        let tri_edges: Vec<[usize; 3]> = tris
            .iter()
            .map(|t| {
                let mut ids = t
                    .edges()
                    .map(|(u, v)| g.edge_index(u, v).expect("triangle edge exists"));
                ids.sort_unstable();
                ids
            })
            .collect();
        Self::index(tris, g.edges().to_vec(), g.n(), tri_edges)
    }

    /// Indexes a bare triangle list over the edges the triangles themselves
    /// mention.
    fn from_triangles(tris: &[Triangle]) -> TriangleSystem {
        let mut edges: Vec<Edge> = tris.iter().flat_map(|t| t.edges()).collect();
        edges.sort_unstable();
        edges.dedup();
        let tri_edges: Vec<[usize; 3]> = tris
            .iter()
            .map(|t| {
                let mut ids = t
                    .edges()
                    .map(|e| edges.binary_search(&e).expect("own edge is indexed"));
                ids.sort_unstable();
                ids
            })
            .collect();
        let n = tris
            .iter()
            .map(|t| t.vertices()[2] as usize + 1)
            .max()
            .unwrap_or(0);
        Self::index(tris.to_vec(), edges, n, tri_edges)
    }

    fn index(
        tris: Vec<Triangle>,
        edges: Vec<Edge>,
        n: usize,
        tri_edges: Vec<[usize; 3]>,
    ) -> TriangleSystem {
        let mut edge_tris = vec![Vec::new(); edges.len()];
        for (i, ids) in tri_edges.iter().enumerate() {
            for &e in ids {
                edge_tris[e].push(i);
            }
        }
        let mut conflicts = vec![Bitset::empty(tris.len()); tris.len()];
        for tl in &edge_tris {
            for (a, &i) in tl.iter().enumerate() {
                for &j in &tl[a + 1..] {
                    conflicts[i].insert(j);
                    conflicts[j].insert(i);
                }
            }
        }
        TriangleSystem {
            tris,
            edge_count: edges.len(),
            edges,
            n,
            tri_edges,
            edge_tris,
            conflicts,
        }
    }

    /// Starting incumbent: repeatedly take the edge meeting the most still
    /// uncovered triangles.
    fn greedy_transversal(&self) -> Vec<usize> {
        let mut covered = Bitset::empty(self.tris.len());
        let mut picked = Vec::new();
        loop {
            let mut best: Option<(usize, usize)> = None;
            for e in 0..self.edge_count {
                let gain = self.edge_tris[e]
                    .iter()
                    .filter(|&&t| !covered.contains(t))
                    .count();
                if gain > 0 && best.map_or(true, |(bg, _)| gain > bg) {
                    best = Some((gain, e));
                }
            }
            match best {
                Some((_, e)) => {
                    picked.push(e);
                    for &t in &self.edge_tris[e] {
                        covered.insert(t);
                    }
                }
                None => return picked,
            }
        }
    }

    /// Starting incumbent: fewest-conflicts-first greedy, then one pass that
    /// trades any one member for two compatible replacements.
    fn greedy_packing(&self) -> Vec<usize> {
        let mut alive = Bitset::full(self.tris.len());
        let mut picked = Vec::new();
        while let Some(t) = pick_fewest_conflicts(self, &alive) {
            picked.push(t);
            alive.remove(t);
            for c in self.conflicts[t].iter() {
                alive.remove(c);
            }
        }
        for slot in 0..picked.len() {
            let out = picked[slot];
            let rest: Vec<usize> = picked
                .iter()
                .copied()
                .filter(|&t| t != out)
                .collect();
            let compatible: Vec<usize> = (0..self.tris.len())
                .filter(|&t| {
                    !rest.contains(&t)
                        && rest.iter().all(|&r| !self.conflicts[r].contains(t))
                })
                .collect();
            let swap = compatible.iter().enumerate().find_map(|(i, &a)| {
                compatible[i + 1..]
                    .iter()
                    .find(|&&b| !self.conflicts[a].contains(b))
                    .map(|&b| (a, b))
            });
            if let Some((a, b)) = swap {
                picked = rest;
                picked.push(a);
                picked.push(b);
            }
        }
        picked
    }
}

fn pick_fewest_conflicts(sys: &TriangleSystem, alive: &Bitset) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for t in alive.iter() {
        let deg = sys.conflicts[t].iter().filter(|&c| alive.contains(c)).count();
        if best.map_or(true, |(bd, _)| deg < bd) {
            best = Some((deg, t));
        }
    }
    best.map(|(_, t)| t)
}

struct TauSearch<'a> {
    sys: &'a TriangleSystem,
    budget: u64,
    nodes: u64,
    best: Vec<usize>,
}

impl TauSearch<'_> {
    fn run(
        &mut self,
        mut chosen: Vec<usize>,
        mut covered: Bitset,
        forbidden: Bitset,
    ) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::BudgetExceeded {
                budget: self.budget,
            });
        }

        // Unit propagation: a triangle whose allowed edges all vanished kills
        // the node; a triangle with exactly one allowed edge forces it.
        loop {
            let mut forced = None;
            for t in 0..self.sys.tris.len() {
                if covered.contains(t) {
                    continue;
                }
                let allowed: Vec<usize> = self.sys.tri_edges[t]
                    .iter()
                    .copied()
                    .filter(|&e| !forbidden.contains(e))
                    .collect();
                match allowed.len() {
                    0 => return Ok(()),
                    1 => {
                        forced = Some(allowed[0]);
                        break;
                    }
                    _ => {}
                }
            }
            match forced {
                Some(e) => {
                    chosen.push(e);
                    for &t in &self.sys.edge_tris[e] {
                        covered.insert(t);
                    }
                }
                None => break,
            }
        }

        let uncovered: Vec<usize> = (0..self.sys.tris.len())
            .filter(|&t| !covered.contains(t))
            .collect();
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen;
            }
            return Ok(());
        }

        // Any edge-disjoint family of uncovered triangles needs that many
        // distinct further edges.
        let mut used = Bitset::empty(self.sys.edge_count);
        let mut disjoint = 0;
        for &t in &uncovered {
            let es = self.sys.tri_edges[t];
            if es.iter().all(|&e| !used.contains(e)) {
                disjoint += 1;
                for e in es {
                    used.insert(e);
                }
            }
        }
        if chosen.len() + disjoint >= self.best.len() {
            return Ok(());
        }

        let uncovered_degree = |e: usize| {
            self.sys.edge_tris[e]
                .iter()
                .filter(|&&t| !covered.contains(t))
                .count()
        };

        // Branch on the triangle holding the single most useful allowed edge.
        let mut pick = uncovered[0];
        let mut pick_score = 0;
        for &t in &uncovered {
            let score = self.sys.tri_edges[t]
                .iter()
                .filter(|&&e| !forbidden.contains(e))
                .map(|&e| uncovered_degree(e))
                .max()
                .unwrap_or(0);
            if score > pick_score {
                pick_score = score;
                pick = t;
            }
        }

        let mut branch_edges: Vec<usize> = self.sys.tri_edges[pick]
            .iter()
            .copied()
            .filter(|&e| !forbidden.contains(e))
            .collect();
        branch_edges.sort_by_key(|&e| (std::cmp::Reverse(uncovered_degree(e)), e));

        // Each branch forbids every earlier branch's edge, so the subtrees
        // are disjoint.
        for (i, &e) in branch_edges.iter().enumerate() {
            let mut child_chosen = chosen.clone();
            child_chosen.push(e);
            let mut child_covered = covered.clone();
            for &t in &self.sys.edge_tris[e] {
                child_covered.insert(t);
            }
            let mut child_forbidden = forbidden.clone();
            for &prev in &branch_edges[..i] {
                child_forbidden.insert(prev);
            }
            self.run(child_chosen, child_covered, child_forbidden)?;
        }
        Ok(())
    }
}

struct NuSearch<'a> {
    sys: &'a TriangleSystem,
    budget: u64,
    nodes: u64,
    best: Vec<usize>,
}

impl NuSearch<'_> {
    fn run(&mut self, mut chosen: Vec<usize>, mut alive: Bitset) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::BudgetExceeded {
                budget: self.budget,
            });
        }

        // A triangle conflicting with nothing alive is always safe to take.
        loop {
            let free = alive
                .iter()
                .find(|&t| !self.sys.conflicts[t].intersects(&alive));
            match free {
                Some(t) => {
                    chosen.push(t);
                    alive.remove(t);
                }
                None => break,
            }
        }

        if chosen.len() + self.packing_cap(&alive) <= self.best.len() {
            return Ok(());
        }

        if alive.is_empty() {
            if chosen.len() > self.best.len() {
                self.best = chosen;
            }
            return Ok(());
        }

        let pick = pick_fewest_conflicts(self.sys, &alive).expect("alive set is nonempty");

        let mut with = chosen.clone();
        with.push(pick);
        let mut alive_with = alive.clone();
        alive_with.remove(pick);
        for c in self.sys.conflicts[pick].iter() {
            alive_with.remove(c);
        }
        self.run(with, alive_with)?;

        alive.remove(pick);
        self.run(chosen, alive)
    }

    /// How many more triangles could possibly still fit.
    fn packing_cap(&self, alive: &Bitset) -> usize {
        let alive_count = alive.count();
        let mut free_edge = Bitset::empty(self.sys.edge_count);
        for t in alive.iter() {
            for e in self.sys.tri_edges[t] {
                free_edge.insert(e);
            }
        }
        let free_edges = free_edge.count();
        let mut deg = vec![0usize; self.sys.n];
        for e in free_edge.iter() {
            let (u, v) = self.sys.edges[e];
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let vertex_cap: usize = deg.iter().map(|d| d / 2).sum::<usize>() / 3;
        alive_count.min(free_edges / 3).min(vertex_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_tiny_graphs() {
        let g = Graph::new(0, []).unwrap();
        assert_eq!(tau_exact(&g).unwrap().size, 0);
        assert_eq!(nu_exact(&g).unwrap().size, 0);

        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tau_exact(&g).unwrap().size, 1);
        assert_eq!(nu_exact(&g).unwrap().size, 1);
    }

    #[test]
    fn two_disjoint_triangles() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let t = tau_exact(&g).unwrap();
        let p = nu_exact(&g).unwrap();
        assert_eq!(t.size, 2);
        assert_eq!(p.size, 2);
        t.validate(&g).unwrap();
        p.validate(&g).unwrap();
    }

    #[test]
    fn bowtie_shares_a_vertex_not_an_edge() {
        // two triangles glued at vertex 2
        let g = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(tau_exact(&g).unwrap().size, 2);
        assert_eq!(nu_exact(&g).unwrap().size, 2);
    }

    #[test]
    fn certificate_validation_rejects_tampering() {
        let g = Graph::complete(4);
        let mut t = tau_exact(&g).unwrap();
        t.edges.pop();
        t.size -= 1;
        assert!(matches!(
            t.validate(&g),
            Err(CertificateError::UncoveredTriangle(_))
        ));

        let mut p = nu_exact(&g).unwrap();
        p.triangles.push(Triangle::new(0, 1, 2).unwrap());
        p.size += 1;
        let err = p.validate(&g).unwrap_err();
        assert!(matches!(
            err,
            CertificateError::SharedEdge(_, _) | CertificateError::NotCanonical
        ));
    }

    #[test]
    fn ratio_failure_is_reported_not_panicked() {
        let g = Graph::complete(4);
        let r = check_ratio(&g, Ratio::from_integer(1), Ratio::from_integer(0)).unwrap();
        assert_eq!((r.tau, r.nu, r.holds), (2, 1, false));
    }
}
