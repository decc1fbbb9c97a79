//! Reducing triples. A triple names a core vertex set, an edge set X whose
//! removal kills every triangle through the core, and an edge-disjoint
//! triangle family Y that pays for X two-to-one. Deleting X and the core
//! then costs at most |X| transversal edges while freeing at least |Y|
//! packing triangles, so the factor-two bound transfers from the remainder
//! to the whole graph.
//!
//! This module verifies triples, applies the deletion they license, builds
//! the explicit configurations for small dense neighborhoods, and runs a
//! bounded search for a triple on an arbitrary host.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{enumerate_triangles, Edge, Graph, Triangle, Vertex};
use crate::solve::{greedy_edge_disjoint, max_edge_disjoint};

fn ordered(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Core vertices, deletable edges, and the packing that pays for them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducingTriple {
    pub v0: Vec<Vertex>,
    pub x: Vec<Edge>,
    pub y: Vec<Triangle>,
}

impl ReducingTriple {
    /// Normalizes: sorts each component, dedups, orients edges low-high.
    /// An empty core is representable here and rejected at verify time.
    pub fn new(
        v0: impl IntoIterator<Item = Vertex>,
        x: impl IntoIterator<Item = Edge>,
        y: impl IntoIterator<Item = Triangle>,
    ) -> ReducingTriple {
        let mut v0: Vec<Vertex> = v0.into_iter().collect();
        v0.sort_unstable();
        v0.dedup();
        let mut x: Vec<Edge> = x.into_iter().map(|(u, v)| ordered(u, v)).collect();
        x.sort_unstable();
        x.dedup();
        let mut y: Vec<Triangle> = y.into_iter().collect();
        y.sort_unstable();
        y.dedup();
        ReducingTriple { v0, x, y }
    }
}

/// Which defining condition a triple broke, in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailedCondition {
    /// more deletable edges than twice the packing size
    #[serde(rename = "i")]
    SizeBound,
    /// some triangle through the core avoids every chosen edge
    #[serde(rename = "ii")]
    CoreCoverage,
    /// a packed triangle has an edge outside both the core and X
    #[serde(rename = "iii")]
    PackedEdgeEscapes,
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailedCondition::SizeBound => "i",
            FailedCondition::CoreCoverage => "ii",
            FailedCondition::PackedEdgeEscapes => "iii",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub failed_condition: Option<FailedCondition>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("core vertex set is empty")]
    EmptyCore,
    #[error("vertex {0} is not in the graph")]
    VertexNotInGraph(Vertex),
    #[error("edge {0}-{1} is not in the graph")]
    EdgeNotInGraph(Vertex, Vertex),
    #[error("{0} is not a triangle of the graph")]
    TriangleNotInGraph(Triangle),
    #[error("packed triangles {0} and {1} share an edge")]
    PackingSharesEdge(Triangle, Triangle),
    #[error("triple breaks condition {0}, reduction refused")]
    InvalidTriple(FailedCondition),
}

/// Checks the three defining conditions after validating that every field
/// refers to the graph. Reports the first broken condition only.
pub fn verify_reducing_triple(
    g: &Graph,
    t: &ReducingTriple,
) -> Result<VerifyReport, ReductionError> {
    if t.v0.is_empty() {
        return Err(ReductionError::EmptyCore);
    }
    for &v in &t.v0 {
        if (v as usize) >= g.n() {
            return Err(ReductionError::VertexNotInGraph(v));
        }
    }
    for &(u, v) in &t.x {
        if !g.has_edge(u, v) {
            return Err(ReductionError::EdgeNotInGraph(u, v));
        }
    }
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    for (i, tri) in t.y.iter().enumerate() {
        if tri.edges().iter().any(|&(u, v)| !g.has_edge(u, v)) {
            return Err(ReductionError::TriangleNotInGraph(*tri));
        }
        for e in tri.edges() {
            if !used.insert(e) {
                let holder = t.y[..i]
                    .iter()
                    .find(|s| s.contains_edge(e.0, e.1))
                    .copied()
                    .unwrap_or(*tri);
                return Err(ReductionError::PackingSharesEdge(holder, *tri));
            }
        }
    }

    // normalized copies so membership tests work on any field order
    let mut core = t.v0.clone();
    core.sort_unstable();
    core.dedup();
    let mut x: Vec<Edge> = t.x.iter().map(|&(u, v)| ordered(u, v)).collect();
    x.sort_unstable();
    x.dedup();
    let in_core = |v: Vertex| core.binary_search(&v).is_ok();
    let in_x = |e: Edge| x.binary_search(&e).is_ok();

    let failed = if x.len() > 2 * t.y.len() {
        Some(FailedCondition::SizeBound)
    } else if enumerate_triangles(g).iter().any(|tri| {
        tri.vertices().iter().any(|&v| in_core(v)) && !tri.edges().iter().any(|&e| in_x(e))
    }) {
        Some(FailedCondition::CoreCoverage)
    } else if t.y.iter().any(|tri| {
        tri.edges()
            .iter()
            .any(|&(u, v)| !in_core(u) && !in_core(v) && !in_x((u, v)))
    }) {
        Some(FailedCondition::PackedEdgeEscapes)
    } else {
        None
    };
    Ok(VerifyReport {
        valid: failed.is_none(),
        failed_condition: failed,
    })
}

/// Deletes X, then the core vertices. Refuses invalid triples.
pub fn apply_reduction(g: &Graph, t: &ReducingTriple) -> Result<Graph, ReductionError> {
    let report = verify_reducing_triple(g, t)?;
    if let Some(condition) = report.failed_condition {
        return Err(ReductionError::InvalidTriple(condition));
    }
    let trimmed = g.without_edges(&t.x);
    let (reduced, _) = trimmed.without_vertices(&t.v0);
    Ok(reduced)
}

fn triangles(list: impl IntoIterator<Item = (Vertex, Vertex, Vertex)>) -> Vec<Triangle> {
    list.into_iter()
        .map(|(a, b, c)| Triangle::new(a, b, c).expect("fixed triangle list"))
        .collect()
}

/// An inner 7-clique with three outer vertices, each tied to five clique
/// vertices. The whole clique is the core, its 21 edges are X, and Y packs
/// six outer triangles plus five inner ones, using every clique edge once.
pub fn k7_satellite_config() -> (Graph, ReducingTriple) {
    let mut edges: Vec<Edge> = Vec::new();
    for u in 0..7 {
        for v in u + 1..7 {
            edges.push((u, v));
        }
    }
    let satellites: [(Vertex, [Vertex; 5]); 3] =
        [(7, [0, 1, 2, 3, 4]), (8, [2, 3, 4, 5, 6]), (9, [0, 1, 2, 5, 6])];
    for (z, hooks) in satellites {
        for u in hooks {
            edges.push((u, z));
        }
    }
    let g = Graph::new(10, edges).expect("fixed edge list");
    let x: Vec<Edge> = g.edges().iter().copied().filter(|&(_, v)| v < 7).collect();
    let y = triangles([
        (0, 3, 7),
        (1, 4, 7),
        (2, 3, 8),
        (4, 5, 8),
        (0, 5, 9),
        (1, 2, 9),
        (0, 1, 6),
        (1, 3, 5),
        (2, 5, 6),
        (3, 4, 6),
        (0, 2, 4),
    ]);
    (g, ReducingTriple::new(0..7, x, y))
}

/// The host shapes for a pair of adjacent-or-overlapping low-degree
/// vertices, keyed by the degrees of the pair and how many neighbors they
/// share. Vertex 0 and vertex 1 are the pair in every case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeSixPairCase {
    Deg66Overlap6,
    Deg66Overlap5,
    Deg65Overlap4,
    Deg55Overlap4,
    Deg55Overlap3GapShared,
    Deg55Overlap3GapPrivate,
    Deg55Overlap3GapCross,
}

/// Builds the named host graph and its reducing triple with core {0, 1}.
/// Some host edges are immaterial to the triple; they are left out unless
/// `include_optional_edges` is set, and the triple verifies either way.
pub fn degree_six_pair_config(
    case: DegreeSixPairCase,
    include_optional_edges: bool,
) -> (Graph, ReducingTriple) {
    fn spokes(v: Vertex, lo: Vertex, hi: Vertex, edges: &mut Vec<Edge>) {
        for u in lo..=hi {
            edges.push((v, u));
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let (n, optional, x_seed, x_lo, x_hi, y): (
        usize,
        Vec<Edge>,
        Vec<Edge>,
        Vertex,
        Vertex,
        Vec<Triangle>,
    ) = match case {
        DegreeSixPairCase::Deg66Overlap6 => {
            spokes(0, 2, 7, &mut edges);
            spokes(1, 2, 7, &mut edges);
            let optional = vec![(2, 5), (3, 6), (4, 7)];
            for u in 2..8 {
                for v in u + 1..8 {
                    if !optional.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            let y = triangles([
                (2, 4, 6),
                (3, 5, 7),
                (0, 2, 3),
                (1, 3, 4),
                (0, 4, 5),
                (1, 5, 6),
                (0, 6, 7),
                (1, 2, 7),
            ]);
            (8, optional, vec![], 2, 7, y)
        }
        DegreeSixPairCase::Deg66Overlap5 => {
            spokes(0, 2, 7, &mut edges);
            spokes(1, 3, 8, &mut edges);
            let optional = vec![(2, 5), (3, 6), (4, 7), (5, 8), (6, 8)];
            for u in 2..8 {
                for v in u + 1..8 {
                    if !optional.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            edges.extend([(3, 8), (4, 8), (7, 8)]);
            let y = triangles([
                (3, 5, 7),
                (0, 2, 3),
                (1, 3, 4),
                (0, 4, 5),
                (1, 5, 6),
                (0, 6, 7),
                (1, 7, 8),
            ]);
            (9, optional, vec![(0, 2), (2, 3), (1, 8), (7, 8)], 3, 7, y)
        }
        DegreeSixPairCase::Deg65Overlap4 => {
            spokes(0, 2, 7, &mut edges);
            spokes(1, 4, 8, &mut edges);
            let optional = vec![(2, 3), (3, 5), (2, 6), (6, 8)];
            for u in 4..8 {
                for v in u + 1..8 {
                    edges.push((u, v));
                }
            }
            edges.extend([(2, 4), (2, 5), (2, 7), (3, 4), (3, 6), (3, 7)]);
            edges.extend([(4, 8), (5, 8), (7, 8)]);
            let y = triangles([
                (0, 4, 7),
                (1, 4, 8),
                (1, 6, 7),
                (5, 7, 8),
                (4, 5, 6),
                (0, 2, 5),
                (0, 3, 6),
            ]);
            (9, optional, vec![(0, 2), (0, 3), (2, 5), (3, 6)], 4, 8, y)
        }
        DegreeSixPairCase::Deg55Overlap4 => {
            spokes(0, 2, 6, &mut edges);
            spokes(1, 3, 7, &mut edges);
            for u in 3..7 {
                for v in u + 1..7 {
                    edges.push((u, v));
                }
            }
            let y = triangles([(0, 3, 6), (0, 4, 5), (1, 3, 4), (1, 5, 6)]);
            (8, vec![], vec![(0, 2), (1, 7)], 3, 6, y)
        }
        DegreeSixPairCase::Deg55Overlap3GapShared => {
            spokes(0, 2, 6, &mut edges);
            spokes(1, 4, 8, &mut edges);
            edges.extend([
                (3, 4),
                (3, 5),
                (4, 5),
                (5, 6),
                (5, 7),
                (6, 7),
                (3, 6),
                (2, 4),
                (4, 7),
                (6, 8),
            ]);
            let y = triangles([
                (3, 4, 5),
                (5, 6, 7),
                (0, 2, 4),
                (0, 3, 6),
                (1, 4, 7),
                (1, 6, 8),
            ]);
            (9, vec![], vec![(0, 2), (1, 8)], 2, 8, y)
        }
        DegreeSixPairCase::Deg55Overlap3GapPrivate => {
            spokes(0, 2, 6, &mut edges);
            spokes(1, 4, 8, &mut edges);
            for u in 4..9 {
                for v in u + 1..9 {
                    if (u, v) != (7, 8) {
                        edges.push((u, v));
                    }
                }
            }
            edges.push((3, 5));
            let optional = vec![(2, 3), (2, 4), (2, 5)];
            let y = triangles([
                (0, 4, 6),
                (0, 3, 5),
                (1, 4, 8),
                (4, 5, 7),
                (1, 6, 7),
                (5, 6, 8),
            ]);
            (9, optional, vec![(0, 2), (0, 3), (3, 5)], 4, 8, y)
        }
        DegreeSixPairCase::Deg55Overlap3GapCross => {
            spokes(0, 2, 6, &mut edges);
            spokes(1, 4, 8, &mut edges);
            for u in 4..9 {
                for v in u + 1..9 {
                    if (u, v) != (5, 8) {
                        edges.push((u, v));
                    }
                }
            }
            edges.push((3, 5));
            let optional = vec![(2, 3), (2, 4), (2, 5)];
            let y = triangles([
                (0, 4, 6),
                (0, 3, 5),
                (1, 4, 8),
                (4, 5, 7),
                (1, 5, 6),
                (6, 7, 8),
            ]);
            (9, optional, vec![(0, 2), (0, 3), (3, 5)], 4, 8, y)
        }
    };
    if include_optional_edges {
        edges.extend(optional);
    }
    let g = Graph::new(n, edges).expect("fixed edge list");
    // X is the case's seed edges plus everything the graph induces on the
    // window [x_lo, x_hi]; optional edges inside the window join X too
    let mut x = x_seed;
    x.extend(
        g.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| u >= x_lo && v <= x_hi),
    );
    (g, ReducingTriple::new([0, 1], x, y))
}

/// What the bounded triple hunt reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ReducingTriple),
    /// Every candidate in the bounded family was tried and none verified.
    /// Says nothing about triples outside the family.
    NoneFoundExhausted,
    /// The node budget ran out, or some per-core candidate list was
    /// truncated, before the family was covered.
    NoneFoundBudget,
}

const COVER_CAP_PER_CORE: usize = 50;
const PACKING_NODE_BUDGET: u64 = 100_000;

/// Hunts for a valid triple with at most `max_core` core vertices. Cores
/// are tried smallest first, then lexicographically; per core the edge set
/// candidates are a few induced-neighborhood shapes followed by minimal
/// covers of the core's triangles (each also retried with the outside edges
/// of spoke-paid triangles added). The packing side is greedy with a local
/// exchange, escalating to the exact solver when the greedy answer is close
/// but short. First find wins, so the result is deterministic.
pub fn search_reducing_triple(g: &Graph, max_core: usize, budget: u64) -> SearchOutcome {
    let mut hunt = Hunt {
        g,
        tris: enumerate_triangles(g),
        budget,
        truncated: false,
    };
    for size in 1..=max_core.min(g.n()) {
        let mut core: Vec<Vertex> = (0..size as Vertex).collect();
        loop {
            match hunt.try_core(&core) {
                Ok(Some(t)) => return SearchOutcome::Found(t),
                Ok(None) => {}
                Err(Starved) => return SearchOutcome::NoneFoundBudget,
            }
            if !next_combination(&mut core, g.n()) {
                break;
            }
        }
    }
    if hunt.truncated {
        SearchOutcome::NoneFoundBudget
    } else {
        SearchOutcome::NoneFoundExhausted
    }
}

struct Starved;

struct Hunt<'a> {
    g: &'a Graph,
    tris: Vec<Triangle>,
    budget: u64,
    truncated: bool,
}

impl Hunt<'_> {
    fn spend(&mut self) -> Result<(), Starved> {
        if self.budget == 0 {
            return Err(Starved);
        }
        self.budget -= 1;
        Ok(())
    }

    fn induced_edges(&self, sorted_verts: &[Vertex]) -> Vec<Edge> {
        self.g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| {
                sorted_verts.binary_search(&u).is_ok() && sorted_verts.binary_search(&v).is_ok()
            })
            .collect()
    }

    fn try_core(&mut self, core: &[Vertex]) -> Result<Option<ReducingTriple>, Starved> {
        let meeting: Vec<Triangle> = self
            .tris
            .iter()
            .filter(|t| core.iter().any(|&v| t.contains_vertex(v)))
            .copied()
            .collect();
        let mut hood: Vec<Vertex> = core.to_vec();
        for &v in core {
            hood.extend(self.g.neighbors(v));
        }
        hood.sort_unstable();
        hood.dedup();
        let ring: Vec<Vertex> = hood
            .iter()
            .copied()
            .filter(|v| core.binary_search(v).is_err())
            .collect();
        let ring_edges = self.induced_edges(&ring);
        let mut with_core = self.induced_edges(core);
        with_core.extend(ring_edges.iter().copied());
        with_core.sort_unstable();
        let hood_edges = self.induced_edges(&hood);

        let mut seen: BTreeSet<Vec<Edge>> = BTreeSet::new();
        for cand in [Vec::new(), ring_edges, with_core, hood_edges] {
            if !seen.insert(cand.clone()) {
                continue;
            }
            self.spend()?;
            if let Some(t) = self.evaluate(core, &meeting, &cand) {
                return Ok(Some(t));
            }
        }

        let mut chosen = Vec::new();
        let mut forbidden = Vec::new();
        let mut covers_left = COVER_CAP_PER_CORE;
        self.enumerate_covers(
            core,
            &meeting,
            &mut chosen,
            &mut forbidden,
            &mut seen,
            &mut covers_left,
        )
    }

    /// Depth-first enumeration of minimal-ish covers of the core triangles:
    /// branch on the edges of the first uncovered triangle, forbidding each
    /// branch's edge in its later siblings.
    fn enumerate_covers(
        &mut self,
        core: &[Vertex],
        meeting: &[Triangle],
        chosen: &mut Vec<Edge>,
        forbidden: &mut Vec<Edge>,
        seen: &mut BTreeSet<Vec<Edge>>,
        covers_left: &mut usize,
    ) -> Result<Option<ReducingTriple>, Starved> {
        self.spend()?;
        if *covers_left == 0 {
            return Ok(None);
        }
        let uncovered = meeting
            .iter()
            .find(|t| !t.edges().iter().any(|e| chosen.contains(e)));
        let Some(next) = uncovered else {
            *covers_left -= 1;
            if *covers_left == 0 {
                // the cap, not the family, ended this core's enumeration
                self.truncated = true;
            }
            let mut cand = chosen.clone();
            cand.sort_unstable();
            if seen.insert(cand.clone()) {
                self.spend()?;
                if let Some(t) = self.evaluate(core, meeting, &cand) {
                    return Ok(Some(t));
                }
                let widened = self.widen_by_paid_spokes(core, meeting, &cand);
                if widened != cand && seen.insert(widened.clone()) {
                    self.spend()?;
                    if let Some(t) = self.evaluate(core, meeting, &widened) {
                        return Ok(Some(t));
                    }
                }
            }
            return Ok(None);
        };
        let mut tried = 0;
        for e in next.edges() {
            if forbidden.contains(&e) {
                continue;
            }
            chosen.push(e);
            let found = self.enumerate_covers(core, meeting, chosen, forbidden, seen, covers_left);
            chosen.pop();
            match found {
                Ok(Some(t)) => return Ok(Some(t)),
                Ok(None) => {}
                Err(s) => return Err(s),
            }
            forbidden.push(e);
            tried += 1;
        }
        for _ in 0..tried {
            forbidden.pop();
        }
        Ok(None)
    }

    /// A cover is often one edge short of admitting a packing member: a
    /// core triangle whose two core-incident edges already sit in X only
    /// needs its outside edge. Adding all such edges costs one each and can
    /// gain a packing triangle each, so the widened set is worth one retry.
    fn widen_by_paid_spokes(&self, core: &[Vertex], meeting: &[Triangle], cand: &[Edge]) -> Vec<Edge> {
        let mut widened = cand.to_vec();
        for t in meeting {
            let inside: Vec<Vertex> = t
                .vertices()
                .iter()
                .copied()
                .filter(|v| core.binary_search(v).is_ok())
                .collect();
            if inside.len() != 1 {
                continue;
            }
            let outer: Vec<Vertex> = t
                .vertices()
                .iter()
                .copied()
                .filter(|&v| v != inside[0])
                .collect();
            let spokes = [ordered(inside[0], outer[0]), ordered(inside[0], outer[1])];
            let out_edge = ordered(outer[0], outer[1]);
            if spokes.iter().all(|e| cand.binary_search(e).is_ok())
                && cand.binary_search(&out_edge).is_err()
            {
                widened.push(out_edge);
            }
        }
        widened.sort_unstable();
        widened.dedup();
        widened
    }

    /// Judges one edge-set candidate: coverage first, then hunt a packing
    /// worth half the candidate among the triangles it admits.
    fn evaluate(&mut self, core: &[Vertex], meeting: &[Triangle], x: &[Edge]) -> Option<ReducingTriple> {
        if meeting
            .iter()
            .any(|t| !t.edges().iter().any(|e| x.binary_search(e).is_ok()))
        {
            return None;
        }
        let in_core = |v: Vertex| core.binary_search(&v).is_ok();
        let allowed: Vec<Triangle> = self
            .tris
            .iter()
            .filter(|t| {
                t.edges()
                    .iter()
                    .all(|&(u, v)| in_core(u) || in_core(v) || x.binary_search(&(u, v)).is_ok())
            })
            .copied()
            .collect();
        let greedy = greedy_edge_disjoint(&allowed);
        let picked: Vec<usize> = if 2 * greedy.len() >= x.len() {
            greedy
        } else if x.len() > 6 * greedy.len() {
            // a maximal family pins the maximum within a factor of three,
            // so even the exact count cannot reach half of X
            return None;
        } else {
            match max_edge_disjoint(&allowed, PACKING_NODE_BUDGET) {
                Ok(best) if 2 * best.len() >= x.len() => best,
                Ok(_) => return None,
                Err(_) => {
                    self.truncated = true;
                    return None;
                }
            }
        };
        let triple = ReducingTriple::new(
            core.iter().copied(),
            x.iter().copied(),
            picked.into_iter().map(|i| allowed[i]),
        );
        debug_assert!(matches!(
            verify_reducing_triple(self.g, &triple),
            Ok(VerifyReport { valid: true, .. })
        ));
        Some(triple)
    }
}

/// Advances `combo` to the next ascending vertex tuple below n; false when
/// the last one was already reached.
fn next_combination(combo: &mut [Vertex], n: usize) -> bool {
    let k = combo.len();
    let n = n as Vertex;
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) as Vertex {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Local patterns around low-degree vertices that cannot survive in a
/// robust graph with no reducing triple. Finding one is evidence that a
/// reduction exists nearby; the searcher is expected to succeed on such
/// hosts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowDegreeObstruction {
    /// a vertex of degree at most 6 whose neighborhood misses two or more
    /// pairs at a single neighbor
    NeighborhoodGapsTooDense { vertex: Vertex },
    /// a vertex of degree at most 6 whose neighborhood misses exactly two
    /// pairs
    NeighborhoodGapsExactlyTwo { vertex: Vertex },
    /// two adjacent vertices both of degree at most 6
    AdjacentSmallPair { x: Vertex, y: Vertex },
    /// a degree-6 vertex inside a degree-7 closed neighborhood, or a
    /// degree-5 vertex inside one of degree at most 8
    DominatedNeighborhood { x: Vertex, y: Vertex },
}

/// Scans every vertex and pair for the four obstruction shapes.
pub fn low_degree_obstructions(g: &Graph) -> Vec<LowDegreeObstruction> {
    let mut found = Vec::new();
    let n = g.n() as Vertex;
    for v in 0..n {
        let nb = g.neighbors(v);
        if nb.len() > 6 {
            continue;
        }
        let mut miss_deg = vec![0usize; nb.len()];
        let mut missing = 0usize;
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                if !g.has_edge(nb[i], nb[j]) {
                    missing += 1;
                    miss_deg[i] += 1;
                    miss_deg[j] += 1;
                }
            }
        }
        if miss_deg.iter().any(|&d| d >= 2) {
            found.push(LowDegreeObstruction::NeighborhoodGapsTooDense { vertex: v });
        }
        if missing == 2 {
            found.push(LowDegreeObstruction::NeighborhoodGapsExactlyTwo { vertex: v });
        }
    }
    for &(u, v) in g.edges() {
        if g.degree(u) <= 6 && g.degree(v) <= 6 {
            found.push(LowDegreeObstruction::AdjacentSmallPair { x: u, y: v });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if y == x || !closed_neighborhood_dominates(g, x, y) {
                continue;
            }
            let fits = (g.degree(x) == 7 && g.degree(y) == 6)
                || (g.degree(x) <= 8 && g.degree(y) == 5);
            if fits {
                found.push(LowDegreeObstruction::DominatedNeighborhood { x, y });
            }
        }
    }
    found
}

fn closed_neighborhood_dominates(g: &Graph, x: Vertex, y: Vertex) -> bool {
    g.has_edge(x, y)
        && g.neighbors(y)
            .into_iter()
            .all(|w| w == x || g.has_edge(x, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_sorts_orients_and_dedups() {
        let t = ReducingTriple::new(
            [3, 1, 1],
            [(4, 2), (2, 4), (0, 1)],
            [Triangle::new(5, 4, 3).unwrap()],
        );
        assert_eq!(t.v0, vec![1, 3]);
        assert_eq!(t.x, vec![(0, 1), (2, 4)]);
        assert_eq!(t.y.len(), 1);
    }

    #[test]
    fn combination_stepper_walks_all_pairs() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn condition_labels_serialize_as_roman_tags() {
        let json = serde_json::to_string(&FailedCondition::CoreCoverage).unwrap();
        assert_eq!(json, "\"ii\"");
        assert_eq!(FailedCondition::PackedEdgeEscapes.to_string(), "iii");
    }
}
