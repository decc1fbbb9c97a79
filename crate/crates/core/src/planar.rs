//! Planar triangulations carried as explicit face lists: duals, matching
//! transversals, coloring packings, stellations, and the root-clique packing
//! machinery for planar 3-trees.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::graph::{NodeIndex, UnGraph};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{enumerate_triangles, Edge, Graph, GraphError, Triangle, Vertex};
use crate::solve::{
    max_edge_disjoint, PackingCertificate, TransversalCertificate, DEFAULT_NODE_BUDGET,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("a triangulation needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("expected {expected} faces for {n} vertices, got {actual}")]
    FaceCountMismatch { n: usize, expected: usize, actual: usize },
    #[error("expected {expected} edges for {n} vertices, got {actual}")]
    EdgeCountMismatch { n: usize, expected: usize, actual: usize },
    #[error("face {face:?} uses ({}, {}) which is not an edge of the graph", edge.0, edge.1)]
    FaceEdgeMissing { face: Triangle, edge: Edge },
    #[error("edge ({}, {}) lies in {count} faces instead of 2", edge.0, edge.1)]
    EdgeFaceCoverage { edge: Edge, count: usize },
    #[error("external face index {index} out of range for {count} faces")]
    ExternalOutOfRange { index: usize, count: usize },
    #[error("{face:?} is not a face of the current embedding")]
    NotAFace { face: Triangle },
    #[error("the dual of a lone triangle is a multigraph; 4 or more vertices required")]
    TooSmallForDual,
    #[error("K4 is excluded: its dual is K4 again and has no proper 3-coloring")]
    K4Excluded,
    #[error("the graph is not a planar 3-tree")]
    NotAPlanarThreeTree,
    #[error("a lone triangle has no root clique")]
    NoRootClique,
    #[error("not a restricted planar 3-tree: root spread is {r}, expected 2")]
    NotRestricted { r: usize },
    #[error("face list does not assemble into a graph: {0}")]
    MalformedFaceList(GraphError),
}

/// A maximal planar graph together with one embedding, stored as the list of
/// facial triangles plus the index of the face drawn on the outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarTriangulation {
    graph: Graph,
    faces: Vec<Triangle>,
    external: usize,
}

impl PlanarTriangulation {
    /// Checks the Euler counts, that every face bounds a triangle of the
    /// graph, and that every edge lies in exactly two faces.
    pub fn new(
        graph: Graph,
        faces: Vec<Triangle>,
        external: usize,
    ) -> Result<Self, PlanarError> {
        let n = graph.n();
        if n < 3 {
            return Err(PlanarError::TooFewVertices(n));
        }
        if faces.len() != 2 * n - 4 {
            return Err(PlanarError::FaceCountMismatch {
                n,
                expected: 2 * n - 4,
                actual: faces.len(),
            });
        }
        if graph.edge_count() != 3 * n - 6 {
            return Err(PlanarError::EdgeCountMismatch {
                n,
                expected: 3 * n - 6,
                actual: graph.edge_count(),
            });
        }
        if external >= faces.len() {
            return Err(PlanarError::ExternalOutOfRange {
                index: external,
                count: faces.len(),
            });
        }
        let mut coverage: BTreeMap<Edge, usize> = BTreeMap::new();
        for face in &faces {
            for edge in face.edges() {
                if !graph.has_edge(edge.0, edge.1) {
                    return Err(PlanarError::FaceEdgeMissing { face: *face, edge });
                }
                *coverage.entry(edge).or_insert(0) += 1;
            }
        }
        for &edge in graph.edges() {
            let count = coverage.get(&edge).copied().unwrap_or(0);
            if count != 2 {
                return Err(PlanarError::EdgeFaceCoverage { edge, count });
            }
        }
        Ok(PlanarTriangulation {
            graph,
            faces,
            external,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn faces(&self) -> &[Triangle] {
        &self.faces
    }

    pub fn external(&self) -> usize {
        self.external
    }

    pub fn external_face(&self) -> Triangle {
        self.faces[self.external]
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The same embedding redrawn with the named face on the outside.
    pub fn with_external(&self, face: Triangle) -> Result<Self, PlanarError> {
        let index = self
            .faces
            .iter()
            .position(|f| *f == face)
            .ok_or(PlanarError::NotAFace { face })?;
        Ok(PlanarTriangulation {
            graph: self.graph.clone(),
            faces: self.faces.clone(),
            external: index,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FaceListForm {
    n: usize,
    faces: Vec<Triangle>,
    external: usize,
}

impl Serialize for PlanarTriangulation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FaceListForm {
            n: self.graph.n(),
            faces: self.faces.clone(),
            external: self.external,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlanarTriangulation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let form = FaceListForm::deserialize(deserializer)?;
        let edges: BTreeSet<Edge> = form.faces.iter().flat_map(|f| f.edges()).collect();
        let graph = Graph::new(form.n, edges)
            .map_err(|e| D::Error::custom(PlanarError::MalformedFaceList(e)))?;
        PlanarTriangulation::new(graph, form.faces, form.external).map_err(D::Error::custom)
    }
}

/// True when the face list satisfies every embedding invariant for the graph.
pub fn validate_triangulation(graph: &Graph, faces: &[Triangle]) -> bool {
    if faces.is_empty() {
        return false;
    }
    PlanarTriangulation::new(graph.clone(), faces.to_vec(), 0).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StellationBase {
    /// A lone triangle; its two faces are the two sides of the drawing.
    Triangle,
    /// K4 with faces 012, 013, 023 and 123, the last drawn outside.
    Tetrahedron,
}

/// Builds an embedding by repeatedly placing a fresh vertex inside a named
/// face. Each step must name a face of the current embedding. Stellating the
/// external face hands the external role to its first child.
pub fn from_stellation_sequence(
    base: StellationBase,
    steps: &[Triangle],
) -> Result<PlanarTriangulation, PlanarError> {
    let tri = |a, b, c| Triangle::new(a, b, c).expect("fixture triangles are distinct");
    let (mut n, mut edges, mut faces, external) = match base {
        StellationBase::Triangle => (
            3usize,
            vec![(0, 1), (0, 2), (1, 2)],
            vec![tri(0, 1, 2), tri(0, 1, 2)],
            1,
        ),
        StellationBase::Tetrahedron => (
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            vec![tri(0, 1, 2), tri(0, 1, 3), tri(0, 2, 3), tri(1, 2, 3)],
            3,
        ),
    };
    for &step in steps {
        let index = faces
            .iter()
            .position(|f| *f == step)
            .ok_or(PlanarError::NotAFace { face: step })?;
        let v = n as Vertex;
        let [a, b, c] = step.vertices();
        edges.extend([(a, v), (b, v), (c, v)]);
        faces[index] = tri(a, b, v);
        faces.push(tri(a, c, v));
        faces.push(tri(b, c, v));
        n += 1;
    }
    let graph = Graph::new(n, edges).expect("stellation only adds fresh spokes");
    PlanarTriangulation::new(graph, faces, external)
}

/// The face-adjacency graph of an embedding: one vertex per face, one edge
/// per shared primal edge, with the back-map onto those primal edges.
#[derive(Debug, Clone)]
pub struct DualGraph {
    graph: Graph,
    faces: Vec<Triangle>,
    /// Per dual edge, in the dual graph's canonical edge order.
    primal: Vec<Edge>,
}

impl DualGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn face_of(&self, v: Vertex) -> Triangle {
        self.faces[v as usize]
    }

    pub fn primal_edge_of(&self, u: Vertex, v: Vertex) -> Option<Edge> {
        self.graph.edge_index(u, v).map(|i| self.primal[i])
    }
}

pub fn dual(t: &PlanarTriangulation) -> Result<DualGraph, PlanarError> {
    if t.n() < 4 {
        return Err(PlanarError::TooSmallForDual);
    }
    let faces = t.faces();
    let mut holders: BTreeMap<Edge, (usize, usize)> = BTreeMap::new();
    for (i, face) in faces.iter().enumerate() {
        for edge in face.edges() {
            holders
                .entry(edge)
                .and_modify(|pair| pair.1 = i)
                .or_insert((i, usize::MAX));
        }
    }
    let mut pairs: Vec<(Edge, Edge)> = holders
        .into_iter()
        .map(|(primal, (fi, fj))| {
            let (lo, hi) = (fi.min(fj) as Vertex, fi.max(fj) as Vertex);
            ((lo, hi), primal)
        })
        .collect();
    pairs.sort_unstable();
    let graph = Graph::new(faces.len(), pairs.iter().map(|p| p.0))
        .expect("for 4 or more vertices distinct faces share at most one edge");
    assert!(
        (0..graph.n()).all(|v| graph.degree(v as Vertex) == 3),
        "each face has three neighbors"
    );
    assert!(connected(&graph), "faces flood-fill over shared edges");
    assert!(!has_bridge(&graph), "triangulation duals are 2-edge-connected");
    Ok(DualGraph {
        graph,
        faces: faces.to_vec(),
        primal: pairs.into_iter().map(|p| p.1).collect(),
    })
}

/// A perfect matching of a cubic bridgeless graph, as dual vertex pairs.
/// Existence is a theorem, so an imperfect maximum matching is a defect here.
pub fn perfect_matching_cubic(d: &DualGraph) -> Vec<Edge> {
    let g = d.graph();
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(g.n(), g.edge_count());
    let nodes: Vec<NodeIndex> = (0..g.n()).map(|_| pg.add_node(())).collect();
    for &(u, v) in g.edges() {
        pg.add_edge(nodes[u as usize], nodes[v as usize], ());
    }
    let matching = petgraph::algo::maximum_matching(&pg);
    assert!(
        matching.is_perfect(),
        "a cubic bridgeless graph always has a perfect matching"
    );
    let mut out: Vec<Edge> = matching
        .edges()
        .map(|(a, b)| {
            let (a, b) = (a.index() as Vertex, b.index() as Vertex);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Transversal of size n - 2: the primal edges under a dual perfect matching.
/// Removing them leaves a graph that is both triangle-free and bipartite.
pub fn transversal_via_matching(
    t: &PlanarTriangulation,
) -> Result<TransversalCertificate, PlanarError> {
    let d = dual(t)?;
    let mut edges: Vec<Edge> = perfect_matching_cubic(&d)
        .into_iter()
        .map(|(u, v)| d.primal_edge_of(u, v).expect("matching edges live in the dual"))
        .collect();
    edges.sort_unstable();
    assert_eq!(edges.len(), t.n() - 2, "one matched edge per face pair");
    let rest = t.graph().without_edges(edges.iter());
    assert!(
        enumerate_triangles(&rest).is_empty(),
        "every face loses an edge, and every triangle shares edges with faces"
    );
    assert!(bipartite(&rest), "the unmatched faces merge into even cycles");
    Ok(TransversalCertificate {
        size: edges.len(),
        edges,
    })
}

/// Proper coloring of the dual with at most 3 colors, fewest first.
pub fn color_dual_3(d: &DualGraph) -> Result<Vec<u8>, PlanarError> {
    let g = d.graph();
    if g.n() == 4 && g.edge_count() == 6 {
        return Err(PlanarError::K4Excluded);
    }
    for palette in 2..=3 {
        if let Some(colors) = saturation_coloring(g, palette) {
            debug_assert!(g.edges().iter().all(|&(u, v)| colors[u as usize] != colors[v as usize]));
            return Ok(colors);
        }
    }
    unreachable!("a connected cubic graph other than K4 is 3-colorable")
}

/// Packing of facial triangles read off the largest dual color class.
pub fn packing_via_coloring(
    t: &PlanarTriangulation,
) -> Result<PackingCertificate, PlanarError> {
    let d = dual(t)?;
    let colors = color_dual_3(&d)?;
    let best = (0..3)
        .max_by_key(|&c| colors.iter().filter(|&&x| x == c).count())
        .unwrap();
    let mut triangles: Vec<Triangle> = colors
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == best)
        .map(|(i, _)| d.face_of(i as Vertex))
        .collect();
    triangles.sort_unstable();
    let cert = PackingCertificate {
        size: triangles.len(),
        triangles,
    };
    cert.validate(t.graph())
        .expect("faces in one color class are pairwise edge-disjoint");
    assert!(
        cert.size >= (2 * (t.n() - 2)).div_ceil(3),
        "the largest of three classes holds a third of all faces"
    );
    Ok(cert)
}

/// Places a fresh vertex inside every face at once. The external role moves
/// to the first child of the old external face.
pub fn stellate(t: &PlanarTriangulation) -> PlanarTriangulation {
    let g = t.graph();
    let n = g.n();
    let mut edges = g.edges().to_vec();
    let mut faces = Vec::with_capacity(3 * t.faces().len());
    for (i, face) in t.faces().iter().enumerate() {
        let v = (n + i) as Vertex;
        let [a, b, c] = face.vertices();
        edges.extend([(a, v), (b, v), (c, v)]);
        faces.push(Triangle::new(a, b, v).unwrap());
        faces.push(Triangle::new(a, c, v).unwrap());
        faces.push(Triangle::new(b, c, v).unwrap());
    }
    let graph = Graph::new(n + t.faces().len(), edges).expect("fresh apexes never collide");
    PlanarTriangulation::new(graph, faces, 3 * t.external())
        .expect("stellation preserves the embedding invariants")
}

/// True when some triangle of the graph is not a face boundary.
pub fn has_separating_triangle(t: &PlanarTriangulation) -> bool {
    let distinct: BTreeSet<&Triangle> = t.faces().iter().collect();
    enumerate_triangles(t.graph()).len() > distinct.len()
}

/// Largest facial packing through the external face: the external face plus
/// an exact maximum independent set among the faces edge-disjoint from it.
/// On K4 (and the lone triangle) that is the external face by itself.
pub fn packing_with_external(t: &PlanarTriangulation) -> PackingCertificate {
    let external = t.external_face();
    let candidates: Vec<Triangle> = t
        .faces()
        .iter()
        .enumerate()
        .filter(|&(i, f)| i != t.external() && !f.shares_edge(&external))
        .map(|(_, f)| *f)
        .collect();
    let picked = max_edge_disjoint(&candidates, DEFAULT_NODE_BUDGET)
        .expect("face-disjointness search stays within the default budget");
    let mut triangles: Vec<Triangle> = picked.into_iter().map(|i| candidates[i]).collect();
    triangles.push(external);
    triangles.sort_unstable();
    let cert = PackingCertificate {
        size: triangles.len(),
        triangles,
    };
    let f = t.faces().len();
    assert!(
        cert.size >= (f - 1).div_ceil(3),
        "three colors cover the faces away from the external neighborhood"
    );
    cert
}

/// Root-clique analysis for a planar 3-tree: the clique is the K4 holding the
/// external face, and the spread counts vertices inside each internal face.
fn root_spread(t: &PlanarTriangulation) -> Result<(usize, [usize; 3]), PlanarError> {
    let g = t.graph();
    let n = g.n();
    if n == 3 {
        return Err(PlanarError::NoRootClique);
    }
    let [b, c, d] = t.external_face().vertices();
    let apexes: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| v != b && v != c && v != d)
        .filter(|&v| g.has_edge(v, b) && g.has_edge(v, c) && g.has_edge(v, d))
        .collect();
    // In a planar 3-tree whose drawing keeps this face empty, the apex over
    // it is unique; two apexes would have buried the face.
    if apexes.len() != 1 {
        return Err(PlanarError::NotAPlanarThreeTree);
    }
    let apex = apexes[0];
    let root = [apex, b, c, d];

    let mut adjacency: Vec<BTreeSet<Vertex>> = (0..n as Vertex)
        .map(|v| g.neighbors(v).into_iter().collect())
        .collect();
    let mut alive: BTreeSet<Vertex> = (0..n as Vertex).collect();
    let mut peeled: Vec<(Vertex, [Vertex; 3])> = Vec::new();
    while alive.len() > 4 {
        let target = alive.iter().copied().find(|&v| {
            if root.contains(&v) || adjacency[v as usize].len() != 3 {
                return false;
            }
            let nb: Vec<Vertex> = adjacency[v as usize].iter().copied().collect();
            g.has_edge(nb[0], nb[1]) && g.has_edge(nb[0], nb[2]) && g.has_edge(nb[1], nb[2])
        });
        let Some(v) = target else {
            return Err(PlanarError::NotAPlanarThreeTree);
        };
        let nb: Vec<Vertex> = adjacency[v as usize].iter().copied().collect();
        peeled.push((v, [nb[0], nb[1], nb[2]]));
        for &w in &nb {
            adjacency[w as usize].remove(&v);
        }
        adjacency[v as usize].clear();
        alive.remove(&v);
    }

    let sorted_face = |x: Vertex, y: Vertex, z: Vertex| {
        let mut f = [x, y, z];
        f.sort_unstable();
        f
    };
    let internal = [
        sorted_face(apex, b, c),
        sorted_face(apex, b, d),
        sorted_face(apex, c, d),
    ];
    let mut region: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut counts = [0usize; 3];
    // Reverse peel order is insertion order, so a non-root witness in the
    // insertion triangle already has its region recorded.
    for &(v, nb) in peeled.iter().rev() {
        let slot = if nb.iter().all(|w| root.contains(w)) {
            let key = sorted_face(nb[0], nb[1], nb[2]);
            internal
                .iter()
                .position(|f| *f == key)
                .expect("an apex over the external face was ruled out above")
        } else {
            let witness = nb.iter().find(|w| !root.contains(w)).unwrap();
            region[witness]
        };
        region.insert(v, slot);
        counts[slot] += 1;
    }
    Ok((counts.into_iter().max().unwrap(), counts))
}

/// Largest number of vertices drawn inside one face of the root clique.
pub fn r_of(t: &PlanarTriangulation) -> Result<usize, PlanarError> {
    root_spread(t).map(|(r, _)| r)
}

pub fn is_restricted(t: &PlanarTriangulation) -> bool {
    matches!(root_spread(t), Ok((2, _)))
}

pub fn is_super_restricted(t: &PlanarTriangulation) -> bool {
    match root_spread(t) {
        Ok((2, counts)) => {
            let mut sorted = counts;
            sorted.sort_unstable();
            sorted == [1, 1, 2]
        }
        _ => false,
    }
}

/// Exhaustive best facial packing through the external face of a restricted
/// planar 3-tree. At most 16 faces, so plain subset search suffices.
pub fn restricted_packing(
    t: &PlanarTriangulation,
) -> Result<PackingCertificate, PlanarError> {
    let (r, counts) = root_spread(t)?;
    if r != 2 {
        return Err(PlanarError::NotRestricted { r });
    }
    let faces = t.faces();
    let mut best = vec![t.external()];
    let mut current = vec![t.external()];
    extend_packing(faces, 0, &mut current, &mut best);
    let mut triangles: Vec<Triangle> = best.into_iter().map(|i| faces[i]).collect();
    triangles.sort_unstable();
    let cert = PackingCertificate {
        size: triangles.len(),
        triangles,
    };
    assert!(
        cert.size >= faces.len().div_ceil(3),
        "restricted shapes always pack a third of their faces"
    );
    let mut sorted = counts;
    sorted.sort_unstable();
    if sorted == [1, 1, 2] {
        assert_eq!(cert.size, 5, "super restricted shapes pack exactly five");
    }
    Ok(cert)
}

fn extend_packing(
    faces: &[Triangle],
    start: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    for i in start..faces.len() {
        let clashes = current
            .iter()
            .any(|&j| i == j || faces[i].shares_edge(&faces[j]));
        if clashes {
            continue;
        }
        current.push(i);
        extend_packing(faces, i + 1, current, best);
        current.pop();
    }
}

pub fn tetrahedron() -> PlanarTriangulation {
    from_stellation_sequence(StellationBase::Tetrahedron, &[]).unwrap()
}

/// The 4-regular triangulation on 6 vertices; antipodal pairs sum to 5.
pub fn octahedron() -> PlanarTriangulation {
    let tri = |a, b, c| Triangle::new(a, b, c).unwrap();
    let faces = vec![
        tri(0, 1, 2),
        tri(0, 1, 3),
        tri(0, 2, 4),
        tri(0, 3, 4),
        tri(1, 2, 5),
        tri(1, 3, 5),
        tri(2, 4, 5),
        tri(3, 4, 5),
    ];
    let edges: BTreeSet<Edge> = faces.iter().flat_map(|f| f.edges()).collect();
    let graph = Graph::new(6, edges).unwrap();
    PlanarTriangulation::new(graph, faces, 0).unwrap()
}

/// The 5-regular triangulation on 12 vertices: an apex over ring 1..=5, an
/// antiprism band to ring 6..=10, and a bottom apex 11.
pub fn icosahedron() -> PlanarTriangulation {
    let tri = |a, b, c| Triangle::new(a, b, c).unwrap();
    let upper = |k: usize| (1 + (k % 5)) as Vertex;
    let lower = |k: usize| (6 + (k % 5)) as Vertex;
    let mut faces = Vec::with_capacity(20);
    for k in 0..5 {
        faces.push(tri(0, upper(k), upper(k + 1)));
        faces.push(tri(upper(k), upper(k + 1), lower(k + 1)));
        faces.push(tri(upper(k), lower(k), lower(k + 1)));
        faces.push(tri(11, lower(k), lower(k + 1)));
    }
    let edges: BTreeSet<Edge> = faces.iter().flat_map(|f| f.edges()).collect();
    let graph = Graph::new(12, edges).unwrap();
    PlanarTriangulation::new(graph, faces, 0).unwrap()
}

/// Three stellations nested inside one face of K4: spread 3 from the default
/// drawing, and the smallest host where the external-face packing floor of
/// ceil((f - 1) / 3) cannot be beaten.
pub fn nested_stellation() -> PlanarTriangulation {
    let tri = |a, b, c| Triangle::new(a, b, c).unwrap();
    from_stellation_sequence(
        StellationBase::Tetrahedron,
        &[tri(0, 2, 3), tri(0, 2, 4), tri(0, 3, 4)],
    )
    .unwrap()
}

/// Two rows of `len` vertices: row paths, a zigzag between them, fans from
/// the first top vertex and the last bottom vertex, and one closing edge.
/// Length 2 is K4; no member has a separating triangle.
pub fn strip_triangulation(len: usize) -> PlanarTriangulation {
    assert!(len >= 2, "a strip needs at least two columns");
    let tri = |a, b, c| Triangle::new(a, b, c).unwrap();
    let top = |i: usize| i as Vertex;
    let bottom = |i: usize| (len + i) as Vertex;
    let last = len - 1;

    let mut edges: Vec<Edge> = Vec::with_capacity(6 * len - 6);
    for i in 0..last {
        edges.push((top(i), top(i + 1)));
        edges.push((bottom(i), bottom(i + 1)));
        edges.push((top(i + 1), bottom(i)));
    }
    for i in 0..len {
        edges.push((top(i), bottom(i)));
    }
    for i in 2..len {
        edges.push((top(0), top(i)));
    }
    for i in 0..len.saturating_sub(2) {
        edges.push((bottom(i), bottom(last)));
    }
    edges.push((top(0), bottom(last)));

    let mut faces = Vec::with_capacity(4 * len - 4);
    for i in 0..last {
        faces.push(tri(top(i), bottom(i), top(i + 1)));
        faces.push(tri(top(i + 1), bottom(i), bottom(i + 1)));
    }
    for i in 1..last {
        faces.push(tri(top(0), top(i), top(i + 1)));
    }
    for i in 0..len.saturating_sub(2) {
        faces.push(tri(bottom(last), bottom(i), bottom(i + 1)));
    }
    faces.push(tri(top(0), top(last), bottom(last)));
    faces.push(tri(top(0), bottom(0), bottom(last)));
    let external = faces.len() - 1;

    let graph = Graph::new(2 * len, edges).unwrap();
    PlanarTriangulation::new(graph, faces, external).unwrap()
}

fn bipartite(g: &Graph) -> bool {
    let n = g.n();
    let mut side = vec![u8::MAX; n];
    for start in 0..n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = std::collections::VecDeque::from([start as Vertex]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if side[w as usize] == u8::MAX {
                    side[w as usize] = 1 - side[v as usize];
                    queue.push_back(w);
                } else if side[w as usize] == side[v as usize] {
                    return false;
                }
            }
        }
    }
    true
}

fn connected(g: &Graph) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0 as Vertex];
    seen[0] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                visited += 1;
                stack.push(w);
            }
        }
    }
    visited == n
}

/// Lowpoint bridge test; the graphs here are small enough for recursion.
fn has_bridge(g: &Graph) -> bool {
    struct Walk<'a> {
        g: &'a Graph,
        order: Vec<usize>,
        low: Vec<usize>,
        clock: usize,
    }
    impl Walk<'_> {
        fn run(&mut self, v: Vertex, parent: Option<Vertex>) -> bool {
            self.order[v as usize] = self.clock;
            self.low[v as usize] = self.clock;
            self.clock += 1;
            let mut skipped_parent = false;
            for w in self.g.neighbors(v) {
                if Some(w) == parent && !skipped_parent {
                    skipped_parent = true;
                    continue;
                }
                if self.order[w as usize] == usize::MAX {
                    if self.run(w, Some(v)) {
                        return true;
                    }
                    self.low[v as usize] = self.low[v as usize].min(self.low[w as usize]);
                    if self.low[w as usize] > self.order[v as usize] {
                        return true;
                    }
                } else {
                    self.low[v as usize] = self.low[v as usize].min(self.order[w as usize]);
                }
            }
            false
        }
    }
    let n = g.n();
    let mut walk = Walk {
        g,
        order: vec![usize::MAX; n],
        low: vec![usize::MAX; n],
        clock: 0,
    };
    (0..n as Vertex).any(|v| walk.order[v as usize] == usize::MAX && walk.run(v, None))
}

/// Backtracking proper coloring with `palette` colors, always branching on an
/// uncolored vertex seeing the most distinct colors.
fn saturation_coloring(g: &Graph, palette: u8) -> Option<Vec<u8>> {
    const UNSET: u8 = u8::MAX;
    let n = g.n();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v as Vertex).into_iter().map(|w| w as usize).collect())
        .collect();

    fn solve(adjacency: &[Vec<usize>], colors: &mut [u8], palette: u8) -> bool {
        let mut pick = None;
        let mut pick_key = (0usize, 0usize);
        for v in 0..colors.len() {
            if colors[v] != UNSET {
                continue;
            }
            let mut seen = 0u8;
            for &w in &adjacency[v] {
                if colors[w] != UNSET {
                    seen |= 1 << colors[w];
                }
            }
            let key = (seen.count_ones() as usize, adjacency[v].len());
            if pick.is_none() || key > pick_key {
                pick = Some((v, seen));
                pick_key = key;
            }
        }
        let Some((v, seen)) = pick else {
            return true;
        };
        for c in 0..palette {
            if seen & (1 << c) == 0 {
                colors[v] = c;
                if solve(adjacency, colors, palette) {
                    return true;
                }
                colors[v] = UNSET;
            }
        }
        false
    }

    let mut colors = vec![UNSET; n];
    solve(&adjacency, &mut colors, palette).then_some(colors)
}
