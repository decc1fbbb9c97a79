//! Constructive 9/5 transversal/packing pairs on 3-trees.
//!
//! A 3-tree is built from a triangle by repeatedly placing a new vertex on an
//! existing triangle. [`nine_fifths_tp`] peels such a graph region by region
//! and assembles a triangle transversal `X` and an edge-disjoint triangle
//! packing `Y` with `5|X| <= 9|Y| + 1`, certifying the 9/5 bound for Tuza's
//! conjecture on this class. Every peel re-checks its own arithmetic; a
//! violated invariant aborts with a machine-readable trace of the peels that
//! led to it.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{enumerate_triangles, ordered, Edge, Graph, GraphError, Triangle, Vertex};
use crate::planar::{
    from_stellation_sequence, is_restricted, is_super_restricted, restricted_packing,
    StellationBase,
};
use crate::solve::{
    nu_exact, tau_exact, CertificateError, PackingCertificate, SolveError, TransversalCertificate,
};

#[derive(Debug, Error)]
pub enum NineFifthsError {
    #[error("a stacking sequence needs at least 3 vertices, got {n}")]
    TooFewVertices { n: usize },
    #[error("step {step}: host {host} is not a triangle of the graph built so far")]
    HostNotPresent { step: usize, host: Triangle },
    #[error("the base triangle must be {{0, 1, 2}}, got {found}")]
    WrongBaseTriangle { found: Triangle },
    #[error("step {step}: vertices must be added in order, expected {expected} but got {found}")]
    StepOutOfOrder {
        step: usize,
        expected: Vertex,
        found: Vertex,
    },
    #[error("expected exactly one marked edge inside the clique, found {found}")]
    MarkedEdgesInClique { found: usize },
    #[error("the graph is not a 3-tree")]
    NotAThreeTree,
    #[error("{transversal} transversal edges exceed the 9/5 bound for {packing} packed triangles")]
    BoundViolated { transversal: usize, packing: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

fn base_triangle() -> Triangle {
    Triangle::new(0, 1, 2).expect("the base triple is distinct")
}

/// One stacking step: vertex `v` lands on triangle `host` and picks up its
/// three edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTreeStep {
    pub host: Triangle,
    pub v: Vertex,
}

/// A 3-tree given as its construction history: the base triangle {0, 1, 2}
/// followed by one host choice per added vertex. Vertices are numbered in
/// insertion order, so step `i` adds vertex `3 + i`. Instances are validated
/// on construction and deserialization; a held value always describes a
/// 3-tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeqForm", into = "SeqForm")]
pub struct ThreeTreeSeq {
    initial: Triangle,
    steps: Vec<ThreeTreeStep>,
}

#[derive(Serialize, Deserialize)]
struct SeqForm {
    initial: Triangle,
    steps: Vec<ThreeTreeStep>,
}

impl TryFrom<SeqForm> for ThreeTreeSeq {
    type Error = NineFifthsError;
    fn try_from(form: SeqForm) -> Result<Self, Self::Error> {
        if form.initial != base_triangle() {
            return Err(NineFifthsError::WrongBaseTriangle {
                found: form.initial,
            });
        }
        ThreeTreeSeq::assemble(form.steps)
    }
}

impl From<ThreeTreeSeq> for SeqForm {
    fn from(seq: ThreeTreeSeq) -> Self {
        SeqForm {
            initial: seq.initial,
            steps: seq.steps,
        }
    }
}

impl ThreeTreeSeq {
    /// Builds a sequence from host triangles alone, numbering the new
    /// vertices 3, 4, ... in order.
    pub fn from_hosts(
        hosts: impl IntoIterator<Item = Triangle>,
    ) -> Result<Self, NineFifthsError> {
        let steps = hosts
            .into_iter()
            .enumerate()
            .map(|(i, host)| ThreeTreeStep {
                host,
                v: 3 + i as Vertex,
            })
            .collect();
        Self::assemble(steps)
    }

    fn assemble(steps: Vec<ThreeTreeStep>) -> Result<Self, NineFifthsError> {
        let mut edges: BTreeSet<Edge> = base_triangle().edges().into_iter().collect();
        for (i, step) in steps.iter().enumerate() {
            let expected = 3 + i as Vertex;
            if step.v != expected {
                return Err(NineFifthsError::StepOutOfOrder {
                    step: i,
                    expected,
                    found: step.v,
                });
            }
            if !step.host.edges().iter().all(|e| edges.contains(e)) {
                return Err(NineFifthsError::HostNotPresent {
                    step: i,
                    host: step.host,
                });
            }
            for u in step.host.vertices() {
                edges.insert(ordered(u, step.v));
            }
        }
        Ok(ThreeTreeSeq {
            initial: base_triangle(),
            steps,
        })
    }

    pub fn initial(&self) -> Triangle {
        self.initial
    }

    pub fn steps(&self) -> &[ThreeTreeStep] {
        &self.steps
    }

    pub fn n(&self) -> usize {
        3 + self.steps.len()
    }

    pub fn to_graph(&self) -> Graph {
        let mut edges: Vec<Edge> = base_triangle().edges().to_vec();
        for step in &self.steps {
            edges.extend(step.host.vertices().map(|u| ordered(u, step.v)));
        }
        Graph::new(self.n(), edges).expect("validated on construction")
    }
}

/// Samples a 3-tree on `n` vertices by stacking each new vertex on a host
/// triangle drawn uniformly from the triangles present at that step. The
/// same seed always yields the same sequence.
pub fn generate_3tree(n: usize, seed: u64) -> Result<ThreeTreeSeq, NineFifthsError> {
    if n < 3 {
        return Err(NineFifthsError::TooFewVertices { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triangles = vec![base_triangle()];
    let mut hosts = Vec::with_capacity(n - 3);
    for v in 3..n as Vertex {
        let host = triangles[rng.gen_range(0..triangles.len())];
        let [p, q, r] = host.vertices();
        for (s, t) in [(p, q), (p, r), (q, r)] {
            triangles.push(Triangle::new(s, t, v).expect("fresh vertex keeps triples distinct"));
        }
        hosts.push(host);
    }
    ThreeTreeSeq::from_hosts(hosts)
}

/// The edge of a 4-clique that is vertex-disjoint from the single marked
/// edge lying inside the clique. Marked edges outside the clique are
/// ignored; anything other than exactly one inside edge is an error.
pub fn opposite_clique_edge(
    clique: [Vertex; 4],
    marked: &[Edge],
) -> Result<Edge, NineFifthsError> {
    let mut members = clique;
    members.sort_unstable();
    debug_assert!(
        members.windows(2).all(|w| w[0] < w[1]),
        "clique vertices must be distinct"
    );
    let inside: BTreeSet<Edge> = marked
        .iter()
        .map(|&(u, v)| ordered(u, v))
        .filter(|&(u, v)| u != v && members.contains(&u) && members.contains(&v))
        .collect();
    if inside.len() != 1 {
        return Err(NineFifthsError::MarkedEdgesInClique {
            found: inside.len(),
        });
    }
    let (u, v) = *inside.iter().next().expect("checked nonempty");
    let rest: Vec<Vertex> = members
        .iter()
        .copied()
        .filter(|&w| w != u && w != v)
        .collect();
    Ok(ordered(rest[0], rest[1]))
}

/// Recovers a stacking sequence for `g` by repeatedly removing a degree-3
/// vertex whose neighborhood is a triangle, then replaying the removals
/// backwards. The result is `g` up to relabeling; errors if `g` is not a
/// 3-tree.
pub fn three_tree_sequence(g: &Graph) -> Result<ThreeTreeSeq, NineFifthsError> {
    let n = g.n();
    if n < 3 || g.edge_count() != 3 * n - 6 {
        return Err(NineFifthsError::NotAThreeTree);
    }
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n)
        .map(|v| g.neighbors(v as Vertex).into_iter().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut peeled: Vec<(Vertex, [Vertex; 3])> = Vec::with_capacity(n - 3);
    for _ in 0..n - 3 {
        let v = (0..n)
            .find(|&v| {
                if !alive[v] || adj[v].len() != 3 {
                    return false;
                }
                let h: Vec<Vertex> = adj[v].iter().copied().collect();
                g.has_edge(h[0], h[1]) && g.has_edge(h[0], h[2]) && g.has_edge(h[1], h[2])
            })
            .ok_or(NineFifthsError::NotAThreeTree)?;
        let h: Vec<Vertex> = adj[v].iter().copied().collect();
        peeled.push((v as Vertex, [h[0], h[1], h[2]]));
        alive[v] = false;
        for &u in &h {
            adj[u as usize].remove(&(v as Vertex));
        }
        adj[v].clear();
    }
    let rest: Vec<Vertex> = (0..n as Vertex).filter(|&v| alive[v as usize]).collect();
    if !(g.has_edge(rest[0], rest[1]) && g.has_edge(rest[0], rest[2]) && g.has_edge(rest[1], rest[2]))
    {
        return Err(NineFifthsError::NotAThreeTree);
    }
    let mut new_id = vec![0 as Vertex; n];
    for (i, &v) in rest.iter().enumerate() {
        new_id[v as usize] = i as Vertex;
    }
    for (i, &(v, _)) in peeled.iter().rev().enumerate() {
        new_id[v as usize] = 3 + i as Vertex;
    }
    let hosts = peeled.iter().rev().map(|&(_, h)| {
        Triangle::new(
            new_id[h[0] as usize],
            new_id[h[1] as usize],
            new_id[h[2] as usize],
        )
        .expect("relabeling keeps host triples distinct")
    });
    Ok(ThreeTreeSeq::from_hosts(hosts).expect("reverse peel order is a valid stacking"))
}

/// Checks `5 tau <= 9 nu + 1` on a 3-tree by solving both sides exactly.
/// Errors if `g` is not a 3-tree or a solver gives up.
pub fn verify_nine_fifths_exact(g: &Graph) -> Result<bool, NineFifthsError> {
    three_tree_sequence(g)?;
    let tau = tau_exact(g)?;
    let nu = nu_exact(g)?;
    Ok(5 * tau.size <= 9 * nu.size + 1)
}

/// A transversal/packing pair witnessing the 9/5 bound on one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NineFifthsPair {
    pub transversal: TransversalCertificate,
    pub packing: PackingCertificate,
}

impl NineFifthsPair {
    /// Validates both certificates against `g` and the inequality
    /// `5|X| <= 9|Y| + 1` tying them together.
    pub fn validate(&self, g: &Graph) -> Result<(), NineFifthsError> {
        self.transversal.validate(g)?;
        self.packing.validate(g)?;
        if 5 * self.transversal.size > 9 * self.packing.size + 1 {
            return Err(NineFifthsError::BoundViolated {
                transversal: self.transversal.size,
                packing: self.packing.size,
            });
        }
        Ok(())
    }
}

/// What a single peel did to the graph it saw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeelKind {
    /// Terminal: at most 6 vertices left, both sides solved exactly.
    ExactBase,
    /// A height-1 clique whose hangers-on all share one face.
    FanExtension,
    /// A height-1 clique with exactly two hangers-on, on two faces.
    SplitExtension,
    /// A height-1 clique with three or more hangers-on spread over faces.
    FullCliqueExtension,
    /// A face carrying three or more members lost one of them; the
    /// returned transversal is rewritten to contain that face.
    CrowdedFaceReduction,
    /// A height-2 clique peeled with its whole two-level region.
    RegionPeel,
    /// Terminal: everything hangs off the root clique directly.
    RootAssembly,
}

/// One entry of the construction trace. Labels refer to the graph as it was
/// at this level, after the relabelings of all earlier peels.
#[derive(Debug, Clone, Serialize)]
pub struct PeelRecord {
    pub kind: PeelKind,
    pub vertices_before: usize,
    pub vertices_after: usize,
    /// The 4-clique worked on, when one was singled out.
    pub bag: Option<[Vertex; 4]>,
    /// The face worked on, when one was singled out.
    pub face: Option<Triangle>,
    /// Leaf members involved at this peel.
    pub leaves: usize,
    /// Two-vertex chain members involved at this peel.
    pub chains: usize,
    /// Faces whose surviving member is a chain (region peels only).
    pub chain_faces: usize,
    /// Faces whose surviving member is a leaf (region peels only).
    pub leaf_faces: usize,
    /// Net growth of the transversal at this peel. Edges the recipe charges
    /// but the deeper levels already hold count zero, and crowded-face
    /// rewrites may shrink the set, so the deltas sum to the final size.
    pub transversal_added: isize,
    /// Net growth of the packing at this peel.
    pub packing_added: isize,
    /// Whether the peel parameters fall in the envelope for which the
    /// stellation route alone is known to close the bound. Out-of-range
    /// combinations lean on the face-local packing route and are flagged
    /// here rather than rejected.
    pub within_stated_ranges: bool,
}

type EdgeSet = BTreeSet<Edge>;
type TriSet = BTreeSet<Triangle>;

/// Builds a 9/5 transversal/packing pair for the 3-tree described by `seq`.
///
/// Panics with a serialized peel trace if any internal invariant breaks;
/// a returned pair always validates against `seq.to_graph()`.
pub fn nine_fifths_tp(seq: &ThreeTreeSeq) -> NineFifthsPair {
    nine_fifths_tp_with_trace(seq).0
}

/// Like [`nine_fifths_tp`], also reporting the peel-by-peel trace, outermost
/// peel first.
pub fn nine_fifths_tp_with_trace(seq: &ThreeTreeSeq) -> (NineFifthsPair, Vec<PeelRecord>) {
    let mut trace = Vec::new();
    let (x, y) = peel(seq, &mut trace);
    trace.reverse();
    let pair = NineFifthsPair {
        transversal: TransversalCertificate {
            size: x.len(),
            edges: x.into_iter().collect(),
        },
        packing: PackingCertificate {
            size: y.len(),
            triangles: y.into_iter().collect(),
        },
    };
    if let Err(e) = pair.validate(&seq.to_graph()) {
        abort(&format!("assembled pair does not validate: {e}"), &trace);
    }
    (pair, trace)
}

fn abort(context: &str, trace: &[PeelRecord]) -> ! {
    let dump = serde_json::to_string(trace).unwrap_or_else(|_| "[]".to_string());
    panic!("nine-fifths construction invariant broke: {context}; peels so far: {dump}");
}

/// Per-level sanity: the running bound must hold, and in debug builds the
/// partial certificates are re-validated from scratch.
fn check_level(g: &Graph, x: &EdgeSet, y: &TriSet, trace: &[PeelRecord]) {
    if 5 * x.len() > 9 * y.len() + 1 {
        abort(
            &format!("bound failed at {} vertices: |X|={}, |Y|={}", g.n(), x.len(), y.len()),
            trace,
        );
    }
    #[cfg(debug_assertions)]
    {
        for &(u, v) in x.iter() {
            if !g.has_edge(u, v) {
                abort(&format!("transversal edge ({u}, {v}) is not in the graph"), trace);
            }
        }
        for t in enumerate_triangles(g) {
            if !t.edges().iter().any(|e| x.contains(e)) {
                abort(&format!("triangle {t} left uncovered"), trace);
            }
        }
        let packed: Vec<&Triangle> = y.iter().collect();
        for (i, t) in packed.iter().enumerate() {
            for (u, v) in t.edges() {
                if !g.has_edge(u, v) {
                    abort(&format!("packed triangle {t} uses a missing edge"), trace);
                }
            }
            for s in &packed[..i] {
                if t.shares_edge(s) {
                    abort(&format!("packed triangles {s} and {t} share an edge"), trace);
                }
            }
        }
    }
}

// ----------------------------------------------------------- the bag forest

/// The attachment tree of a stacking sequence: node `i` is the 4-clique
/// formed at step `i`, its parent is the shallowest earlier clique that
/// contains the step's host triple. Children of a node sit on the three
/// faces through the node's own vertex; nothing ever attaches to a node's
/// shared face from below.
struct BagTree {
    attach: Vec<Triangle>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    height: Vec<usize>,
}

impl BagTree {
    fn new(seq: &ThreeTreeSeq) -> BagTree {
        let count = seq.steps().len();
        let mut attach = Vec::with_capacity(count);
        let mut children = vec![Vec::new(); count];
        let mut depth = vec![0usize; count];
        for (i, step) in seq.steps().iter().enumerate() {
            attach.push(step.host);
            if i == 0 {
                continue;
            }
            let holds_host = |j: usize| {
                let body = attach[j].vertices();
                let rep = 3 + j as Vertex;
                step.host
                    .vertices()
                    .iter()
                    .all(|&v| v == rep || body.contains(&v))
            };
            let p = (0..i)
                .filter(|&j| holds_host(j))
                .min_by_key(|&j| depth[j])
                .expect("every host triple lies in some earlier clique");
            children[p].push(i);
            depth[i] = depth[p] + 1;
        }
        let mut height = vec![0usize; count];
        for i in (0..count).rev() {
            height[i] = children[i].iter().map(|&c| height[c] + 1).max().unwrap_or(0);
        }
        BagTree {
            attach,
            children,
            depth,
            height,
        }
    }

    fn len(&self) -> usize {
        self.attach.len()
    }

    fn rep(&self, i: usize) -> Vertex {
        3 + i as Vertex
    }

    fn bag(&self, i: usize) -> [Vertex; 4] {
        let [p, q, r] = self.attach[i].vertices();
        let mut out = [p, q, r, self.rep(i)];
        out.sort_unstable();
        out
    }

    fn subtree_reps(&self, i: usize) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            out.insert(self.rep(j));
            stack.extend(self.children[j].iter().copied());
        }
        out
    }

}

fn root_faces() -> [Triangle; 4] {
    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .map(|(a, b, c)| Triangle::new(a, b, c).expect("distinct"))
}

/// A member hanging off a face: either a lone vertex or a two-vertex chain.
#[derive(Debug, Clone, Copy)]
enum Member {
    Leaf {
        rep: Vertex,
    },
    Chain {
        head: Vertex,
        tail: Vertex,
        tail_host: Triangle,
    },
}

impl Member {
    fn is_leaf(&self) -> bool {
        matches!(self, Member::Leaf { .. })
    }

    fn rep(&self) -> Vertex {
        match *self {
            Member::Leaf { rep } => rep,
            Member::Chain { head, .. } => head,
        }
    }

    fn reps(&self) -> Vec<Vertex> {
        match *self {
            Member::Leaf { rep } => vec![rep],
            Member::Chain { head, tail, .. } => vec![head, tail],
        }
    }
}

fn classify(tree: &BagTree, node: usize) -> Option<Member> {
    match tree.height[node] {
        0 => Some(Member::Leaf {
            rep: tree.rep(node),
        }),
        1 if tree.children[node].len() == 1 => {
            let child = tree.children[node][0];
            Some(Member::Chain {
                head: tree.rep(node),
                tail: tree.rep(child),
                tail_host: tree.attach[child],
            })
        }
        _ => None,
    }
}

/// Children of `node` (the root when `None`) grouped by the face they sit
/// on, as classified members. Aborts if any child is deeper than a chain,
/// which earlier dispatch should have ruled out.
fn face_members(
    tree: &BagTree,
    node: Option<usize>,
    trace: &[PeelRecord],
) -> BTreeMap<Triangle, Vec<Member>> {
    let kids: &[usize] = match node {
        Some(i) => &tree.children[i],
        None => &tree.children[0],
    };
    let mut groups: BTreeMap<Triangle, Vec<Member>> = BTreeMap::new();
    for &c in kids {
        let member = classify(tree, c)
            .unwrap_or_else(|| abort("a member is deeper than a two-vertex chain", trace));
        groups.entry(tree.attach[c]).or_default().push(member);
    }
    groups
}

fn member_bag(face: Triangle, rep: Vertex) -> [Vertex; 4] {
    let [p, q, r] = face.vertices();
    let mut out = [p, q, r, rep];
    out.sort_unstable();
    out
}

fn clique_edges(bag: [Vertex; 4]) -> Vec<Edge> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(ordered(bag[i], bag[j]));
        }
    }
    out
}

// ------------------------------------------------------------- sub-sequences

/// Removes `drop` from the sequence and renumbers the survivors, returning
/// the smaller sequence and the old label of each new vertex. Only whole
/// subtrees of the attachment tree are ever dropped, so surviving steps
/// never host on a dropped vertex.
fn restrict(seq: &ThreeTreeSeq, drop: &BTreeSet<Vertex>, trace: &[PeelRecord]) -> (ThreeTreeSeq, Vec<Vertex>) {
    let n = seq.n();
    let mut old_of_new: Vec<Vertex> = Vec::with_capacity(n - drop.len());
    let mut new_id = vec![Vertex::MAX; n];
    for v in 0..n as Vertex {
        if !drop.contains(&v) {
            new_id[v as usize] = old_of_new.len() as Vertex;
            old_of_new.push(v);
        }
    }
    let mut hosts = Vec::new();
    for step in seq.steps() {
        if drop.contains(&step.v) {
            continue;
        }
        let [p, q, r] = step.host.vertices();
        if [p, q, r].iter().any(|&u| drop.contains(&u)) {
            abort("a surviving step hosts on a dropped vertex", trace);
        }
        hosts.push(
            Triangle::new(new_id[p as usize], new_id[q as usize], new_id[r as usize])
                .expect("renumbering keeps triples distinct"),
        );
    }
    let sub = ThreeTreeSeq::from_hosts(hosts)
        .unwrap_or_else(|e| abort(&format!("restricted sequence is invalid: {e}"), trace));
    (sub, old_of_new)
}

fn lift_edges(edges: EdgeSet, old: &[Vertex]) -> EdgeSet {
    edges
        .into_iter()
        .map(|(u, v)| ordered(old[u as usize], old[v as usize]))
        .collect()
}

fn lift_triangles(tris: TriSet, old: &[Vertex]) -> TriSet {
    tris.into_iter()
        .map(|t| {
            let [p, q, r] = t.vertices();
            Triangle::new(old[p as usize], old[q as usize], old[r as usize])
                .expect("renumbering keeps triples distinct")
        })
        .collect()
}

// ------------------------------------------------------------------ peeling

fn peel(seq: &ThreeTreeSeq, trace: &mut Vec<PeelRecord>) -> (EdgeSet, TriSet) {
    let g = seq.to_graph();
    let n = g.n();
    if n <= 6 {
        return exact_base(&g, trace);
    }
    let tree = BagTree::new(seq);
    // deepest first, then smallest representative
    let deepest = |pick: &dyn Fn(usize) -> bool| -> Option<usize> {
        (1..tree.len())
            .filter(|&t| pick(t))
            .max_by_key(|&t| (tree.depth[t], usize::MAX - t))
    };
    if let Some(t) = deepest(&|t| tree.height[t] == 1 && tree.children[t].len() >= 2) {
        return clique_extension(seq, &g, &tree, t, trace);
    }
    if let Some(t) = deepest(&|t| tree.height[t] == 2) {
        if let Some(face) = crowded_face(&tree, Some(t), trace) {
            return crowded_reduction(seq, &g, &tree, Some(t), face, trace);
        }
        return region_peel(seq, &g, &tree, t, trace);
    }
    if let Some(face) = crowded_face(&tree, None, trace) {
        return crowded_reduction(seq, &g, &tree, None, face, trace);
    }
    root_assembly(seq, &g, &tree, trace)
}

fn exact_base(g: &Graph, trace: &mut Vec<PeelRecord>) -> (EdgeSet, TriSet) {
    let x = tau_exact(g).unwrap_or_else(|e| abort(&format!("base transversal solver: {e}"), trace));
    let y = nu_exact(g).unwrap_or_else(|e| abort(&format!("base packing solver: {e}"), trace));
    let xs: EdgeSet = x.edges.into_iter().collect();
    let ys: TriSet = y.triangles.into_iter().collect();
    check_level(g, &xs, &ys, trace);
    trace.push(PeelRecord {
        kind: PeelKind::ExactBase,
        vertices_before: g.n(),
        vertices_after: g.n(),
        bag: None,
        face: None,
        leaves: 0,
        chains: 0,
        chain_faces: 0,
        leaf_faces: 0,
        transversal_added: xs.len() as isize,
        packing_added: ys.len() as isize,
        within_stated_ranges: true,
    });
    (xs, ys)
}

/// First face of the node (the root when `None`) carrying three or more
/// members, if any.
fn crowded_face(tree: &BagTree, node: Option<usize>, trace: &[PeelRecord]) -> Option<Triangle> {
    let groups = face_members(tree, node, trace);
    groups
        .iter()
        .find(|(_, ms)| ms.len() >= 3)
        .map(|(&face, _)| face)
}

/// Drops one member of an overfull face, then rewrites the recursive
/// transversal so the face's own edges cover everything the remaining
/// members hang on it. Leaves are dropped in preference to chains.
fn crowded_reduction(
    seq: &ThreeTreeSeq,
    g: &Graph,
    tree: &BagTree,
    node: Option<usize>,
    face: Triangle,
    trace: &mut Vec<PeelRecord>,
) -> (EdgeSet, TriSet) {
    let groups = face_members(tree, node, trace);
    let members = &groups[&face];
    let victim = *members
        .iter()
        .find(|m| m.is_leaf())
        .unwrap_or(&members[0]);
    let drop: BTreeSet<Vertex> = victim.reps().into_iter().collect();
    let (sub, old) = restrict(seq, &drop, trace);
    let (x_sub, y_sub) = peel(&sub, trace);
    let x_before = x_sub.len();
    let mut x = lift_edges(x_sub, &old);
    let mut y = lift_triangles(y_sub, &old);

    if !face.edges().iter().all(|e| x.contains(e)) {
        // free the face by swapping out the remaining members' private
        // edges; each of them had to be paying at least as much
        let mut private: EdgeSet = BTreeSet::new();
        for member in members.iter().filter(|m| m.rep() != victim.rep()) {
            match *member {
                Member::Leaf { rep } => {
                    for u in face.vertices() {
                        private.insert(ordered(rep, u));
                    }
                }
                Member::Chain {
                    head,
                    tail,
                    tail_host,
                } => {
                    for u in face.vertices() {
                        private.insert(ordered(head, u));
                    }
                    private.insert(ordered(head, tail));
                    for u in tail_host.vertices() {
                        if u != head {
                            private.insert(ordered(tail, u));
                        }
                    }
                }
            }
        }
        x.retain(|e| !private.contains(e));
        x.extend(face.edges());
        for member in members.iter().filter(|m| m.rep() != victim.rep()) {
            if let Member::Chain { head, tail, .. } = *member {
                x.insert(ordered(head, tail));
            }
        }
        if x.len() > x_before {
            abort("crowded-face rewrite grew the transversal", trace);
        }
    }

    if let Member::Chain {
        head,
        tail,
        tail_host,
    } = victim
    {
        x.insert(ordered(head, tail));
        let w = tail_host
            .vertices()
            .into_iter()
            .filter(|&u| u != head)
            .min()
            .expect("a chain tail has two other host vertices");
        y.insert(Triangle::new(head, tail, w).expect("distinct"));
    }

    check_level(g, &x, &y, trace);
    trace.push(PeelRecord {
        kind: PeelKind::CrowdedFaceReduction,
        vertices_before: g.n(),
        vertices_after: g.n() - drop.len(),
        bag: node.map(|i| tree.bag(i)),
        face: Some(face),
        leaves: members.iter().filter(|m| m.is_leaf()).count(),
        chains: members.iter().filter(|m| !m.is_leaf()).count(),
        chain_faces: 0,
        leaf_faces: 0,
        transversal_added: x.len() as isize - x_before as isize,
        packing_added: if victim.is_leaf() { 0 } else { 1 },
        within_stated_ranges: true,
    });
    (x, y)
}

/// Peels a height-1 clique together with everything hanging off it. The
/// recipe depends on how the members spread over the clique's faces.
fn clique_extension(
    seq: &ThreeTreeSeq,
    g: &Graph,
    tree: &BagTree,
    t: usize,
    trace: &mut Vec<PeelRecord>,
) -> (EdgeSet, TriSet) {
    let apex = tree.rep(t);
    let bag = tree.bag(t);
    let shared = tree.attach[t];
    let mut groups: BTreeMap<Triangle, Vec<Vertex>> = BTreeMap::new();
    for &c in &tree.children[t] {
        if tree.height[c] != 0 {
            abort("height-1 clique with a non-leaf child", trace);
        }
        groups
            .entry(tree.attach[c])
            .or_default()
            .push(tree.rep(c));
    }
    let member_total: usize = groups.values().map(Vec::len).sum();

    let drop = tree.subtree_reps(t);
    let (sub, old) = restrict(seq, &drop, trace);
    let (x_sub, y_sub) = peel(&sub, trace);
    let x_before = x_sub.len();
    let y_before = y_sub.len();
    let mut x = lift_edges(x_sub, &old);
    let mut y = lift_triangles(y_sub, &old);

    let push_triangle = |y: &mut TriSet, a: Vertex, b: Vertex, c: Vertex| {
        y.insert(Triangle::new(a, b, c).expect("distinct"));
    };

    let (kind, peeled_face) = if groups.len() == 1 {
        let (&face, reps) = groups.iter().next().expect("one group");
        x.extend(face.edges());
        let others: Vec<Vertex> = face
            .vertices()
            .into_iter()
            .filter(|&u| u != apex)
            .collect();
        push_triangle(&mut y, apex, others[1], reps[0]);
        push_triangle(&mut y, apex, others[0], reps[1]);
        (PeelKind::FanExtension, Some(face))
    } else if member_total == 2 {
        let mut posted: Vec<(Vertex, Triangle)> = groups
            .iter()
            .map(|(&face, reps)| (reps[0], face))
            .collect();
        posted.sort_unstable();
        let (v1, face_a) = posted[0];
        let (v2, face_b) = posted[1];
        let d = bag
            .into_iter()
            .find(|&u| !face_a.contains_vertex(u))
            .expect("one vertex misses the first face");
        let c = bag
            .into_iter()
            .find(|&u| !face_b.contains_vertex(u))
            .expect("one vertex misses the second face");
        let b = bag
            .into_iter()
            .find(|&u| u != apex && u != c && u != d)
            .expect("a fourth vertex remains");
        let hit = shared
            .edges()
            .into_iter()
            .find(|e| x.contains(e))
            .unwrap_or_else(|| abort("recursive transversal misses the shared face", trace));
        if hit == ordered(b, c) {
            x.extend([ordered(apex, d), ordered(apex, v1), ordered(b, v2)]);
            push_triangle(&mut y, apex, c, v1);
            push_triangle(&mut y, apex, b, v2);
        } else if hit == ordered(c, d) {
            x.extend([ordered(apex, b), ordered(c, v1), ordered(d, v2)]);
            push_triangle(&mut y, apex, c, v1);
            push_triangle(&mut y, apex, b, v2);
        } else {
            x.extend([ordered(apex, c), ordered(apex, v2), ordered(b, v1)]);
            push_triangle(&mut y, apex, d, v2);
            push_triangle(&mut y, apex, b, v1);
        }
        (PeelKind::SplitExtension, None)
    } else {
        let (&face_b, _) = groups
            .iter()
            .max_by_key(|(&face, reps)| (reps.len(), std::cmp::Reverse(face)))
            .expect("nonempty");
        let (&face_a, _) = groups
            .iter()
            .find(|(&face, _)| face != face_b)
            .expect("two or more faces");
        let d = bag
            .into_iter()
            .find(|&u| !face_a.contains_vertex(u))
            .expect("one vertex misses the first face");
        let c = bag
            .into_iter()
            .find(|&u| !face_b.contains_vertex(u))
            .expect("one vertex misses the second face");
        let b = bag
            .into_iter()
            .find(|&u| u != apex && u != c && u != d)
            .expect("a fourth vertex remains");
        let v1 = groups[&face_a][0];
        let v2 = groups[&face_b][0];
        let v3 = if groups[&face_b].len() >= 2 {
            groups[&face_b][1]
        } else {
            let (_, reps) = groups
                .iter()
                .find(|(&face, _)| face != face_a && face != face_b)
                .unwrap_or_else(|| abort("three members but no third face", trace));
            reps[0]
        };
        x.extend(clique_edges(bag));
        push_triangle(&mut y, apex, c, v1);
        push_triangle(&mut y, apex, b, v2);
        push_triangle(&mut y, apex, d, v3);
        (PeelKind::FullCliqueExtension, None)
    };

    check_level(g, &x, &y, trace);
    trace.push(PeelRecord {
        kind,
        vertices_before: g.n(),
        vertices_after: g.n() - drop.len(),
        bag: Some(bag),
        face: peeled_face,
        leaves: member_total,
        chains: 0,
        chain_faces: 0,
        leaf_faces: 0,
        transversal_added: x.len() as isize - x_before as isize,
        packing_added: y.len() as isize - y_before as isize,
        within_stated_ranges: true,
    });
    (x, y)
}

/// Assigns at most one piece per edge, maximizing the number of assigned
/// pieces. Each piece lists the edges it would accept. Deterministic: the
/// first maximum found in option order wins.
fn max_piece_matching(options: &[Vec<Edge>], banned: &EdgeSet) -> Vec<Option<Edge>> {
    fn go(
        i: usize,
        options: &[Vec<Edge>],
        banned: &EdgeSet,
        used: &mut Vec<Edge>,
        current: &mut Vec<Option<Edge>>,
        best: &mut (usize, Vec<Option<Edge>>),
    ) {
        if i == options.len() {
            let count = current.iter().flatten().count();
            if count > best.0 {
                *best = (count, current.clone());
            }
            return;
        }
        for &e in &options[i] {
            if banned.contains(&e) || used.contains(&e) {
                continue;
            }
            used.push(e);
            current.push(Some(e));
            go(i + 1, options, banned, used, current, best);
            used.pop();
            current.pop();
        }
        current.push(None);
        go(i + 1, options, banned, used, current, best);
        current.pop();
    }
    let mut best = (0usize, vec![None; options.len()]);
    go(
        0,
        options,
        banned,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut best,
    );
    best.1
}

fn other_endpoint(e: Edge, v: Vertex) -> Vertex {
    if e.0 == v {
        e.1
    } else {
        e.0
    }
}

/// Packs the members of a peeled region directly, one face at a time, using
/// only the apex spokes, member spokes and chain edges. Never touches the
/// shared face, so it composes with any packing of the remaining graph.
fn face_local_packing(apex: Vertex, groups: &BTreeMap<Triangle, Vec<Member>>) -> TriSet {
    enum Builder {
        LeafPiece { rep: Vertex },
        FixedChain { head: Vertex },
        FlexChain { head: Vertex, tail: Vertex, pair: [Vertex; 2] },
    }
    let mut out = TriSet::new();
    let mut options: Vec<Vec<Edge>> = Vec::new();
    let mut builders: Vec<Builder> = Vec::new();
    for (&face, members) in groups {
        let spokes: Vec<Vertex> = face
            .vertices()
            .into_iter()
            .filter(|&u| u != apex)
            .collect();
        for member in members {
            match *member {
                Member::Leaf { rep } => {
                    options.push(spokes.iter().map(|&z| ordered(apex, z)).collect());
                    builders.push(Builder::LeafPiece { rep });
                }
                Member::Chain {
                    head,
                    tail,
                    tail_host,
                } => {
                    let pair: Vec<Vertex> = tail_host
                        .vertices()
                        .into_iter()
                        .filter(|&u| u != head)
                        .collect();
                    if pair.contains(&apex) {
                        let w = *pair.iter().find(|&&u| u != apex).expect("two host mates");
                        out.insert(Triangle::new(head, tail, w).expect("distinct"));
                        let lone = face
                            .vertices()
                            .into_iter()
                            .find(|&u| u != apex && u != w)
                            .expect("a third face vertex");
                        options.push(vec![ordered(apex, lone)]);
                        builders.push(Builder::FixedChain { head });
                    } else {
                        options.push(pair.iter().map(|&w| {
                            let z = *pair.iter().find(|&&u| u != w).expect("two host mates");
                            ordered(apex, z)
                        }).collect());
                        builders.push(Builder::FlexChain {
                            head,
                            tail,
                            pair: [pair[0], pair[1]],
                        });
                    }
                }
            }
        }
    }
    let assigned = max_piece_matching(&options, &BTreeSet::new());
    for (builder, slot) in builders.iter().zip(&assigned) {
        match *builder {
            Builder::LeafPiece { rep } => {
                if let Some(e) = slot {
                    let z = other_endpoint(*e, apex);
                    out.insert(Triangle::new(rep, apex, z).expect("distinct"));
                }
            }
            Builder::FixedChain { head } => {
                if let Some(e) = slot {
                    let z = other_endpoint(*e, apex);
                    out.insert(Triangle::new(head, apex, z).expect("distinct"));
                }
            }
            Builder::FlexChain { head, tail, pair } => match slot {
                Some(e) => {
                    let z = other_endpoint(*e, apex);
                    let w = if pair[0] == z { pair[1] } else { pair[0] };
                    out.insert(Triangle::new(head, tail, w).expect("distinct"));
                    out.insert(Triangle::new(head, apex, z).expect("distinct"));
                }
                None => {
                    let w = pair[0].min(pair[1]);
                    out.insert(Triangle::new(head, tail, w).expect("distinct"));
                }
            },
        }
    }
    out
}

/// Peels a height-2 clique with its full two-level region: at most two
/// members per face. The transversal takes the cheaper of two recipes; the
/// packing takes the larger of the pruned-stellation route and the direct
/// face-local route.
fn region_peel(
    seq: &ThreeTreeSeq,
    g: &Graph,
    tree: &BagTree,
    t: usize,
    trace: &mut Vec<PeelRecord>,
) -> (EdgeSet, TriSet) {
    let apex = tree.rep(t);
    let bag = tree.bag(t);
    let shared = tree.attach[t];
    let groups = face_members(tree, Some(t), trace);
    for (face, members) in &groups {
        if members.len() > 2 {
            abort("region peel on a face that should have been reduced", trace);
        }
        if !face.contains_vertex(apex) {
            abort("a member attached to the shared face from below", trace);
        }
    }
    let leaf_count: usize = groups
        .values()
        .flatten()
        .filter(|m| m.is_leaf())
        .count();
    let chain_count: usize = groups.values().map(Vec::len).sum::<usize>() - leaf_count;
    if chain_count == 0 {
        abort("height-2 clique without a chain below it", trace);
    }

    let drop = tree.subtree_reps(t);
    let (sub, old) = restrict(seq, &drop, trace);
    let (x_sub, y_sub) = peel(&sub, trace);
    let x_before = x_sub.len();
    let y_before = y_sub.len();
    let x_prev = lift_edges(x_sub, &old);
    let y_prev = lift_triangles(y_sub, &old);

    // transversal, recipe 1: the whole clique plus one edge per chain
    let mut x1 = x_prev.clone();
    x1.extend(clique_edges(bag));
    for member in groups.values().flatten() {
        if let Member::Chain { head, tail, .. } = *member {
            x1.insert(ordered(head, tail));
        }
    }

    // transversal, recipe 2: an opposite pair in the clique, then the
    // matching opposite edge inside every member clique
    let marked = shared
        .edges()
        .into_iter()
        .find(|e| x_prev.contains(e))
        .unwrap_or_else(|| abort("recursive transversal misses the shared face", trace));
    let across = opposite_clique_edge(bag, &[marked])
        .unwrap_or_else(|e| abort(&format!("no opposite edge in the peeled clique: {e}"), trace));
    let mut x2 = x_prev.clone();
    x2.insert(marked);
    x2.insert(across);
    for (&face, members) in &groups {
        for member in members {
            match *member {
                Member::Leaf { rep } => {
                    let e = opposite_clique_edge(member_bag(face, rep), &[marked, across])
                        .unwrap_or_else(|e| abort(&format!("leaf clique: {e}"), trace));
                    x2.insert(e);
                }
                Member::Chain {
                    head,
                    tail,
                    tail_host,
                } => {
                    let f = opposite_clique_edge(member_bag(face, head), &[marked, across])
                        .unwrap_or_else(|e| abort(&format!("chain clique: {e}"), trace));
                    x2.insert(f);
                    let f2 =
                        opposite_clique_edge(member_bag(tail_host, tail), &[marked, across, f])
                            .unwrap_or_else(|e| abort(&format!("chain tail clique: {e}"), trace));
                    x2.insert(f2);
                }
            }
        }
    }
    let x = if x2.len() <= x1.len() { x2 } else { x1 };
    let cap = (5 + chain_count).min(1 + leaf_count + 2 * chain_count);
    if x.len() > x_before + cap {
        abort("region transversal exceeded its cap", trace);
    }

    // packing route 1: prune overfull faces down to one member, realize the
    // remainder as a stellated tetrahedron and pack its faces
    let mut kept: Vec<(Triangle, Member)> = Vec::new();
    let mut pruned_chains: Vec<Member> = Vec::new();
    for (&face, members) in &groups {
        if members.len() == 1 {
            kept.push((face, members[0]));
        } else {
            let victim = *members
                .iter()
                .find(|m| m.is_leaf())
                .unwrap_or(&members[0]);
            let survivor = *members
                .iter()
                .find(|m| m.rep() != victim.rep())
                .expect("two members");
            kept.push((face, survivor));
            if !victim.is_leaf() {
                pruned_chains.push(victim);
            }
        }
    }
    let chain_faces = kept.iter().filter(|(_, m)| !m.is_leaf()).count();
    let leaf_faces = kept.len() - chain_faces;
    if chain_faces == 0 || chain_faces + leaf_faces > 3 {
        abort("face census out of range", trace);
    }

    let mut to_global: Vec<Vertex> = vec![apex];
    to_global.extend(shared.vertices());
    let mut to_local: BTreeMap<Vertex, Vertex> = to_global
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as Vertex))
        .collect();
    let localize = |t: Triangle, map: &BTreeMap<Vertex, Vertex>| {
        let [p, q, r] = t.vertices();
        Triangle::new(map[&p], map[&q], map[&r]).expect("local ids stay distinct")
    };
    let mut steps: Vec<Triangle> = Vec::new();
    for &(face, member) in &kept {
        match member {
            Member::Leaf { rep } => {
                steps.push(localize(face, &to_local));
                to_local.insert(rep, to_global.len() as Vertex);
                to_global.push(rep);
            }
            Member::Chain {
                head,
                tail,
                tail_host,
            } => {
                steps.push(localize(face, &to_local));
                to_local.insert(head, to_global.len() as Vertex);
                to_global.push(head);
                steps.push(localize(tail_host, &to_local));
                to_local.insert(tail, to_global.len() as Vertex);
                to_global.push(tail);
            }
        }
    }
    let region = from_stellation_sequence(StellationBase::Tetrahedron, &steps)
        .unwrap_or_else(|e| abort(&format!("region embedding failed: {e}"), trace));
    if region.faces().len() != 4 + 4 * chain_faces + 2 * leaf_faces {
        abort("region face count off", trace);
    }
    if !is_restricted(&region) {
        abort("region is not restricted", trace);
    }
    if is_super_restricted(&region) != (leaf_faces == 2) {
        abort("super-restricted census disagrees with the face census", trace);
    }
    let region_packing = restricted_packing(&region)
        .unwrap_or_else(|e| abort(&format!("region packing failed: {e}"), trace));
    if leaf_faces == 2 && region_packing.size != 5 {
        abort("super-restricted region must pack exactly five faces", trace);
    }
    let external = Triangle::new(1, 2, 3).expect("distinct");
    if !region_packing.triangles.contains(&external) {
        abort("region packing misses the shared face", trace);
    }
    let mut route1: TriSet = region_packing
        .triangles
        .iter()
        .filter(|&&t| t != external)
        .map(|t| {
            let [p, q, r] = t.vertices();
            Triangle::new(
                to_global[p as usize],
                to_global[q as usize],
                to_global[r as usize],
            )
            .expect("distinct")
        })
        .collect();
    for member in &pruned_chains {
        if let Member::Chain {
            head,
            tail,
            tail_host,
        } = *member
        {
            let w = tail_host
                .vertices()
                .into_iter()
                .filter(|&u| u != head)
                .min()
                .expect("two host mates");
            route1.insert(Triangle::new(head, tail, w).expect("distinct"));
        }
    }

    // packing route 2: direct, face by face
    let route2 = face_local_packing(apex, &groups);

    let picked = if route2.len() > route1.len() {
        route2
    } else {
        route1
    };
    let mut y = y_prev;
    y.extend(picked);

    check_level(g, &x, &y, trace);
    let within = (1..=6).contains(&chain_count)
        && (1..=3).contains(&chain_faces)
        && leaf_count <= 4
        && leaf_faces <= 1
        && chain_count >= chain_faces
        && chain_faces >= chain_count.div_ceil(2)
        && leaf_count >= leaf_faces
        && leaf_faces >= leaf_count.div_ceil(2)
        && chain_faces + leaf_faces <= 3;
    trace.push(PeelRecord {
        kind: PeelKind::RegionPeel,
        vertices_before: g.n(),
        vertices_after: g.n() - drop.len(),
        bag: Some(bag),
        face: None,
        leaves: leaf_count,
        chains: chain_count,
        chain_faces,
        leaf_faces,
        transversal_added: x.len() as isize - x_before as isize,
        packing_added: y.len() as isize - y_before as isize,
        within_stated_ranges: within,
    });
    (x, y)
}

/// Terminal peel when everything hangs directly off the root clique: builds
/// both sides in place, trying a handful of transversal shapes and packing
/// layouts and keeping the best of each.
fn root_assembly(
    _seq: &ThreeTreeSeq,
    g: &Graph,
    tree: &BagTree,
    trace: &mut Vec<PeelRecord>,
) -> (EdgeSet, TriSet) {
    let bag: [Vertex; 4] = [0, 1, 2, 3];
    let groups = face_members(tree, None, trace);
    for members in groups.values() {
        if members.len() > 2 {
            abort("root face that should have been reduced", trace);
        }
    }
    let leaf_count: usize = groups
        .values()
        .flatten()
        .filter(|m| m.is_leaf())
        .count();
    let chain_count: usize = groups.values().map(Vec::len).sum::<usize>() - leaf_count;
    if g.n() != 4 + leaf_count + 2 * chain_count {
        abort("root members do not account for the whole graph", trace);
    }

    // transversal shape 1: the root clique plus one edge per chain
    let mut shapes: Vec<EdgeSet> = Vec::new();
    let mut whole: EdgeSet = clique_edges(bag).into_iter().collect();
    for member in groups.values().flatten() {
        if let Member::Chain { head, tail, .. } = *member {
            whole.insert(ordered(head, tail));
        }
    }
    shapes.push(whole);

    // shape 2: an opposite pair of the root clique plus the matching
    // opposite edge inside every member clique
    for (p, q) in [
        (ordered(0, 1), ordered(2, 3)),
        (ordered(0, 2), ordered(1, 3)),
        (ordered(0, 3), ordered(1, 2)),
    ] {
        let mut shape: EdgeSet = [p, q].into_iter().collect();
        for (&face, members) in &groups {
            for member in members {
                match *member {
                    Member::Leaf { rep } => {
                        let e = opposite_clique_edge(member_bag(face, rep), &[p, q])
                            .unwrap_or_else(|e| abort(&format!("root leaf clique: {e}"), trace));
                        shape.insert(e);
                    }
                    Member::Chain {
                        head,
                        tail,
                        tail_host,
                    } => {
                        let f = opposite_clique_edge(member_bag(face, head), &[p, q])
                            .unwrap_or_else(|e| abort(&format!("root chain clique: {e}"), trace));
                        shape.insert(f);
                        let f2 = opposite_clique_edge(member_bag(tail_host, tail), &[p, q, f])
                            .unwrap_or_else(|e| {
                                abort(&format!("root chain tail clique: {e}"), trace)
                            });
                        shape.insert(f2);
                    }
                }
            }
        }
        shapes.push(shape);
    }

    // shape 3: all three edges of one anchor face, then local fixes for the
    // members of the other faces
    for anchor in root_faces() {
        let mut shape: EdgeSet = anchor.edges().into_iter().collect();
        for (&face, members) in &groups {
            for member in members {
                if face == anchor {
                    if let Member::Chain { head, tail, .. } = *member {
                        shape.insert(ordered(head, tail));
                    }
                    continue;
                }
                let off = face
                    .vertices()
                    .into_iter()
                    .find(|&u| !anchor.contains_vertex(u))
                    .expect("faces of a clique differ in one vertex");
                match *member {
                    Member::Leaf { rep } => {
                        shape.insert(ordered(rep, off));
                    }
                    Member::Chain {
                        head,
                        tail,
                        tail_host,
                    } => {
                        shape.insert(ordered(head, off));
                        shape.insert(ordered(head, tail));
                        let mates: Vec<Vertex> = tail_host
                            .vertices()
                            .into_iter()
                            .filter(|&u| u != head)
                            .collect();
                        let mate_edge = ordered(mates[0], mates[1]);
                        if !anchor.contains_edge(mates[0], mates[1]) {
                            shape.insert(mate_edge);
                        }
                    }
                }
            }
        }
        shapes.push(shape);
    }

    let mut x = shapes.remove(0);
    for shape in shapes {
        if shape.len() < x.len() {
            x = shape;
        }
    }

    // packing: chains always contribute their own triangle; every member
    // also bids for one root edge, and one root face may be reserved whole
    enum Builder {
        LeafPiece { rep: Vertex },
        ChainPiece { head: Vertex, tail: Vertex, face: Triangle, pair: [Vertex; 2] },
    }
    let mut options: Vec<Vec<Edge>> = Vec::new();
    let mut builders: Vec<Builder> = Vec::new();
    for (&face, members) in &groups {
        for member in members {
            match *member {
                Member::Leaf { rep } => {
                    options.push(face.edges().to_vec());
                    builders.push(Builder::LeafPiece { rep });
                }
                Member::Chain {
                    head,
                    tail,
                    tail_host,
                } => {
                    let mates: Vec<Vertex> = tail_host
                        .vertices()
                        .into_iter()
                        .filter(|&u| u != head)
                        .collect();
                    let avoid = |w: Vertex| {
                        let pair: Vec<Vertex> = face
                            .vertices()
                            .into_iter()
                            .filter(|&u| u != w)
                            .collect();
                        ordered(pair[0], pair[1])
                    };
                    options.push(mates.iter().map(|&w| avoid(w)).collect());
                    builders.push(Builder::ChainPiece {
                        head,
                        tail,
                        face,
                        pair: [mates[0], mates[1]],
                    });
                }
            }
        }
    }
    let mut reservations: Vec<Option<Triangle>> = vec![None];
    reservations.extend(root_faces().map(Some));
    let mut y: TriSet = TriSet::new();
    for reserved in reservations {
        let banned: EdgeSet = reserved
            .map(|f| f.edges().into_iter().collect())
            .unwrap_or_default();
        let assigned = max_piece_matching(&options, &banned);
        let mut layout = TriSet::new();
        if let Some(f) = reserved {
            layout.insert(f);
        }
        for (builder, slot) in builders.iter().zip(&assigned) {
            match *builder {
                Builder::LeafPiece { rep } => {
                    if let Some((u, v)) = slot {
                        layout.insert(Triangle::new(rep, *u, *v).expect("distinct"));
                    }
                }
                Builder::ChainPiece {
                    head,
                    tail,
                    face,
                    pair,
                } => match slot {
                    Some(e) => {
                        let w = face
                            .vertices()
                            .into_iter()
                            .find(|&u| u != e.0 && u != e.1)
                            .expect("the avoided vertex");
                        layout.insert(Triangle::new(head, tail, w).expect("distinct"));
                        layout.insert(Triangle::new(head, e.0, e.1).expect("distinct"));
                    }
                    None => {
                        let w = pair[0].min(pair[1]);
                        layout.insert(Triangle::new(head, tail, w).expect("distinct"));
                    }
                },
            }
        }
        if layout.len() > y.len() {
            y = layout;
        }
    }

    check_level(g, &x, &y, trace);
    trace.push(PeelRecord {
        kind: PeelKind::RootAssembly,
        vertices_before: g.n(),
        vertices_after: g.n(),
        bag: Some(bag),
        face: None,
        leaves: leaf_count,
        chains: chain_count,
        chain_faces: 0,
        leaf_faces: 0,
        transversal_added: x.len() as isize,
        packing_added: y.len() as isize,
        within_stated_ranges: true,
    });
    (x, y)
}
