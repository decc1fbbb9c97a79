//! Tree decompositions: validity checking, full decompositions built from
//! k-tree construction sequences, and rooting by successive rotations.

use crate::graph::{Edge, Graph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("a decomposition needs at least one node")]
    NoNodes,
    #[error("tree node {node} is out of range for {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("tree edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("tree edge ({0}, {1}) appears twice")]
    DuplicateTreeEdge(usize, usize),
    #[error("the node graph is not a tree")]
    NotATree,
    #[error("not a full decomposition: {reason}")]
    NotFull { reason: String },
    #[error("the root has no representative")]
    RootHasNoRepresentative,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KTreeSequenceError {
    #[error("initial clique must be a permutation of 0..{k}")]
    BadInitial { k: usize },
    #[error("step {step}: host must name {k} distinct already-present vertices")]
    BadHost { step: usize, k: usize },
    #[error("step {step}: host vertices are not pairwise adjacent")]
    HostNotClique { step: usize },
}

/// A tree whose nodes carry vertex bags. Structural tree-ness is enforced at
/// construction; the three coverage axioms are checked against a graph by
/// `validate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionWire", into = "DecompositionWire")]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    tree_edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionWire {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
    bags: Vec<Vec<Vertex>>,
}

impl From<TreeDecomposition> for DecompositionWire {
    fn from(d: TreeDecomposition) -> DecompositionWire {
        DecompositionWire {
            nodes: (0..d.bags.len()).collect(),
            edges: d.tree_edges,
            bags: d.bags,
        }
    }
}

impl TryFrom<DecompositionWire> for TreeDecomposition {
    type Error = DecompositionError;

    fn try_from(w: DecompositionWire) -> Result<TreeDecomposition, DecompositionError> {
        if w.nodes != (0..w.bags.len()).collect::<Vec<_>>() {
            return Err(DecompositionError::NotATree);
        }
        TreeDecomposition::new(w.bags, w.edges)
    }
}

impl TreeDecomposition {
    pub fn new(
        bags: Vec<Vec<Vertex>>,
        tree_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<TreeDecomposition, DecompositionError> {
        let count = bags.len();
        if count == 0 {
            return Err(DecompositionError::NoNodes);
        }
        let mut edges = Vec::new();
        for (a, b) in tree_edges {
            if a == b {
                return Err(DecompositionError::SelfLoop(a));
            }
            for node in [a, b] {
                if node >= count {
                    return Err(DecompositionError::NodeOutOfRange { node, count });
                }
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(DecompositionError::DuplicateTreeEdge(w[0].0, w[0].1));
        }
        if edges.len() != count - 1 {
            return Err(DecompositionError::NotATree);
        }
        let mut adj = vec![Vec::new(); count];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; count];
        let mut queue = vec![0];
        seen[0] = true;
        while let Some(t) = queue.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    queue.push(s);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(DecompositionError::NotATree);
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(TreeDecomposition { bags, tree_edges: edges })
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, t: usize) -> &[Vertex] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    /// max bag size minus one; -1 for all-empty bags
    pub fn width(&self) -> isize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0) as isize - 1
    }

    fn tree_neighbors(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.tree_edges {
            if a == t {
                out.push(b);
            } else if b == t {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    /// a bag names a vertex the graph does not have
    VertexNotInGraph { node: usize, vertex: Vertex },
    /// some graph vertex is in no bag
    VertexUncovered { vertex: Vertex },
    /// some graph edge has both ends in no common bag
    EdgeUncovered { edge: Edge },
    /// the nodes holding some vertex do not form a subtree
    VertexNodesDisconnected { vertex: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub width: isize,
    pub violations: Vec<DecompositionViolation>,
}

pub fn validate(g: &Graph, d: &TreeDecomposition) -> ValidationReport {
    let mut violations = Vec::new();
    for (node, bag) in d.bags.iter().enumerate() {
        for &vertex in bag {
            if vertex as usize >= g.n() {
                violations.push(DecompositionViolation::VertexNotInGraph { node, vertex });
            }
        }
    }
    for v in 0..g.n() as Vertex {
        let holders: Vec<usize> = (0..d.node_count())
            .filter(|&t| d.bags[t].binary_search(&v).is_ok())
            .collect();
        if holders.is_empty() {
            violations.push(DecompositionViolation::VertexUncovered { vertex: v });
            continue;
        }
        // walk the induced node set; a subtree reaches all holders from one
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut queue = vec![holders[0]];
        seen.insert(holders[0]);
        while let Some(t) = queue.pop() {
            for s in d.tree_neighbors(t) {
                if holders.contains(&s) && seen.insert(s) {
                    queue.push(s);
                }
            }
        }
        if seen.len() != holders.len() {
            violations.push(DecompositionViolation::VertexNodesDisconnected { vertex: v });
        }
    }
    for &(u, v) in g.edges() {
        let covered = d.bags.iter().any(|bag| {
            bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok()
        });
        if !covered {
            violations.push(DecompositionViolation::EdgeUncovered { edge: (u, v) });
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        width: d.width(),
        violations,
    }
}

pub fn is_full(d: &TreeDecomposition, k: usize) -> bool {
    d.bags.iter().all(|b| b.len() == k + 1)
        && d.tree_edges
            .iter()
            .all(|&(a, b)| intersect_sorted(&d.bags[a], &d.bags[b]).len() == k)
}

fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
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

/// A full decomposition with a chosen root where no node meets its parent
/// and one of its successors in the same vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RootedWire", into = "RootedWire")]
pub struct RootedTreeDecomposition {
    base: TreeDecomposition,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    height: Vec<usize>,
    representative: Vec<Option<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct RootedWire {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
    bags: Vec<Vec<Vertex>>,
    root: usize,
}

impl From<RootedTreeDecomposition> for RootedWire {
    fn from(rd: RootedTreeDecomposition) -> RootedWire {
        RootedWire {
            nodes: (0..rd.base.bags.len()).collect(),
            edges: rd.base.tree_edges,
            bags: rd.base.bags,
            root: rd.root,
        }
    }
}

impl TryFrom<RootedWire> for RootedTreeDecomposition {
    type Error = DecompositionError;

    fn try_from(w: RootedWire) -> Result<RootedTreeDecomposition, DecompositionError> {
        let base = TreeDecomposition::try_from(DecompositionWire {
            nodes: w.nodes,
            edges: w.edges,
            bags: w.bags,
        })?;
        let rd = RootedTreeDecomposition::over(base, w.root)?;
        for t in 0..rd.base.node_count() {
            let Some(p) = rd.parent[t] else { continue };
            let up = intersect_sorted(rd.base.bag(t), rd.base.bag(p));
            for &s in &rd.children[t] {
                if up == intersect_sorted(rd.base.bag(t), rd.base.bag(s)) {
                    return Err(DecompositionError::NotFull {
                        reason: format!("node {t} meets parent and successor {s} alike"),
                    });
                }
            }
        }
        Ok(rd)
    }
}

impl RootedTreeDecomposition {
    /// Hangs an already-satisfactory full decomposition from `root`; callers
    /// normally go through `rootify`, which rotates first.
    fn over(
        base: TreeDecomposition,
        root: usize,
    ) -> Result<RootedTreeDecomposition, DecompositionError> {
        let count = base.node_count();
        if root >= count {
            return Err(DecompositionError::NodeOutOfRange { node: root, count });
        }
        let k = check_full(&base)?;
        let (parent, order) = bfs_parents(&base, root);
        let mut children = vec![Vec::new(); count];
        for t in 0..count {
            if let Some(p) = parent[t] {
                children[p].push(t);
            }
        }
        let mut height = vec![0usize; count];
        for &t in order.iter().rev() {
            if let Some(p) = parent[t] {
                height[p] = height[p].max(height[t] + 1);
            }
        }
        let mut representative = vec![None; count];
        for t in 0..count {
            if let Some(p) = parent[t] {
                let own: Vec<Vertex> = base
                    .bag(t)
                    .iter()
                    .copied()
                    .filter(|v| base.bag(p).binary_search(v).is_err())
                    .collect();
                debug_assert_eq!(own.len(), base.bag(t).len() - k, "full overlap");
                if own.len() != 1 {
                    return Err(DecompositionError::NotFull {
                        reason: format!("node {t} gains {} vertices over its parent", own.len()),
                    });
                }
                representative[t] = Some(own[0]);
            }
        }
        Ok(RootedTreeDecomposition {
            base,
            root,
            parent,
            children,
            height,
            representative,
        })
    }

    pub fn base(&self) -> &TreeDecomposition {
        &self.base
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn successors(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn height(&self, t: usize) -> usize {
        self.height[t]
    }

    pub fn representative(&self, t: usize) -> Result<Vertex, DecompositionError> {
        self.representative[t].ok_or(DecompositionError::RootHasNoRepresentative)
    }

    /// Representatives of `t` and everything below it, ascending. The root
    /// itself contributes nothing.
    pub fn subtree_representatives(&self, t: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            out.extend(self.representative[s]);
            stack.extend_from_slice(&self.children[s]);
        }
        out.sort_unstable();
        out
    }

    /// Successors grouped by what their bag shares with `t`'s, ordered by
    /// that shared set.
    pub fn successor_classes(&self, t: usize) -> Vec<(Vec<Vertex>, Vec<usize>)> {
        let mut classes: Vec<(Vec<Vertex>, Vec<usize>)> = Vec::new();
        for &s in &self.children[t] {
            let key = intersect_sorted(self.base.bag(t), self.base.bag(s));
            match classes.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(s),
                None => classes.push((key, vec![s])),
            }
        }
        classes.sort();
        classes
    }
}

fn check_full(d: &TreeDecomposition) -> Result<usize, DecompositionError> {
    let size = d.bag(0).len();
    if size == 0 {
        return Err(DecompositionError::NotFull {
            reason: "bags are empty".into(),
        });
    }
    let k = size - 1;
    if !is_full(d, k) {
        return Err(DecompositionError::NotFull {
            reason: format!("bag sizes or overlaps do not match width {k}"),
        });
    }
    Ok(k)
}

/// parents plus BFS visit order, children explored ascending
fn bfs_parents(d: &TreeDecomposition, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let count = d.node_count();
    let mut parent = vec![None; count];
    let mut seen = vec![false; count];
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let t = order[head];
        head += 1;
        for s in d.tree_neighbors(t) {
            if !seen[s] {
                seen[s] = true;
                parent[s] = Some(t);
                order.push(s);
            }
        }
    }
    (parent, order)
}

pub fn rootify(
    d: &TreeDecomposition,
    root: usize,
) -> Result<RootedTreeDecomposition, DecompositionError> {
    rootify_traced(d, root).map(|(rd, _)| rd)
}

/// Rotates offending successors up to their grandparent until the rooted
/// condition holds, returning the total root-path length after each pass.
/// That potential strictly falls with every rotation, which bounds the loop.
pub fn rootify_traced(
    d: &TreeDecomposition,
    root: usize,
) -> Result<(RootedTreeDecomposition, Vec<usize>), DecompositionError> {
    let count = d.node_count();
    if root >= count {
        return Err(DecompositionError::NodeOutOfRange { node: root, count });
    }
    let k = check_full(d)?;
    let mut current = d.clone();
    let mut trace = Vec::new();
    loop {
        let (parent, order) = bfs_parents(&current, root);
        let potential: usize = {
            let mut depth = vec![0usize; count];
            for &t in &order {
                if let Some(p) = parent[t] {
                    depth[t] = depth[p] + 1;
                }
            }
            depth.iter().map(|d| d + 1).sum()
        };
        if let Some(&last) = trace.last() {
            assert!(potential < last, "each rotation must shorten root paths");
        }
        trace.push(potential);

        let mut offender = None;
        'scan: for &t in &order {
            let Some(p) = parent[t] else { continue };
            let up = intersect_sorted(current.bag(t), current.bag(p));
            let mut succ: Vec<usize> = (0..count).filter(|&s| parent[s] == Some(t)).collect();
            succ.sort_unstable();
            for s in succ {
                if up == intersect_sorted(current.bag(t), current.bag(s)) {
                    offender = Some((t, p, s));
                    break 'scan;
                }
            }
        }
        match offender {
            None => return Ok((RootedTreeDecomposition::over(current, root)?, trace)),
            Some((t, p, s)) => {
                // re-hang s from the grandparent; the shared set is the same,
                // so the decomposition stays full
                debug_assert_eq!(
                    intersect_sorted(current.bag(p), current.bag(s)).len(),
                    k,
                    "rotation would break fullness"
                );
                let mut edges = current.tree_edges.clone();
                edges.retain(|&e| e != (t.min(s), t.max(s)));
                edges.push((p.min(s), p.max(s)));
                current = TreeDecomposition::new(current.bags.clone(), edges)
                    .expect("rotation keeps the node graph a tree");
            }
        }
    }
}

/// A k-tree built by seeding a k-clique and repeatedly joining vertex k+i to
/// an existing k-clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTreeSequence {
    pub k: usize,
    pub initial: Vec<Vertex>,
    pub hosts: Vec<Vec<Vertex>>,
}

impl KTreeSequence {
    pub fn n(&self) -> usize {
        self.k + self.hosts.len()
    }
}

/// Builds the k-tree together with its bag-per-step full decomposition. A
/// stepless sequence yields the seed clique in a single bag of width k-1.
pub fn from_ktree_sequence(
    seq: &KTreeSequence,
) -> Result<(Graph, TreeDecomposition), KTreeSequenceError> {
    let k = seq.k;
    let mut sorted_initial = seq.initial.clone();
    sorted_initial.sort_unstable();
    if sorted_initial != (0..k as Vertex).collect::<Vec<_>>() {
        return Err(KTreeSequenceError::BadInitial { k });
    }
    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..k as Vertex {
        for j in i + 1..k as Vertex {
            edges.push((i, j));
        }
    }
    let has = |edges: &[Edge], u: Vertex, v: Vertex| {
        edges.contains(&(u.min(v), u.max(v)))
    };
    for (step, host) in seq.hosts.iter().enumerate() {
        let v = (k + step) as Vertex;
        let mut h = host.clone();
        h.sort_unstable();
        h.dedup();
        if h.len() != k || h.iter().any(|&u| u >= v) {
            return Err(KTreeSequenceError::BadHost { step, k });
        }
        for (a, &u) in h.iter().enumerate() {
            for &w in &h[a + 1..] {
                if !has(&edges, u, w) {
                    return Err(KTreeSequenceError::HostNotClique { step });
                }
            }
        }
        for &u in &h {
            edges.push((u, v));
        }
    }
    let n = seq.n();
    let g = Graph::new(n, edges).expect("construction only adds fresh edges");

    if seq.hosts.is_empty() {
        let d = TreeDecomposition::new(vec![sorted_initial], []).expect("single node");
        return Ok((g, d));
    }
    let mut bags = Vec::with_capacity(seq.hosts.len());
    let mut tree_edges = Vec::new();
    for (step, host) in seq.hosts.iter().enumerate() {
        let mut bag = host.clone();
        bag.push((k + step) as Vertex);
        bag.sort_unstable();
        bags.push(bag);
        if step > 0 {
            // hang below the bag of the youngest step vertex in the host,
            // or below the seed bag if the host is all seed vertices
            let parent = host
                .iter()
                .filter(|&&u| u >= k as Vertex)
                .max()
                .map(|&u| u as usize - k)
                .unwrap_or(0);
            tree_edges.push((parent, step));
        }
    }
    let d = TreeDecomposition::new(bags, tree_edges).expect("one new bag per step");
    debug_assert!(is_full(&d, k));
    Ok((g, d))
}
