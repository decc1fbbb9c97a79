//! Brute-force oracles for the integration suites. Everything here computes
//! straight from definitions (subset scans, triple loops) and deliberately
//! shares no code with the library's algorithms.

#![allow(dead_code)]

use tuza_core::graph::{ordered, Graph, Triangle, Vertex};
use tuza_core::planar::PlanarTriangulation;

/// Triple-loop triangle enumeration.
pub fn naive_triangles(g: &Graph) -> Vec<Triangle> {
    let n = g.n() as Vertex;
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            for w in (v + 1)..n {
                if g.has_edge(u, v) && g.has_edge(u, w) && g.has_edge(v, w) {
                    out.push(Triangle::new(u, v, w).unwrap());
                }
            }
        }
    }
    out
}

pub fn is_triangle_free(g: &Graph) -> bool {
    naive_triangles(g).is_empty()
}

/// BFS 2-coloring over every component.
pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = vec![s as Vertex];
        while let Some(u) = queue.pop() {
            for v in g.neighbors(u) {
                if color[v as usize] == u8::MAX {
                    color[v as usize] = 1 - color[u as usize];
                    queue.push(v);
                } else if color[v as usize] == color[u as usize] {
                    return false;
                }
            }
        }
    }
    true
}

/// Minimum transversal size by scanning all edge subsets. Only for graphs
/// with few edges.
pub fn tau_brute(g: &Graph) -> usize {
    let m = g.edge_count();
    assert!(m <= 20, "subset scan infeasible for {m} edges");
    let tri_edge_bits: Vec<u32> = naive_triangles(g)
        .iter()
        .map(|t| {
            t.edges()
                .iter()
                .map(|&(u, v)| 1u32 << g.edge_index(u, v).unwrap())
                .sum()
        })
        .collect();
    let mut best = m;
    for mask in 0u32..1 << m {
        if (mask.count_ones() as usize) < best && tri_edge_bits.iter().all(|&t| t & mask != 0) {
            best = mask.count_ones() as usize;
        }
    }
    best
}

/// Maximum packing size by scanning all triangle subsets. Only for graphs
/// with few triangles.
pub fn nu_brute(g: &Graph) -> usize {
    let tris = naive_triangles(g);
    let t = tris.len();
    assert!(t <= 20, "subset scan infeasible for {t} triangles");
    let conflict: Vec<u32> = (0..t)
        .map(|i| {
            (0..t)
                .filter(|&j| j != i && tris[i].shares_edge(&tris[j]))
                .map(|j| 1u32 << j)
                .sum()
        })
        .collect();
    let mut best = 0;
    'mask: for mask in 0u32..1 << t {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        for i in 0..t {
            if mask >> i & 1 == 1 && conflict[i] & mask != 0 {
                continue 'mask;
            }
        }
        best = mask.count_ones() as usize;
    }
    best
}

/// K5 minus one edge, the 5-vertex 3-tree.
pub fn k5_minus_edge() -> Graph {
    let edges: Vec<_> = Graph::complete(5).edges().iter().copied().filter(|&e| e != (3, 4)).collect();
    Graph::new(5, edges).unwrap()
}

/// Graph isomorphism by backtracking over degree-compatible assignments,
/// mapping vertices of `a` in order. Fine at the sizes the suites enumerate.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let deg = |g: &Graph| -> Vec<usize> { (0..g.n()).map(|v| g.neighbors(v as Vertex).len()).collect() };
    let da = deg(a);
    let db = deg(b);
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut image = vec![0 as Vertex; a.n()];
    let mut used = vec![false; a.n()];
    extend_map(a, b, &da, &db, 0, &mut image, &mut used)
}

fn extend_map(
    a: &Graph,
    b: &Graph,
    da: &[usize],
    db: &[usize],
    v: usize,
    image: &mut [Vertex],
    used: &mut [bool],
) -> bool {
    if v == a.n() {
        return true;
    }
    'candidate: for w in 0..b.n() {
        if used[w] || da[v] != db[w] {
            continue;
        }
        for u in 0..v {
            if a.has_edge(u as Vertex, v as Vertex) != b.has_edge(image[u], w as Vertex) {
                continue 'candidate;
            }
        }
        image[v] = w as Vertex;
        used[w] = true;
        if extend_map(a, b, da, db, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    false
}

/// All labeled 3-trees on `n` vertices, one graph per host-choice sequence.
/// Enumerated directly: start from K3 on {0,1,2}, attach each later vertex
/// to every triangle present at its step.
pub fn all_3tree_graphs(n: usize) -> Vec<Graph> {
    assert!(n >= 3);
    let mut out = Vec::new();
    let base = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    grow(&base, n, &mut out);
    out
}

fn grow(g: &Graph, n: usize, out: &mut Vec<Graph>) {
    if g.n() == n {
        out.push(g.clone());
        return;
    }
    let v = g.n() as Vertex;
    for t in naive_triangles(g) {
        let [a, b, c] = t.vertices();
        let mut edges: Vec<_> = g.edges().to_vec();
        edges.extend([ordered(a, v), ordered(b, v), ordered(c, v)]);
        grow(&Graph::new(g.n() + 1, edges).unwrap(), n, out);
    }
}

pub fn tri(a: Vertex, b: Vertex, c: Vertex) -> Triangle {
    Triangle::new(a, b, c).unwrap()
}

/// Embedding of K5 minus the edge (3, 4): two tetrahedra glued on (0, 1, 2).
pub fn k5_minus_edge_embedding() -> PlanarTriangulation {
    let faces = vec![
        tri(0, 1, 3),
        tri(0, 2, 3),
        tri(1, 2, 3),
        tri(0, 1, 4),
        tri(0, 2, 4),
        tri(1, 2, 4),
    ];
    PlanarTriangulation::new(k5_minus_edge(), faces, 2).unwrap()
}

/// The twelve hand-recorded restricted shapes: stellation steps plus a known
/// facial packing through the external face whose size the searcher must meet.
pub fn restricted_case_fixtures() -> Vec<(Vec<Triangle>, Vec<Triangle>, usize)> {
    let e = tri;
    vec![
        // One face doubly filled, a second singly filled.
        (
            vec![e(0, 1, 2), e(1, 2, 4), e(0, 2, 3)],
            vec![e(1, 2, 3), e(1, 4, 5), e(0, 2, 4), e(0, 3, 6)],
            10,
        ),
        (
            vec![e(0, 1, 2), e(0, 2, 4), e(0, 2, 3)],
            vec![e(1, 2, 3), e(0, 1, 4), e(0, 2, 5), e(0, 3, 6)],
            10,
        ),
        (
            vec![e(0, 1, 2), e(0, 1, 4), e(0, 2, 3)],
            vec![e(1, 2, 3), e(1, 4, 5), e(0, 2, 4), e(0, 3, 6)],
            10,
        ),
        // All three faces doubly filled.
        (
            vec![
                e(0, 1, 2),
                e(1, 2, 4),
                e(0, 2, 3),
                e(2, 3, 6),
                e(0, 1, 3),
                e(1, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(1, 4, 5),
                e(0, 2, 4),
                e(2, 6, 7),
                e(0, 3, 6),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 2, 4),
                e(0, 2, 3),
                e(2, 3, 6),
                e(0, 1, 3),
                e(1, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 2, 5),
                e(2, 6, 7),
                e(0, 3, 6),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 2, 4),
                e(0, 2, 3),
                e(0, 2, 6),
                e(0, 1, 3),
                e(1, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 4, 5),
                e(0, 2, 7),
                e(0, 3, 6),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 2, 4),
                e(0, 2, 3),
                e(0, 3, 6),
                e(0, 1, 3),
                e(1, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 4, 5),
                e(0, 2, 6),
                e(0, 3, 7),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 1, 4),
                e(0, 2, 3),
                e(0, 3, 6),
                e(0, 1, 3),
                e(1, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 4, 5),
                e(0, 2, 6),
                e(0, 3, 7),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 1, 4),
                e(0, 2, 3),
                e(0, 3, 6),
                e(0, 1, 3),
                e(0, 3, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 4, 5),
                e(0, 2, 6),
                e(0, 3, 7),
                e(3, 8, 9),
                e(0, 1, 8),
            ],
            16,
        ),
        (
            vec![
                e(0, 1, 2),
                e(0, 2, 4),
                e(0, 2, 3),
                e(0, 3, 6),
                e(0, 1, 3),
                e(0, 1, 8),
            ],
            vec![
                e(1, 2, 3),
                e(0, 1, 4),
                e(2, 4, 5),
                e(0, 2, 6),
                e(3, 6, 7),
                e(0, 3, 8),
                e(1, 8, 9),
            ],
            16,
        ),
        // Super restricted: one pair and two singletons.
        (
            vec![e(0, 1, 2), e(1, 2, 4), e(0, 2, 3), e(0, 1, 3)],
            vec![e(1, 2, 3), e(0, 1, 4), e(2, 4, 5), e(0, 2, 6), e(0, 3, 7)],
            12,
        ),
        (
            vec![e(0, 1, 2), e(0, 2, 4), e(0, 2, 3), e(0, 1, 3)],
            vec![e(1, 2, 3), e(0, 1, 4), e(2, 4, 5), e(0, 2, 6), e(0, 3, 7)],
            12,
        ),
    ]
}

/// Every way to fill the three internal root faces with at most two vertices
/// each: a face is empty, singly filled, or a pair with the second vertex in
/// one of the three cells left by the first.
pub fn all_restricted_fillings() -> Vec<([usize; 3], Vec<Triangle>)> {
    let root = [tri(0, 1, 2), tri(0, 2, 3), tri(0, 1, 3)];
    let mut out = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                let config = [a, b, c];
                if !config.iter().any(|&x| x >= 2) {
                    continue; // spread below 2 everywhere
                }
                let mut steps = Vec::new();
                let mut next = 4 as Vertex;
                for (face, &kind) in root.iter().zip(&config) {
                    if kind == 0 {
                        continue;
                    }
                    steps.push(*face);
                    let first = next;
                    next += 1;
                    if kind >= 2 {
                        let [x, y, z] = face.vertices();
                        let cell = match kind {
                            2 => tri(x, y, first),
                            3 => tri(x, z, first),
                            _ => tri(y, z, first),
                        };
                        steps.push(cell);
                        next += 1;
                    }
                }
                let counts = config.map(|k: usize| k.min(2));
                out.push((counts, steps));
            }
        }
    }
    out
}
