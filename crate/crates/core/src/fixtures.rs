//! Named graphs and seeded corpus generators shared by the test suites and
//! the command-line harness. Everything here is deterministic: the same
//! seed always reproduces the same instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, Triangle, Vertex};
use crate::planar::{
    from_stellation_sequence, PlanarError, PlanarTriangulation, StellationBase,
};
use crate::treedec::{
    from_ktree_sequence, KTreeSequence, KTreeSequenceError, TreeDecomposition,
};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("the {family} family needs at least {min} vertices, got {n}")]
    TooSmall {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    KTree(#[from] KTreeSequenceError),
}

/// K6 plus three apex vertices joined to all of it: a 6-tree on nine
/// vertices, so its 33 edges are the most any treewidth-6 graph of that
/// order can carry, and its average degree is exactly 22/3. Returned with
/// a width-6 decomposition: one bag per apex over the shared K6.
pub fn k6_three_apex_graph() -> (Graph, TreeDecomposition) {
    let mut edges: Vec<Edge> = Vec::with_capacity(33);
    for i in 0..6 {
        for j in i + 1..6 {
            edges.push((i, j));
        }
    }
    for apex in 6..9 {
        for v in 0..6 {
            edges.push((v, apex));
        }
    }
    let g = Graph::new(9, edges).expect("fixed fixture");
    let bags: Vec<Vec<Vertex>> = (6..9)
        .map(|apex| {
            let mut bag: Vec<Vertex> = (0..6).collect();
            bag.push(apex);
            bag
        })
        .collect();
    let d = TreeDecomposition::new(bags, [(0, 1), (1, 2)]).expect("fixed fixture");
    (g, d)
}

/// A random stacked triangulation on `n` vertices: starting from the
/// tetrahedron, each new vertex subdivides an internal face chosen
/// uniformly. The external face is never subdivided, so it stays (1, 2, 3).
pub fn random_stacked_triangulation(
    n: usize,
    seed: u64,
) -> Result<PlanarTriangulation, FixtureError> {
    if n < 4 {
        return Err(FixtureError::TooSmall {
            family: "stacked triangulation",
            min: 4,
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tri = |a, b, c| Triangle::new(a, b, c).expect("distinct");
    // internal faces only, mirroring how stellation rewrites the face list
    let mut faces = vec![tri(0, 1, 2), tri(0, 1, 3), tri(0, 2, 3)];
    let mut steps = Vec::with_capacity(n - 4);
    for v in 4..n as Vertex {
        let index = rng.gen_range(0..faces.len());
        let face = faces[index];
        let [a, b, c] = face.vertices();
        steps.push(face);
        faces[index] = tri(a, b, v);
        faces.push(tri(a, c, v));
        faces.push(tri(b, c, v));
    }
    Ok(from_stellation_sequence(StellationBase::Tetrahedron, &steps)?)
}

/// A random partial 6-tree: a 6-tree grown by stacking each new vertex on a
/// random 6-clique, thinned by deleting a random quarter of its edges. The
/// full 6-tree's bag-per-step decomposition is returned alongside; it keeps
/// width 6 and stays valid for the thinned graph.
pub fn random_partial_six_tree(
    n: usize,
    seed: u64,
) -> Result<(Graph, TreeDecomposition), FixtureError> {
    if n < 7 {
        return Err(FixtureError::TooSmall {
            family: "partial 6-tree",
            min: 7,
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // the seed K6 hosts the first vertex; afterwards every host is one of
    // the 7-cliques formed so far minus one corner
    let mut cliques: Vec<[Vertex; 7]> = vec![[0, 1, 2, 3, 4, 5, 6]];
    let mut hosts: Vec<Vec<Vertex>> = vec![(0..6).collect()];
    for v in 7..n as Vertex {
        let base = cliques[rng.gen_range(0..cliques.len())];
        let omit = rng.gen_range(0..7);
        let host: Vec<Vertex> = base
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, &u)| u)
            .collect();
        let mut grown = [0 as Vertex; 7];
        grown[..6].copy_from_slice(&host);
        grown[6] = v;
        cliques.push(grown);
        hosts.push(host);
    }
    let (full, decomposition) = from_ktree_sequence(&KTreeSequence {
        k: 6,
        initial: (0..6).collect(),
        hosts,
    })?;
    let removed: Vec<Edge> = full
        .edges()
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.25))
        .collect();
    Ok((full.without_edges(removed.iter()), decomposition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::average_degree;
    use crate::planar::validate_triangulation;
    use crate::treedec::validate;
    use num::rational::Ratio;

    #[test]
    fn apex_fixture_headline_numbers() {
        let (g, d) = k6_three_apex_graph();
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 33);
        assert_eq!(average_degree(&g).unwrap(), Ratio::new(22, 3));
        let report = validate(&g, &d);
        assert!(report.valid);
        assert_eq!(report.width, 6);
    }

    #[test]
    fn stacked_triangulations_are_valid_and_deterministic() {
        for n in [4, 5, 9, 14] {
            let t = random_stacked_triangulation(n, 7).unwrap();
            assert_eq!(t.n(), n);
            assert!(validate_triangulation(t.graph(), t.faces()));
            assert_eq!(t.external_face(), Triangle::new(1, 2, 3).unwrap());
            assert_eq!(t, random_stacked_triangulation(n, 7).unwrap());
        }
        assert!(random_stacked_triangulation(3, 0).is_err());
        let a = random_stacked_triangulation(12, 1).unwrap();
        let b = random_stacked_triangulation(12, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn partial_six_trees_keep_their_decomposition() {
        for (n, seed) in [(7, 0), (9, 3), (12, 11)] {
            let (g, d) = random_partial_six_tree(n, seed).unwrap();
            assert_eq!(g.n(), n);
            assert!(g.edge_count() <= 6 * n - 21);
            let report = validate(&g, &d);
            assert!(report.valid);
            assert_eq!(report.width, 6);
            let (again, _) = random_partial_six_tree(n, seed).unwrap();
            assert_eq!(g, again);
        }
        assert!(random_partial_six_tree(6, 0).is_err());
    }
}
