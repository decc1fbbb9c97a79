//! Exact-solver acceptance against brute force and frozen small values.

mod common;

use num::rational::Ratio;
use proptest::prelude::*;
use tuza_core::graph::{Graph, Vertex};
use tuza_core::solve::{check_ratio, nu_exact, nu_exact_with_budget, tau_exact, tau_exact_with_budget, SolveError};

#[test]
fn frozen_base_values() {
    let k4 = Graph::complete(4);
    assert_eq!(tau_exact(&k4).unwrap().size, 2);
    assert_eq!(nu_exact(&k4).unwrap().size, 1);

    let k5e = common::k5_minus_edge();
    assert_eq!(tau_exact(&k5e).unwrap().size, 3);
    assert_eq!(nu_exact(&k5e).unwrap().size, 2);

    let k5 = Graph::complete(5);
    assert_eq!(tau_exact(&k5).unwrap().size, common::tau_brute(&k5));
    assert_eq!(nu_exact(&k5).unwrap().size, common::nu_brute(&k5));
    assert_eq!(tau_exact(&k5).unwrap().size, 4);
    assert_eq!(nu_exact(&k5).unwrap().size, 2);

    let c5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
    assert_eq!(tau_exact(&c5).unwrap().size, 0);
    assert_eq!(nu_exact(&c5).unwrap().size, 0);
}

#[test]
fn five_and_six_vertex_three_trees() {
    for g in common::all_3tree_graphs(5) {
        assert_eq!(tau_exact(&g).unwrap().size, 3);
        assert_eq!(nu_exact(&g).unwrap().size, 2);
    }
    for g in common::all_3tree_graphs(6) {
        let tau = tau_exact(&g).unwrap();
        let nu = nu_exact(&g).unwrap();
        assert_eq!(nu.size, 3, "every 6-vertex 3-tree packs exactly 3 triangles");
        assert!(tau.size <= 4, "6-vertex 3-tree needed tau = {}", tau.size);
        assert_eq!(tau.size, common::tau_brute(&g));
    }
}

#[test]
fn certificates_validate_and_sizes_agree() {
    for g in [Graph::complete(6), common::k5_minus_edge(), Graph::complete(4)] {
        let t = tau_exact(&g).unwrap();
        t.validate(&g).unwrap();
        let p = nu_exact(&g).unwrap();
        p.validate(&g).unwrap();
        assert_eq!(t.size, t.edges.len());
        assert_eq!(p.size, p.triangles.len());
    }
}

#[test]
fn budget_overrun_is_an_error_not_a_guess() {
    let g = Graph::complete(7);
    match tau_exact_with_budget(&g, 3) {
        Err(SolveError::BudgetExceeded { budget: 3 }) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
    // K7 and K6 pack tightly enough that the root bound closes them, so the
    // packing side gets K5, where nu = 2 sits strictly below every cheap cap.
    let g = Graph::complete(5);
    match nu_exact_with_budget(&g, 3) {
        Err(SolveError::BudgetExceeded { budget: 3 }) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn ratio_reports_use_exact_rationals() {
    let k4 = Graph::complete(4);
    let r = check_ratio(&k4, Ratio::from_integer(2), Ratio::from_integer(0)).unwrap();
    assert_eq!((r.tau, r.nu), (2, 1));
    assert!(r.holds, "2 <= 2*1");

    let k5e = common::k5_minus_edge();
    let r = check_ratio(&k5e, Ratio::new(3, 2), Ratio::from_integer(0)).unwrap();
    assert_eq!((r.tau, r.nu), (3, 2));
    assert!(r.holds, "3 <= (3/2)*2 exactly");

    let r = check_ratio(&k4, Ratio::new(9, 5), Ratio::new(1, 5)).unwrap();
    assert!(r.holds, "10/5 <= 9/5 + 1/5");

    // and a bound that genuinely fails
    let r = check_ratio(&k4, Ratio::new(3, 2), Ratio::from_integer(0)).unwrap();
    assert!(!r.holds, "2 > 3/2 on K4");
}

fn graph_on(n: usize) -> impl Strategy<Value = Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
        .flat_map(|u| ((u + 1)..n as Vertex).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    proptest::bits::u64::between(0, m).prop_map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).unwrap()
    })
}

proptest! {
    #[test]
    fn tau_matches_brute_force_up_to_12_edges(g in graph_on(7)) {
        prop_assume!(g.edge_count() <= 12);
        let cert = tau_exact(&g).unwrap();
        cert.validate(&g).unwrap();
        prop_assert_eq!(cert.size, common::tau_brute(&g));
    }

    #[test]
    fn nu_matches_brute_force_up_to_10_triangles(g in graph_on(7)) {
        prop_assume!(common::naive_triangles(&g).len() <= 10);
        let cert = nu_exact(&g).unwrap();
        cert.validate(&g).unwrap();
        prop_assert_eq!(cert.size, common::nu_brute(&g));
    }

    #[test]
    fn deleting_an_edge_never_raises_tau_or_nu(g in graph_on(7), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0);
        let e = g.edges()[pick.index(g.edge_count())];
        let smaller = g.without_edges(&[e]);
        prop_assert!(tau_exact(&smaller).unwrap().size <= tau_exact(&g).unwrap().size);
        prop_assert!(nu_exact(&smaller).unwrap().size <= nu_exact(&g).unwrap().size);
    }

    #[test]
    fn solvers_are_deterministic(g in graph_on(7)) {
        prop_assert_eq!(tau_exact(&g).unwrap(), tau_exact(&g).unwrap());
        prop_assert_eq!(nu_exact(&g).unwrap(), nu_exact(&g).unwrap());
    }
}
