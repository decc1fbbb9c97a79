//! Certificate-producing toolkit for triangle transversals and triangle packings.
//!
//! The crate is organized bottom-up: plain graphs and triangle queries
//! (`graph`, `graph6`), exact branch-and-bound solvers for the transversal
//! number tau and the packing number nu (`solve`), tree-decomposition
//! machinery (`treedec`), reducing-triple verification and search (`reduce`),
//! planar-triangulation constructions built on duals and matchings
//! (`planar`), and the constructive 9/5 transversal/packing pair for 3-trees
//! (`ninefifths`). `fixtures` collects the named graphs used across tests
//! and the CLI.

pub mod fixtures;
pub mod graph;
pub mod graph6;
pub mod ninefifths;
pub mod planar;
pub mod reduce;
pub mod solve;
pub mod treedec;
