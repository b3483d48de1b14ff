//! Fixed inputs shared by the benchmarks.

use kneser_core::families::{disjoint_cover, extremal_hypergraph};
use kneser_core::{CoverConfig, Hypergraph};

/// A named counting instance.
pub struct Instance {
    pub name: &'static str,
    pub h: Hypergraph,
    pub k: usize,
    pub ell: usize,
}

/// Small instances every counter finishes on in milliseconds.
pub fn counting_instances() -> Vec<Instance> {
    vec![
        Instance { name: "K6 k=3", h: Hypergraph::complete(6, 2).unwrap(), k: 3, ell: 1 },
        Instance { name: "K(6,3) k=3 ell=2", h: Hypergraph::complete(6, 3).unwrap(), k: 3, ell: 2 },
        Instance { name: "extremal(8,3) k=4 ell=2", h: extremal_hypergraph(8, 3, 4, 2).unwrap(), k: 4, ell: 2 },
    ]
}

/// `H_{n,r,k,ell}` together with its disjoint cover.
pub fn star_instance(n: usize, r: usize, k: usize, ell: usize) -> (Hypergraph, CoverConfig) {
    (extremal_hypergraph(n, r, k, ell).unwrap(), disjoint_cover(n, r, k, ell).unwrap())
}
