//! Exact counting of Kneser colorings of uniform hypergraphs.
//!
//! A `(k, ell)`-Kneser coloring of an `r`-uniform hypergraph assigns one of
//! `k` colors to each edge so that edges of the same color share at least
//! `ell` vertices. This crate counts them exactly, builds the candidate
//! extremal hypergraphs, and evaluates the closed-form counts and bounds
//! that describe the extremal ones.

pub mod arith;
pub mod closedform;
pub mod count;
pub mod error;
pub mod families;
pub mod hypergraph;
pub mod lab;
pub mod splits;

pub use arith::{binom, BigCount};
pub use closedform::{alpha, star_sum, AlphaParameters, CoverageCount};
pub use count::{kappa_backtrack, kappa_chromatic, min_l_cover, star_count_exact, Budget, StarClass};
pub use error::{Error, Result};
pub use families::{AKParameters, CoverConfig};
pub use hypergraph::{ConflictGraph, Edge, Hypergraph, KneserColoring};
pub use lab::{ExperimentReport, Status};
pub use splits::{Cnd, ColorPartition, SplitVector};
