//! Exact Turaev–Viro invariants of closed 3-manifolds at roots of unity.

pub mod catalog;
pub mod cli;
pub mod cyclotomic;
pub mod homology;
pub mod quantum;
pub mod reference;
pub mod statesum;
pub mod triangulation;
