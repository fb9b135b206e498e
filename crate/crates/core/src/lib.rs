//! Exact algorithms for shortest-path-preserving integer rounding of edge weights.
//!
//! Given an undirected graph with non-negative rational edge weights and an
//! error threshold `epsilon`, an epsilon-rounding replaces every weight by a
//! non-negative integer such that the weight of every shortest path changes by
//! (strictly) less than epsilon. Three escalating levels are supported:
//!
//! * *path-oblivious* — only the error bound holds;
//! * *weak* — additionally, every original shortest path stays shortest;
//! * *strong* — additionally, every new shortest path already was shortest.
//!
//! The crate provides
//!
//! * an exact-rational graph model and a verifier for all three levels
//!   ([`graph`], [`verify`]),
//! * a linear-time 1-rounding of path graphs ([`path`]),
//! * a quadratic-time decision procedure, witness construction, and minimum-
//!   epsilon optimization for trees via error-range-set dynamic programming
//!   ([`tree`]),
//! * brute-force and backtracking reference solvers for small instances
//!   ([`oracle`]),
//! * a 3-SAT-to-graph construction whose 1-roundings encode satisfying
//!   assignments ([`reduction`]).
//!
//! All arithmetic is exact; there is no floating point anywhere in a decision.
//! The crate is `no_std`-compatible (requires `alloc`).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod graph;
pub mod oracle;
pub mod path;
pub mod rational;
pub mod reduction;
pub mod shortest;
pub mod tree;
pub mod verify;

pub use graph::{Rounding, WeightedGraph};
pub use rational::Rational;
pub use verify::{Comparison, VerificationLevel, VerificationReport};
