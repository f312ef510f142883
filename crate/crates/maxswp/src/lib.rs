//! Exact solvers for maximum-social-welfare partitioning of graphs.
//!
//! A partition of a graph's vertices scores each member by the average
//! reciprocal induced distance to its coalition mates; this crate finds
//! partitions maximizing the total score, exactly:
//!
//! - [`path::solve_path`]: closed-form optimum for paths.
//! - [`tree::solve_tree`]: near-linear DP for trees, the workhorse.
//! - [`oracle::solve_exact`]: brute-force ground truth for any connected
//!   graph up to 20 vertices.
//! - [`reduce`]: the SAT reduction showing the problem is hard on 4-regular
//!   graphs, with desk-scale verification of its welfare threshold.
//!
//! All welfare values are exact rationals ([`Rational`]); no solver decision
//! ever goes through floating point.

pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod path;
pub mod rational;
pub mod reduce;
pub mod tree;
pub mod welfare;

pub use error::{Error, Result};
pub use graph::{CoalitionSet, Graph, Tree};
pub use rational::Rational;
pub use welfare::Partition;
