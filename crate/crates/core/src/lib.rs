//! Convex maximization over matroid bases.
//!
//! Given a matroid `M` on `n` elements (presented by an independence oracle), a
//! vectorial weighting `w : {1..n} -> R^d` and a convex functional `c` (presented by
//! an evaluation oracle), find a basis `B` maximizing `c(w(B))`.
//!
//! The solver enumerates the chambers of the central hyperplane arrangement with
//! normals `w(i) - w(j)`. These are the normal cones of the vertices of the zonotope
//! `sum_{i<j} [-1, 1] (w(i) - w(j))`, which refines `conv { w(B) }`. Each chamber
//! provides an interior linear functional `a`; the greedy algorithm for the scalar
//! weights `b(j) = a . w(j)` returns a basis whose weight vector is the vertex of
//! `conv { w(B) }` maximizing `a`. The best of these candidates is optimal for any
//! convex `c`. For fixed `d` the number of chambers is polynomial in `n`.
//!
//! Element indices are 0-based throughout the library; the CLI and instance files
//! use 1-based indices.

pub mod applications;
pub mod chambers;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod linprog;
pub mod matroid;
pub mod objective;
pub mod solver;

pub use chambers::{chamber_count_bound, Chamber, SignVector};
pub use error::{Error, Result};
pub use geometry::{GeneratorSet, Instance, Sign, Vector};
pub use matroid::{Basis, ConcreteMatroid, EnumerationLimits, Matroid};
pub use objective::{ConvexObjective, EvaluationOracle};
pub use solver::{brute_force_solve, solve, solve_with, Candidate, Complexity, SolveOptions, Solution};

/// Absolute strictness tolerance on dot-product signs and LP margins.
pub const EPS: f64 = 1e-9;
