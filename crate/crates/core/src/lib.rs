//! Gadgets, exact solvers and LP relaxations for cut, length-bounded cut,
//! interdiction and firefighter problems, with the probability tools used to
//! analyse dictatorship tests.
//!
//! Everything numeric is generic over [`Scalar`]; [`Rational`] gives exact
//! results and `f64`/`f32` give fast approximate ones.

pub mod approx;
pub mod error;
pub mod exact;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod lp;
pub mod prob;
pub mod random;
pub mod scalar;
pub mod solution;
pub mod ug;

pub use error::{Error, Result};
pub use graph::{CutInstance, CutMode, Distance, Element, NodeId, Problem, Weight, WeightedGraph};
pub use scalar::Scalar;
pub use solution::{CutSolution, Schedule};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Graph = WeightedGraph<Rational>;
pub type Instance = CutInstance<Rational>;
pub type Solution = CutSolution<Rational>;
pub type FloatGraph = WeightedGraph<f64>;
pub type FloatInstance = CutInstance<f64>;
