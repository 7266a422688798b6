//! Exact hypervolume of the region dominated by a set of d-dimensional points.
//!
//! The engine peels off the box dominated by a pivot point and recurses on the
//! remainder of the enclosing hypercuboid, using one of two splitting schemes:
//! the classic mask split into `2^d - 2` basic hypercuboids ([`SplitScheme::Qhv`])
//! or the d-way schema split ([`SplitScheme::Qhv2`]). Alongside the engine the
//! crate ships slow, obviously-correct oracles ([`oracle`]), seeded benchmark
//! instance families ([`instances`]), and a numerical solver for the
//! divide-and-conquer recurrence exponents that govern both schemes
//! ([`complexity`]).
//!
//! All geometry is generic over the scalar type through the [`Real`] trait;
//! the crate-root aliases pin the `f64` instantiation used by the CLI and the
//! test suites.

use std::fmt;
use std::str::FromStr;

pub mod complexity;
pub mod engine;
pub mod geometry;
pub mod instances;
pub mod oracle;

mod numeric;

/// Scalar type the geometry and the engine are generic over.
///
/// `f32` and `f64` are the intended instantiations; everything that matters
/// for correctness (comparisons, products, clipping) only needs IEEE float
/// semantics.
pub trait Real:
    num_traits::Float + FromStr + fmt::Debug + fmt::Display + fmt::LowerExp + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

pub use engine::{EngineConfig, EngineError, RunStats, SplitScheme};
pub use geometry::GeometryError;
pub use instances::{Family, InstanceError, InstanceSpec};
pub use oracle::OracleError;

/// `f64` instantiations used throughout the CLI and the test suites.
pub type Point = geometry::Point<f64>;
pub type PointSet = geometry::PointSet<f64>;
pub type Hypercuboid = geometry::Hypercuboid<f64>;
pub type Subproblem = engine::Subproblem<f64>;
pub type HvResult = engine::HvResult<f64>;
