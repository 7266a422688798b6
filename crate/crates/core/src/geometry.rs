//! Points, axis-parallel boxes, dominance tests, box volumes, clipping, and
//! naive Pareto filtering.
//!
//! Everything here follows the maximization convention: larger coordinates
//! are better, and the volume dominated by a point `s` relative to a
//! reference `r` is the box `[r, s]`. All values are immutable after
//! construction and all operations are pure, so they can be shared freely
//! between threads.

use std::ops::Index;

use thiserror::Error;

use crate::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("points need at least 2 coordinates, got {0}")]
    DimensionTooSmall(usize),
    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("box corners are out of order at coordinate {index} (lower > upper)")]
    CornerOrder { index: usize },
    #[error("point set must not be empty")]
    EmptySet,
}

/// One d-dimensional objective vector. Coordinates are finite and d >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::DimensionTooSmall(coords.len()));
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate { index });
            }
        }
        Ok(Point { coords })
    }

    /// Construction bypass for values produced by operations that preserve
    /// the invariants (clipping, pointwise min of valid points, ...).
    pub(crate) fn new_unchecked(coords: Vec<T>) -> Self {
        debug_assert!(coords.len() >= 2 && coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;

    fn index(&self, j: usize) -> &T {
        &self.coords[j]
    }
}

fn assert_same_dim<T: Real>(a: &Point<T>, b: &Point<T>) {
    assert_eq!(
        a.dim(),
        b.dim(),
        "operands must have the same dimension ({} vs {})",
        a.dim(),
        b.dim()
    );
}

/// True iff `a` is at least as good as `b` everywhere and strictly better
/// somewhere.
///
/// Panics if the dimensions differ.
pub fn dominates<T: Real>(a: &Point<T>, b: &Point<T>) -> bool {
    assert_same_dim(a, b);
    let mut strict = false;
    for (&x, &y) in a.coords.iter().zip(&b.coords) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

/// True iff `a` is at least as good as `b` on every coordinate (ties allowed).
pub fn weakly_dominates<T: Real>(a: &Point<T>, b: &Point<T>) -> bool {
    assert_same_dim(a, b);
    a.coords.iter().zip(&b.coords).all(|(&x, &y)| x >= y)
}

/// Volume of the box spanned by `s` above the reference `r`: the product of
/// `max(0, s_j - r_j)`. Negative side lengths clamp to zero, so points on or
/// below the reference contribute nothing instead of erroring.
pub fn box_volume<T: Real>(s: &Point<T>, r: &Point<T>) -> T {
    assert_same_dim(s, r);
    let mut volume = T::one();
    for (&hi, &lo) in s.coords.iter().zip(&r.coords) {
        if hi <= lo {
            return T::zero();
        }
        volume = volume * (hi - lo);
    }
    volume
}

/// Pointwise `min(s_j, upper_j)`: the projection of `s` onto the region below
/// `upper`. Idempotent, and it preserves the volume dominated inside any box
/// whose upper corner is `upper`.
pub fn clip<T: Real>(s: &Point<T>, upper: &Point<T>) -> Point<T> {
    assert_same_dim(s, upper);
    Point::new_unchecked(
        s.coords
            .iter()
            .zip(&upper.coords)
            .map(|(&x, &u)| x.min(u))
            .collect(),
    )
}

/// Pointwise minimum; the corner of the intersection of the two dominated
/// boxes.
pub fn pointwise_min<T: Real>(a: &Point<T>, b: &Point<T>) -> Point<T> {
    assert_same_dim(a, b);
    Point::new_unchecked(
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| x.min(y))
            .collect(),
    )
}

/// Axis-parallel box given by its lower and upper corners. Degenerate
/// zero-width sides are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypercuboid<T> {
    lower: Point<T>,
    upper: Point<T>,
}

impl<T: Real> Hypercuboid<T> {
    pub fn new(lower: Point<T>, upper: Point<T>) -> Result<Self, GeometryError> {
        if lower.dim() != upper.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: lower.dim(),
                got: upper.dim(),
            });
        }
        for (index, (&lo, &hi)) in lower.coords.iter().zip(&upper.coords).enumerate() {
            if lo > hi {
                return Err(GeometryError::CornerOrder { index });
            }
        }
        Ok(Hypercuboid { lower, upper })
    }

    pub(crate) fn new_unchecked(lower: Point<T>, upper: Point<T>) -> Self {
        debug_assert_eq!(lower.dim(), upper.dim());
        debug_assert!(lower.coords.iter().zip(&upper.coords).all(|(l, u)| l <= u));
        Hypercuboid { lower, upper }
    }

    pub fn lower(&self) -> &Point<T> {
        &self.lower
    }

    pub fn upper(&self) -> &Point<T> {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn volume(&self) -> T {
        box_volume(&self.upper, &self.lower)
    }
}

/// Ordered sequence of points of one common dimension. Iteration order is the
/// construction order, which keeps every downstream computation
/// deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    points: Vec<Point<T>>,
}

impl<T: Real> PointSet<T> {
    pub fn new(dim: usize, points: Vec<Point<T>>) -> Result<Self, GeometryError> {
        if dim < 2 {
            return Err(GeometryError::DimensionTooSmall(dim));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        Ok(PointSet { dim, points })
    }

    /// Builds a set from a nonempty list, inferring the dimension from the
    /// first point.
    pub fn from_points(points: Vec<Point<T>>) -> Result<Self, GeometryError> {
        let dim = points.first().ok_or(GeometryError::EmptySet)?.dim();
        Self::new(dim, points)
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 2, "point sets need dimension >= 2");
        PointSet {
            dim,
            points: Vec::new(),
        }
    }

    pub(crate) fn new_unchecked(dim: usize, points: Vec<Point<T>>) -> Self {
        debug_assert!(dim >= 2 && points.iter().all(|p| p.dim() == dim));
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point<T>> {
        self.points.iter()
    }
}

/// Removes every point dominated by another point of the set, comparing all
/// pairs. Among exact duplicates the first in input order is kept; the output
/// preserves input order.
pub fn pareto_filter<T: Real>(set: &PointSet<T>) -> PointSet<T> {
    let points = set.points();
    let mut kept = Vec::new();
    'candidates: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates(q, p) || (j < i && q == p) {
                continue 'candidates;
            }
        }
        kept.push(p.clone());
    }
    PointSet::new_unchecked(set.dim(), kept)
}
