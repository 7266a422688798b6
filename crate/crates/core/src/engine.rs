//! The quick-hypervolume divide-and-conquer recursion with two pluggable
//! splitting schemes.
//!
//! Every node peels off the box dominated by a pivot (the point spanning the
//! largest volume above the local reference corner), splits the rest of the
//! enclosing hypercuboid into disjoint sub-boxes, assigns the remaining
//! points to every sub-box they reach (clipped to its upper corner), and
//! recurses. Small point sets are finished by closed forms or
//! inclusion-exclusion.
//!
//! The two schemes differ only in the split:
//!
//! * [`SplitScheme::Qhv`] cuts along every coordinate at once, one sub-box
//!   per binary comparison vector, `2^d - 2` of them (the cells dominated by
//!   and dominating the pivot are excluded).
//! * [`SplitScheme::Qhv2`] cuts into `d` sub-boxes: sub-box `j` collects the
//!   region that is below the pivot on coordinates `1..j` and at or above it
//!   on coordinate `j`.
//!
//! Both schemes compute the same value; they differ in the recursion tree
//! they build, which is what [`RunStats`] and the cut mode measure.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{box_volume, pointwise_min, Hypercuboid, Point, PointSet};
use crate::numeric::pairwise_sum;
use crate::oracle::inclusion_exclusion;
use crate::Real;

/// Largest dimension the mask-based scheme supports; its comparison vectors
/// are kept in a 32-bit mask.
pub const QHV_MAX_DIM: usize = 30;

/// Largest `small_set_threshold`; beyond this inclusion-exclusion is no
/// longer a sensible leaf solver.
pub const MAX_SMALL_SET_THRESHOLD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitScheme {
    /// Split into `2^d - 2` basic hypercuboids, one per comparison vector.
    Qhv,
    /// Split into `d` schema-defined hypercuboids.
    Qhv2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("point set dimension {points} does not match box dimension {bounds}")]
    DimensionMismatch { points: usize, bounds: usize },
    #[error("the mask split supports at most {QHV_MAX_DIM} dimensions, got {0}")]
    QhvDimensionLimit(usize),
    #[error("small_set_threshold must be in 2..={MAX_SMALL_SET_THRESHOLD}, got {0}")]
    InvalidSmallSetThreshold(usize),
    #[error("cut_threshold must be at least 1")]
    InvalidCutThreshold,
    #[error("tree counting requires cut_threshold to be set")]
    MissingCutThreshold,
    #[error("cannot select a pivot from an empty point set")]
    EmptyPointSet,
    #[error("recursion depth {depth} exceeded the {limit} guard")]
    DepthLimitExceeded { depth: u64, limit: u64 },
}

/// Knobs of one computation. The defaults reproduce the plain two-point base
/// case with no recursion cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub scheme: SplitScheme,
    /// Subproblems of at most this many points are solved directly (closed
    /// forms for up to two points, inclusion-exclusion above). Range 2..=12.
    pub small_set_threshold: usize,
    /// When set, subproblems of at most this many points are counted as
    /// leaves and not evaluated; the run yields statistics only.
    pub cut_threshold: Option<usize>,
    /// Drop points weakly dominated by the pivot before assignment. The
    /// assignment rules already exclude them, so this only short-circuits
    /// the per-sub-box tests; results and counters are unaffected.
    pub prune_by_pivot: bool,
    /// Re-run the naive dominated-point filter on every subproblem after
    /// assignment. Off by default: it is not needed for correctness and the
    /// schemes are easier to compare without it.
    pub explicit_pareto_filter: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            scheme: SplitScheme::Qhv2,
            small_set_threshold: 2,
            cut_threshold: None,
            prune_by_pivot: true,
            explicit_pareto_filter: false,
        }
    }
}

impl EngineConfig {
    pub fn with_scheme(scheme: SplitScheme) -> Self {
        EngineConfig {
            scheme,
            ..EngineConfig::default()
        }
    }

    fn validate(&self, dim: usize) -> Result<(), EngineError> {
        if self.small_set_threshold < 2 || self.small_set_threshold > MAX_SMALL_SET_THRESHOLD {
            return Err(EngineError::InvalidSmallSetThreshold(self.small_set_threshold));
        }
        if self.cut_threshold == Some(0) {
            return Err(EngineError::InvalidCutThreshold);
        }
        if self.scheme == SplitScheme::Qhv && dim > QHV_MAX_DIM {
            return Err(EngineError::QhvDimensionLimit(dim));
        }
        Ok(())
    }
}

/// Counters collected over one recursion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Nodes that selected a pivot and split.
    pub internal_nodes: u64,
    /// Nonempty subproblems finished without splitting.
    pub leaves: u64,
    /// Depth of the deepest visited node (the root is depth 0).
    pub max_depth: u64,
    /// Point-to-pivot comparisons: one per surviving point per internal
    /// node, plus pairwise comparisons of the explicit filter when enabled.
    pub dominance_comparisons: u64,
    pub pivot_selections: u64,
}

/// Result of one computation. `hypervolume` is `None` for cut-mode runs,
/// which only produce statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct HvResult<T> {
    pub hypervolume: Option<T>,
    pub stats: RunStats,
}

/// One unit of recursion: a sub-box together with the points assigned to it.
/// Every point strictly exceeds the box's lower corner on all coordinates and
/// is clipped to its upper corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem<T> {
    pub bounds: Hypercuboid<T>,
    pub points: PointSet<T>,
}

/// Index of the point spanning the largest box above `reference`; ties go to
/// the lowest index.
pub fn select_pivot<T: Real>(
    points: &PointSet<T>,
    reference: &Point<T>,
) -> Result<usize, EngineError> {
    if points.is_empty() {
        return Err(EngineError::EmptyPointSet);
    }
    let mut best = 0;
    let mut best_volume = box_volume(&points.points()[0], reference);
    for (i, p) in points.iter().enumerate().skip(1) {
        let volume = box_volume(p, reference);
        if volume > best_volume {
            best = i;
            best_volume = volume;
        }
    }
    Ok(best)
}

/// Hypervolume of at most a handful of points above `reference`, without
/// recursion: zero, one box, the two-box inclusion-exclusion closed form, or
/// full inclusion-exclusion for slightly larger sets.
pub fn hv_small<T: Real>(points: &PointSet<T>, reference: &Point<T>) -> T {
    let pts = points.points();
    match pts.len() {
        0 => T::zero(),
        1 => box_volume(&pts[0], reference),
        2 => {
            box_volume(&pts[0], reference) + box_volume(&pts[1], reference)
                - box_volume(&pointwise_min(&pts[0], &pts[1]), reference)
        }
        _ => inclusion_exclusion(points, reference)
            .expect("small-set sizes stay within the inclusion-exclusion cap"),
    }
}

fn qhv2_child_bounds<T: Real>(
    bounds: &Hypercuboid<T>,
    pivot: &Point<T>,
    j: usize,
) -> Hypercuboid<T> {
    let mut lower = bounds.lower().coords().to_vec();
    let mut upper = bounds.upper().coords().to_vec();
    lower[j] = pivot[j];
    for l in 0..j {
        upper[l] = pivot[l].min(upper[l]);
    }
    Hypercuboid::new_unchecked(Point::new_unchecked(lower), Point::new_unchecked(upper))
}

/// Points of schema sub-box `j`: a point is assigned when it is at or above
/// the pivot on coordinate `j`, clipped at the pivot on coordinates before
/// `j`, and dropped unless the clipped point strictly exceeds the sub-box's
/// lower corner everywhere. Ties with the pivot therefore fall out of every
/// sub-box, which is also what removes points the pivot weakly dominates.
fn qhv2_child_points<T: Real>(
    points: &[Point<T>],
    pivot: &Point<T>,
    lower: &Point<T>,
    j: usize,
) -> Vec<Point<T>> {
    let d = pivot.dim();
    points
        .iter()
        .filter_map(|p| {
            if !(p[j] > pivot[j]) {
                return None;
            }
            for l in 0..d {
                if l == j {
                    continue;
                }
                let clipped = if l < j { p[l].min(pivot[l]) } else { p[l] };
                if !(clipped > lower[l]) {
                    return None;
                }
            }
            Some(Point::new_unchecked(
                (0..d).map(|l| if l < j { p[l].min(pivot[l]) } else { p[l] }).collect(),
            ))
        })
        .collect()
}

/// Schema split into `d` sub-problems. Sub-problem `j` keeps the region at or
/// above the pivot on coordinate `j` and below it on all earlier coordinates;
/// a point can land in several sub-problems (projected copies).
///
/// `points` must not contain the pivot itself; the pivot must lie inside
/// `bounds`. Panics on dimension mismatches.
pub fn split_qhv2<T: Real>(
    bounds: &Hypercuboid<T>,
    pivot: &Point<T>,
    points: &PointSet<T>,
) -> Vec<Subproblem<T>> {
    let d = bounds.dim();
    assert_eq!(pivot.dim(), d, "pivot dimension mismatch");
    assert_eq!(points.dim(), d, "point set dimension mismatch");
    (0..d)
        .map(|j| {
            let child = qhv2_child_points(points.points(), pivot, bounds.lower(), j);
            Subproblem {
                bounds: qhv2_child_bounds(bounds, pivot, j),
                points: PointSet::new_unchecked(d, child),
            }
        })
        .collect()
}

fn qhv_child_bounds<T: Real>(
    bounds: &Hypercuboid<T>,
    pivot: &Point<T>,
    mask: u32,
) -> Hypercuboid<T> {
    let d = bounds.dim();
    let mut lower = bounds.lower().coords().to_vec();
    let mut upper = bounds.upper().coords().to_vec();
    for j in 0..d {
        if mask & (1 << j) != 0 {
            lower[j] = pivot[j];
        } else {
            upper[j] = pivot[j].min(upper[j]);
        }
    }
    Hypercuboid::new_unchecked(Point::new_unchecked(lower), Point::new_unchecked(upper))
}

fn qhv_child_points<T: Real>(
    points: &[Point<T>],
    pivot: &Point<T>,
    lower: &Point<T>,
    mask: u32,
) -> Vec<Point<T>> {
    let d = pivot.dim();
    points
        .iter()
        .filter_map(|p| {
            for j in 0..d {
                if mask & (1 << j) != 0 {
                    // Assignment asks for p_j >= pivot_j; the strict-exceedance
                    // drop over the sub-box corner tightens it to >.
                    if !(p[j] > pivot[j]) {
                        return None;
                    }
                } else if !(p[j].min(pivot[j]) > lower[j]) {
                    return None;
                }
            }
            Some(Point::new_unchecked(
                (0..d)
                    .map(|j| if mask & (1 << j) != 0 { p[j] } else { p[j].min(pivot[j]) })
                    .collect(),
            ))
        })
        .collect()
}

/// Mask split into the `2^d - 2` basic hypercuboids, in ascending order of
/// the comparison vector (bit `j` set means "at or above the pivot on
/// coordinate `j`"). The all-zero vector is the box the pivot dominates and
/// the all-one vector is the region dominating it; neither becomes a
/// sub-problem. Points are assigned to every vector they satisfy, clipped at
/// the pivot on the zero coordinates.
pub fn split_qhv<T: Real>(
    bounds: &Hypercuboid<T>,
    pivot: &Point<T>,
    points: &PointSet<T>,
) -> Result<Vec<Subproblem<T>>, EngineError> {
    let d = bounds.dim();
    if d > QHV_MAX_DIM {
        return Err(EngineError::QhvDimensionLimit(d));
    }
    assert_eq!(pivot.dim(), d, "pivot dimension mismatch");
    assert_eq!(points.dim(), d, "point set dimension mismatch");
    let full: u32 = (1 << d) - 1;
    Ok((1..full)
        .map(|mask| {
            let child = qhv_child_points(points.points(), pivot, bounds.lower(), mask);
            Subproblem {
                bounds: qhv_child_bounds(bounds, pivot, mask),
                points: PointSet::new_unchecked(d, child),
            }
        })
        .collect())
}

/// Output-sensitive version of the mask split used inside the recursion:
/// instead of scanning all `2^d - 2` vectors it enumerates, per point, the
/// submasks of the coordinates on which the point beats the pivot. Produces
/// exactly the nonempty children of [`split_qhv`], in the same order.
fn qhv_nonempty_children<T: Real>(
    bounds: &Hypercuboid<T>,
    pivot: &Point<T>,
    points: &[Point<T>],
) -> Vec<(Hypercuboid<T>, Vec<Point<T>>)> {
    let d = bounds.dim();
    let full: u32 = (1 << d) - 1;
    let mut groups: BTreeMap<u32, Vec<Point<T>>> = BTreeMap::new();
    for p in points {
        let mut beats: u32 = 0;
        for j in 0..d {
            if p[j] > pivot[j] {
                beats |= 1 << j;
            }
        }
        // A point beating the pivot everywhere would dominate it, which the
        // max-volume pivot rule rules out for points inside the box.
        debug_assert_ne!(beats, full);
        let mut mask = beats;
        while mask != 0 {
            let clipped = (0..d)
                .map(|j| if mask & (1 << j) != 0 { p[j] } else { p[j].min(pivot[j]) })
                .collect();
            groups.entry(mask).or_default().push(Point::new_unchecked(clipped));
            mask = (mask - 1) & beats;
        }
    }
    groups
        .into_iter()
        .map(|(mask, pts)| (qhv_child_bounds(bounds, pivot, mask), pts))
        .collect()
}

/// Naive all-pairs dominated-point removal, counting the comparisons it
/// performs. Keeps the first of exact duplicates; preserves order.
fn filter_dominated_counting<T: Real>(points: &mut Vec<Point<T>>, comparisons: &mut u64) {
    let n = points.len();
    let mut kept = Vec::with_capacity(n);
    'outer: for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            *comparisons += 1;
            if crate::geometry::dominates(&points[j], &points[i])
                || (j < i && points[j] == points[i])
            {
                continue 'outer;
            }
        }
        kept.push(points[i].clone());
    }
    *points = kept;
}

/// Clips every point to the box's upper corner and drops the ones that do not
/// strictly exceed its lower corner everywhere (they dominate zero volume
/// inside the box). Establishes the recursion invariant at the root.
fn admit<T: Real>(points: &PointSet<T>, bounds: &Hypercuboid<T>) -> Vec<Point<T>> {
    let lower = bounds.lower();
    points
        .iter()
        .filter_map(|p| {
            let clipped = crate::geometry::clip(p, bounds.upper());
            if clipped.coords().iter().zip(lower.coords()).all(|(&c, &l)| c > l) {
                Some(clipped)
            } else {
                None
            }
        })
        .collect()
}

struct Walker<'a> {
    cfg: &'a EngineConfig,
    stats: RunStats,
    depth_limit: u64,
}

impl Walker<'_> {
    /// Pivot selection, removal, and child construction shared by the
    /// evaluating and the counting traversals. Children are nonempty.
    fn split<T: Real>(
        &mut self,
        bounds: &Hypercuboid<T>,
        mut points: Vec<Point<T>>,
    ) -> Vec<(Hypercuboid<T>, Vec<Point<T>>)> {
        self.stats.internal_nodes += 1;
        self.stats.pivot_selections += 1;
        let mut best = 0;
        let mut best_volume = box_volume(&points[0], bounds.lower());
        for (i, p) in points.iter().enumerate().skip(1) {
            let volume = box_volume(p, bounds.lower());
            if volume > best_volume {
                best = i;
                best_volume = volume;
            }
        }
        let pivot = points.remove(best);
        self.stats.dominance_comparisons += points.len() as u64;
        if self.cfg.prune_by_pivot {
            points.retain(|p| !crate::geometry::weakly_dominates(&pivot, p));
        }
        let mut children = match self.cfg.scheme {
            SplitScheme::Qhv2 => {
                let d = bounds.dim();
                (0..d)
                    .filter_map(|j| {
                        let child = qhv2_child_points(&points, &pivot, bounds.lower(), j);
                        if child.is_empty() {
                            None
                        } else {
                            Some((qhv2_child_bounds(bounds, &pivot, j), child))
                        }
                    })
                    .collect()
            }
            SplitScheme::Qhv => qhv_nonempty_children(bounds, &pivot, &points),
        };
        if self.cfg.explicit_pareto_filter {
            for (_, child) in &mut children {
                filter_dominated_counting(child, &mut self.stats.dominance_comparisons);
            }
        }
        children.insert(0, (bounds.clone(), vec![pivot]));
        children
    }

    fn evaluate<T: Real>(
        &mut self,
        bounds: &Hypercuboid<T>,
        points: Vec<Point<T>>,
        depth: u64,
    ) -> Result<T, EngineError> {
        debug_assert!(!points.is_empty());
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if points.len() <= self.cfg.small_set_threshold {
            self.stats.leaves += 1;
            let set = PointSet::new_unchecked(bounds.dim(), points);
            return Ok(hv_small(&set, bounds.lower()));
        }
        if depth >= self.depth_limit {
            return Err(EngineError::DepthLimitExceeded {
                depth,
                limit: self.depth_limit,
            });
        }
        let mut children = self.split(bounds, points);
        let (_, pivot_only) = children.remove(0);
        let mut terms = Vec::with_capacity(children.len() + 1);
        terms.push(box_volume(&pivot_only[0], bounds.lower()));
        for (child_bounds, child_points) in children {
            terms.push(self.evaluate(&child_bounds, child_points, depth + 1)?);
        }
        Ok(pairwise_sum(&terms))
    }

    fn count<T: Real>(
        &mut self,
        bounds: &Hypercuboid<T>,
        points: Vec<Point<T>>,
        depth: u64,
        cut: usize,
    ) -> Result<(), EngineError> {
        debug_assert!(!points.is_empty());
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if points.len() <= cut {
            self.stats.leaves += 1;
            return Ok(());
        }
        if depth >= self.depth_limit {
            return Err(EngineError::DepthLimitExceeded {
                depth,
                limit: self.depth_limit,
            });
        }
        let mut children = self.split(bounds, points);
        children.remove(0); // the pivot box is not a recursion node
        for (child_bounds, child_points) in children {
            self.count(&child_bounds, child_points, depth + 1, cut)?;
        }
        Ok(())
    }
}

/// Exact hypervolume dominated by `points` inside `bounds`, plus the
/// recursion statistics.
///
/// Points are clipped to the box's upper corner on entry; points that do not
/// strictly exceed the lower corner everywhere contribute nothing and are
/// dropped. With `cut_threshold` set this runs in cut mode and the returned
/// `hypervolume` is `None` (statistics only).
pub fn hypervolume<T: Real>(
    points: &PointSet<T>,
    bounds: &Hypercuboid<T>,
    cfg: &EngineConfig,
) -> Result<HvResult<T>, EngineError> {
    cfg.validate(bounds.dim())?;
    if points.dim() != bounds.dim() {
        return Err(EngineError::DimensionMismatch {
            points: points.dim(),
            bounds: bounds.dim(),
        });
    }
    if cfg.cut_threshold.is_some() {
        return Ok(HvResult {
            hypervolume: None,
            stats: count_tree(points, bounds, cfg)?,
        });
    }
    let admitted = admit(points, bounds);
    let mut walker = Walker {
        cfg,
        stats: RunStats::default(),
        depth_limit: 10 * admitted.len().max(1) as u64 + 8,
    };
    let value = if admitted.is_empty() {
        T::zero()
    } else {
        walker.evaluate(bounds, admitted, 0)?
    };
    Ok(HvResult {
        hypervolume: Some(value),
        stats: walker.stats,
    })
}

/// Walks the recursion tree without computing any volume, cutting it at
/// `cut_threshold` points: larger subproblems count as internal nodes,
/// nonempty ones at or below the cut as leaves, empty ones as neither.
pub fn count_tree<T: Real>(
    points: &PointSet<T>,
    bounds: &Hypercuboid<T>,
    cfg: &EngineConfig,
) -> Result<RunStats, EngineError> {
    cfg.validate(bounds.dim())?;
    if points.dim() != bounds.dim() {
        return Err(EngineError::DimensionMismatch {
            points: points.dim(),
            bounds: bounds.dim(),
        });
    }
    let cut = cfg.cut_threshold.ok_or(EngineError::MissingCutThreshold)?;
    let admitted = admit(points, bounds);
    let mut walker = Walker {
        cfg,
        stats: RunStats::default(),
        depth_limit: 10 * admitted.len().max(1) as u64 + 8,
    };
    if !admitted.is_empty() {
        walker.count(bounds, admitted, 0, cut)?;
    }
    Ok(walker.stats)
}
