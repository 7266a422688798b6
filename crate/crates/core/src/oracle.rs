//! Independent, slow, obviously-correct hypervolume computations.
//!
//! These exist to validate the divide-and-conquer engine and to serve as its
//! small-set fallback: inclusion-exclusion over box intersections (exact,
//! exponential in the point count), a 2-D sweep (exact for any n), and a
//! seeded Monte Carlo estimate for sizes where neither is feasible.

use rand::distributions::uniform::SampleUniform;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{box_volume, pointwise_min, weakly_dominates, Hypercuboid, Point, PointSet};
use crate::numeric::Kahan;
use crate::Real;

/// Hard cap on the inclusion-exclusion set size; the term count is `2^n - 1`.
pub const INCLUSION_EXCLUSION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("inclusion-exclusion supports at most {cap} points, got {got}")]
    TooManyPoints { cap: usize, got: usize },
    #[error("the sweep oracle only handles 2-dimensional sets, got dimension {0}")]
    NotTwoDimensional(usize),
}

/// Exact hypervolume by inclusion-exclusion: the signed sum over every
/// nonempty subset `W` of `(-1)^(|W|+1)` times the volume of the subset's box
/// intersection (the pointwise minimum of its points, above `reference`).
///
/// The empty set yields zero. Panics if `reference` has a different
/// dimension.
pub fn inclusion_exclusion<T: Real>(
    points: &PointSet<T>,
    reference: &Point<T>,
) -> Result<T, OracleError> {
    let n = points.len();
    if n > INCLUSION_EXCLUSION_CAP {
        return Err(OracleError::TooManyPoints {
            cap: INCLUSION_EXCLUSION_CAP,
            got: n,
        });
    }
    assert_eq!(points.dim(), reference.dim(), "reference dimension mismatch");
    let mut acc = Kahan::new();
    for subset in 1u64..(1u64 << n) {
        let mut bits = subset;
        let first = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let mut corner = points.points()[first].clone();
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            corner = pointwise_min(&corner, &points.points()[i]);
        }
        let volume = box_volume(&corner, reference);
        if subset.count_ones() % 2 == 1 {
            acc.add(volume);
        } else {
            acc.add(-volume);
        }
    }
    Ok(acc.value())
}

/// Exact 2-D hypervolume by sweeping points in order of decreasing first
/// coordinate and accumulating the rectangle strips above the running second
/// coordinate maximum. Dominated points never produce a strip.
pub fn sweep_2d<T: Real>(points: &PointSet<T>, reference: &Point<T>) -> Result<T, OracleError> {
    if points.dim() != 2 {
        return Err(OracleError::NotTwoDimensional(points.dim()));
    }
    assert_eq!(reference.dim(), 2, "reference dimension mismatch");
    let mut sorted: Vec<&Point<T>> = points.iter().collect();
    sorted.sort_by(|a, b| b[0].partial_cmp(&a[0]).expect("coordinates are finite"));
    let mut acc = Kahan::new();
    let mut max_y = reference[1];
    for p in sorted {
        if p[0] > reference[0] && p[1] > max_y {
            acc.add((p[0] - reference[0]) * (p[1] - max_y));
            max_y = p[1];
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate<T> {
    pub estimate: T,
    pub std_error: T,
}

/// Monte Carlo hypervolume estimate from `samples` uniform draws inside
/// `bounds`, using a ChaCha8 stream seeded with `seed` so runs are
/// bit-reproducible across platforms. The standard error is the binomial
/// `vol * sqrt(p(1-p)/samples)`.
pub fn monte_carlo<T: Real + SampleUniform>(
    points: &PointSet<T>,
    bounds: &Hypercuboid<T>,
    samples: u64,
    seed: u64,
) -> MonteCarloEstimate<T> {
    assert!(samples >= 1, "at least one sample is required");
    assert_eq!(points.dim(), bounds.dim(), "bounds dimension mismatch");
    let dim = bounds.dim();
    let axes: Vec<Uniform<T>> = (0..dim)
        .map(|j| Uniform::new_inclusive(bounds.lower()[j], bounds.upper()[j]))
        .collect();

    // Checking large boxes first lets most dominated samples exit early.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let vi = box_volume(&points.points()[i], bounds.lower());
        let vj = box_volume(&points.points()[j], bounds.lower());
        vj.partial_cmp(&vi).expect("volumes are finite")
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = vec![T::zero(); dim];
    let mut hits: u64 = 0;
    for _ in 0..samples {
        for (slot, axis) in sample.iter_mut().zip(&axes) {
            *slot = axis.sample(&mut rng);
        }
        let dominated = order.iter().any(|&i| {
            points.points()[i]
                .coords()
                .iter()
                .zip(&sample)
                .all(|(&p, &s)| p >= s)
        });
        if dominated {
            hits += 1;
        }
    }

    let volume = bounds.volume();
    let p = T::from(hits).unwrap() / T::from(samples).unwrap();
    MonteCarloEstimate {
        estimate: volume * p,
        std_error: volume * (p * (T::one() - p) / T::from(samples).unwrap()).sqrt(),
    }
}

/// Convenience used by tests: counts a sample as covered if any point weakly
/// dominates it.
#[allow(dead_code)]
fn covered<T: Real>(points: &PointSet<T>, sample: &Point<T>) -> bool {
    points.iter().any(|p| weakly_dominates(p, sample))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(coords: &[f64]) -> Point<f64> {
        Point::new(coords.to_vec()).unwrap()
    }

    fn set(points: &[&[f64]]) -> PointSet<f64> {
        PointSet::from_points(points.iter().map(|c| pt(c)).collect()).unwrap()
    }

    #[test]
    fn inclusion_exclusion_examples() {
        let r = pt(&[0.0, 0.0]);
        let two = set(&[&[0.8, 0.3], &[0.4, 0.6]]);
        assert_relative_eq!(inclusion_exclusion(&two, &r).unwrap(), 0.36, max_relative = 1e-12);

        let one = set(&[&[1.0, 1.0]]);
        assert_relative_eq!(inclusion_exclusion(&one, &r).unwrap(), 1.0);

        let three = set(&[&[0.2, 0.9], &[0.5, 0.5], &[0.9, 0.2]]);
        assert_relative_eq!(inclusion_exclusion(&three, &r).unwrap(), 0.41, max_relative = 1e-12);

        assert_eq!(inclusion_exclusion(&PointSet::empty(2), &r).unwrap(), 0.0);
    }

    #[test]
    fn inclusion_exclusion_rejects_oversized_sets() {
        let points = vec![pt(&[0.5, 0.5]); 21];
        let s = PointSet::from_points(points).unwrap();
        assert_eq!(
            inclusion_exclusion(&s, &pt(&[0.0, 0.0])),
            Err(OracleError::TooManyPoints { cap: 20, got: 21 })
        );
    }

    #[test]
    fn sweep_examples() {
        let r = pt(&[0.0, 0.0]);
        let three = set(&[&[0.2, 0.9], &[0.5, 0.5], &[0.9, 0.2]]);
        assert_relative_eq!(sweep_2d(&three, &r).unwrap(), 0.41, max_relative = 1e-12);
        assert_relative_eq!(sweep_2d(&set(&[&[1.0, 1.0]]), &r).unwrap(), 1.0);
        assert_eq!(sweep_2d(&PointSet::empty(2), &r).unwrap(), 0.0);
        assert_eq!(
            sweep_2d(&PointSet::empty(3), &pt(&[0.0, 0.0, 0.0])),
            Err(OracleError::NotTwoDimensional(3))
        );
    }

    #[test]
    fn sweep_ignores_dominated_and_sub_reference_points() {
        let r = pt(&[0.0, 0.0]);
        let s = set(&[&[0.9, 0.2], &[0.5, 0.1], &[-1.0, 5.0], &[0.2, -0.3]]);
        assert_relative_eq!(sweep_2d(&s, &r).unwrap(), 0.18, max_relative = 1e-12);
    }

    #[test]
    fn monte_carlo_degenerate_cases() {
        let bounds = Hypercuboid::new(pt(&[0.0, 0.0]), pt(&[1.0, 1.0])).unwrap();
        let full = monte_carlo(&set(&[&[1.0, 1.0]]), &bounds, 1000, 42);
        assert_eq!(full.estimate, 1.0);
        assert_eq!(full.std_error, 0.0);

        let empty = monte_carlo(&PointSet::empty(2), &bounds, 1000, 42);
        assert_eq!(empty.estimate, 0.0);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let bounds = Hypercuboid::new(pt(&[0.0, 0.0]), pt(&[1.0, 1.0])).unwrap();
        let s = set(&[&[0.8, 0.3], &[0.4, 0.6]]);
        let a = monte_carlo(&s, &bounds, 10_000, 7);
        let b = monte_carlo(&s, &bounds, 10_000, 7);
        assert_eq!(a, b);
        // And close to the exact value 0.36 for this many samples.
        assert!((a.estimate - 0.36).abs() <= 4.0 * a.std_error);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_instance(d: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
            proptest::collection::vec(proptest::collection::vec(0.0..1.0f64, d), 1..=max_n)
        }

        proptest! {
            #[test]
            fn matches_sweep_in_two_dimensions(raw in small_instance(2, 15)) {
                let s = PointSet::from_points(
                    raw.into_iter().map(|c| Point::new(c).unwrap()).collect(),
                ).unwrap();
                let r = pt(&[0.0, 0.0]);
                let iex = inclusion_exclusion(&s, &r).unwrap();
                let swept = sweep_2d(&s, &r).unwrap();
                prop_assert!((iex - swept).abs() <= 1e-9 * swept.abs().max(1e-12));
            }

            #[test]
            fn is_order_invariant(raw in small_instance(3, 10), rotation in 0usize..10) {
                let r = pt(&[0.0, 0.0, 0.0]);
                let forward = PointSet::from_points(
                    raw.iter().map(|c| Point::new(c.clone()).unwrap()).collect(),
                ).unwrap();
                let mut rotated = raw;
                let k = rotation % rotated.len();
                rotated.rotate_left(k);
                let rotated = PointSet::from_points(
                    rotated.into_iter().map(|c| Point::new(c).unwrap()).collect(),
                ).unwrap();
                let a = inclusion_exclusion(&forward, &r).unwrap();
                let b = inclusion_exclusion(&rotated, &r).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-12));
            }

            #[test]
            fn filtering_dominated_points_changes_nothing(raw in small_instance(3, 10)) {
                let r = pt(&[0.0, 0.0, 0.0]);
                let s = PointSet::from_points(
                    raw.into_iter().map(|c| Point::new(c).unwrap()).collect(),
                ).unwrap();
                let filtered = crate::geometry::pareto_filter(&s);
                let a = inclusion_exclusion(&s, &r).unwrap();
                let b = inclusion_exclusion(&filtered, &r).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-12));
            }
        }
    }
}
