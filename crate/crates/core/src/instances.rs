//! Benchmark instance families and the plain-text point-list format.
//!
//! The generated families are standard constructions for the named front
//! shapes, all inside the unit cube with reference box `[0,1]^d`:
//!
//! * `linear` — exponential(1) draws normalized to sum 1 (uniform on the
//!   simplex).
//! * `concave` — absolute Gaussian draws normalized to Euclidean norm 1
//!   (uniform on the positive orthant of the unit sphere).
//! * `convex` — `1 - u` componentwise for a concave point `u`.
//! * `spherical` — the same recipe as `concave`, kept as a separate tag so
//!   benchmark output groups match the usual naming.
//!
//! Hard instances have no generator; they are only ever loaded from files.
//!
//! Determinism: point `i` of an instance is drawn from stream `i` of a
//! ChaCha8 generator seeded with the instance seed, so `(family, d, n, seed)`
//! fully determines every point independent of generation order, and
//! generation is bit-reproducible across platforms.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

use crate::geometry::{Point, PointSet};
use crate::Real;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("file contains no points")]
    EmptyFile,
    #[error("cannot save an empty point set")]
    EmptySet,
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("the file family is load-only; it has no generator")]
    FileFamilyNotGenerated,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Linear,
    Concave,
    Convex,
    Spherical,
    /// Externally supplied instances (e.g. hard fronts); load-only.
    File,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Linear => "linear",
            Family::Concave => "concave",
            Family::Convex => "convex",
            Family::Spherical => "spherical",
            Family::File => "file",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(Family::Linear),
            "concave" => Ok(Family::Concave),
            "convex" => Ok(Family::Convex),
            "spherical" => Ok(Family::Spherical),
            "file" => Ok(Family::File),
            other => Err(format!("unknown instance family '{other}'")),
        }
    }
}

/// Everything needed to reproduce one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub family: Family,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub path: Option<PathBuf>,
}

impl InstanceSpec {
    pub fn generated(
        family: Family,
        dim: usize,
        count: usize,
        seed: u64,
    ) -> Result<Self, InstanceError> {
        if family == Family::File {
            return Err(InstanceError::FileFamilyNotGenerated);
        }
        if dim < 2 {
            return Err(InstanceError::InvalidSpec(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if count < 1 {
            return Err(InstanceError::InvalidSpec("need at least one point".into()));
        }
        Ok(InstanceSpec {
            family,
            dim,
            count,
            seed,
            path: None,
        })
    }
}

fn point_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn simplex_point<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<T>
where
    Exp1: Distribution<T>,
{
    loop {
        let draws: Vec<T> = (0..dim).map(|_| Exp1.sample(rng)).collect();
        let total = draws.iter().fold(T::zero(), |acc, &x| acc + x);
        if total > T::zero() {
            return draws.into_iter().map(|x| x / total).collect();
        }
    }
}

fn sphere_point<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<T>
where
    StandardNormal: Distribution<T>,
{
    loop {
        let draws: Vec<T> = (0..dim)
            .map(|_| {
                let g: T = StandardNormal.sample(rng);
                g.abs()
            })
            .collect();
        let norm = draws.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if norm > T::zero() {
            return draws.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Generates the instance described by `spec`. All coordinates land in
/// `[0, 1]`; the intended reference box is `[0,1]^d`.
pub fn generate<T: Real>(spec: &InstanceSpec) -> Result<PointSet<T>, InstanceError>
where
    StandardNormal: Distribution<T>,
    Exp1: Distribution<T>,
{
    if spec.family == Family::File {
        return Err(InstanceError::FileFamilyNotGenerated);
    }
    if spec.dim < 2 || spec.count < 1 {
        return Err(InstanceError::InvalidSpec(format!(
            "need dim >= 2 and count >= 1, got dim={} count={}",
            spec.dim, spec.count
        )));
    }
    let points = (0..spec.count)
        .map(|i| {
            let mut rng = point_stream(spec.seed, i as u64);
            let coords = match spec.family {
                Family::Linear => simplex_point(&mut rng, spec.dim),
                Family::Concave | Family::Spherical => sphere_point(&mut rng, spec.dim),
                Family::Convex => sphere_point::<T>(&mut rng, spec.dim)
                    .into_iter()
                    .map(|c| T::one() - c)
                    .collect(),
                Family::File => unreachable!(),
            };
            Point::new(coords).expect("generated coordinates are finite")
        })
        .collect();
    Ok(PointSet::new(spec.dim, points).expect("generated points share the spec dimension"))
}

/// Reads a point list: one point per line, whitespace-separated decimal
/// floats, `#` lines and blank lines skipped, dimension inferred from the
/// first data line. Returns the set and its dimension.
pub fn load<T: Real>(path: &Path) -> Result<(PointSet<T>, usize), InstanceError> {
    let reader = BufReader::new(File::open(path)?);
    let mut points: Vec<Point<T>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut coords = Vec::new();
        for token in trimmed.split_whitespace() {
            let value: T = token.parse().map_err(|_| InstanceError::Parse {
                line: line_no,
                message: format!("invalid number '{token}'"),
            })?;
            coords.push(value);
        }
        if let Some(d) = dim {
            if coords.len() != d {
                return Err(InstanceError::Parse {
                    line: line_no,
                    message: format!("expected {d} fields, got {}", coords.len()),
                });
            }
        } else {
            dim = Some(coords.len());
        }
        points.push(Point::new(coords).map_err(|e| InstanceError::Parse {
            line: line_no,
            message: e.to_string(),
        })?);
    }
    let dim = dim.ok_or(InstanceError::EmptyFile)?;
    let set = PointSet::new(dim, points).expect("rows were checked for a common dimension");
    Ok((set, dim))
}

/// Writes the point list format read by [`load`], rendering every coordinate
/// with 17 significant digits so the round trip is lossless for 64-bit
/// floats.
pub fn save<T: Real>(set: &PointSet<T>, path: &Path) -> Result<(), InstanceError> {
    if set.is_empty() {
        return Err(InstanceError::EmptySet);
    }
    let mut writer = BufWriter::new(File::create(path)?);
    for point in set.iter() {
        let mut first = true;
        for c in point.coords() {
            if !first {
                write!(writer, " ")?;
            }
            write!(writer, "{c:.16e}")?;
            first = false;
        }
        writeln!(writer)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pareto_filter;

    fn spec(family: Family, dim: usize, count: usize, seed: u64) -> InstanceSpec {
        InstanceSpec::generated(family, dim, count, seed).unwrap()
    }

    const GENERATED: [Family; 4] = [
        Family::Linear,
        Family::Concave,
        Family::Convex,
        Family::Spherical,
    ];

    #[test]
    fn linear_points_sit_on_the_simplex() {
        let set: PointSet<f64> = generate(&spec(Family::Linear, 5, 40, 7)).unwrap();
        for p in set.iter() {
            let total: f64 = p.coords().iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn concave_points_sit_on_the_sphere() {
        let set: PointSet<f64> = generate(&spec(Family::Concave, 4, 40, 7)).unwrap();
        for p in set.iter() {
            let norm: f64 = p.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn convex_is_the_reflected_sphere() {
        let concave: PointSet<f64> = generate(&spec(Family::Concave, 3, 20, 9)).unwrap();
        let convex: PointSet<f64> = generate(&spec(Family::Convex, 3, 20, 9)).unwrap();
        for (u, v) in concave.iter().zip(convex.iter()) {
            for (a, b) in u.coords().iter().zip(v.coords()) {
                assert_eq!(1.0 - a, *b);
            }
        }
    }

    #[test]
    fn spherical_shares_the_concave_recipe() {
        let a: PointSet<f64> = generate(&spec(Family::Concave, 6, 15, 3)).unwrap();
        let b: PointSet<f64> = generate(&spec(Family::Spherical, 6, 15, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generation_is_deterministic_and_in_the_unit_cube() {
        for family in GENERATED {
            let s = spec(family, 4, 30, 42);
            let a: PointSet<f64> = generate(&s).unwrap();
            let b: PointSet<f64> = generate(&s).unwrap();
            assert_eq!(a, b);
            for p in a.iter() {
                assert!(p.coords().iter().all(|&c| (0.0..=1.0).contains(&c)));
            }
        }
    }

    #[test]
    fn prefixes_are_stable_under_count_changes() {
        let long: PointSet<f64> = generate(&spec(Family::Linear, 3, 20, 5)).unwrap();
        let short: PointSet<f64> = generate(&spec(Family::Linear, 3, 8, 5)).unwrap();
        assert_eq!(&long.points()[..8], short.points());
    }

    #[test]
    fn generated_fronts_are_nondominated() {
        for family in GENERATED {
            for seed in 0..10 {
                let set: PointSet<f64> = generate(&spec(family, 4, 50, seed)).unwrap();
                assert_eq!(
                    pareto_filter(&set).len(),
                    set.len(),
                    "family {family} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn file_family_cannot_be_generated() {
        assert!(matches!(
            InstanceSpec::generated(Family::File, 3, 10, 1),
            Err(InstanceError::FileFamilyNotGenerated)
        ));
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.txt");
        let set: PointSet<f64> = generate(&spec(Family::Concave, 5, 25, 11)).unwrap();
        save(&set, &path).unwrap();
        let (loaded, dim) = load::<f64>(&path).unwrap();
        assert_eq!(dim, 5);
        assert_eq!(loaded, set);
    }

    #[test]
    fn load_parses_simple_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.txt");
        std::fs::write(&path, "0.5 0.5\n1 0\n").unwrap();
        let (set, dim) = load::<f64>(&path).unwrap();
        assert_eq!((set.len(), dim), (2, 2));

        std::fs::write(&path, "# hello\n0.1 0.2\n").unwrap();
        let (set, _) = load::<f64>(&path).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn load_reports_the_offending_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.txt");

        std::fs::write(&path, "0.1 0.2\n0.3 0.4 0.5\n").unwrap();
        match load::<f64>(&path) {
            Err(InstanceError::Parse { line: 2, .. }) => {}
            other => panic!("expected a ragged-row error, got {other:?}"),
        }

        std::fs::write(&path, "# comment\n\n0.1 0.2\n0.3 oops\n").unwrap();
        match load::<f64>(&path) {
            Err(InstanceError::Parse { line: 4, .. }) => {}
            other => panic!("expected a bad-token error, got {other:?}"),
        }

        std::fs::write(&path, "# only a comment\n").unwrap();
        assert!(matches!(load::<f64>(&path), Err(InstanceError::EmptyFile)));

        std::fs::write(&path, "0.1 nan\n").unwrap();
        match load::<f64>(&path) {
            Err(InstanceError::Parse { line: 1, .. }) => {}
            other => panic!("expected a non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn save_rejects_empty_sets_and_single_points_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.txt");
        assert!(matches!(
            save(&PointSet::<f64>::empty(2), &path),
            Err(InstanceError::EmptySet)
        ));

        let one = PointSet::from_points(vec![Point::new(vec![0.25, 0.75]).unwrap()]).unwrap();
        save(&one, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
        let (back, _) = load::<f64>(&path).unwrap();
        assert_eq!(back, one);
    }
}
