//! Labeled datasets: CSV ingestion, validation and the synthetic
//! generators used by the simulation campaigns.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Labeled points in `R^d`. Class names map to indices in first-seen
/// order so downstream joins are unambiguous.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Dataset {
    pub points: Vec<Point>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl Dataset {
    pub fn new(points: Vec<Point>, labels: Vec<usize>, class_names: Vec<String>) -> Self {
        Dataset {
            points,
            labels,
            class_names,
        }
    }

    /// Two-class dataset from raw point sets, named "0" and "1".
    pub fn from_two_classes(class0: Vec<Point>, class1: Vec<Point>) -> Self {
        let labels = std::iter::repeat_n(0, class0.len())
            .chain(std::iter::repeat_n(1, class1.len()))
            .collect();
        let mut points = class0;
        points.extend(class1);
        Dataset {
            points,
            labels,
            class_names: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Points of one class, cloned.
    pub fn class_points(&self, class: usize) -> Vec<Point> {
        self.points
            .iter()
            .zip(&self.labels)
            .filter(|&(_, &l)| l == class)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Points of every class except `class`.
    pub fn complement_points(&self, class: usize) -> Vec<Point> {
        self.points
            .iter()
            .zip(&self.labels)
            .filter(|&(_, &l)| l != class)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn class_count(&self, class: usize) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }

    /// Row subset in the given order.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            points: rows.iter().map(|&i| self.points[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
        }
    }
}

/// Which column holds the class label.
#[derive(Clone, Debug)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
    /// No label column: every row gets class "0".
    None,
}

/// Reads an RFC-4180 CSV into a [`Dataset`].
///
/// Features parse as 64-bit reals; non-numeric or non-finite entries are
/// rejected with their row and column. Row order and first-seen class
/// order are preserved. `has_header` controls whether the first record
/// names the columns.
pub fn load_csv(path: &Path, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(false)
        .from_path(path)?;

    let label_idx: Option<usize> = match label {
        LabelColumn::None => None,
        LabelColumn::Index(i) => Some(*i),
        LabelColumn::Name(name) => {
            if !has_header {
                return Err(Error::InvalidConfig(
                    "label column by name requires a header row".into(),
                ));
            }
            let headers = reader.headers()?;
            let idx = headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingLabel(name.clone()))?;
            Some(idx)
        }
    };

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_idx + 1 + usize::from(has_header);
        if let Some(li) = label_idx {
            if li >= record.len() {
                return Err(Error::MissingLabel(format!("column {li}")));
            }
        }
        let mut coords = Vec::with_capacity(record.len().saturating_sub(1));
        for (col, field) in record.iter().enumerate() {
            if Some(col) == label_idx {
                continue;
            }
            let value: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::NonNumericFeature { row, col })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteFeature { row, col });
            }
            coords.push(value);
        }
        if coords.is_empty() {
            return Err(Error::ParseError {
                row,
                col: 0,
                msg: "no feature columns".into(),
            });
        }
        let class_name = match label_idx {
            Some(li) => record.get(li).unwrap().trim().to_string(),
            None => "0".to_string(),
        };
        let class = match class_names.iter().position(|c| c == &class_name) {
            Some(i) => i,
            None => {
                class_names.push(class_name);
                class_names.len() - 1
            }
        };
        points.push(Point::new(coords));
        labels.push(class);
    }
    if points.is_empty() {
        return Err(Error::ParseError {
            row: 0,
            col: 0,
            msg: "empty file".into(),
        });
    }
    let d = points[0].dim();
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::ParseError {
            row: 0,
            col: 0,
            msg: "inconsistent feature counts".into(),
        });
    }
    Ok(Dataset::new(points, labels, class_names))
}

// ---------------------------------------------------------------------
// Synthetic samplers for the simulation campaigns.
// ---------------------------------------------------------------------

/// Uniform point in an axis-aligned box `[lo_k, hi_k)`.
pub fn sample_box<R: Rng>(rng: &mut R, lo: &[f64], hi: &[f64]) -> Point {
    Point::new(
        lo.iter()
            .zip(hi)
            .map(|(&a, &b)| rng.gen_range(a..b))
            .collect(),
    )
}

pub fn sample_box_n<R: Rng>(rng: &mut R, lo: &[f64], hi: &[f64], n: usize) -> Vec<Point> {
    (0..n).map(|_| sample_box(rng, lo, hi)).collect()
}

/// Uniform point inside a simplex: exponential weights normalized to a
/// flat Dirichlet, pushed through the vertex combination.
pub fn sample_simplex<R: Rng>(rng: &mut R, vertices: &[Point]) -> Point {
    let mut w: Vec<f64> = vertices
        .iter()
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    let d = vertices[0].dim();
    let mut coords = vec![0.0; d];
    for (wi, v) in w.iter().zip(vertices) {
        for (c, vc) in coords.iter_mut().zip(&v.coords) {
            *c += wi * vc;
        }
    }
    Point::new(coords)
}

/// The two-class overlap setting: class 0 uniform on the unit cube,
/// class 1 uniform on the cube shifted by `nu` in every coordinate.
pub fn sample_overlap_pair<R: Rng>(
    rng: &mut R,
    d: usize,
    nu: f64,
    n0: usize,
    n1: usize,
) -> (Vec<Point>, Vec<Point>) {
    let lo0 = vec![0.0; d];
    let hi0 = vec![1.0; d];
    let lo1 = vec![nu; d];
    let hi1 = vec![1.0 + nu; d];
    (
        sample_box_n(rng, &lo0, &hi0, n0),
        sample_box_n(rng, &lo1, &hi1, n1),
    )
}

/// The nested setting: class 1's support sits strictly inside class 0's.
pub fn sample_nested_pair<R: Rng>(
    rng: &mut R,
    d: usize,
    n0: usize,
    n1: usize,
) -> (Vec<Point>, Vec<Point>) {
    let lo0 = vec![0.0; d];
    let hi0 = vec![1.0; d];
    let lo1 = vec![0.3; d];
    let hi1 = vec![0.7; d];
    (
        sample_box_n(rng, &lo0, &hi0, n0),
        sample_box_n(rng, &lo1, &hi1, n1),
    )
}

/// Strictly separated uniforms: unit cubes with a gap of `delta` along
/// the first axis.
pub fn sample_separated_pair<R: Rng>(
    rng: &mut R,
    d: usize,
    delta: f64,
    n0: usize,
    n1: usize,
) -> (Vec<Point>, Vec<Point>) {
    let lo0 = vec![0.0; d];
    let hi0 = vec![1.0; d];
    let mut lo1 = vec![0.0; d];
    let mut hi1 = vec![1.0; d];
    lo1[0] = 1.0 + delta;
    hi1[0] = 2.0 + delta;
    (
        sample_box_n(rng, &lo0, &hi0, n0),
        sample_box_n(rng, &lo1, &hi1, n1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    #[test]
    fn iris_csv_loads() {
        let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv"));
        let ds = load_csv(path, &LabelColumn::Name("species".into()), true).unwrap();
        assert_eq!(ds.len(), 150);
        assert_eq!(ds.dim(), 4);
        assert_eq!(ds.n_classes(), 3);
        assert_eq!(ds.class_names[0], "setosa");
        assert_eq!(ds.class_count(0), 50);
    }

    #[test]
    fn bad_cells_are_row_addressed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "a,b,label").unwrap();
        writeln!(f, "1.0,2.0,x").unwrap();
        writeln!(f, "1.0,oops,y").unwrap();
        drop(f);
        let err = load_csv(&path, &LabelColumn::Name("label".into()), true).unwrap_err();
        match err {
            Error::NonNumericFeature { row, col } => {
                assert_eq!((row, col), (3, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nan_features_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nan.csv");
        std::fs::write(&path, "a,b,label\nNaN,2.0,x\n").unwrap();
        let err = load_csv(&path, &LabelColumn::Name("label".into()), true).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFeature { row: 2, col: 0 }));
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "").unwrap();
        let err = load_csv(&path, &LabelColumn::None, false).unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
    }

    #[test]
    fn simplex_sampler_stays_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let verts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![2.0, 0.0]),
            Point::new(vec![0.0, 2.0]),
        ];
        let simplex = crate::geometry::SimplexCoords::new(verts.clone(), 1e-9).unwrap();
        for _ in 0..200 {
            let p = sample_simplex(&mut rng, &verts);
            assert!(simplex.barycentric(&p).inside(1e-9));
        }
    }
}
