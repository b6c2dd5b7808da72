//! Principal component analysis on the sample covariance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A fitted PCA: mean-centered projection onto the top eigenvectors of
/// the sample covariance, eigenvalues descending. Component signs are
/// fixed so each component's largest-magnitude loading is positive.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// One row per retained component.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    /// Sum of all covariance eigenvalues (the total variance), kept or
    /// not; the denominator of the explained-variance ratios.
    pub total_variance: f64,
    /// Dimensions requested; fewer are kept when the data is rank
    /// deficient.
    pub requested: usize,
}

impl Pca {
    /// Fits on `points`; keeps `min(target_dim, rank)` components.
    pub fn fit(points: &[Point], target_dim: usize) -> Result<Pca> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("PCA needs at least one point".into()));
        }
        let d = points[0].dim();
        if target_dim > d {
            return Err(Error::InvalidConfig(format!(
                "PCA target dimension {target_dim} exceeds data dimension {d}"
            )));
        }
        let n = points.len();
        let mut mean = vec![0.0; d];
        for p in points {
            for (m, c) in mean.iter_mut().zip(&p.coords) {
                *m += c;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);

        let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
        let mut cov: DMatrix<f64> = DMatrix::zeros(d, d);
        for p in points {
            let centered: Vec<f64> = p.coords.iter().zip(&mean).map(|(c, m)| c - m).collect();
            for i in 0..d {
                for j in 0..d {
                    cov[(i, j)] += centered[i] * centered[j] / denom;
                }
            }
        }

        let total_variance = (0..d).map(|i| cov[(i, i)]).sum::<f64>();
        let eig = cov.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb): (f64, f64) = (eig.eigenvalues[a], eig.eigenvalues[b]);
            eb.partial_cmp(&ea).unwrap()
        });

        let max_ev: f64 = eig.eigenvalues[order[0]].max(0.0);
        let rank_tol = 1e-12 * max_ev.max(1e-300);
        let mut components = Vec::new();
        let mut eigenvalues = Vec::new();
        for &idx in order.iter().take(target_dim) {
            let ev = eig.eigenvalues[idx];
            if ev <= rank_tol && !components.is_empty() {
                // Rank deficient: keep what carries variance.
                break;
            }
            let col = eig.eigenvectors.column(idx);
            let mut comp: Vec<f64> = col.iter().copied().collect();
            // Deterministic sign: the largest-magnitude loading points up.
            let mut pivot = 0;
            for (i, v) in comp.iter().enumerate() {
                if v.abs() > comp[pivot].abs() {
                    pivot = i;
                }
            }
            if comp[pivot] < 0.0 {
                comp.iter_mut().for_each(|v| *v = -*v);
            }
            components.push(comp);
            eigenvalues.push(ev.max(0.0));
        }
        Ok(Pca {
            mean,
            components,
            eigenvalues,
            total_variance,
            requested: target_dim,
        })
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn transform(&self, p: &Point) -> Point {
        let centered: Vec<f64> = p.coords.iter().zip(&self.mean).map(|(c, m)| c - m).collect();
        Point::new(
            self.components
                .iter()
                .map(|comp| comp.iter().zip(&centered).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn transform_all(&self, points: &[Point]) -> Vec<Point> {
        points.iter().map(|p| self.transform(p)).collect()
    }

    /// Fraction of the total variance carried by each retained
    /// component.
    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        if self.total_variance <= 0.0 {
            return vec![0.0; self.eigenvalues.len()];
        }
        self.eigenvalues
            .iter()
            .map(|e| e / self.total_variance)
            .collect()
    }
}

/// Reduces a dataset in place: fit on all rows, project all rows.
pub fn pca_reduce(
    dataset: &crate::data::Dataset,
    target_dim: usize,
) -> Result<(crate::data::Dataset, Pca)> {
    let pca = Pca::fit(&dataset.points, target_dim)?;
    let points = pca.transform_all(&dataset.points);
    Ok((
        crate::data::Dataset::new(points, dataset.labels.clone(), dataset.class_names.clone()),
        pca,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_dimension_is_a_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let points: Vec<Point> = (0..40)
            .map(|_| Point::new((0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        let pca = Pca::fit(&points, 3).unwrap();
        assert_eq!(pca.dim_out(), 3);
        let transformed = pca.transform_all(&points);
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let before = points[i].dist(&points[j]);
                let after = transformed[i].dist(&transformed[j]);
                assert!((before - after).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn line_in_3d_reduces_to_1d_losslessly() {
        let dir = [1.0, 2.0, -0.5];
        let points: Vec<Point> = (0..30)
            .map(|i| {
                let t = i as f64 / 7.0 - 2.0;
                Point::new(dir.iter().map(|d| d * t + 0.3).collect())
            })
            .collect();
        let pca = Pca::fit(&points, 1).unwrap();
        let back_var: f64 = pca.eigenvalues.iter().skip(1).sum();
        assert!(back_var <= 1e-10);
        // Residual variance beyond the first component is numerically 0:
        // reconstruct pairwise distances from the single coordinate.
        let transformed = pca.transform_all(&points);
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let before = points[i].dist(&points[j]);
                let after = (transformed[i].coords[0] - transformed[j].coords[0]).abs();
                assert!((before - after).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rank_deficiency_keeps_available_components() {
        // Points on a line but two components requested.
        let points: Vec<Point> = (0..10)
            .map(|i| Point::new(vec![i as f64, 2.0 * i as f64]))
            .collect();
        let pca = Pca::fit(&points, 2).unwrap();
        assert_eq!(pca.dim_out(), 1);
        assert_eq!(pca.requested, 2);
    }

    #[test]
    fn idempotent_at_same_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let points: Vec<Point> = (0..50)
            .map(|_| Point::new((0..4).map(|_| rng.gen_range(0.0..2.0)).collect()))
            .collect();
        let pca1 = Pca::fit(&points, 2).unwrap();
        let once = pca1.transform_all(&points);
        let pca2 = Pca::fit(&once, 2).unwrap();
        let twice = pca2.transform_all(&once);
        for (a, b) in once.iter().zip(&twice) {
            assert!(a.dist(b) < 1e-8);
        }
    }

    #[test]
    fn iris_first_two_components_dominate() {
        let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv"));
        let ds = crate::data::load_csv(
            path,
            &crate::data::LabelColumn::Name("species".into()),
            true,
        )
        .unwrap();
        let pca = Pca::fit(&ds.points, 4).unwrap();
        let ratios = pca.explained_variance_ratio();
        assert!(ratios[0] + ratios[1] > 0.95, "got {ratios:?}");
    }
}
