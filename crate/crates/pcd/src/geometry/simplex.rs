//! Simplices, barycentric coordinates, vertex regions and the simplex
//! convex distance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::point::{centroid, Point};
use crate::error::{Error, Result};

/// Barycentric coordinates of a point with respect to a `d`-simplex:
/// `d + 1` weights summing to one that reconstruct the point as a
/// weighted combination of the vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaryCoords {
    pub w: Vec<f64>,
}

impl BaryCoords {
    pub fn dim(&self) -> usize {
        self.w.len() - 1
    }

    /// Smallest coordinate and its index (lowest index on ties).
    pub fn min_coord(&self) -> (usize, f64) {
        let mut idx = 0;
        let mut val = self.w[0];
        for (i, &v) in self.w.iter().enumerate().skip(1) {
            if v < val {
                idx = i;
                val = v;
            }
        }
        (idx, val)
    }

    /// True if all coordinates are `>= -tol`, i.e. the point lies in the
    /// closed simplex up to tolerance.
    pub fn inside(&self, tol: f64) -> bool {
        self.w.iter().all(|&v| v >= -tol)
    }
}

/// Where a point sits relative to a simplex, judged from its barycentric
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexPosition {
    Interior,
    Boundary,
    Vertex,
    Outside,
}

/// Classifies barycentric coordinates: interior when all weights are in
/// `(tol, 1 - tol)`, vertex when one weight reaches `1 - tol`, boundary
/// when some weight vanishes (within `tol`) and the rest stay in `[0, 1]`,
/// outside when any weight drops below `-tol`.
pub fn classify_location(w: &BaryCoords, tol: f64) -> SimplexPosition {
    if w.w.iter().any(|&v| v < -tol) {
        return SimplexPosition::Outside;
    }
    if w.w.iter().any(|&v| v >= 1.0 - tol) {
        return SimplexPosition::Vertex;
    }
    if w.w.iter().any(|&v| v.abs() <= tol) {
        return SimplexPosition::Boundary;
    }
    SimplexPosition::Interior
}

/// A `d`-simplex held by explicit vertex coordinates, with the inverse of
/// its edge matrix cached so barycentric solves cost one matrix-vector
/// product. Used both for Delaunay cells and for free-standing region
/// simplices.
#[derive(Clone, Debug)]
pub struct SimplexCoords {
    pub vertices: Vec<Point>,
    edge_inverse: DMatrix<f64>,
}

impl SimplexCoords {
    /// Builds the simplex and caches the edge-matrix inverse.
    ///
    /// Degeneracy is judged scale-free: the edge matrix determinant is
    /// compared against `tol` times the product of the edge lengths.
    pub fn new(vertices: Vec<Point>, tol: f64) -> Result<Self> {
        let d = vertices.len() - 1;
        assert!(d >= 1, "a simplex needs at least two vertices");
        let a = edge_matrix(&vertices);
        let det = a.clone().lu().determinant();
        let mut scale = 1.0f64;
        for k in 1..=d {
            scale *= vertices[k].sub(&vertices[0]).norm();
        }
        if scale == 0.0 || det.abs() <= tol * scale {
            return Err(Error::DegenerateSimplex);
        }
        let edge_inverse = a.try_inverse().ok_or(Error::DegenerateSimplex)?;
        Ok(SimplexCoords {
            vertices,
            edge_inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Solves for the barycentric coordinates of `x`: the cached inverse
    /// gives `w_2..w_{d+1}` from `x - y_1`, and `w_1` closes the sum to 1.
    pub fn barycentric(&self, x: &Point) -> BaryCoords {
        let d = self.dim();
        let rhs = DVector::from_iterator(
            d,
            x.coords
                .iter()
                .zip(&self.vertices[0].coords)
                .map(|(a, b)| a - b),
        );
        let tail = &self.edge_inverse * rhs;
        let mut w = Vec::with_capacity(d + 1);
        w.push(1.0 - tail.iter().sum::<f64>());
        w.extend(tail.iter().copied());
        BaryCoords { w }
    }

    /// Reconstructs the point with coordinates `w` (inverse of
    /// `barycentric`).
    pub fn point_from_bary(&self, w: &BaryCoords) -> Point {
        let d = self.vertices[0].dim();
        let mut coords = vec![0.0; d];
        for (wi, v) in w.w.iter().zip(&self.vertices) {
            for (c, vc) in coords.iter_mut().zip(&v.coords) {
                *c += wi * vc;
            }
        }
        Point::new(coords)
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    /// Convex distance from the simplex centroid to `z`: the ratio of the
    /// centroid-to-`z` distance over the centroid-to-boundary distance
    /// along the same ray. Equals `1 - (d+1) * min_k w_k(z)` because the
    /// coordinate that vanishes at the boundary crossing is the smallest
    /// one. Strictly below 1 inside, 0 at the centroid, at least 1 outside.
    pub fn convex_distance(&self, z: &Point) -> f64 {
        let w = self.barycentric(z);
        convex_distance_from_bary(&w)
    }
}

/// Convex distance of a point already expressed in barycentric
/// coordinates of the region simplex.
pub fn convex_distance_from_bary(w: &BaryCoords) -> f64 {
    let d = w.dim();
    let (_, min) = w.min_coord();
    1.0 - (d as f64 + 1.0) * min
}

/// Edge matrix with columns `y_k - y_1`, `k = 2..=d+1`.
fn edge_matrix(vertices: &[Point]) -> DMatrix<f64> {
    let d = vertices.len() - 1;
    DMatrix::from_fn(d, d, |r, c| {
        vertices[c + 1].coords[r] - vertices[0].coords[r]
    })
}

/// Index of the vertex region containing a point of the simplex.
///
/// `m` holds the barycentric coordinates of the region center `M`
/// (uniform for the centroid) and `w` those of the query point. The
/// region of vertex `i` is characterized by `w_i / m_i` beating every
/// other ratio; ties go to the lowest index so the partition is
/// deterministic on region boundaries.
pub fn vertex_region(m: &BaryCoords, w: &BaryCoords, tol: f64) -> Result<usize> {
    if !w.inside(tol) {
        return Err(Error::OutsideSimplex);
    }
    let mut best = 0usize;
    let mut best_ratio = w.w[0] / m.w[0];
    for i in 1..w.w.len() {
        let ratio = w.w[i] / m.w[i];
        if ratio > best_ratio {
            best = i;
            best_ratio = ratio;
        }
    }
    Ok(best)
}

/// Uniform center coordinates (the centroid) for a `d`-simplex.
pub fn uniform_center(d: usize) -> BaryCoords {
    BaryCoords {
        w: vec![1.0 / (d as f64 + 1.0); d + 1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> SimplexCoords {
        SimplexCoords::new(
            vec![
                Point::new(vec![0.0, 0.0]),
                Point::new(vec![1.0, 0.0]),
                Point::new(vec![0.0, 1.0]),
            ],
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn barycentric_centroid() {
        let s = unit_triangle();
        let w = s.barycentric(&Point::new(vec![1.0 / 3.0, 1.0 / 3.0]));
        for wi in &w.w {
            assert!((wi - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn barycentric_vertex() {
        let s = unit_triangle();
        let w = s.barycentric(&Point::new(vec![0.0, 0.0]));
        assert!((w.w[0] - 1.0).abs() < 1e-12);
        assert!(w.w[1].abs() < 1e-12);
        assert!(w.w[2].abs() < 1e-12);
    }

    #[test]
    fn barycentric_outside_point() {
        // Hand-solved 2x2 system for x = (0.5, 0.6); cross-checked by
        // reconstruction below.
        let s = unit_triangle();
        let x = Point::new(vec![0.5, 0.6]);
        let w = s.barycentric(&x);
        assert!((w.w[0] - (-0.1)).abs() < 1e-12);
        assert!((w.w[1] - 0.5).abs() < 1e-12);
        assert!((w.w[2] - 0.6).abs() < 1e-12);
        let back = s.point_from_bary(&w);
        assert!(back.dist(&x) < 1e-12);
    }

    #[test]
    fn classify_positions() {
        let tol = 1e-9;
        let interior = BaryCoords {
            w: vec![1.0 / 3.0; 3],
        };
        assert_eq!(classify_location(&interior, tol), SimplexPosition::Interior);
        let boundary = BaryCoords {
            w: vec![0.0, 0.4, 0.6],
        };
        assert_eq!(classify_location(&boundary, tol), SimplexPosition::Boundary);
        let outside = BaryCoords {
            w: vec![-0.1, 0.5, 0.6],
        };
        assert_eq!(classify_location(&outside, tol), SimplexPosition::Outside);
        let vertex = BaryCoords {
            w: vec![1.0, 0.0, 0.0],
        };
        assert_eq!(classify_location(&vertex, tol), SimplexPosition::Vertex);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let r = SimplexCoords::new(
            vec![
                Point::new(vec![0.0, 0.0]),
                Point::new(vec![1.0, 1.0]),
                Point::new(vec![2.0, 2.0]),
            ],
            1e-9,
        );
        assert!(matches!(r, Err(Error::DegenerateSimplex)));
    }

    #[test]
    fn vertex_region_centroid_rule() {
        let m = uniform_center(2);
        let w = BaryCoords {
            w: vec![0.5, 0.3, 0.2],
        };
        assert_eq!(vertex_region(&m, &w, 1e-9).unwrap(), 0);
        // Exactly at the center every ratio ties; lowest index wins.
        let center = BaryCoords {
            w: vec![1.0 / 3.0; 3],
        };
        assert_eq!(vertex_region(&m, &center, 1e-9).unwrap(), 0);
    }

    #[test]
    fn vertex_region_general_center() {
        // Evaluated against the defining inequality for every index.
        let m = BaryCoords {
            w: vec![0.5, 0.25, 0.25],
        };
        let w = BaryCoords {
            w: vec![0.4, 0.35, 0.25],
        };
        assert_eq!(vertex_region(&m, &w, 1e-9).unwrap(), 1);
    }

    #[test]
    fn vertex_region_rejects_outside() {
        let m = uniform_center(2);
        let w = BaryCoords {
            w: vec![-0.1, 0.5, 0.6],
        };
        assert!(matches!(
            vertex_region(&m, &w, 1e-9),
            Err(Error::OutsideSimplex)
        ));
    }

    #[test]
    fn convex_distance_reference_values() {
        let s = unit_triangle();
        // Center of the region.
        assert!(s.convex_distance(&s.centroid()).abs() < 1e-12);
        // On a face: midpoint of the hypotenuse.
        let rho = s.convex_distance(&Point::new(vec![0.5, 0.5]));
        assert!((rho - 1.0).abs() < 1e-12);
        // Outside with w = (-0.1, 0.5, 0.6): 1 - 3 * (-0.1) = 1.3.
        let rho = s.convex_distance(&Point::new(vec![0.5, 0.6]));
        assert!((rho - 1.3).abs() < 1e-12);
    }
}
