//! Delaunay tessellations with outer simplices, and point location.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::point::{centroid, Point};
use super::simplex::{BaryCoords, SimplexCoords};
use crate::error::{Error, Result};

/// A Delaunay cell: a `d`-simplex over the non-target point store whose
/// circumsphere contains no other stored point in its interior.
#[derive(Clone, Debug)]
pub struct Cell {
    pub vertex_ids: Vec<usize>,
    pub geom: SimplexCoords,
    pub circumcenter: Point,
    pub circumradius: f64,
}

/// Coefficients of `x - C_M` in the ray basis `(p_i - C_M)` of one outer
/// simplex. The outer simplex is the set `{ c_i >= 0, sum c_i >= 1 }`:
/// the hull facet swept outward along the rays through its vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCoords {
    pub c: Vec<f64>,
}

impl ConeCoords {
    pub fn sum(&self) -> f64 {
        self.c.iter().sum()
    }

    /// Membership in the outer simplex, up to tolerance.
    pub fn member(&self, tol: f64) -> bool {
        self.c.iter().all(|&ci| ci >= -tol) && self.sum() >= 1.0 - tol
    }
}

/// The unbounded region beyond one hull facet, bounded laterally by the
/// rays from the facet vertices away from the hull's boundary center of
/// mass.
#[derive(Clone, Debug)]
pub struct OuterSimplex {
    pub facet_vertex_ids: Vec<usize>,
    pub ray_directions: Vec<Point>,
    cone_inverse: DMatrix<f64>,
    /// Unit facet normal pointing away from the hull.
    pub facet_normal: Point,
    /// `facet_normal . x = facet_offset` on the facet's hyperplane.
    pub facet_offset: f64,
}

impl OuterSimplex {
    pub fn build(
        facet_vertex_ids: Vec<usize>,
        points: &[Point],
        hull_center: &Point,
        facet_normal: Point,
        facet_offset: f64,
    ) -> Result<Self> {
        let d = hull_center.dim();
        let ray_directions: Vec<Point> = facet_vertex_ids
            .iter()
            .map(|&i| points[i].sub(hull_center))
            .collect();
        let basis = DMatrix::from_fn(d, d, |r, c| ray_directions[c].coords[r]);
        let cone_inverse = basis.try_inverse().ok_or(Error::DegenerateCone)?;
        Ok(OuterSimplex {
            facet_vertex_ids,
            ray_directions,
            cone_inverse,
            facet_normal,
            facet_offset,
        })
    }

    /// Solves `x - C_M = sum c_i (p_i - C_M)` for `c`.
    pub fn cone_coordinates(&self, hull_center: &Point, x: &Point) -> ConeCoords {
        let d = hull_center.dim();
        let rhs = DVector::from_iterator(
            d,
            x.coords
                .iter()
                .zip(&hull_center.coords)
                .map(|(a, b)| a - b),
        );
        let c = &self.cone_inverse * rhs;
        ConeCoords {
            c: c.iter().copied().collect(),
        }
    }

    /// Signed distance of `x` from the facet hyperplane; positive on the
    /// outward (non-hull) side.
    pub fn signed_facet_distance(&self, x: &Point) -> f64 {
        self.facet_normal.dot(x) - self.facet_offset
    }
}

/// Where a query point landed in the tessellation.
#[derive(Clone, Debug)]
pub enum Location {
    /// Inside (or on the boundary of) a Delaunay cell; lowest cell index
    /// wins on shared facets.
    InsideCell(usize, BaryCoords),
    /// Inside an outer simplex, with its cone coordinates.
    InOuter(usize, ConeCoords),
    /// In a cell but on a facet of the convex hull itself.
    OnHullBoundary(usize, BaryCoords),
    /// No membership test passed (non-finite input or a tolerance gap).
    Degenerate,
}

impl Location {
    /// Collapses the hull-boundary tag onto its cell, which is how every
    /// consumer treats boundary points.
    pub fn as_cell(&self) -> Option<(usize, &BaryCoords)> {
        match self {
            Location::InsideCell(k, w) | Location::OnHullBoundary(k, w) => Some((*k, w)),
            _ => None,
        }
    }

    pub fn as_outer(&self) -> Option<(usize, &ConeCoords)> {
        match self {
            Location::InOuter(l, c) => Some((*l, c)),
            _ => None,
        }
    }
}

/// The Delaunay tessellation of one non-target point set together with
/// the outer simplices attached to its hull facets. Immutable once built;
/// all queries are pure.
#[derive(Clone, Debug)]
pub struct Tessellation {
    /// Deduplicated non-target point store; cell and facet ids index it.
    pub points: Vec<Point>,
    pub cells: Vec<Cell>,
    pub outer: Vec<OuterSimplex>,
    /// Mean of the hull boundary points; apex of every outer cone.
    pub hull_center: Point,
    /// Sorted vertex ids of each hull facet, aligned with `outer`.
    pub hull_facets: Vec<Vec<usize>>,
    pub tol: f64,
    hull_facet_set: HashSet<Vec<usize>>,
}

impl Tessellation {
    pub(crate) fn assemble(
        points: Vec<Point>,
        cells: Vec<Cell>,
        outer: Vec<OuterSimplex>,
        hull_center: Point,
        hull_facets: Vec<Vec<usize>>,
        tol: f64,
    ) -> Self {
        let hull_facet_set = hull_facets.iter().cloned().collect();
        Tessellation {
            points,
            cells,
            outer,
            hull_center,
            hull_facets,
            tol,
            hull_facet_set,
        }
    }

    pub fn dim(&self) -> usize {
        self.hull_center.dim()
    }

    /// Number of Delaunay cells.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Number of outer simplices (= hull facets).
    pub fn outer_count(&self) -> usize {
        self.outer.len()
    }

    /// True when `x` lies inside the convex hull, judged against every
    /// facet half-space. Independent of the cell walk, so it doubles as a
    /// cross-check in tests.
    pub fn in_hull(&self, x: &Point, tol: f64) -> bool {
        self.outer.iter().all(|o| o.signed_facet_distance(x) <= tol)
    }

    /// Locates `x`: cells are scanned first in index order (so boundary
    /// ties go to the lowest cell index), then outer simplices.
    pub fn locate(&self, x: &Point) -> Location {
        if !x.is_finite() {
            return Location::Degenerate;
        }
        let tol = self.tol;
        for (k, cell) in self.cells.iter().enumerate() {
            let w = cell.geom.barycentric(x);
            if w.inside(tol) {
                if self.on_hull_facet(k, &w) {
                    return Location::OnHullBoundary(k, w);
                }
                return Location::InsideCell(k, w);
            }
        }
        for (l, outer) in self.outer.iter().enumerate() {
            let c = outer.cone_coordinates(&self.hull_center, x);
            if c.member(tol) {
                return Location::InOuter(l, c);
            }
        }
        Location::Degenerate
    }

    fn on_hull_facet(&self, cell_idx: usize, w: &BaryCoords) -> bool {
        let cell = &self.cells[cell_idx];
        for (i, &wi) in w.w.iter().enumerate() {
            if wi.abs() <= self.tol {
                let mut facet: Vec<usize> = cell
                    .vertex_ids
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &id)| id)
                    .collect();
                facet.sort_unstable();
                if self.hull_facet_set.contains(&facet) {
                    return true;
                }
            }
        }
        false
    }

    /// Ids of the points on the hull boundary.
    pub fn hull_boundary_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .hull_facets
            .iter()
            .flat_map(|f| f.iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Builds the boundary center of mass from hull facets.
pub(crate) fn hull_center_of_mass(points: &[Point], hull_facets: &[Vec<usize>]) -> Point {
    let mut ids: Vec<usize> = hull_facets.iter().flat_map(|f| f.iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    centroid(ids.iter().map(|&i| &points[i]))
}
