//! Incremental Bowyer-Watson Delaunay tessellation in general dimension.
//!
//! The triangulation is kept compactified: alongside the finite cells
//! there are infinite cells, one per hull facet, that share a single
//! virtual vertex "at infinity". A point in conflict with an infinite
//! cell is simply a point beyond that hull facet, so hull extension and
//! interior insertion run through the same cavity logic. The virtual
//! vertex is dropped at the end, which leaves the finite cells plus the
//! hull facets.
//!
//! Predicates run on deterministically jittered copies of the
//! coordinates (index-keyed, ~1e-12 of the bounding-box scale). The
//! jitter resolves cospherical and coplanar ties the same way on every
//! run without touching the reported geometry.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::point::Point;
use super::simplex::SimplexCoords;
use super::tessellation::{hull_center_of_mass, Cell, OuterSimplex, Tessellation};
use crate::error::{Error, Result};

/// Construction knobs for [`delaunay_tessellate`].
#[derive(Clone, Debug)]
pub struct TessellationParams {
    /// Absolute tolerance on barycentric / cone coordinates.
    pub tol: f64,
    /// Resolve cospherical ties by deterministic jitter. When disabled,
    /// an ambiguous in-sphere test surfaces as `CosphericalAmbiguity`.
    pub perturb: bool,
    /// Seed for the insertion-order shuffle.
    pub seed: u64,
}

impl Default for TessellationParams {
    fn default() -> Self {
        TessellationParams {
            tol: crate::DEFAULT_TOL,
            perturb: true,
            seed: 0,
        }
    }
}

const VIRTUAL: usize = usize::MAX;
const JITTER_REL: f64 = 1e-12;

enum CellKind {
    Finite { center: DVector<f64>, r2: f64 },
    /// Outward half-space of the real facet: `normal . x > offset` means
    /// the point sees this hull facet.
    Infinite { normal: DVector<f64>, offset: f64 },
}

struct BwCell {
    /// Sorted vertex ids; `VIRTUAL` sorts last when present.
    verts: Vec<usize>,
    kind: CellKind,
    alive: bool,
}

struct Builder {
    jittered: Vec<DVector<f64>>,
    cells: Vec<BwCell>,
    /// Running sum of inserted real points, for facet orientation.
    interior_sum: DVector<f64>,
    interior_n: usize,
    d: usize,
    perturb: bool,
    guard: f64,
    scale: f64,
}

/// Builds the Delaunay tessellation of `points` (deduplicated first) and
/// attaches one outer simplex to every hull facet.
pub fn delaunay_tessellate(points: &[Point], params: &TessellationParams) -> Result<Tessellation> {
    if points.is_empty() {
        return Err(Error::InsufficientPoints { needed: 2, got: 0 });
    }
    let d = points[0].dim();
    if d < 1 {
        return Err(Error::DegenerateInput { dim: d });
    }
    if d > crate::MAX_DIM {
        return Err(Error::DimensionTooLarge(d));
    }
    for p in points {
        if p.dim() != d || !p.is_finite() {
            return Err(Error::DegenerateInput { dim: d });
        }
    }

    let scale = bbox_scale(points);
    let store = dedupe(points, 1e-9 * scale.max(1e-300));
    if store.len() < d + 1 {
        return Err(Error::InsufficientPoints {
            needed: d + 1,
            got: store.len(),
        });
    }

    let mut order: Vec<usize> = (0..store.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(params.seed, 0x7e55));
    order.shuffle(&mut rng);

    let jittered: Vec<DVector<f64>> = store
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut v = DVector::from_iterator(d, p.coords.iter().copied());
            if params.perturb {
                for k in 0..d {
                    v[k] += scale * JITTER_REL * jitter_unit(i as u64, k as u64);
                }
            }
            v
        })
        .collect();

    let mut builder = Builder {
        jittered,
        cells: Vec::new(),
        interior_sum: DVector::zeros(d),
        interior_n: 0,
        d,
        perturb: params.perturb,
        guard: 1e-12 * scale * scale,
        scale,
    };

    let inserted_first = builder.bootstrap(&order)?;
    for &idx in &order {
        if !inserted_first.contains(&idx) {
            builder.insert(idx)?;
        }
    }

    builder.finish(store, params.tol)
}

impl Builder {
    /// Picks `d + 1` affinely independent points from `order`, creates
    /// the first finite cell and its ring of infinite cells. Returns the
    /// chosen ids.
    fn bootstrap(&mut self, order: &[usize]) -> Result<Vec<usize>> {
        let d = self.d;
        let mut chosen: Vec<usize> = Vec::with_capacity(d + 1);
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
        for &idx in order {
            if chosen.is_empty() {
                chosen.push(idx);
                continue;
            }
            let mut v = &self.jittered[idx] - &self.jittered[chosen[0]];
            for b in &basis {
                let proj = v.dot(b);
                v -= b * proj;
            }
            let n = v.norm();
            if n > 1e-9 * self.scale {
                basis.push(v / n);
                chosen.push(idx);
                if chosen.len() == d + 1 {
                    break;
                }
            }
        }
        if chosen.len() < d + 1 {
            return Err(Error::DegenerateInput { dim: d });
        }

        for &idx in &chosen {
            self.note_inserted(idx);
        }
        let mut verts = chosen.clone();
        verts.sort_unstable();
        let finite = self.make_finite_cell(verts.clone())?;
        self.cells.push(finite);
        for skip in 0..verts.len() {
            let facet: Vec<usize> = verts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &id)| id)
                .collect();
            let inf = self.make_infinite_cell(&facet)?;
            self.cells.push(inf);
        }
        Ok(chosen)
    }

    fn note_inserted(&mut self, idx: usize) {
        self.interior_sum += &self.jittered[idx];
        self.interior_n += 1;
    }

    fn interior_point(&self) -> DVector<f64> {
        &self.interior_sum / self.interior_n as f64
    }

    fn conflict(&self, cell: &BwCell, p: &DVector<f64>) -> Result<bool> {
        match &cell.kind {
            CellKind::Finite { center, r2 } => {
                let dist2 = (p - center).norm_squared();
                if !self.perturb && (dist2 - r2).abs() <= self.guard {
                    return Err(Error::CosphericalAmbiguity);
                }
                Ok(dist2 < *r2)
            }
            CellKind::Infinite { normal, offset } => {
                let side = normal.dot(p) - offset;
                if !self.perturb && side.abs() <= 1e-12 * self.scale {
                    return Err(Error::CosphericalAmbiguity);
                }
                Ok(side > 0.0)
            }
        }
    }

    fn insert(&mut self, idx: usize) -> Result<()> {
        let p = self.jittered[idx].clone();
        let mut conflicts: Vec<usize> = Vec::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            if cell.alive && self.conflict(cell, &p)? {
                conflicts.push(ci);
            }
        }
        if conflicts.is_empty() {
            // Exact boundary tie that the jitter did not separate; take
            // the closest cell by conflict margin so insertion proceeds.
            let mut best: Option<(usize, f64)> = None;
            for (ci, cell) in self.cells.iter().enumerate() {
                if !cell.alive {
                    continue;
                }
                let margin = match &cell.kind {
                    CellKind::Finite { center, r2 } => r2 - (&p - center).norm_squared(),
                    CellKind::Infinite { normal, offset } => normal.dot(&p) - offset,
                };
                if best.is_none_or(|(_, m)| margin > m) {
                    best = Some((ci, margin));
                }
            }
            conflicts.push(best.ok_or(Error::CosphericalAmbiguity)?.0);
        }

        // Census of conflict-cell facets: a facet seen once bounds the
        // cavity, a facet seen twice is interior to it.
        let mut census: HashMap<Vec<usize>, usize> = HashMap::new();
        for &ci in &conflicts {
            let verts = &self.cells[ci].verts;
            for skip in 0..verts.len() {
                let facet: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &id)| id)
                    .collect();
                *census.entry(facet).or_insert(0) += 1;
            }
        }
        for &ci in &conflicts {
            self.cells[ci].alive = false;
        }
        self.note_inserted(idx);

        let mut boundary: Vec<Vec<usize>> = census
            .into_iter()
            .filter_map(|(facet, n)| (n == 1).then_some(facet))
            .collect();
        boundary.sort_unstable();

        for facet in boundary {
            let cell = if facet.contains(&VIRTUAL) {
                let real: Vec<usize> = facet.iter().copied().filter(|&v| v != VIRTUAL).collect();
                let mut hull_facet = real;
                hull_facet.push(idx);
                hull_facet.sort_unstable();
                self.make_infinite_cell(&hull_facet)?
            } else {
                let mut verts = facet;
                verts.push(idx);
                verts.sort_unstable();
                self.make_finite_cell(verts)?
            };
            self.cells.push(cell);
        }
        Ok(())
    }

    fn make_finite_cell(&self, verts: Vec<usize>) -> Result<BwCell> {
        let (center, r2) = self.circumsphere(&verts)?;
        Ok(BwCell {
            verts,
            kind: CellKind::Finite { center, r2 },
            alive: true,
        })
    }

    /// Circumcenter of the jittered vertices: equidistance from the first
    /// vertex gives `d` linear equations.
    fn circumsphere(&self, verts: &[usize]) -> Result<(DVector<f64>, f64)> {
        let d = self.d;
        let y0 = &self.jittered[verts[0]];
        // Row i is 2 (y_{i+1} - y_0)^T: equidistance from consecutive
        // vertex pairs.
        let a = DMatrix::from_fn(d, d, |r, c| 2.0 * (self.jittered[verts[r + 1]][c] - y0[c]));
        let b = DVector::from_fn(d, |r, _| {
            self.jittered[verts[r + 1]].norm_squared() - y0.norm_squared()
        });
        let center = a
            .clone()
            .lu()
            .solve(&b)
            .ok_or(Error::CosphericalAmbiguity)?;
        // Backward-stable solves keep the residual small relative to
        // |A||x| + |b| even for the huge circumcenters of sliver cells
        // that jitter-resolved degenerate inputs produce.
        let residual = (&a * &center - &b).norm();
        let scale = a.norm() * center.norm() + b.norm() + 1.0;
        if !residual.is_finite() || residual > 1e-7 * scale {
            return Err(Error::CosphericalAmbiguity);
        }
        let r2 = (&center - y0).norm_squared();
        Ok((center, r2))
    }

    /// Infinite cell over a hull facet: stores the facet's hyperplane
    /// oriented away from the triangulation interior.
    fn make_infinite_cell(&self, facet: &[usize]) -> Result<BwCell> {
        let edges: Vec<DVector<f64>> = facet[1..]
            .iter()
            .map(|&v| &self.jittered[v] - &self.jittered[facet[0]])
            .collect();
        let mut normal = generalized_cross(&edges, self.d);
        let n = normal.norm();
        if n <= 1e-30 {
            return Err(Error::CosphericalAmbiguity);
        }
        normal /= n;
        let mut offset = normal.dot(&self.jittered[facet[0]]);
        let interior = self.interior_point();
        if normal.dot(&interior) - offset > 0.0 {
            normal = -normal;
            offset = -offset;
        }
        let mut verts = facet.to_vec();
        verts.push(VIRTUAL);
        verts.sort_unstable();
        Ok(BwCell {
            verts,
            kind: CellKind::Infinite { normal, offset },
            alive: true,
        })
    }

    /// Drops the virtual vertex: live finite cells become Delaunay cells,
    /// live infinite cells yield the hull facets and outer simplices.
    fn finish(self, store: Vec<Point>, tol: f64) -> Result<Tessellation> {
        let mut cells: Vec<Cell> = Vec::new();
        let mut hull_facets: Vec<Vec<usize>> = Vec::new();
        let mut facet_planes: Vec<(DVector<f64>, f64)> = Vec::new();
        for cell in &self.cells {
            if !cell.alive {
                continue;
            }
            match &cell.kind {
                CellKind::Finite { center, r2 } => {
                    let vertices: Vec<Point> =
                        cell.verts.iter().map(|&i| store[i].clone()).collect();
                    // Raw coordinates first; for inputs degenerate enough
                    // that the raw edge matrix is singular, the jittered
                    // coordinates stand in.
                    let geom = SimplexCoords::new(vertices, 1e-14).or_else(|_| {
                        SimplexCoords::new(
                            cell.verts
                                .iter()
                                .map(|&i| Point::new(self.jittered[i].iter().copied().collect()))
                                .collect(),
                            0.0,
                        )
                    })?;
                    cells.push(Cell {
                        vertex_ids: cell.verts.clone(),
                        geom,
                        circumcenter: Point::new(center.iter().copied().collect()),
                        circumradius: r2.sqrt(),
                    });
                }
                CellKind::Infinite { normal, offset } => {
                    let facet: Vec<usize> =
                        cell.verts.iter().copied().filter(|&v| v != VIRTUAL).collect();
                    hull_facets.push(facet);
                    facet_planes.push((normal.clone(), *offset));
                }
            }
        }
        // Deterministic cell and facet order regardless of insertion
        // history.
        let mut cell_order: Vec<usize> = (0..cells.len()).collect();
        cell_order.sort_by(|&a, &b| cells[a].vertex_ids.cmp(&cells[b].vertex_ids));
        let cells: Vec<Cell> = cell_order.into_iter().map(|i| cells[i].clone()).collect();
        let mut facet_order: Vec<usize> = (0..hull_facets.len()).collect();
        facet_order.sort_by(|&a, &b| hull_facets[a].cmp(&hull_facets[b]));
        let hull_facets: Vec<Vec<usize>> =
            facet_order.iter().map(|&i| hull_facets[i].clone()).collect();
        let facet_planes: Vec<(DVector<f64>, f64)> =
            facet_order.iter().map(|&i| facet_planes[i].clone()).collect();

        let hull_center = hull_center_of_mass(&store, &hull_facets);
        let mut outer = Vec::with_capacity(hull_facets.len());
        for (facet, (normal, offset)) in hull_facets.iter().zip(&facet_planes) {
            outer.push(OuterSimplex::build(
                facet.clone(),
                &store,
                &hull_center,
                Point::new(normal.iter().copied().collect()),
                *offset,
            )?);
        }
        Ok(Tessellation::assemble(
            store,
            cells,
            outer,
            hull_center,
            hull_facets,
            tol,
        ))
    }
}

/// Generalized cross product of `d - 1` vectors in `R^d` via cofactor
/// expansion: the result is orthogonal to all of them.
fn generalized_cross(edges: &[DVector<f64>], d: usize) -> DVector<f64> {
    debug_assert_eq!(edges.len(), d - 1);
    if d == 1 {
        return DVector::from_element(1, 1.0);
    }
    let mut normal = DVector::zeros(d);
    for k in 0..d {
        let minor = DMatrix::from_fn(d - 1, d - 1, |r, c| {
            let col = if c < k { c } else { c + 1 };
            edges[r][col]
        });
        let det = minor.lu().determinant();
        normal[k] = if k % 2 == 0 { det } else { -det };
    }
    normal
}

fn bbox_scale(points: &[Point]) -> f64 {
    let d = points[0].dim();
    let mut scale = 0.0f64;
    for k in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in points {
            lo = lo.min(p.coords[k]);
            hi = hi.max(p.coords[k]);
        }
        scale = scale.max(hi - lo);
    }
    if scale > 0.0 {
        scale
    } else {
        1.0
    }
}

/// Keeps the first of any group of points within `tol` of each other.
fn dedupe(points: &[Point], tol: f64) -> Vec<Point> {
    let mut kept: Vec<Point> = Vec::with_capacity(points.len());
    'outer: for p in points {
        for q in &kept {
            if p.dist(q) <= tol {
                continue 'outer;
            }
        }
        kept.push(p.clone());
    }
    kept
}

const JITTER_SALT: u64 = 0x9d17_5a1d_0f1e_c0de;

/// Deterministic unit jitter in `[-0.5, 0.5)` keyed by point and
/// coordinate index.
fn jitter_unit(i: u64, k: u64) -> f64 {
    let h = crate::derive_seed(JITTER_SALT, i.wrapping_mul(64).wrapping_add(k));
    (h as f64) / (u64::MAX as f64) - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[[f64; 2]]) -> Vec<Point> {
        v.iter().map(|c| Point::new(c.to_vec())).collect()
    }

    #[test]
    fn single_triangle() {
        let t = delaunay_tessellate(
            &pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            &TessellationParams::default(),
        )
        .unwrap();
        assert_eq!(t.cell_count(), 1);
        assert_eq!(t.outer_count(), 3);
    }

    #[test]
    fn interior_point_gives_three_cells() {
        // One point strictly inside the triangle of the other three.
        let t = delaunay_tessellate(
            &pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.25, 0.25]]),
            &TessellationParams::default(),
        )
        .unwrap();
        assert_eq!(t.cell_count(), 3);
        assert_eq!(t.outer_count(), 3);
    }

    #[test]
    fn hexagon_has_six_outer_simplices() {
        let mut v = Vec::new();
        for i in 0..6 {
            let a = std::f64::consts::TAU * i as f64 / 6.0;
            v.push([a.cos(), a.sin()]);
        }
        let t = delaunay_tessellate(&pts(&v), &TessellationParams::default()).unwrap();
        assert_eq!(t.outer_count(), 6);
    }

    #[test]
    fn insufficient_points_rejected() {
        let r = delaunay_tessellate(&pts(&[[0.0, 0.0], [1.0, 0.0]]), &TessellationParams::default());
        assert!(matches!(r, Err(Error::InsufficientPoints { .. })));
    }

    #[test]
    fn collinear_input_rejected() {
        let r = delaunay_tessellate(
            &pts(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]),
            &TessellationParams::default(),
        );
        assert!(matches!(r, Err(Error::DegenerateInput { .. })));
    }

    #[test]
    fn cocircular_square_resolved_by_perturbation() {
        let t = delaunay_tessellate(
            &pts(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            &TessellationParams::default(),
        )
        .unwrap();
        assert_eq!(t.cell_count(), 2);
        assert_eq!(t.outer_count(), 4);
    }

    #[test]
    fn duplicates_are_dropped() {
        let t = delaunay_tessellate(
            &pts(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            &TessellationParams::default(),
        )
        .unwrap();
        assert_eq!(t.points.len(), 3);
        assert_eq!(t.cell_count(), 1);
    }
}
