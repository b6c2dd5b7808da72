//! Proximity regions and proximity catch digraphs.
//!
//! Three region families share one contract: a region is attached to a
//! target point (its anchor), never contains a non-target point in its
//! interior, and membership is an O(1) threshold test.
//!
//! * [`InnerPERegion`] - inside a Delaunay cell, the sub-simplex obtained
//!   by scaling the hyperplane through the anchor (parallel to the face
//!   opposite its vertex region) by the expansion factor `r`. Membership
//!   is one barycentric-coordinate comparison.
//! * [`OuterPERegion`] - inside an outer simplex, the prism between the
//!   hull facet and the facet-parallel cap at `r` times the anchor's
//!   level. Membership is one cone-coordinate-sum comparison.
//! * [`BallRegion`] - the classic spherical region whose radius
//!   interpolates between the farthest target closer than the nearest
//!   non-target and that nearest non-target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{uniform_center, vertex_region, BaryCoords, ConeCoords, Point, Tessellation};

/// Proportional-edge region inside one Delaunay cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerPERegion {
    pub cell: usize,
    /// Vertex whose region contains the anchor.
    pub vertex: usize,
    /// Membership threshold on the `vertex` barycentric coordinate:
    /// `tau = 1 - r (1 - w_vertex(anchor))`. Negative means the region
    /// fills the whole cell.
    pub tau: f64,
    pub expansion: f64,
}

/// Proportional-edge region inside one outer simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterPERegion {
    pub outer: usize,
    /// Cone-coordinate sum of the anchor (its level above the facet).
    pub anchor_level: f64,
    /// Membership cap on the cone-coordinate sum:
    /// `1 + r (anchor_level - 1)`.
    pub level_cap: f64,
    pub expansion: f64,
}

/// Spherical (CCCD) region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRegion {
    pub center: Point,
    pub radius: f64,
    pub theta: f64,
}

impl BallRegion {
    /// Open-ball membership.
    pub fn contains(&self, z: &Point) -> bool {
        z.dist(&self.center) < self.radius
    }
}

/// Builds the inner PE region of a target point with barycentric
/// coordinates `w` in `cell`. Fails if the point lies outside the cell.
pub fn pe_region_inner(
    tess: &Tessellation,
    cell: usize,
    w: &BaryCoords,
    r: f64,
) -> Result<InnerPERegion> {
    debug_assert!(r >= 1.0);
    if !w.inside(tess.tol) {
        return Err(Error::OutsideCell);
    }
    let m = uniform_center(w.dim());
    let vertex = vertex_region(&m, w, tess.tol).map_err(|_| Error::OutsideCell)?;
    let tau = 1.0 - r * (1.0 - w.w[vertex]);
    Ok(InnerPERegion {
        cell,
        vertex,
        tau,
        expansion: r,
    })
}

/// Membership of a point (already located in the same cell, coordinates
/// `w_z`) in an inner PE region.
pub fn pe_contains_inner(region: &InnerPERegion, w_z: &BaryCoords, tol: f64) -> bool {
    w_z.w[region.vertex] >= region.tau - tol
}

/// Builds the outer PE region of a target point with cone coordinates
/// `c` in outer simplex `outer`. Fails if the cone test rejects the
/// point.
pub fn pe_region_outer(
    tess: &Tessellation,
    outer: usize,
    c: &ConeCoords,
    r: f64,
) -> Result<OuterPERegion> {
    debug_assert!(r >= 1.0);
    if !c.member(tess.tol) {
        return Err(Error::OutsideOuterSimplex);
    }
    // Guard against anchors numerically on the facet: the region then
    // degenerates to a zero-height slab.
    let anchor_level = c.sum().max(1.0);
    let level_cap = 1.0 + r * (anchor_level - 1.0);
    Ok(OuterPERegion {
        outer,
        anchor_level,
        level_cap,
        expansion: r,
    })
}

/// Membership of a point (cone coordinates `c_z` in the same outer
/// simplex) in an outer PE region.
pub fn pe_contains_outer(region: &OuterPERegion, c_z: &ConeCoords, tol: f64) -> bool {
    c_z.member(tol) && c_z.sum() <= region.level_cap + tol
}

/// Radius of the pure spherical region around `x`: interpolates between
/// the farthest same-class point strictly closer than the nearest
/// other-class point (weight `1 - theta`) and that nearest other-class
/// point (weight `theta`). `theta = 0` is mapped to machine epsilon so
/// the ball keeps positive radius.
pub fn cccd_radius(x: &Point, targets: &[Point], nontargets: &[Point], theta: f64) -> Result<f64> {
    if nontargets.is_empty() {
        return Err(Error::EmptyNonTarget);
    }
    let theta = if theta <= 0.0 { f64::EPSILON } else { theta };
    let d_u = nontargets
        .iter()
        .map(|y| x.dist(y))
        .fold(f64::INFINITY, f64::min);
    if d_u == 0.0 {
        return Err(Error::CoincidentClasses);
    }
    let mut d_l = 0.0f64; // x itself when no target is strictly closer
    for z in targets {
        let dz = x.dist(z);
        if dz < d_u && dz > d_l {
            d_l = dz;
        }
    }
    Ok((1.0 - theta) * d_l + theta * d_u)
}

/// A vertex-random proximity catch digraph over the target points: arc
/// `(u, v)` present when `v` lies in the region of `u`. Self-loops are
/// implicit (domination always counts a vertex as covering itself).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Digraph {
    /// Out-neighbors per vertex, self excluded, ascending.
    pub arcs: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn n(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs[u].binary_search(&v).is_ok()
    }

    /// Vertices covered by `u`: itself plus its out-neighbors.
    pub fn closed_out_neighborhood(&self, u: usize) -> Vec<usize> {
        let mut cov = self.arcs[u].clone();
        match cov.binary_search(&u) {
            Ok(_) => {}
            Err(pos) => cov.insert(pos, u),
        }
        cov
    }
}

/// Where a target point landed, reduced to the two cases the proximity
/// maps distinguish. Boundary points follow the located cell.
#[derive(Clone, Debug)]
pub enum TargetSite {
    Cell { cell: usize, w: BaryCoords },
    Outer { outer: usize, c: ConeCoords },
    /// Landed nowhere (tolerance gap); carries no arcs.
    Unlocated,
}

/// Locates every target against the tessellation.
pub fn locate_targets(targets: &[Point], tess: &Tessellation) -> Vec<TargetSite> {
    targets
        .iter()
        .map(|x| {
            let loc = tess.locate(x);
            if let Some((cell, w)) = loc.as_cell() {
                TargetSite::Cell {
                    cell,
                    w: w.clone(),
                }
            } else if let Some((outer, c)) = loc.as_outer() {
                TargetSite::Outer {
                    outer,
                    c: c.clone(),
                }
            } else {
                TargetSite::Unlocated
            }
        })
        .collect()
}

/// Builds the proportional-edge PCD of the targets against a
/// tessellation. Arcs never cross cells or outer simplices.
pub fn build_pe_pcd(targets: &[Point], tess: &Tessellation, r: f64) -> Digraph {
    let sites = locate_targets(targets, tess);
    build_pe_pcd_from_sites(&sites, tess, r)
}

pub fn build_pe_pcd_from_sites(sites: &[TargetSite], tess: &Tessellation, r: f64) -> Digraph {
    let tol = tess.tol;
    let n = sites.len();
    let mut arcs = vec![Vec::new(); n];
    for (u, su) in sites.iter().enumerate() {
        match su {
            TargetSite::Cell { cell, w } => {
                let Ok(region) = pe_region_inner(tess, *cell, w, r) else {
                    continue;
                };
                for (v, sv) in sites.iter().enumerate() {
                    if v == u {
                        continue;
                    }
                    if let TargetSite::Cell { cell: cv, w: wv } = sv {
                        if cv == cell && pe_contains_inner(&region, wv, tol) {
                            arcs[u].push(v);
                        }
                    }
                }
            }
            TargetSite::Outer { outer, c } => {
                let Ok(region) = pe_region_outer(tess, *outer, c, r) else {
                    continue;
                };
                for (v, sv) in sites.iter().enumerate() {
                    if v == u {
                        continue;
                    }
                    if let TargetSite::Outer { outer: ov, c: cv } = sv {
                        if ov == outer && pe_contains_outer(&region, cv, tol) {
                            arcs[u].push(v);
                        }
                    }
                }
            }
            TargetSite::Unlocated => {}
        }
    }
    Digraph { arcs }
}

/// Builds the spherical-region catch digraph of the targets against the
/// non-target points, with the region radii returned alongside.
pub fn build_cccd(
    targets: &[Point],
    nontargets: &[Point],
    theta: f64,
) -> Result<(Digraph, Vec<f64>)> {
    let radii: Vec<f64> = targets
        .iter()
        .map(|x| cccd_radius(x, targets, nontargets, theta))
        .collect::<Result<_>>()?;
    let n = targets.len();
    let mut arcs = vec![Vec::new(); n];
    for u in 0..n {
        for v in 0..n {
            if v != u && targets[v].dist(&targets[u]) < radii[u] {
                arcs[u].push(v);
            }
        }
    }
    Ok((Digraph { arcs }, radii))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{delaunay_tessellate, TessellationParams};

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec())
    }

    fn triangle_tess() -> Tessellation {
        delaunay_tessellate(
            &[pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])],
            &TessellationParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn inner_region_threshold_arithmetic() {
        let tess = triangle_tess();
        // Anchor deep in vertex region 0 of the single cell with
        // w_0 = 0.8: for r = 2 the threshold is 1 - 2 * 0.2 = 0.6.
        let w = BaryCoords {
            w: vec![0.8, 0.1, 0.1],
        };
        let region = pe_region_inner(&tess, 0, &w, 2.0).unwrap();
        assert_eq!(region.vertex, 0);
        assert!((region.tau - 0.6).abs() < 1e-12);
        let member = BaryCoords {
            w: vec![0.7, 0.2, 0.1],
        };
        assert!(pe_contains_inner(&region, &member, 1e-9));
        let outside = BaryCoords {
            w: vec![0.59, 0.3, 0.11],
        };
        assert!(!pe_contains_inner(&region, &outside, 1e-9));
        // The anchor contains itself, and any vertex coordinate of 1
        // passes any threshold.
        assert!(pe_contains_inner(&region, &w, 1e-9));
        let vertex = BaryCoords {
            w: vec![1.0, 0.0, 0.0],
        };
        assert!(pe_contains_inner(&region, &vertex, 1e-9));
    }

    #[test]
    fn inner_region_r1_is_a_slice_through_the_anchor() {
        let tess = triangle_tess();
        let w = BaryCoords {
            w: vec![0.5, 0.3, 0.2],
        };
        let region = pe_region_inner(&tess, 0, &w, 1.0).unwrap();
        assert!((region.tau - 0.5).abs() < 1e-12);
        // The anchor sits exactly on the region boundary.
        assert!(pe_contains_inner(&region, &w, 1e-9));
        let just_below = BaryCoords {
            w: vec![0.499_99, 0.3, 0.200_01],
        };
        assert!(!pe_contains_inner(&region, &just_below, 1e-9));
    }

    #[test]
    fn inner_region_covers_whole_cell_for_large_r() {
        let tess = triangle_tess();
        let w = BaryCoords {
            w: vec![0.8, 0.1, 0.1],
        };
        // r >= 1 / (1 - w_i) = 5 drives the threshold to zero or below.
        let region = pe_region_inner(&tess, 0, &w, 5.0).unwrap();
        assert!(region.tau <= 1e-12);
        let far_corner = BaryCoords {
            w: vec![0.0, 0.0, 1.0],
        };
        assert!(pe_contains_inner(&region, &far_corner, 1e-9));
    }

    #[test]
    fn inner_region_rejects_outside_points() {
        let tess = triangle_tess();
        let w = BaryCoords {
            w: vec![-0.1, 0.5, 0.6],
        };
        assert!(matches!(
            pe_region_inner(&tess, 0, &w, 2.0),
            Err(Error::OutsideCell)
        ));
    }

    #[test]
    fn outer_region_level_arithmetic() {
        let tess = triangle_tess();
        // Anchor at level 1.5 along the first ray of outer simplex 0.
        let o = &tess.outer[0];
        let p0 = &tess.points[o.facet_vertex_ids[0]];
        let x = tess.hull_center.add_scaled(&p0.sub(&tess.hull_center), 1.5);
        let c = o.cone_coordinates(&tess.hull_center, &x);
        assert!((c.sum() - 1.5).abs() < 1e-9);
        let region = pe_region_outer(&tess, 0, &c, 2.0).unwrap();
        assert!((region.level_cap - 2.0).abs() < 1e-9);
        // Boundary point at the cap is a member; above it is not.
        let z_on = tess.hull_center.add_scaled(&p0.sub(&tess.hull_center), 2.0);
        let cz = o.cone_coordinates(&tess.hull_center, &z_on);
        assert!(pe_contains_outer(&region, &cz, 1e-9));
        let z_out = tess.hull_center.add_scaled(&p0.sub(&tess.hull_center), 2.1);
        let cz = o.cone_coordinates(&tess.hull_center, &z_out);
        assert!(!pe_contains_outer(&region, &cz, 1e-9));
        // The anchor is always a member of its own region.
        assert!(pe_contains_outer(&region, &c, 1e-9));
    }

    #[test]
    fn outer_region_on_facet_degenerates() {
        let tess = triangle_tess();
        let o = &tess.outer[0];
        let facet_mid =
            crate::geometry::centroid(o.facet_vertex_ids.iter().map(|&i| &tess.points[i]));
        let c = o.cone_coordinates(&tess.hull_center, &facet_mid);
        let region = pe_region_outer(&tess, 0, &c, 7.0).unwrap();
        assert!((region.level_cap - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cccd_radius_reference_cases() {
        // Non-target at distance 2, a target at distance 1.
        let x = pt(&[0.0]);
        let targets = vec![pt(&[0.0]), pt(&[1.0])];
        let nontargets = vec![pt(&[2.0])];
        // theta = 1: radius reaches the nearest non-target.
        let eps = cccd_radius(&x, &targets, &nontargets, 1.0).unwrap();
        assert!((eps - 2.0).abs() < 1e-12);
        // theta = 0.5 with d_l = 1, d_u = 2: 0.5 * 1 + 0.5 * 2 = 1.5.
        let eps = cccd_radius(&x, &targets, &nontargets, 0.5).unwrap();
        assert!((eps - 1.5).abs() < 1e-12);
        // No target strictly closer than the nearest non-target: the
        // radius collapses toward zero as theta does.
        let lonely = vec![pt(&[0.0])];
        let eps = cccd_radius(&x, &lonely, &nontargets, 0.0).unwrap();
        assert!(eps > 0.0 && eps < 1e-10);
        assert!(matches!(
            cccd_radius(&x, &targets, &[], 0.5),
            Err(Error::EmptyNonTarget)
        ));
    }

    #[test]
    fn cccd_arcs_and_purity() {
        // Two targets closer than either radius allows: mutual arcs.
        let targets = vec![pt(&[0.0]), pt(&[0.5])];
        let nontargets = vec![pt(&[2.0])];
        let (d, radii) = build_cccd(&targets, &nontargets, 1.0).unwrap();
        assert!(d.has_arc(0, 1) && d.has_arc(1, 0));
        // Purity: the non-target stays outside every ball.
        for (x, r) in targets.iter().zip(&radii) {
            assert!(x.dist(&nontargets[0]) >= *r);
        }
        // A non-target wedged between two targets clips both radii.
        let targets = vec![pt(&[0.0]), pt(&[1.0])];
        let nontargets = vec![pt(&[0.5])];
        let (d, _) = build_cccd(&targets, &nontargets, 1.0).unwrap();
        assert!(!d.has_arc(0, 1) && !d.has_arc(1, 0));
        // A single target has no arcs at all.
        let (d, _) = build_cccd(&[pt(&[0.0])], &[pt(&[1.0])], 0.5).unwrap();
        assert_eq!(d.arcs, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn pe_pcd_respects_cell_boundaries() {
        // Four non-target points making two cells; one target in each
        // cell: no arcs between them even for huge r.
        let tess = delaunay_tessellate(
            &[
                pt(&[0.0, 0.0]),
                pt(&[1.0, 0.0]),
                pt(&[0.0, 1.0]),
                pt(&[1.0, 1.0]),
            ],
            &TessellationParams::default(),
        )
        .unwrap();
        assert_eq!(tess.cell_count(), 2);
        let targets = vec![pt(&[0.2, 0.2]), pt(&[0.8, 0.8])];
        let d = build_pe_pcd(&targets, &tess, 50.0);
        assert!(d.arcs[0].is_empty() && d.arcs[1].is_empty());
        // Targets in two different outer simplices: likewise no arcs.
        let targets = vec![pt(&[-1.0, 0.5]), pt(&[2.0, 0.5])];
        let d = build_pe_pcd(&targets, &tess, 50.0);
        assert!(d.arcs[0].is_empty() && d.arcs[1].is_empty());
    }

    #[test]
    fn pe_pcd_mutual_arcs_when_regions_fill_the_cell() {
        let tess = triangle_tess();
        let targets = vec![pt(&[0.1, 0.1]), pt(&[0.15, 0.12])];
        let d = build_pe_pcd(&targets, &tess, 50.0);
        assert!(d.has_arc(0, 1) && d.has_arc(1, 0));
    }
}
