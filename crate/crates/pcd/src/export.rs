//! Export of tessellations and covers as plain JSON geometry, plus a
//! small SVG writer for two-dimensional covers.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classify::{Region, RegionSpec, TrainedModel};
use crate::error::Result;
use crate::geometry::{Point, Tessellation};

/// Debug view of a tessellation:
/// `{points, cells: [[ids]], outer: [{facet_ids, ray_dirs}], hull_center}`.
pub fn tessellation_json(tess: &Tessellation) -> serde_json::Value {
    json!({
        "points": tess.points.iter().map(|p| &p.coords).collect::<Vec<_>>(),
        "cells": tess.cells.iter().map(|c| &c.vertex_ids).collect::<Vec<_>>(),
        "outer": tess.outer.iter().map(|o| json!({
            "facet_ids": o.facet_vertex_ids,
            "ray_dirs": o.ray_directions.iter().map(|r| &r.coords).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "hull_center": tess.hull_center.coords,
    })
}

/// One exported region: explicit simplices for the inner
/// proportional-edge regions, polytope vertices for the outer ones,
/// center plus radius for balls.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExportRegion {
    Simplex { vertices: Vec<Vec<f64>> },
    Polytope { vertices: Vec<Vec<f64>>, center: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExportCover {
    pub class: usize,
    pub class_name: String,
    pub kind: String,
    pub prototypes: Vec<Vec<f64>>,
    pub regions: Vec<ExportRegion>,
}

/// Extracts plotting geometry from a trained model.
pub fn export_covers(model: &TrainedModel) -> Vec<ExportCover> {
    model
        .covers
        .iter()
        .map(|cover| ExportCover {
            class: cover.class,
            class_name: model.class_names[cover.class].clone(),
            kind: cover.kind.to_string(),
            prototypes: cover
                .prototypes
                .iter()
                .map(|p| p.point.coords.clone())
                .collect(),
            regions: cover
                .prototypes
                .iter()
                .map(|p| export_region(&p.region))
                .collect(),
        })
        .collect()
}

fn export_region(region: &Region) -> ExportRegion {
    match region.clone().into() {
        RegionSpec::Simplex { vertices } => ExportRegion::Simplex {
            vertices: vertices.into_iter().map(|v| v.coords).collect(),
        },
        RegionSpec::Prism { polytope } => ExportRegion::Polytope {
            vertices: polytope_vertices_2d(&polytope),
            center: polytope.center.coords.clone(),
        },
        RegionSpec::Ball { region } => ExportRegion::Ball {
            center: region.center.coords,
            radius: region.radius,
        },
    }
}

/// Vertices of a 2-dimensional polytope by half-space intersection:
/// every pair of constraint lines is intersected and filtered by
/// feasibility, then the survivors are ordered around the centroid.
/// Higher-dimensional polytopes export their center only.
fn polytope_vertices_2d(p: &crate::geometry::Polytope) -> Vec<Vec<f64>> {
    if p.center.dim() != 2 {
        return Vec::new();
    }
    let hs = &p.halfspaces;
    let mut vertices: Vec<(f64, f64)> = Vec::new();
    for i in 0..hs.len() {
        for j in (i + 1)..hs.len() {
            let (a1, b1) = (&hs[i].normal, hs[i].offset);
            let (a2, b2) = (&hs[j].normal, hs[j].offset);
            let det = a1[0] * a2[1] - a1[1] * a2[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (b1 * a2[1] - b2 * a1[1]) / det;
            let y = (a1[0] * b2 - a2[0] * b1) / det;
            let pt = Point::new(vec![x, y]);
            if p.contains(&pt, 1e-7) {
                vertices.push((x, y));
            }
        }
    }
    vertices.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vertices.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    // Order around the centroid for a clean polygon.
    let cx = vertices.iter().map(|v| v.0).sum::<f64>() / vertices.len().max(1) as f64;
    let cy = vertices.iter().map(|v| v.1).sum::<f64>() / vertices.len().max(1) as f64;
    vertices.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    vertices.into_iter().map(|(x, y)| vec![x, y]).collect()
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders two-dimensional covers to SVG: regions as translucent shapes,
/// training points as dots, prototypes ringed.
pub fn covers_svg(model: &TrainedModel, width: u32) -> Result<String> {
    let covers = export_covers(model);
    let points = &model.train.points;
    // Bounding box over data and region geometry.
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |coords: &[f64]| {
        for k in 0..2 {
            lo[k] = lo[k].min(coords[k]);
            hi[k] = hi[k].max(coords[k]);
        }
    };
    for p in points {
        grow(&p.coords);
    }
    for cover in &covers {
        for region in &cover.regions {
            match region {
                ExportRegion::Simplex { vertices } | ExportRegion::Polytope { vertices, .. } => {
                    for v in vertices {
                        grow(v);
                    }
                }
                ExportRegion::Ball { center, radius } => {
                    grow(&[center[0] - radius, center[1] - radius]);
                    grow(&[center[0] + radius, center[1] + radius]);
                }
            }
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let margin = 0.05 * span;
    let scale = width as f64 / (span + 2.0 * margin);
    let height = width;
    let tx = |x: f64| (x - lo[0] + margin) * scale;
    let ty = |y: f64| height as f64 - (y - lo[1] + margin) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for cover in &covers {
        let color = PALETTE[cover.class % PALETTE.len()];
        for region in &cover.regions {
            match region {
                ExportRegion::Simplex { vertices } | ExportRegion::Polytope { vertices, .. } => {
                    if vertices.len() < 3 {
                        continue;
                    }
                    let pts: Vec<String> = vertices
                        .iter()
                        .map(|v| format!("{:.2},{:.2}", tx(v[0]), ty(v[1])))
                        .collect();
                    svg.push_str(&format!(
                        "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"1\"/>\n",
                        pts.join(" ")
                    ));
                }
                ExportRegion::Ball { center, radius } => {
                    svg.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"1\"/>\n",
                        tx(center[0]),
                        ty(center[1]),
                        radius * scale
                    ));
                }
            }
        }
    }
    for (p, &label) in points.iter().zip(&model.train.labels) {
        let color = PALETTE[label % PALETTE.len()];
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
            tx(p.coords[0]),
            ty(p.coords[1])
        ));
    }
    for cover in &covers {
        let color = PALETTE[cover.class % PALETTE.len()];
        for proto in &cover.prototypes {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                tx(proto[0]),
                ty(proto[1])
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{train, TrainParams};
    use crate::data::Dataset;
    use crate::geometry::{delaunay_tessellate, TessellationParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tessellation_json_shape() {
        let pts: Vec<Point> = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
            .iter()
            .map(|c| Point::new(c.to_vec()))
            .collect();
        let tess = delaunay_tessellate(&pts, &TessellationParams::default()).unwrap();
        let v = tessellation_json(&tess);
        assert_eq!(v["cells"].as_array().unwrap().len(), 1);
        assert_eq!(v["outer"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn exported_cover_contains_own_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c0 = crate::data::sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], 40);
        let c1 = crate::data::sample_box_n(&mut rng, &[0.5, 0.5], &[1.5, 1.5], 20);
        let ds = Dataset::from_two_classes(c0, c1);
        let model = train(&ds, &TrainParams::default()).unwrap();
        let covers = export_covers(&model);
        assert_eq!(covers.len(), 2);
        // Exported prototype counts match the model.
        for (cover, exported) in model.covers.iter().zip(&covers) {
            assert_eq!(cover.len(), exported.prototypes.len());
            assert_eq!(cover.len(), exported.regions.len());
        }
        let svg = covers_svg(&model, 480).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polygon"));
    }
}

#[cfg(test)]
mod export_coverage_tests {
    use super::*;
    use crate::classify::{train, TrainParams};
    use crate::data::Dataset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Point-in-region test on the EXPORTED geometry only: barycentric
    /// sign test for simplices, convex-polygon half-plane walk for
    /// polytopes, radius comparison for balls.
    fn exported_region_contains(region: &ExportRegion, p: &[f64], tol: f64) -> bool {
        match region {
            ExportRegion::Ball { center, radius } => {
                let d2: f64 = center
                    .iter()
                    .zip(p)
                    .map(|(c, x)| (c - x) * (c - x))
                    .sum();
                d2.sqrt() <= radius + tol
            }
            ExportRegion::Simplex { vertices } => {
                let pts: Vec<Point> = vertices.iter().map(|v| Point::new(v.clone())).collect();
                match crate::geometry::SimplexCoords::new(pts, 1e-14) {
                    Ok(s) => s.barycentric(&Point::new(p.to_vec())).inside(1e-7),
                    Err(_) => false,
                }
            }
            ExportRegion::Polytope { vertices, .. } => {
                // Convex polygon ordered around its centroid: p must be
                // on the inner side of every edge.
                if vertices.len() < 3 {
                    return false;
                }
                let n = vertices.len();
                let cx: f64 = vertices.iter().map(|v| v[0]).sum::<f64>() / n as f64;
                let cy: f64 = vertices.iter().map(|v| v[1]).sum::<f64>() / n as f64;
                for i in 0..n {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    let cross = |px: f64, py: f64| {
                        (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])
                    };
                    let side_c = cross(cx, cy);
                    if cross(p[0], p[1]) * side_c < -tol {
                        return false;
                    }
                }
                true
            }
        }
    }

    #[test]
    fn two_d_prisms_export_four_vertices() {
        // An outer region in the plane is a quadrilateral: the two facet
        // endpoints plus their images on the cap.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let c0 = crate::data::sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], 30);
        let c1 = crate::data::sample_box_n(&mut rng, &[2.0, 0.0], &[3.0, 1.0], 30);
        let ds = Dataset::from_two_classes(c0, c1);
        let model = train(&ds, &TrainParams::default()).unwrap();
        let covers = export_covers(&model);
        let mut prisms = 0;
        for cover in &covers {
            for region in &cover.regions {
                if let ExportRegion::Polytope { vertices, .. } = region {
                    assert_eq!(vertices.len(), 4, "prism with {} vertices", vertices.len());
                    prisms += 1;
                }
            }
        }
        assert!(prisms > 0, "separated classes must produce outer regions");
    }

    #[test]
    fn exported_geometry_covers_the_training_points() {
        // The reference 100/20 two-box configuration: every class-0
        // training point must fall inside some exported class-0 region,
        // judged purely from the exported geometry.
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        let c0 = crate::data::sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], 100);
        let c1 = crate::data::sample_box_n(&mut rng, &[0.5, 0.5], &[1.5, 1.5], 20);
        let ds = Dataset::from_two_classes(c0, c1);
        let model = train(
            &ds,
            &TrainParams {
                r: 2.0,
                ..TrainParams::default()
            },
        )
        .unwrap();
        let covers = export_covers(&model);
        for class in 0..2 {
            let own = ds.class_points(class);
            for (i, p) in own.iter().enumerate() {
                let inside = covers[class]
                    .regions
                    .iter()
                    .any(|r| exported_region_contains(r, &p.coords, 1e-6));
                assert!(inside, "class {class} point {i} not in exported geometry");
            }
        }
    }
}
