//! Delaunay tessellation with outer simplices.
//!
//! Builds the tessellation of a small 2-d point set, walks its cells and
//! outer simplices, locates a few query points and prints the JSON debug
//! export.
//!
//! ```bash
//! cargo run --example tessellation
//! ```

use pcd::export::tessellation_json;
use pcd::geometry::{delaunay_tessellate, Location, Point, TessellationParams};

fn main() -> Result<(), pcd::Error> {
    // A hexagon with two interior points.
    let mut points = Vec::new();
    for i in 0..6 {
        let a = std::f64::consts::TAU * i as f64 / 6.0;
        points.push(Point::new(vec![a.cos(), a.sin()]));
    }
    points.push(Point::new(vec![0.2, 0.1]));
    points.push(Point::new(vec![-0.3, 0.2]));

    let tess = delaunay_tessellate(&points, &TessellationParams::default())?;
    println!(
        "tessellated {} points: {} cells, {} outer simplices",
        tess.points.len(),
        tess.cell_count(),
        tess.outer_count()
    );
    println!("hull center: {:?}", tess.hull_center.coords);
    for (k, cell) in tess.cells.iter().enumerate() {
        println!(
            "  cell {k}: vertices {:?}, circumradius {:.3}",
            cell.vertex_ids, cell.circumradius
        );
    }

    for query in [
        Point::new(vec![0.1, 0.05]),
        Point::new(vec![2.0, 0.0]),
        Point::new(vec![-1.5, -1.5]),
    ] {
        let loc = tess.locate(&query);
        let desc = match &loc {
            Location::InsideCell(k, w) => {
                format!("inside cell {k} with barycentric {:?}", rounded(&w.w))
            }
            Location::InOuter(l, c) => {
                format!("in outer simplex {l} at level {:.3}", c.sum())
            }
            Location::OnHullBoundary(k, _) => format!("on the hull boundary of cell {k}"),
            Location::Degenerate => "unlocatable".into(),
        };
        println!("locate {:?}: {desc}", query.coords);
    }

    println!("\nJSON export:\n{}", tessellation_json(&tess));
    Ok(())
}

fn rounded(w: &[f64]) -> Vec<f64> {
    w.iter().map(|v| (v * 1000.0).round() / 1000.0).collect()
}
