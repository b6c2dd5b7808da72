//! Proximity regions and their catch digraphs.
//!
//! Shows the three region families on one configuration: inner
//! proportional-edge regions (barycentric threshold), outer
//! proportional-edge regions (cone level cap) and spherical regions
//! (class-pure balls), then the digraph each induces.
//!
//! ```bash
//! cargo run --example proximity_regions
//! ```

use pcd::geometry::{delaunay_tessellate, Point, TessellationParams};
use pcd::proximity::{
    build_cccd, build_pe_pcd, cccd_radius, locate_targets, pe_region_inner, pe_region_outer,
    TargetSite,
};

fn pt(x: f64, y: f64) -> Point {
    Point::new(vec![x, y])
}

fn main() -> Result<(), pcd::Error> {
    let nontargets = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0)];
    let tess = delaunay_tessellate(&nontargets, &TessellationParams::default())?;
    let targets = vec![
        pt(0.25, 0.2),  // inside, lower-left cell
        pt(0.3, 0.35),  // inside, same cell
        pt(0.7, 0.85),  // inside, upper-right cell
        pt(-0.6, 0.5),  // beyond the left hull edge
        pt(-1.2, 0.45), // farther beyond the same edge
    ];
    let r = 2.0;

    println!("-- proportional-edge regions (r = {r}) --");
    let sites = locate_targets(&targets, &tess);
    for (i, site) in sites.iter().enumerate() {
        match site {
            TargetSite::Cell { cell, w } => {
                let region = pe_region_inner(&tess, *cell, w, r)?;
                println!(
                    "target {i} in cell {cell}: vertex region {}, threshold tau = {:.3}",
                    region.vertex, region.tau
                );
            }
            TargetSite::Outer { outer, c } => {
                let region = pe_region_outer(&tess, *outer, c, r)?;
                println!(
                    "target {i} in outer simplex {outer}: level {:.3}, cap {:.3}",
                    region.anchor_level, region.level_cap
                );
            }
            TargetSite::Unlocated => println!("target {i} unlocated"),
        }
    }

    let digraph = build_pe_pcd(&targets, &tess, r);
    println!("\nPE-PCD arcs (u -> out-neighbors):");
    for (u, arcs) in digraph.arcs.iter().enumerate() {
        println!("  {u} -> {arcs:?}");
    }

    println!("\n-- spherical regions (theta = 0.5) --");
    for (i, x) in targets.iter().enumerate() {
        let eps = cccd_radius(x, &targets, &nontargets, 0.5)?;
        println!("target {i}: radius {eps:.3}");
    }
    let (cccd, _) = build_cccd(&targets, &nontargets, 0.5)?;
    println!("CCCD arcs:");
    for (u, arcs) in cccd.arcs.iter().enumerate() {
        println!("  {u} -> {arcs:?}");
    }
    Ok(())
}
