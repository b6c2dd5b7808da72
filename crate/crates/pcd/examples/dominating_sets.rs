//! Minimum dominating sets: greedy vs exact vs brute force.
//!
//! Builds a random two-class instance, computes the standard (exact) and
//! composite prototype sets, the greedy spherical set, and checks the
//! exact cardinality against subset enumeration.
//!
//! ```bash
//! cargo run --example dominating_sets
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcd::domination::{brute_force_mds, composite_mds, greedy_mds, standard_mds};
use pcd::geometry::{delaunay_tessellate, Point, TessellationParams};
use pcd::proximity::{build_cccd, build_pe_pcd};

fn main() -> Result<(), pcd::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let nontargets: Vec<Point> = (0..8)
        .map(|_| Point::new(vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]))
        .collect();
    let targets: Vec<Point> = (0..18)
        .map(|_| Point::new(vec![rng.gen_range(-0.3..1.3), rng.gen_range(-0.3..1.3)]))
        .collect();
    let tess = delaunay_tessellate(&nontargets, &TessellationParams::default())?;
    println!(
        "tessellation: {} cells, {} outer simplices; {} targets",
        tess.cell_count(),
        tess.outer_count(),
        targets.len()
    );

    for r in [1.5, 2.0, 3.0] {
        let set = standard_mds(&targets, &tess, r);
        let digraph = build_pe_pcd(&targets, &tess, r);
        let oracle = brute_force_mds(&digraph)?;
        println!(
            "r = {r}: standard MDS {} prototypes (oracle {}), reduction {:.1}%",
            set.len(),
            oracle.len(),
            100.0 * set.reduction(targets.len()).unwrap()
        );
        for &(cell, gamma) in &set.per_cell_gamma {
            println!("    cell {cell}: gamma = {gamma}");
        }
        for &(outer, gamma) in &set.per_outer_gamma {
            println!("    outer {outer}: gamma = {gamma}");
        }
    }

    let composite = composite_mds(&targets, &nontargets, &tess, 2.0, 1.0)?;
    println!(
        "composite MDS at r = 2: {} prototypes ({} ball-covered outside the hull)",
        composite.len(),
        composite
            .prototypes
            .iter()
            .filter(|p| matches!(p.provenance, pcd::domination::Provenance::OuterGreedy))
            .count()
    );

    let (cccd, _) = build_cccd(&targets, &nontargets, 1.0)?;
    let greedy = greedy_mds(&cccd);
    println!("greedy spherical MDS: {} prototypes {greedy:?}", greedy.len());
    Ok(())
}
