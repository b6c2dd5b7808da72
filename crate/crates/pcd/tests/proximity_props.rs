//! Property tests for the proximity layer: region monotonicity, nesting,
//! purity and digraph/region agreement under fuzzed geometry.

use proptest::prelude::*;

use pcd::geometry::{delaunay_tessellate, BaryCoords, Point, TessellationParams};
use pcd::proximity::{
    build_pe_pcd, cccd_radius, pe_contains_inner, pe_region_inner, pe_region_outer,
};

fn unit_triangle_tess() -> pcd::geometry::Tessellation {
    delaunay_tessellate(
        &[
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![0.0, 1.0]),
        ],
        &TessellationParams::default(),
    )
    .unwrap()
}

fn bary_strategy() -> impl Strategy<Value = BaryCoords> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(a, b, c)| {
        let s = a + b + c;
        BaryCoords {
            w: vec![a / s, b / s, c / s],
        }
    })
}

proptest! {
    /// Growing r never shrinks an inner region.
    #[test]
    fn inner_regions_grow_with_r(
        w in bary_strategy(),
        z in bary_strategy(),
        r1 in 1.0f64..4.0,
        extra in 0.0f64..4.0,
    ) {
        let tess = unit_triangle_tess();
        let r2 = r1 + extra;
        let small = pe_region_inner(&tess, 0, &w, r1).unwrap();
        let big = pe_region_inner(&tess, 0, &w, r2).unwrap();
        prop_assert!(big.tau <= small.tau + 1e-12);
        if pe_contains_inner(&small, &z, 1e-9) {
            prop_assert!(pe_contains_inner(&big, &z, 1e-9));
        }
    }

    /// Anchors nearer the opposite face swallow the regions of anchors
    /// in the same vertex region that sit farther in. The second anchor
    /// is built by sliding the first toward its region vertex, which
    /// stays in the region and raises the anchor coordinate.
    #[test]
    fn inner_regions_nest_with_the_anchor_coordinate(
        w1 in bary_strategy(),
        z in bary_strategy(),
        t in 0.01f64..0.99,
        r in 1.0f64..4.0,
    ) {
        let tess = unit_triangle_tess();
        let a = pe_region_inner(&tess, 0, &w1, r).unwrap();
        let i = a.vertex;
        let w2 = BaryCoords {
            w: w1.w.iter().enumerate()
                .map(|(j, &wj)| if j == i { wj + t * (1.0 - wj) } else { wj * (1.0 - t) })
                .collect(),
        };
        let b = pe_region_inner(&tess, 0, &w2, r).unwrap();
        prop_assert_eq!(b.vertex, i);
        // Region of the smaller coordinate contains the other's region.
        prop_assert!(a.tau <= b.tau + 1e-12);
        if pe_contains_inner(&b, &z, 1e-9) {
            prop_assert!(pe_contains_inner(&a, &z, 1e-9));
        }
    }

    /// The anchor lies strictly inside its own region for r > 1, and on
    /// the boundary at r = 1.
    #[test]
    fn anchor_interiority(w in bary_strategy(), r in 1.000001f64..5.0) {
        let tess = unit_triangle_tess();
        let region = pe_region_inner(&tess, 0, &w, r).unwrap();
        prop_assert!(w.w[region.vertex] > region.tau + 1e-12);
        let slice = pe_region_inner(&tess, 0, &w, 1.0).unwrap();
        prop_assert!((w.w[slice.vertex] - slice.tau).abs() < 1e-12);
    }

    /// Spherical radii never capture the nearest non-target point.
    #[test]
    fn cccd_radius_is_pure(
        xs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..12),
        ys in prop::collection::vec((1.5f64..3.0, 0.0f64..1.0), 1..6),
        theta in 0.0f64..=1.0,
    ) {
        let targets: Vec<Point> = xs.iter().map(|&(a, b)| Point::new(vec![a, b])).collect();
        let nontargets: Vec<Point> = ys.iter().map(|&(a, b)| Point::new(vec![a, b])).collect();
        for x in &targets {
            let eps = cccd_radius(x, &targets, &nontargets, theta).unwrap();
            for y in &nontargets {
                prop_assert!(x.dist(y) >= eps - 1e-12);
            }
        }
    }
}

#[test]
fn digraph_arcs_match_region_membership() {
    // Fuzzed agreement between the digraph construction and a direct
    // membership evaluation.
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..30 {
        let nontargets: Vec<Point> = (0..7)
            .map(|_| Point::new(vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]))
            .collect();
        let Ok(tess) = delaunay_tessellate(&nontargets, &TessellationParams::default()) else {
            continue;
        };
        let targets: Vec<Point> = (0..15)
            .map(|_| Point::new(vec![rng.gen_range(-0.3..1.3), rng.gen_range(-0.3..1.3)]))
            .collect();
        let r = rng.gen_range(1.0..4.0);
        let digraph = build_pe_pcd(&targets, &tess, r);
        let sites = pcd::proximity::locate_targets(&targets, &tess);
        for (u, su) in sites.iter().enumerate() {
            for (v, sv) in sites.iter().enumerate() {
                if u == v {
                    continue;
                }
                let expected = match (su, sv) {
                    (
                        pcd::proximity::TargetSite::Cell { cell: cu, w: wu },
                        pcd::proximity::TargetSite::Cell { cell: cv, w: wv },
                    ) if cu == cv => {
                        let region = pe_region_inner(&tess, *cu, wu, r).unwrap();
                        pe_contains_inner(&region, wv, tess.tol)
                    }
                    (
                        pcd::proximity::TargetSite::Outer { outer: ou, c: cu },
                        pcd::proximity::TargetSite::Outer { outer: ov, c: cv },
                    ) if ou == ov => {
                        let region = pe_region_outer(&tess, *ou, cu, r).unwrap();
                        pcd::proximity::pe_contains_outer(&region, cv, tess.tol)
                    }
                    _ => false,
                };
                assert_eq!(digraph.has_arc(u, v), expected, "arc ({u},{v})");
            }
        }
    }
}
