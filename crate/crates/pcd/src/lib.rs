//! Class covers and classifiers built on proximity catch digraphs (PCDs).
//!
//! A PCD is a digraph on the points of one class (the *target* class) in
//! which an arc `(u, v)` exists whenever `v` falls inside a proximity
//! region attached to `u`. The regions here are carved out of the Delaunay
//! tessellation of the *non-target* class: proportional-edge sub-simplices
//! inside the convex hull, truncated prisms in the unbounded outer
//! simplices beyond each hull facet, and balls for the spherical (CCCD)
//! family. Minimum dominating sets of these digraphs are the prototype
//! sets; unions of their regions are class covers; and the covers drive
//! hybrid and cover classifiers that are robust to class imbalance.
//!
//! Module map:
//!
//! * [`geometry`] — points, simplices, d-dimensional Delaunay
//!   tessellations, outer simplices, barycentric / cone coordinates,
//!   vertex regions and convex distances.
//! * [`proximity`] — proportional-edge and spherical proximity regions
//!   and digraph construction.
//! * [`domination`] — greedy, exact and brute-force minimum dominating
//!   sets plus domination statistics.
//! * [`classify`] — class covers, cover dissimilarity, pre / hybrid /
//!   cover classifiers and the kNN / CCCD baselines.
//! * [`eval`] — metrics, 5x2 cross-validation tests, Monte Carlo
//!   simulation campaigns, parameter tuning and PCA.
//! * [`data`] — labeled tables and CSV ingestion.
//! * [`cli`] — the `pcd` command-line driver.
//!
//! # Examples
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --example tessellation          cells, outer simplices, locate
//! cargo run --example proximity_regions    regions and their digraphs
//! cargo run --example dominating_sets      greedy vs exact vs brute force
//! cargo run --example class_covers         covers + JSON/SVG export
//! cargo run --example classifier_tour      pre/hybrid/cover classifiers
//! cargo run --example imbalanced_simulation  a small Monte Carlo campaign
//! cargo run --example cross_validation     5x2 CV F-test on iris
//! cargo run --example pca_pipeline         PCA + covers on iris
//! ```
//!
//! The `tests/acceptance.rs` suite checks the headline guarantees end to
//! end and prints one PASS line per criterion.

pub mod cli;
pub mod classify;
pub mod data;
pub mod domination;
pub mod error;
pub mod eval;
pub mod export;
pub mod geometry;
pub mod proximity;

pub use error::Error;

/// Default absolute tolerance on barycentric / cone coordinates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest supported dimension. Cell counts grow like `n^(d/2)`, so the
/// tessellation-based machinery is only practical in low dimensions.
pub const MAX_DIM: usize = 8;

/// Derives a stream seed from a master seed and an index. Used to give
/// every Monte Carlo replicate (and the tessellation insertion shuffle)
/// its own deterministic RNG regardless of worker count.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    // splitmix64 applied twice with distinct offsets mixes the pair well.
    let mut z = master
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
