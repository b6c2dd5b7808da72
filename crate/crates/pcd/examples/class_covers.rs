//! Class covers on the reference two-box configuration.
//!
//! 100 points uniform on [0,1]^2 against 20 on [0.5,1.5]^2, covered
//! three ways (standard, composite, spherical). Writes the standard
//! cover's geometry to `covers.json` and an SVG rendering to
//! `covers.svg` in the working directory.
//!
//! ```bash
//! cargo run --example class_covers
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pcd::classify::{check_coverage, check_purity, train, CoverKind, TrainParams};
use pcd::data::{sample_box_n, Dataset};
use pcd::export::{covers_svg, export_covers};

fn main() -> Result<(), pcd::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let class0 = sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], 100);
    let class1 = sample_box_n(&mut rng, &[0.5, 0.5], &[1.5, 1.5], 20);
    let ds = Dataset::from_two_classes(class0, class1);

    let mut standard_model = None;
    for kind in [
        CoverKind::Standard,
        CoverKind::Composite,
        CoverKind::Spherical,
    ] {
        let params = TrainParams {
            r: 2.0,
            theta: 1.0,
            cover: kind,
            ..TrainParams::default()
        };
        let model = train(&ds, &params)?;
        println!("-- {kind} covers (r = 2, theta = 1) --");
        for cover in &model.covers {
            let own = ds.class_points(cover.class);
            let other = ds.complement_points(cover.class);
            println!(
                "class {}: {} prototypes covering {} points (coverage {}, purity {})",
                cover.class,
                cover.len(),
                own.len(),
                check_coverage(cover, &own, 1e-7),
                check_purity(cover, &other, 1e-7),
            );
        }
        if kind == CoverKind::Standard {
            standard_model = Some(model);
        }
    }

    let model = standard_model.unwrap();
    let covers = export_covers(&model);
    std::fs::write("covers.json", serde_json::to_string_pretty(&covers)?)?;
    std::fs::write("covers.svg", covers_svg(&model, 640)?)?;
    println!("\nwrote covers.json and covers.svg");
    Ok(())
}
