//! 5x2 cross-validation comparison on the iris two-feature projection.
//!
//! Compares the standard-cover classifier against kNN with the paired
//! t-test and the combined F-test, then repeats the comparison against
//! itself to show the degenerate-variance control.
//!
//! ```bash
//! cargo run --example cross_validation
//! ```

use pcd::data::{load_csv, Dataset, LabelColumn};
use pcd::eval::{five_by_two_cv, ClassifierKind, ClassifierSpec};
use pcd::geometry::Point;

fn main() -> Result<(), pcd::Error> {
    let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv"));
    let full = load_csv(path, &LabelColumn::Name("species".into()), true)?;
    // Sepal length and petal length only.
    let points: Vec<Point> = full
        .points
        .iter()
        .map(|p| Point::new(vec![p.coords[0], p.coords[2]]))
        .collect();
    let ds = Dataset::new(points, full.labels.clone(), full.class_names.clone());

    let cover = ClassifierSpec {
        r: 2.8,
        ..ClassifierSpec::new(ClassifierKind::StandardCover)
    };
    let knn = ClassifierSpec {
        k: 10,
        ..ClassifierSpec::new(ClassifierKind::Knn)
    };

    let result = five_by_two_cv(&ds, &cover, &knn, 2024)?;
    println!("standard-cover (r=2.8) vs knn (k=10) on iris13:");
    for (i, (a, b)) in result.auc_a.iter().zip(&result.auc_b).enumerate() {
        println!(
            "  rep {}: cover {:.3}/{:.3}  knn {:.3}/{:.3}",
            i + 1,
            a[0],
            a[1],
            b[0],
            b[1]
        );
    }
    println!(
        "  t = {:.3} (p = {:.3}), F = {:.3} (p = {:.3})",
        result.t_stat, result.t_p, result.f_stat, result.f_p
    );
    if result.f_p > 0.05 {
        println!("  no significant difference at the 5% level");
    } else {
        println!("  significant difference at the 5% level");
    }

    let self_test = five_by_two_cv(&ds, &knn, &knn, 2024)?;
    println!(
        "\nknn vs itself: F p-value = {} (identical folds never reject)",
        self_test.f_p
    );
    Ok(())
}
