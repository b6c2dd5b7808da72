//! Dimension reduction ahead of cover training.
//!
//! Prototype counts grow quickly with dimension, so high-dimensional
//! data is usually projected first. This example fits a PCA on iris,
//! keeps two components, trains standard covers on the reduced data and
//! evaluates on held-out rows (PCA fitted on the training split only).
//!
//! ```bash
//! cargo run --example pca_pipeline
//! ```

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pcd::classify::{train, TrainParams};
use pcd::data::{load_csv, Dataset, LabelColumn};
use pcd::eval::{evaluate, Pca};

fn main() -> Result<(), pcd::Error> {
    let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv"));
    let ds = load_csv(path, &LabelColumn::Name("species".into()), true)?;
    println!("iris: {} rows, {} features, {} classes", ds.len(), ds.dim(), ds.n_classes());

    // Stratified 2:1 split.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for class in 0..ds.n_classes() {
        let mut rows: Vec<usize> = (0..ds.len()).filter(|&i| ds.labels[i] == class).collect();
        rows.shuffle(&mut rng);
        let cut = rows.len() * 2 / 3;
        train_rows.extend_from_slice(&rows[..cut]);
        test_rows.extend_from_slice(&rows[cut..]);
    }
    let train_ds = ds.subset(&train_rows);
    let test_ds = ds.subset(&test_rows);

    // PCA fitted on the training split only.
    let pca = Pca::fit(&train_ds.points, 2)?;
    let ratios = pca.explained_variance_ratio();
    println!(
        "first two components explain {:.1}% of the training variance",
        100.0 * ratios.iter().sum::<f64>()
    );
    let reduced_train = Dataset::new(
        pca.transform_all(&train_ds.points),
        train_ds.labels.clone(),
        train_ds.class_names.clone(),
    );

    let model = train(
        &reduced_train,
        &TrainParams {
            r: 4.0,
            ..TrainParams::default()
        },
    )?;
    let total: usize = model.covers.iter().map(|c| c.len()).sum();
    println!(
        "standard covers on the 2-d projection: {total} prototypes for {} points",
        reduced_train.len()
    );

    let preds: Vec<usize> = test_ds
        .points
        .iter()
        .map(|z| model.cover_classify(&pca.transform(z)).label.unwrap())
        .collect();
    let m = evaluate(&preds, &test_ds.labels, ds.n_classes()).unwrap();
    println!("held-out balanced accuracy: {:.3}", m.auc);
    for (class, rate) in m.ccr_per_class.iter().enumerate() {
        println!("  {}: {:.3}", ds.class_names[class], rate);
    }
    Ok(())
}
