//! The classifier zoo on one dataset.
//!
//! Trains standard covers on overlapping classes and routes test points
//! through the pre-classifier, both hybrids, the cover classifier and
//! the kNN / spherical baselines, reporting balanced accuracy for each.
//!
//! ```bash
//! cargo run --example classifier_tour
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pcd::classify::{knn_classify, train, Alternative, DecisionPath, TrainParams};
use pcd::data::{sample_overlap_pair, Dataset};
use pcd::eval::{evaluate, overlap_shift};

fn main() -> Result<(), pcd::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let nu = overlap_shift(0.5, 2);
    let (x0, x1) = sample_overlap_pair(&mut rng, 2, nu, 200, 60);
    let ds = Dataset::from_two_classes(x0, x1);
    let model = train(
        &ds,
        &TrainParams {
            r: 3.0,
            k: 1,
            ..TrainParams::default()
        },
    )?;
    println!(
        "trained standard covers: {} + {} prototypes for {} + {} points",
        model.covers[0].len(),
        model.covers[1].len(),
        ds.class_count(0),
        ds.class_count(1)
    );

    let (t0, t1) = sample_overlap_pair(&mut rng, 2, nu, 150, 150);
    let mut test = t0;
    test.extend(t1);
    let truth: Vec<usize> = (0..300).map(|i| usize::from(i >= 150)).collect();

    // How often the pre-classifier decides on its own.
    let mut decided = 0;
    for z in &test {
        if model.pre_classify(z).label.is_some() {
            decided += 1;
        }
    }
    println!(
        "pre-classifier decides {decided}/{} points; the rest go to the alternative",
        test.len()
    );

    let runs: Vec<(&str, Vec<usize>)> = vec![
        (
            "cover (standard)",
            test.iter()
                .map(|z| model.cover_classify(z).label.unwrap())
                .collect(),
        ),
        (
            "pe-knn hybrid",
            test.iter()
                .map(|z| model.hybrid_classify(z, Alternative::Knn).label.unwrap())
                .collect(),
        ),
        (
            "pe-cccd hybrid",
            test.iter()
                .map(|z| model.hybrid_classify(z, Alternative::Cccd).label.unwrap())
                .collect(),
        ),
        (
            "knn baseline",
            test.iter()
                .map(|z| knn_classify(&model.train, z, 1))
                .collect(),
        ),
        (
            "cccd baseline",
            test.iter()
                .map(|z| model.cccd_classify(z).label.unwrap())
                .collect(),
        ),
    ];
    println!("\n{:<18} {:>8} {:>8} {:>8}", "classifier", "auc", "ccr0", "ccr1");
    for (name, preds) in &runs {
        let m = evaluate(preds, &truth, 2).unwrap();
        println!(
            "{name:<18} {:>8.3} {:>8.3} {:>8.3}",
            m.auc, m.ccr_per_class[0], m.ccr_per_class[1]
        );
    }

    // One point in detail.
    let z = &test[0];
    let p = model.hybrid_classify(z, Alternative::Knn);
    println!(
        "\nquery {:?}: label {:?} via {:?}, per-class distances {:?}",
        z.coords,
        p.label,
        match p.path {
            DecisionPath::Pre => "the pre-classifier",
            DecisionPath::Alternative => "the alternative",
            DecisionPath::Cover => "the cover rule",
        },
        p.dissimilarities
            .iter()
            .map(|v| (v * 1000.0).round() / 1000.0)
            .collect::<Vec<_>>()
    );
    Ok(())
}
