//! End-to-end cover and classifier behavior: training-set coverage and
//! purity across cover kinds, hybrid decision paths, the reference
//! two-box configuration, and model serialization stability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcd::classify::{check_coverage, check_purity, train, Alternative, CoverKind, TrainParams};
use pcd::data::{sample_box_n, Dataset};
use pcd::geometry::Point;

fn two_box_dataset(seed: u64, n0: usize, n1: usize) -> Dataset {
    // The reference configuration: uniforms on [0,1]^2 and [0.5,1.5]^2.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c0 = sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], n0);
    let c1 = sample_box_n(&mut rng, &[0.5, 0.5], &[1.5, 1.5], n1);
    Dataset::from_two_classes(c0, c1)
}

#[test]
fn reference_two_box_cover_holds_all_points() {
    // 100 + 20 training points, r = 2 standard covers: every training
    // point of each class must sit inside its cover and outside the
    // other class's individual regions.
    let ds = two_box_dataset(606, 100, 20);
    let params = TrainParams {
        r: 2.0,
        ..TrainParams::default()
    };
    let model = train(&ds, &params).unwrap();
    for class in 0..2 {
        let own = ds.class_points(class);
        let other = ds.complement_points(class);
        assert!(check_coverage(&model.covers[class], &own, 1e-7));
        assert!(check_purity(&model.covers[class], &other, 1e-7));
    }
    // The covers reduce the training set.
    let total: usize = model.covers.iter().map(|c| c.len()).sum();
    assert!(total < 120, "no reduction at all: {total} prototypes");
}

#[test]
fn purity_and_coverage_across_kinds_and_seeds() {
    for seed in [1u64, 2, 3, 4, 5] {
        let ds = two_box_dataset(seed, 50, 25);
        for kind in [
            CoverKind::Standard,
            CoverKind::Composite,
            CoverKind::Spherical,
        ] {
            for r in [1.5, 3.0] {
                let params = TrainParams {
                    r,
                    cover: kind,
                    ..TrainParams::default()
                };
                let model = train(&ds, &params).unwrap();
                for class in 0..2 {
                    let own = ds.class_points(class);
                    let other = ds.complement_points(class);
                    assert!(
                        check_coverage(&model.covers[class], &own, 1e-7),
                        "seed {seed} kind {kind} r {r} class {class}: coverage"
                    );
                    assert!(
                        check_purity(&model.covers[class], &other, 1e-7),
                        "seed {seed} kind {kind} r {r} class {class}: purity"
                    );
                }
            }
        }
    }
}

#[test]
fn hybrid_paths_partition_the_plane() {
    let ds = two_box_dataset(17, 80, 40);
    let model = train(&ds, &TrainParams::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pre_hits = 0;
    let mut alt_hits = 0;
    for _ in 0..500 {
        let z = Point::new(vec![rng.gen_range(-0.5..2.0), rng.gen_range(-0.5..2.0)]);
        let p = model.hybrid_classify(&z, Alternative::Knn);
        match p.path {
            pcd::classify::DecisionPath::Pre => pre_hits += 1,
            pcd::classify::DecisionPath::Alternative => alt_hits += 1,
            pcd::classify::DecisionPath::Cover => panic!("hybrid never answers from full covers"),
        }
        assert!(p.label.is_some());
        // When the pre-classifier decides, the alternative is never
        // consulted: both hybrid flavors agree on those points.
        if p.path == pcd::classify::DecisionPath::Pre {
            let q = model.hybrid_classify(&z, Alternative::Cccd);
            assert_eq!(p.label, q.label);
        }
    }
    assert!(pre_hits > 0 && alt_hits > 0, "{pre_hits} / {alt_hits}");
}

#[test]
fn separable_classes_classify_cleanly() {
    // Disjoint supports with a comfortable gap: a moderate test sample
    // classifies essentially perfectly with standard covers.
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let (x0, x1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.5, 300, 300);
    let ds = Dataset::from_two_classes(x0, x1);
    let model = train(
        &ds,
        &TrainParams {
            r: 2.0,
            ..TrainParams::default()
        },
    )
    .unwrap();
    let (t0, t1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.5, 200, 200);
    let mut errors = 0;
    for z in &t0 {
        if model.cover_classify(z).label != Some(0) {
            errors += 1;
        }
    }
    for z in &t1 {
        if model.cover_classify(z).label != Some(1) {
            errors += 1;
        }
    }
    assert!(errors <= 4, "{errors} errors out of 400");
}

#[test]
fn decision_scores_rank_separable_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let (x0, x1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.4, 150, 150);
    let ds = Dataset::from_two_classes(x0, x1);
    let model = train(&ds, &TrainParams::default()).unwrap();
    let (t0, t1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.4, 80, 80);
    let mut scores = Vec::new();
    let mut truth = Vec::new();
    for z in t0.iter().chain(&t1) {
        scores.push(model.decision_score(z).unwrap());
        truth.push(usize::from(scores.len() > 80));
    }
    let auc = pcd::eval::auc_from_scores(&scores, &truth);
    assert!(auc > 0.99, "score AUC {auc}");
}

#[test]
fn iris13_trains_and_covers() {
    // Two features of the iris data: three classes, gridded values,
    // one cross-class duplicate. Exercises the boundary-heavy paths.
    let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv"));
    let full = pcd::data::load_csv(
        path,
        &pcd::data::LabelColumn::Name("species".into()),
        true,
    )
    .unwrap();
    let points: Vec<Point> = full
        .points
        .iter()
        .map(|p| Point::new(vec![p.coords[0], p.coords[2]]))
        .collect();
    let ds = Dataset::new(points, full.labels.clone(), full.class_names.clone());
    let model = train(&ds, &TrainParams::default()).unwrap();
    assert_eq!(model.dropped_coincident, 2);
    for class in 0..3 {
        let own: Vec<Point> = model.train.class_points(class);
        assert!(check_coverage(&model.covers[class], &own, 1e-7));
    }
    // Training accuracy is high on this nearly separated data.
    let preds: Vec<usize> = model
        .train
        .points
        .iter()
        .map(|z| model.cover_classify(z).label.unwrap())
        .collect();
    let m = pcd::eval::evaluate(&preds, &model.train.labels, 3).unwrap();
    assert!(m.auc > 0.9, "training AUC {}", m.auc);
}

#[test]
fn deterministic_training_and_prediction() {
    let ds = two_box_dataset(55, 60, 30);
    let params = TrainParams {
        seed: 4242,
        ..TrainParams::default()
    };
    let a = train(&ds, &params).unwrap();
    let b = train(&ds, &params).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn pre_classifier_argmin_when_inside_both_in_hull_covers() {
    // Deep-overlap configuration so plenty of points land inside both
    // in-hull covers; the smaller distance must win.
    let mut rng = ChaCha8Rng::seed_from_u64(2121);
    let c0 = sample_box_n(&mut rng, &[0.0, 0.0], &[1.0, 1.0], 120);
    let c1 = sample_box_n(&mut rng, &[0.1, 0.1], &[1.1, 1.1], 120);
    let ds = Dataset::from_two_classes(c0, c1);
    let model = train(
        &ds,
        &TrainParams {
            r: 3.0,
            ..TrainParams::default()
        },
    )
    .unwrap();
    let mut both = 0;
    for _ in 0..2000 {
        let z = Point::new(vec![rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)]);
        let rhos: Vec<f64> = model
            .covers
            .iter()
            .map(|c| c.in_hull_dissimilarity(&z))
            .collect();
        if rhos[0] < 1.0 && rhos[1] < 1.0 {
            both += 1;
            let expected = if rhos[0] <= rhos[1] { 0 } else { 1 };
            assert_eq!(model.pre_classify(&z).label, Some(expected));
        }
    }
    assert!(both > 50, "only {both} points landed in both in-hull covers");
}

#[test]
fn hybrid_pe_knn_is_consistent_on_separated_classes() {
    // With disjoint supports the hybrid inherits the nearest neighbor's
    // vanishing error; at n = 2000 per class the test error stays at or
    // under one percent.
    let mut errors = 0usize;
    let mut total = 0usize;
    for rep in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + rep);
        let (x0, x1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.2, 2000, 2000);
        let ds = Dataset::from_two_classes(x0, x1);
        let model = train(
            &ds,
            &TrainParams {
                r: 2.0,
                k: 1,
                ..TrainParams::default()
            },
        )
        .unwrap();
        let (t0, t1) = pcd::data::sample_separated_pair(&mut rng, 2, 0.2, 100, 100);
        for (points, label) in [(&t0, 0usize), (&t1, 1usize)] {
            for z in points.iter() {
                total += 1;
                if model.hybrid_classify(z, Alternative::Knn).label != Some(label) {
                    errors += 1;
                }
            }
        }
    }
    let rate = errors as f64 / total as f64;
    assert!(rate <= 0.01, "hybrid error rate {rate} over {total} points");
}
