//! Seeded Monte Carlo simulation campaigns: two-class uniform settings,
//! replicate-until-stable evaluation of the classifier zoo, reduction
//! reporting, and the pilot parameter-tuning procedure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classifiers::ClassifierKind;
use super::metrics::{evaluate, mean_se};
use super::overlap_shift;
use crate::classify::{self, CoverKind, TrainParams, TrainedModel};
use crate::data::{self, Dataset};
use crate::error::{Error, Result};
use crate::geometry::{delaunay_tessellate, Point, Tessellation, TessellationParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which two-class geometry a campaign samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SimSetting {
    /// Class 0 on the unit cube, class 1 shifted to overlap ratio `zeta`.
    Overlap { zeta: f64 },
    /// Class 1 supported strictly inside class 0's support.
    Nested,
    /// Supports separated by a gap of `delta` along the first axis.
    Separated { delta: f64 },
}

/// Full specification of a simulation campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimSpec {
    pub d: usize,
    pub setting: SimSetting,
    /// Majority-class training size.
    pub n0: usize,
    /// Imbalance: minority size is `q * n0` (at least one point).
    pub q: f64,
    /// Expansion factors evaluated for the proportional-edge
    /// classifiers; baselines ignore it.
    pub r_grid: Vec<f64>,
    pub theta: f64,
    pub k: usize,
    pub test_per_class: usize,
    /// Stop once every classifier's AUC standard error is below this.
    pub se_target: f64,
    pub min_replicates: usize,
    pub max_replicates: usize,
    pub seed: u64,
}

impl Default for SimSpec {
    fn default() -> Self {
        SimSpec {
            d: 2,
            setting: SimSetting::Overlap { zeta: 0.5 },
            n0: 400,
            q: 1.0,
            r_grid: vec![2.0],
            theta: 1.0,
            k: 1,
            test_per_class: 100,
            se_target: 0.005,
            min_replicates: 20,
            max_replicates: 10_000,
            seed: 0,
        }
    }
}

/// One long-format result row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimRow {
    pub classifier: String,
    pub r: f64,
    pub q: f64,
    pub d: usize,
    pub metric: String,
    pub value: f64,
    pub se: f64,
    pub replicates: usize,
    /// True when the replicate cap stopped the run before the SE target.
    pub capped: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SimTable {
    pub rows: Vec<SimRow>,
}

impl SimTable {
    /// Mean value of one metric for a classifier at an expansion factor.
    pub fn value(&self, classifier: &str, r: f64, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|row| {
                row.classifier == classifier
                    && row.metric == metric
                    && (row.r - r).abs() < 1e-12
            })
            .map(|row| row.value)
    }

    pub fn se(&self, classifier: &str, r: f64, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|row| {
                row.classifier == classifier
                    && row.metric == metric
                    && (row.r - r).abs() < 1e-12
            })
            .map(|row| row.se)
    }
}

/// Per-replicate record for one (classifier, r) pair.
#[derive(Clone, Debug)]
struct RepRecord {
    auc: f64,
    ccr0: f64,
    ccr1: f64,
    /// `(red.all, red.0, red.1)` for cover classifiers.
    reduction: Option<(f64, f64, f64)>,
}

/// The (classifier, r-grid index) combinations a campaign evaluates.
fn combos(spec: &SimSpec, classifiers: &[ClassifierKind]) -> Vec<(ClassifierKind, Option<usize>)> {
    let mut out = Vec::new();
    for &kind in classifiers {
        if kind.uses_r() {
            for ri in 0..spec.r_grid.len() {
                out.push((kind, Some(ri)));
            }
        } else {
            out.push((kind, None));
        }
    }
    out
}

/// Runs the campaign in the overlap, nested or separated setting.
pub fn run_simulation(spec: &SimSpec, classifiers: &[ClassifierKind]) -> Result<SimTable> {
    let combo_list = combos(spec, classifiers);
    let mut series: Vec<Vec<RepRecord>> = vec![Vec::new(); combo_list.len()];
    let batch = 16usize;
    let mut rep = 0usize;
    let mut capped = false;
    loop {
        let todo = batch.min(spec.max_replicates - rep);
        let results: Vec<Result<Vec<RepRecord>>> = (rep..rep + todo)
            .into_par_iter()
            .map(|i| run_replicate(spec, classifiers, &combo_list, i as u64))
            .collect();
        for res in results {
            let records = res?;
            for (s, r) in series.iter_mut().zip(records) {
                s.push(r);
            }
        }
        rep += todo;
        if rep >= spec.min_replicates.max(2) {
            let all_stable = series.iter().all(|s| {
                let aucs: Vec<f64> = s.iter().map(|r| r.auc).collect();
                mean_se(&aucs).1 < spec.se_target
            });
            if all_stable {
                break;
            }
        }
        if rep >= spec.max_replicates {
            capped = true;
            break;
        }
    }

    let mut table = SimTable::default();
    for ((kind, ri), recs) in combo_list.iter().zip(&series) {
        let r_values: Vec<f64> = match ri {
            Some(ri) => vec![spec.r_grid[*ri]],
            // Baselines do not depend on r; emit one row per grid value
            // so plots line up.
            None => spec.r_grid.clone(),
        };
        for r in r_values {
            let mut push = |metric: &str, values: Vec<f64>| {
                if values.is_empty() {
                    return;
                }
                let (value, se) = mean_se(&values);
                table.rows.push(SimRow {
                    classifier: kind.name().into(),
                    r,
                    q: spec.q,
                    d: spec.d,
                    metric: metric.into(),
                    value,
                    se,
                    replicates: rep,
                    capped,
                });
            };
            push("auc", recs.iter().map(|x| x.auc).collect());
            push("ccr0", recs.iter().map(|x| x.ccr0).collect());
            push("ccr1", recs.iter().map(|x| x.ccr1).collect());
            if kind.reports_reduction() {
                push(
                    "red.all",
                    recs.iter().filter_map(|x| x.reduction.map(|t| t.0)).collect(),
                );
                push(
                    "red.0",
                    recs.iter().filter_map(|x| x.reduction.map(|t| t.1)).collect(),
                );
                push(
                    "red.1",
                    recs.iter().filter_map(|x| x.reduction.map(|t| t.2)).collect(),
                );
            }
        }
    }
    Ok(table)
}

/// Draws one train/test pair and evaluates every requested combination
/// on it. Tessellations are built once per replicate and shared across
/// expansion factors and cover kinds.
fn run_replicate(
    spec: &SimSpec,
    classifiers: &[ClassifierKind],
    combo_list: &[(ClassifierKind, Option<usize>)],
    replicate: u64,
) -> Result<Vec<RepRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(spec.seed, replicate));
    let d = spec.d;
    let n1 = ((spec.q * spec.n0 as f64).round() as usize).max(1);
    let (x0, x1, t0, t1) = match spec.setting {
        SimSetting::Overlap { zeta } => {
            let nu = overlap_shift(zeta, d);
            let (x0, x1) = data::sample_overlap_pair(&mut rng, d, nu, spec.n0, n1);
            let (t0, t1) =
                data::sample_overlap_pair(&mut rng, d, nu, spec.test_per_class, spec.test_per_class);
            (x0, x1, t0, t1)
        }
        SimSetting::Nested => {
            let (x0, x1) = data::sample_nested_pair(&mut rng, d, spec.n0, n1);
            let (t0, t1) =
                data::sample_nested_pair(&mut rng, d, spec.test_per_class, spec.test_per_class);
            (x0, x1, t0, t1)
        }
        SimSetting::Separated { delta } => {
            let (x0, x1) = data::sample_separated_pair(&mut rng, d, delta, spec.n0, n1);
            let (t0, t1) = data::sample_separated_pair(
                &mut rng,
                d,
                delta,
                spec.test_per_class,
                spec.test_per_class,
            );
            (x0, x1, t0, t1)
        }
    };
    let train = Dataset::from_two_classes(x0.clone(), x1.clone());
    let mut test_points = t0;
    test_points.extend(t1);
    let truth: Vec<usize> = (0..test_points.len())
        .map(|i| usize::from(i >= spec.test_per_class))
        .collect();

    // Tessellation of each class's complement, shared across covers.
    let tess_params = TessellationParams {
        tol: crate::DEFAULT_TOL,
        perturb: true,
        seed: crate::derive_seed(spec.seed, replicate ^ 0x7e55),
    };
    let tessellate = |pts: &[Point]| -> Result<Option<Tessellation>> {
        match delaunay_tessellate(pts, &tess_params) {
            Ok(t) => Ok(Some(t)),
            Err(Error::InsufficientPoints { .. }) | Err(Error::DegenerateInput { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let needs_tess = classifiers.iter().any(|k| k.uses_r());
    let (tess_for_0, tess_for_1) = if needs_tess {
        (tessellate(&x1)?, tessellate(&x0)?)
    } else {
        (None, None)
    };

    let base_params = TrainParams {
        r: 2.0,
        theta: spec.theta,
        k: spec.k,
        cover: CoverKind::Standard,
        tol: crate::DEFAULT_TOL,
        seed: spec.seed,
    };
    let needs_spherical = classifiers.iter().any(|k| {
        matches!(
            k,
            ClassifierKind::Cccd | ClassifierKind::PeCccd | ClassifierKind::CompositeCover
        )
    }) || classifiers.iter().any(|k| k.uses_r());
    let spherical_covers = if needs_spherical {
        vec![
            classify::build_cover(0, &x0, &x1, CoverKind::Spherical, &base_params)?,
            classify::build_cover(1, &x1, &x0, CoverKind::Spherical, &base_params)?,
        ]
    } else {
        Vec::new()
    };

    // Models per (cover kind, r), memoized: the two hybrids share the
    // standard-cover model with the cover classifier at the same r.
    let mut model_memo: std::collections::HashMap<(bool, u64), TrainedModel> =
        std::collections::HashMap::new();
    let mut build_model = |kind: CoverKind, r: f64| -> Result<TrainedModel> {
        let key = (kind == CoverKind::Composite, r.to_bits());
        if let Some(model) = model_memo.get(&key) {
            return Ok(model.clone());
        }
        let params = TrainParams {
            r,
            cover: kind,
            ..base_params.clone()
        };
        let covers = vec![
            classify::build_cover_with_tess(0, &x0, &x1, tess_for_0.as_ref(), kind, &params)?,
            classify::build_cover_with_tess(1, &x1, &x0, tess_for_1.as_ref(), kind, &params)?,
        ];
        let model = TrainedModel::assemble(
            params,
            train.clone(),
            covers,
            spherical_covers.clone(),
            0,
        );
        model_memo.insert(key, model.clone());
        Ok(model)
    };

    let mut records = Vec::with_capacity(combo_list.len());
    let mut knn_cache: Option<RepRecord> = None;
    let mut cccd_cache: Option<RepRecord> = None;
    for &(kind, ri) in combo_list {
        let record = match kind {
            ClassifierKind::Knn => {
                if knn_cache.is_none() {
                    let preds: Vec<usize> = test_points
                        .iter()
                        .map(|z| classify::knn_classify(&train, z, spec.k))
                        .collect();
                    knn_cache = Some(record_from(&preds, &truth, None)?);
                }
                knn_cache.clone().unwrap()
            }
            ClassifierKind::Cccd => {
                if cccd_cache.is_none() {
                    let preds: Vec<usize> = test_points
                        .iter()
                        .map(|z| {
                            let rhos: Vec<f64> = spherical_covers
                                .iter()
                                .map(|c| c.dissimilarity(z))
                                .collect();
                            if rhos[0] <= rhos[1] {
                                0
                            } else {
                                1
                            }
                        })
                        .collect();
                    cccd_cache = Some(record_from(&preds, &truth, None)?);
                }
                cccd_cache.clone().unwrap()
            }
            ClassifierKind::StandardCover
            | ClassifierKind::CompositeCover
            | ClassifierKind::PeKnn
            | ClassifierKind::PeCccd => {
                let r = spec.r_grid[ri.expect("r-dependent classifier")];
                let cover_kind = if kind == ClassifierKind::CompositeCover {
                    CoverKind::Composite
                } else {
                    CoverKind::Standard
                };
                let model = build_model(cover_kind, r)?;
                let preds: Vec<usize> = test_points
                    .iter()
                    .map(|z| match kind {
                        ClassifierKind::StandardCover | ClassifierKind::CompositeCover => {
                            model.cover_classify(z).label.unwrap()
                        }
                        ClassifierKind::PeKnn => model
                            .hybrid_classify(z, classify::Alternative::Knn)
                            .label
                            .unwrap(),
                        ClassifierKind::PeCccd => model
                            .hybrid_classify(z, classify::Alternative::Cccd)
                            .label
                            .unwrap(),
                        _ => unreachable!(),
                    })
                    .collect();
                let reduction = kind.reports_reduction().then(|| {
                    let s0 = model.covers[0].len() as f64;
                    let s1 = model.covers[1].len() as f64;
                    let n0 = x0.len() as f64;
                    let n1 = x1.len() as f64;
                    (
                        1.0 - (s0 + s1) / (n0 + n1),
                        1.0 - s0 / n0,
                        1.0 - s1 / n1,
                    )
                });
                record_from(&preds, &truth, reduction)?
            }
        };
        records.push(record);
    }
    Ok(records)
}

fn record_from(
    preds: &[usize],
    truth: &[usize],
    reduction: Option<(f64, f64, f64)>,
) -> Result<RepRecord> {
    let m = evaluate(preds, truth, 2)?;
    Ok(RepRecord {
        auc: m.auc,
        ccr0: m.ccr_per_class[0],
        ccr1: m.ccr_per_class[1],
        reduction,
    })
}

// ---------------------------------------------------------------------
// Pilot tuning.
// ---------------------------------------------------------------------

/// Result of the pilot parameter search: per-candidate win counts and
/// the mode (smallest value on ties).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TuneResult {
    pub candidates: Vec<f64>,
    pub counts: Vec<usize>,
    pub best: f64,
    pub replicates: usize,
}

/// Pilot Monte Carlo: on each replicate, every candidate value is
/// evaluated on a fresh train/test draw; the candidate with the highest
/// AUC gets a count (smallest candidate on ties); the final choice is
/// the candidate with the most counts.
///
/// Grid semantics: `k` for the kNN classifier (rounded), `theta` for the
/// spherical classifier, `r` for the proportional-edge ones.
pub fn tune(spec: &SimSpec, classifier: ClassifierKind, grid: &[f64]) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty tuning grid".into()));
    }
    let replicates = spec.max_replicates;
    let per_rep: Vec<Result<usize>> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut best_idx = 0usize;
            let mut best_auc = f64::NEG_INFINITY;
            for (gi, &g) in grid.iter().enumerate() {
                let mut candidate_spec = spec.clone();
                match classifier {
                    ClassifierKind::Knn => candidate_spec.k = (g.round() as usize).max(1),
                    ClassifierKind::Cccd => candidate_spec.theta = g,
                    _ => candidate_spec.r_grid = vec![g],
                }
                let table_spec = SimSpec {
                    min_replicates: 1,
                    max_replicates: 1,
                    seed: crate::derive_seed(spec.seed, rep as u64),
                    ..candidate_spec
                };
                let combo = combos(&table_spec, &[classifier]);
                let records = run_replicate(&table_spec, &[classifier], &combo, 0)?;
                let auc = records[0].auc;
                if auc > best_auc + 1e-12 {
                    best_auc = auc;
                    best_idx = gi;
                }
            }
            Ok(best_idx)
        })
        .collect();

    let mut counts = vec![0usize; grid.len()];
    for r in per_rep {
        counts[r?] += 1;
    }
    let mut best = 0usize;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
        }
    }
    Ok(TuneResult {
        candidates: grid.to_vec(),
        counts,
        best: grid[best],
        replicates,
    })
}

/// Convenience wrappers mirroring the two named campaign styles.
pub fn run_overlap_simulation(
    spec: &SimSpec,
    classifiers: &[ClassifierKind],
) -> Result<SimTable> {
    assert!(matches!(spec.setting, SimSetting::Overlap { .. }));
    run_simulation(spec, classifiers)
}

pub fn run_nested_simulation(spec: &SimSpec, classifiers: &[ClassifierKind]) -> Result<SimTable> {
    assert!(matches!(spec.setting, SimSetting::Nested));
    run_simulation(spec, classifiers)
}

/// Per-figure plot series: one metric across the expansion grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlotSeries {
    pub classifier: String,
    pub metric: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub se: Vec<f64>,
}

/// Groups a long-format table into per-(classifier, metric) series with
/// the expansion factor on the x axis.
pub fn plot_series(table: &SimTable) -> Vec<PlotSeries> {
    let mut keys: Vec<(String, String)> = table
        .rows
        .iter()
        .map(|r| (r.classifier.clone(), r.metric.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(classifier, metric)| {
            let mut rows: Vec<&SimRow> = table
                .rows
                .iter()
                .filter(|r| r.classifier == classifier && r.metric == metric)
                .collect();
            rows.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
            PlotSeries {
                classifier,
                metric,
                x: rows.iter().map(|r| r.r).collect(),
                y: rows.iter().map(|r| r.value).collect(),
                se: rows.iter().map(|r| r.se).collect(),
            }
        })
        .collect()
}
