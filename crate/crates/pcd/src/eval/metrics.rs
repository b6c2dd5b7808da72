//! Classification metrics: per-class correct classification rates and
//! the balanced-accuracy AUC used for hard-label classifiers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-class correct classification rates plus their mean.
///
/// For a hard binary classifier the ROC has a single operating point, so
/// the area under it equals `(sensitivity + specificity) / 2`; that mean
/// of per-class rates is what `auc` reports, for any class count. A
/// rank-based AUC over real scores is available separately via
/// [`auc_from_scores`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metrics {
    pub ccr_per_class: Vec<f64>,
    pub auc: f64,
}

/// Scores predictions against the truth. Every class in `0..n_classes`
/// must appear in the truth at least once.
pub fn evaluate(predictions: &[usize], truth: &[usize], n_classes: usize) -> Result<Metrics> {
    assert_eq!(predictions.len(), truth.len());
    let mut totals = vec![0usize; n_classes];
    let mut hits = vec![0usize; n_classes];
    for (&p, &t) in predictions.iter().zip(truth) {
        totals[t] += 1;
        if p == t {
            hits[t] += 1;
        }
    }
    for (class, &n) in totals.iter().enumerate() {
        if n == 0 {
            return Err(Error::MissingClass(class));
        }
    }
    let ccr_per_class: Vec<f64> = hits
        .iter()
        .zip(&totals)
        .map(|(&h, &n)| h as f64 / n as f64)
        .collect();
    let auc = ccr_per_class.iter().sum::<f64>() / n_classes as f64;
    Ok(Metrics { ccr_per_class, auc })
}

/// Rank-based AUC for real-valued scores (higher score leans class 1);
/// ties get half credit. Binary only.
pub fn auc_from_scores(scores: &[f64], truth: &[usize]) -> f64 {
    let pos = truth.iter().filter(|&&t| t == 1).count();
    let neg = truth.len() - pos;
    let mut acc = 0.0f64;
    for (&si, &ti) in scores.iter().zip(truth) {
        if ti != 1 {
            continue;
        }
        for (&sj, &tj) in scores.iter().zip(truth) {
            if tj != 0 {
                continue;
            }
            acc += if si > sj {
                1.0
            } else if si == sj {
                0.5
            } else {
                0.0
            };
        }
    }
    if pos == 0 || neg == 0 {
        return f64::NAN;
    }
    acc / (pos as f64 * neg as f64)
}

/// Sample mean and standard error of a series.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::INFINITY);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
